//! Double-precision Airy function of the first kind, with scaled and
//! log-domain variants, and the sign/log-magnitude number type they return.

mod airy;

pub use airy::{airy_ai, airy_ai_scaled, log_airy_ai};
pub(crate) use airy::{ai_raw, log_ai_raw, scaled_ai_raw};

/// A real number stored as `sign * exp(ln_mag)`.
///
/// Magnitudes far outside the double range stay representable: only the
/// logarithm is stored. Exact zero is canonical: `sign == 0` if and only if
/// `ln_mag == -inf`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LogValue {
    /// -1, 0, or +1.
    pub sign: i8,
    /// Natural log of the absolute value; `-inf` when `sign == 0`.
    pub ln_mag: f64,
}

impl LogValue {
    pub const ZERO: Self = LogValue {
        sign: 0,
        ln_mag: f64::NEG_INFINITY,
    };

    /// Builds a value, canonicalizing either representation of zero.
    pub fn new(sign: i8, ln_mag: f64) -> Self {
        debug_assert!(matches!(sign, -1 | 0 | 1), "sign must be -1, 0, or +1");
        if sign == 0 || ln_mag == f64::NEG_INFINITY {
            Self::ZERO
        } else {
            LogValue { sign, ln_mag }
        }
    }

    pub fn from_f64(v: f64) -> Self {
        if v == 0.0 {
            Self::ZERO
        } else {
            LogValue {
                sign: if v > 0.0 { 1 } else { -1 },
                ln_mag: v.abs().ln(),
            }
        }
    }

    /// Collapses to a double. Saturates to `±inf` past the representable
    /// range and underflows to (possibly signed) zero below it.
    pub fn to_f64(self) -> f64 {
        if self.sign == 0 {
            0.0
        } else {
            f64::from(self.sign) * self.ln_mag.exp()
        }
    }

    pub fn is_zero(self) -> bool {
        self.sign == 0
    }

    /// Product of two log-domain values.
    pub fn mul(self, other: Self) -> Self {
        Self::new(self.sign * other.sign, self.ln_mag + other.ln_mag)
    }

    /// Multiplies by the positive factor `exp(delta_ln)`.
    pub fn scale_ln(self, delta_ln: f64) -> Self {
        Self::new(self.sign, self.ln_mag + delta_ln)
    }
}

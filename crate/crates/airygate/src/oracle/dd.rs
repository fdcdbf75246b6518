//! Minimal double-double arithmetic: an unevaluated sum `hi + lo` of two
//! doubles giving roughly 32 significant decimal digits.
//!
//! Only the operations needed by the series reference are provided. All
//! error-free transformations follow the usual two_sum/two_prod pattern,
//! with the product residual taken from a fused multiply-add.

/// Unevaluated sum of two doubles with `|lo| <= ulp(hi)/2` after any
/// public operation.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Dd {
    pub hi: f64,
    pub lo: f64,
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

/// Requires `|a| >= |b|` (or either zero).
#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

impl Dd {
    pub const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };

    /// Builds from a pre-normalized pair (as produced by splitting a
    /// higher-precision decimal into leading and trailing doubles).
    pub const fn new(hi: f64, lo: f64) -> Self {
        Dd { hi, lo }
    }

    pub fn from_f64(v: f64) -> Self {
        Dd { hi: v, lo: 0.0 }
    }

    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    pub fn abs(self) -> Self {
        if self.hi < 0.0 || (self.hi == 0.0 && self.lo < 0.0) {
            self.neg()
        } else {
            self
        }
    }

    pub fn neg(self) -> Self {
        Dd {
            hi: -self.hi,
            lo: -self.lo,
        }
    }

    pub fn add(self, o: Dd) -> Dd {
        let (s1, e1) = two_sum(self.hi, o.hi);
        let (s2, e2) = two_sum(self.lo, o.lo);
        let (s1, e1) = quick_two_sum(s1, e1 + s2);
        let (hi, lo) = quick_two_sum(s1, e1 + e2);
        Dd { hi, lo }
    }

    pub fn sub(self, o: Dd) -> Dd {
        self.add(o.neg())
    }

    pub fn mul(self, o: Dd) -> Dd {
        let (p, e) = two_prod(self.hi, o.hi);
        let e = e + (self.hi * o.lo + self.lo * o.hi);
        let (hi, lo) = quick_two_sum(p, e);
        Dd { hi, lo }
    }

    pub fn mul_f64(self, v: f64) -> Dd {
        let (p, e) = two_prod(self.hi, v);
        let (hi, lo) = quick_two_sum(p, e + self.lo * v);
        Dd { hi, lo }
    }

    pub fn div_f64(self, v: f64) -> Dd {
        let q1 = self.hi / v;
        let (p, pe) = two_prod(q1, v);
        let (s, e) = two_sum(self.hi, -p);
        let q2 = (s + (e + (self.lo - pe))) / v;
        let (hi, lo) = quick_two_sum(q1, q2);
        Dd { hi, lo }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn addition_recovers_tiny_residuals() {
        let one = Dd::from_f64(1.0);
        let tiny = Dd::from_f64(1e-20);
        let diff = one.add(tiny).sub(one);
        assert_eq!(diff.to_f64(), 1e-20);
    }

    #[test]
    fn product_residual_is_exact() {
        // (1 + 2^-30)^2 = 1 + 2^-29 + 2^-60; the last term is below f64
        // resolution of the sum but must survive in lo.
        let v = 1.0 + (2.0_f64).powi(-30);
        let sq = Dd::from_f64(v).mul(Dd::from_f64(v));
        let expected_lo = (2.0_f64).powi(-60);
        assert_eq!(sq.hi, 1.0 + (2.0_f64).powi(-29));
        assert_eq!(sq.lo, expected_lo);
    }

    #[test]
    fn division_round_trips() {
        let x = Dd::new(0.3550280538878172, 2.05233632436212e-17);
        let r = x.div_f64(7.0).mul_f64(7.0);
        assert!((r.sub(x).to_f64()).abs() < 1e-31);
    }
}

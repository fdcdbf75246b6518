//! Brute-force numerical references.
//!
//! Everything here is slow by design and exists to validate the closed-form
//! evaluators: an oscillatory quadrature of the gate-transformed Wigner
//! integral, a convolution quadrature for momentum distributions, and an
//! extended-precision Airy series with a certified error bound. All routines
//! are sequential and deterministic: identical inputs give bit-identical
//! outputs.

mod dd;

pub use dd::Dd;

use num_complex::Complex64;

use crate::airy_engine::PhaseGate;
use crate::error::Error;
use crate::gaussian::GaussianState;
use crate::special_functions::ai_raw;

/// Tolerances and limits for the adaptive quadratures.
#[derive(Clone, Copy, Debug)]
pub struct QuadratureSpec {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_subdivisions: usize,
    /// Integration is truncated where the Gaussian envelope of the integrand
    /// falls below this value.
    pub truncation_threshold: f64,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            abs_tol: 1e-10,
            rel_tol: 1e-10,
            max_subdivisions: 2000,
            truncation_threshold: 1e-18,
        }
    }
}

impl QuadratureSpec {
    pub fn validate(&self) -> Result<(), Error> {
        if !(self.abs_tol > 0.0 && self.rel_tol > 0.0 && self.truncation_threshold > 0.0) {
            return Err(Error::Config(
                "quadrature tolerances must be positive".into(),
            ));
        }
        if self.max_subdivisions < 1 {
            return Err(Error::Config("max_subdivisions must be at least 1".into()));
        }
        Ok(())
    }
}

/// Gauss-Kronrod 7-15 nodes on [0, 1] (abscissae relative to the panel
/// center, in units of the half-width).
const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
];

/// 7-point Gauss weights (odd Kronrod abscissae plus the center).
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

/// 15-point Kronrod weights.
const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];

/// Kronrod value, error estimate, and integral of |f| over one panel.
fn gk15<F: Fn(f64) -> Complex64>(f: &F, a: f64, b: f64) -> (Complex64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);

    let mut f_above = [Complex64::new(0.0, 0.0); 7];
    let mut f_below = [Complex64::new(0.0, 0.0); 7];
    for i in 0..7 {
        f_above[i] = f(center + half * XGK[i]);
        f_below[i] = f(center - half * XGK[i]);
    }

    let mut kronrod = fc * WGK[7];
    let mut resabs = fc.norm() * WGK[7];
    let mut gauss = fc * WG[3];
    for i in 0..7 {
        let pair = f_above[i] + f_below[i];
        kronrod += pair * WGK[i];
        resabs += WGK[i] * (f_above[i].norm() + f_below[i].norm());
        if i % 2 == 1 {
            gauss += pair * WG[i / 2];
        }
    }
    kronrod *= half;
    gauss *= half;
    resabs *= half.abs();

    // Scaled deviation from the mean, for the QUADPACK error heuristic.
    let mean = kronrod / (b - a);
    let mut resasc = WGK[7] * (fc - mean).norm();
    for i in 0..7 {
        resasc += WGK[i] * ((f_above[i] - mean).norm() + (f_below[i] - mean).norm());
    }
    resasc *= half.abs();

    let raw_err = (kronrod - gauss).norm();
    (kronrod, rescale_error(raw_err, resabs, resasc))
}

fn rescale_error(err: f64, resabs: f64, resasc: f64) -> f64 {
    let mut scaled = err;
    if resasc != 0.0 && err != 0.0 {
        scaled = resasc * 1.0_f64.min((200.0 * err / resasc).powf(1.5));
    }
    let floor = 50.0 * f64::EPSILON * resabs;
    if resabs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        scaled = scaled.max(floor);
    }
    scaled
}

struct Panel {
    a: f64,
    b: f64,
    value: Complex64,
    err: f64,
    /// Cleared once the accumulated phase across the panel is at most pi/2.
    oscillatory: bool,
}

/// Result of one adaptive integration.
#[derive(Clone, Copy, Debug)]
pub struct AdaptiveIntegral {
    pub value: Complex64,
    pub error_estimate: f64,
    pub subdivisions: usize,
}

/// Adaptive Gauss-Kronrod integration of a complex integrand.
///
/// Panels whose estimated phase change exceeds 4 pi are split regardless
/// of their error estimate: past that the 15 Kronrod nodes undersample the
/// oscillation and the Gauss/Kronrod difference can alias to a spuriously
/// small error. Below it the error estimate is an honest signal and drives
/// the remaining refinement, so dead-envelope regions are not subdivided
/// merely for carrying phase. The final sum runs over panels sorted by
/// left endpoint; with a deterministic splitting order the whole
/// computation is bit-reproducible.
fn integrate_adaptive<F, P>(
    f: &F,
    phase: Option<&P>,
    lo: f64,
    hi: f64,
    spec: &QuadratureSpec,
) -> Result<AdaptiveIntegral, Error>
where
    F: Fn(f64) -> Complex64,
    P: Fn(f64) -> f64,
{
    let phase_swing = |a: f64, b: f64| -> f64 {
        match phase {
            None => 0.0,
            Some(ph) => {
                let m = 0.5 * (a + b);
                let (pa, pm, pb) = (ph(a), ph(m), ph(b));
                (pm - pa).abs().max((pb - pm).abs()) * 2.0
            }
        }
    };
    let make_panel = |a: f64, b: f64| -> Panel {
        let (value, err) = gk15(f, a, b);
        Panel {
            a,
            b,
            value,
            err,
            oscillatory: phase_swing(a, b) > 4.0 * std::f64::consts::PI,
        }
    };

    let mut panels = vec![make_panel(lo, hi)];
    let mut subdivisions = 0usize;
    loop {
        let total_value: Complex64 = panels.iter().map(|p| p.value).sum();
        let total_err: f64 = panels.iter().map(|p| p.err).sum();
        let tol = spec.abs_tol.max(spec.rel_tol * total_value.norm());

        // Pick the panel most in need of work: any still-oscillatory panel
        // first, then the largest error. Ties resolve to the leftmost panel
        // so the split order is deterministic.
        let mut pick: Option<usize> = None;
        for (i, p) in panels.iter().enumerate() {
            let better = match pick {
                None => p.oscillatory || total_err > tol,
                Some(j) => {
                    let q = &panels[j];
                    (p.oscillatory, p.err, -p.a) > (q.oscillatory, q.err, -q.a)
                }
            };
            if better && (p.oscillatory || total_err > tol) {
                pick = Some(i);
            }
        }
        let Some(i) = pick else {
            let mut ordered: Vec<&Panel> = panels.iter().collect();
            ordered.sort_by(|x, y| x.a.total_cmp(&y.a));
            let value = ordered.iter().map(|p| p.value).sum();
            let error_estimate = ordered.iter().map(|p| p.err).sum();
            return Ok(AdaptiveIntegral {
                value,
                error_estimate,
                subdivisions,
            });
        };

        if subdivisions >= spec.max_subdivisions {
            return Err(Error::Convergence {
                message: format!(
                    "quadrature did not converge within {} subdivisions",
                    spec.max_subdivisions
                ),
                residual: total_err,
            });
        }
        let Panel { a, b, .. } = panels[i];
        let mid = 0.5 * (a + b);
        if mid <= a || mid >= b {
            return Err(Error::Convergence {
                message: "quadrature panel collapsed below floating-point resolution".into(),
                residual: total_err,
            });
        }
        panels[i] = make_panel(a, mid);
        panels.push(make_panel(mid, b));
        subdivisions += 1;
    }
}

/// Adaptive integration of a real integrand without oscillation hints;
/// shared with the analysis layer for marginals and normalization.
pub(crate) fn integrate_real<F: Fn(f64) -> f64>(
    f: &F,
    lo: f64,
    hi: f64,
    spec: &QuadratureSpec,
) -> Result<(f64, f64), Error> {
    let wrapped = |t: f64| Complex64::new(f(t), 0.0);
    let result = integrate_adaptive(&wrapped, None::<&fn(f64) -> f64>, lo, hi, spec)?;
    Ok((result.value.re, result.error_estimate))
}

/// Diagnostics of one Wigner-integral quadrature.
#[derive(Clone, Copy, Debug)]
pub struct WignerQuadrature {
    /// Real part of the integral: the Wigner value.
    pub value: f64,
    /// |imaginary part|; the exact integral is real, so this measures
    /// quadrature quality.
    pub imag_residual: f64,
    pub error_estimate: f64,
    pub subdivisions: usize,
}

/// Direct quadrature of the gate-transformed Wigner integral at one point.
///
/// Integrates `(1/pi hbar) e^{i phi(t)} <q-t| rho |q+t>` over `t`, where the
/// gate contributes the odd part of its potential difference:
/// `phi(t) = (2/hbar)(p + g1 + g2 q + g3 q^2 + g4 q^3) t
///         + (2/hbar)(g3/3 + g4 q) t^3`.
/// The range is truncated where the Gaussian envelope of the matrix element
/// drops below `spec.truncation_threshold`.
pub fn wigner_quadrature_detailed(
    state: &GaussianState,
    gate: &PhaseGate,
    q: f64,
    p: f64,
    spec: &QuadratureSpec,
) -> Result<WignerQuadrature, Error> {
    spec.validate()?;
    gate.validate()?;
    state.validate()?;
    if state.n_modes() != 1 {
        return Err(Error::Domain(format!(
            "the quadrature reference handles one mode, state has {}",
            state.n_modes()
        )));
    }
    let hbar = state.hbar();
    let [g1, g2, g3, g4] = gate.effective_gamma();

    // Envelope parameters from the analytic matrix element:
    // |<q-t|rho|q+t>| = M(q) exp(-(2/hbar^2) sigma_c^2 t^2).
    let (sq, sqp, sp) = (
        state.cov()[(0, 0)],
        state.cov()[(0, 1)],
        state.cov()[(1, 1)],
    );
    let sigma_c2 = sp - sqp * sqp / sq;
    let dq = q - state.mean()[0];
    let marginal = (-0.5 * dq * dq / sq).exp() / (2.0 * std::f64::consts::PI * sq).sqrt();
    let ln_ratio = (marginal / spec.truncation_threshold).ln().max(1.0);
    let t_max = hbar / sigma_c2.sqrt() * (0.5 * ln_ratio).sqrt();

    let s_shift = p + g1 + q * (g2 + q * (g3 + q * g4));
    let cubic = (2.0 / hbar) * (g3 / 3.0 + g4 * q);
    let phase = move |t: f64| (2.0 / hbar) * s_shift * t + cubic * t * t * t;

    let norm = 1.0 / (std::f64::consts::PI * hbar);
    let integrand = |t: f64| -> Complex64 {
        let element = state
            .anti_diagonal(&[q], &[t])
            .expect("state validated before integration");
        Complex64::from_polar(1.0, phase(t)) * element * norm
    };

    let result = integrate_adaptive(&integrand, Some(&phase), -t_max, t_max, spec)?;
    Ok(WignerQuadrature {
        value: result.value.re,
        imag_residual: result.value.im.abs(),
        error_estimate: result.error_estimate,
        subdivisions: result.subdivisions,
    })
}

/// As [`wigner_quadrature_detailed`], returning just the value; a residual
/// imaginary part above 1e-8 is reported as a convergence failure.
pub fn wigner_quadrature(
    state: &GaussianState,
    gate: &PhaseGate,
    q: f64,
    p: f64,
    spec: &QuadratureSpec,
) -> Result<f64, Error> {
    let detailed = wigner_quadrature_detailed(state, gate, q, p, spec)?;
    if detailed.imag_residual > 1e-8 {
        return Err(Error::Convergence {
            message: "imaginary residual of the Wigner integral exceeds 1e-8".into(),
            residual: detailed.imag_residual,
        });
    }
    Ok(detailed.value)
}

/// Momentum density of a pure Gaussian state after a cubic gate, computed as
/// the squared magnitude of the convolution of the momentum wavefunction
/// with the scaled Airy kernel `Ai(./a)/|a|`, `a = (hbar^2 gamma3)^{1/3}`.
pub fn momentum_distribution_quadrature(
    state: &GaussianState,
    gamma3: f64,
    p: f64,
    spec: &QuadratureSpec,
) -> Result<f64, Error> {
    spec.validate()?;
    state.validate()?;
    if state.n_modes() != 1 {
        return Err(Error::Domain(format!(
            "momentum distributions are single-mode, state has {} modes",
            state.n_modes()
        )));
    }
    if !gamma3.is_finite() {
        return Err(Error::Domain(format!("gamma3 must be finite, got {gamma3}")));
    }
    let purity = state.purity();
    if (purity - 1.0).abs() > 1e-8 {
        return Err(Error::Purity { purity });
    }

    let hbar = state.hbar();
    let (sq, sqp) = (state.cov()[(0, 0)], state.cov()[(0, 1)]);
    let (x_bar, p_bar) = (state.mean()[0], state.mean()[1]);

    // Wavefunction psi(x) = C exp(-a_c (x-x_bar)^2 + i p_bar (x-x_bar)/hbar)
    // reproduces the state's first and second moments for purity 1; its
    // Fourier transform is the complex Gaussian below.
    let a_c = Complex64::new(1.0, -2.0 * sqp / hbar) / (4.0 * sq);
    let c_norm = (2.0 * std::f64::consts::PI * sq).powf(-0.25);
    let pref = c_norm * (std::f64::consts::PI / a_c).sqrt() / (2.0 * std::f64::consts::PI * hbar).sqrt();
    let phi = move |y: f64| -> Complex64 {
        let u = y - p_bar;
        let exponent = Complex64::new(0.0, -y * x_bar / hbar) - u * u / (4.0 * a_c * hbar * hbar);
        pref * exponent.exp()
    };

    if gamma3 == 0.0 {
        return Ok(phi(p).norm_sqr());
    }

    let a = (hbar * hbar * gamma3).cbrt();
    let kernel_scale = 1.0 / a.abs();
    let integrand = |y: f64| -> Complex64 { phi(y) * (ai_raw((p - y) / a) * kernel_scale) };

    // Envelope decay of |phi| sets the truncation window.
    let kappa = (1.0 / (4.0 * a_c * hbar * hbar)).re;
    let amp0 = pref.norm();
    let ln_ratio = (amp0 / spec.truncation_threshold).ln().max(1.0);
    let half_width = (ln_ratio / kappa).sqrt();

    // Oscillation bookkeeping: the kernel oscillates like
    // (2/3)|arg|^{3/2} on the side where its argument is negative, and the
    // wavefunction contributes its own quadratic phase.
    let phase = move |y: f64| -> f64 {
        let arg = (p - y) / a;
        let airy_phase = if arg < 0.0 { (2.0 / 3.0) * (-arg).powf(1.5) } else { 0.0 };
        let u = y - p_bar;
        let gauss_phase = -y * x_bar / hbar - (u * u * (1.0 / (4.0 * a_c * hbar * hbar))).im;
        airy_phase + gauss_phase
    };

    let result = integrate_adaptive(
        &integrand,
        Some(&phase),
        p_bar - half_width,
        p_bar + half_width,
        spec,
    )?;
    Ok(result.value.norm_sqr())
}

/// Decimal splits of Ai(0) and Ai'(0) to double-double precision.
const AI_ZERO_DD: Dd = Dd::new(0.3550280538878172, 2.05233632436212e-17);
const AI_PRIME_ZERO_DD: Dd = Dd::new(-0.2588194037928068, 2.522243111610832e-17);

/// Digits carried by double-double arithmetic before cancellation.
const DD_DIGITS: f64 = 31.0;

/// Extended-precision Airy value by the Maclaurin series in double-double
/// arithmetic, with a certified absolute error bound.
///
/// The certification tracks the largest intermediate term: the absolute
/// rounding floor is that magnitude times the double-double resolution. If
/// the floor exceeds `10^-target_digits` the call fails with a precision
/// error carrying the digits actually achieved.
pub fn airy_ai_reference(x: f64, target_digits: u32) -> Result<Dd, Error> {
    if !(x.is_finite() && x.abs() <= 30.0) {
        return Err(Error::Domain(format!(
            "series reference accepts |x| <= 30, got {x}"
        )));
    }
    if target_digits > 25 {
        return Err(Error::Domain(format!(
            "at most 25 certified digits are available, {target_digits} requested"
        )));
    }

    // Ai(x) = Ai(0) f(x) + Ai'(0) g(x) with
    // f, g the regular solutions: f_{k+1} = f_k x^3 / ((3k+2)(3k+3)),
    // g_{k+1} = g_k x^3 / ((3k+3)(3k+4)), f_0 = 1, g_0 = x.
    let x2 = Dd::from_f64(x).mul(Dd::from_f64(x));
    let x3 = x2.mul_f64(x);

    let mut term_f = Dd::from_f64(1.0);
    let mut term_g = Dd::from_f64(x);
    let mut sum_f = term_f;
    let mut sum_g = term_g;
    let mut peak: f64 = 1.0_f64.max(x.abs());

    for k in 0..400u64 {
        let df = ((3 * k + 2) * (3 * k + 3)) as f64;
        let dg = ((3 * k + 3) * (3 * k + 4)) as f64;
        term_f = term_f.mul(x3).div_f64(df);
        term_g = term_g.mul(x3).div_f64(dg);
        sum_f = sum_f.add(term_f);
        sum_g = sum_g.add(term_g);
        peak = peak
            .max(term_f.hi.abs())
            .max(term_g.hi.abs())
            .max(sum_f.hi.abs())
            .max(sum_g.hi.abs());
        if term_f.hi.abs() < 1e-60 * peak && term_g.hi.abs() < 1e-60 * peak {
            break;
        }
    }

    let achieved = DD_DIGITS - peak.log10();
    if achieved < target_digits as f64 {
        return Err(Error::Precision {
            requested: target_digits,
            achieved,
        });
    }
    Ok(AI_ZERO_DD.mul(sum_f).add(AI_PRIME_ZERO_DD.mul(sum_g)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::airy_engine::{apply_phase_gate, WignerEvaluator};
    use crate::assert_close;
    use crate::gaussian::Conventions;
    use crate::special_functions::airy_ai;
    use std::f64::consts::PI;

    fn vacuum() -> GaussianState {
        GaussianState::vacuum(Conventions::default(), 1).unwrap()
    }

    #[test]
    fn reference_at_zero_is_the_series_constant() {
        let v = airy_ai_reference(0.0, 25).unwrap();
        assert!((v.sub(AI_ZERO_DD).to_f64()).abs() < 1e-30);
    }

    #[test]
    fn reference_matches_known_values() {
        let five = airy_ai_reference(5.0, 15).unwrap();
        assert!((five.to_f64() - 1.0834442813607442e-4).abs() < 1e-18);
        let neg = airy_ai_reference(-5.0, 15).unwrap();
        assert!((neg.to_f64() - 0.35076100902411433).abs() < 1e-15);
    }

    #[test]
    fn reference_brackets_the_first_zero() {
        assert!(airy_ai_reference(-2.338, 20).unwrap().to_f64() > 0.0);
        assert!(airy_ai_reference(-2.3382, 20).unwrap().to_f64() < 0.0);
    }

    #[test]
    fn reference_agrees_with_fast_branches() {
        for i in 0..100 {
            let x = -15.0 + 23.0 * (i as f64) / 99.0;
            let slow = airy_ai_reference(x, 14).unwrap().to_f64();
            let fast = airy_ai(x).unwrap();
            assert!(
                (slow - fast).abs() <= 1e-13,
                "x = {x}: {slow} vs {fast}"
            );
        }
    }

    #[test]
    fn certification_rejects_unattainable_requests() {
        assert!(matches!(
            airy_ai_reference(31.0, 5),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            airy_ai_reference(1.0, 26),
            Err(Error::Domain(_))
        ));
        // Cancellation at the edge of the domain wipes out the precision.
        assert!(matches!(
            airy_ai_reference(-30.0, 20),
            Err(Error::Precision { .. })
        ));
        assert!(matches!(
            airy_ai_reference(-15.0, 25),
            Err(Error::Precision { .. })
        ));
    }

    #[test]
    fn identity_gate_quadrature_recovers_the_gaussian() {
        let spec = QuadratureSpec::default();
        let gate = PhaseGate::new(0, [0.0; 4], 1).unwrap();
        let w = wigner_quadrature(&vacuum(), &gate, 0.0, 0.0, &spec).unwrap();
        assert_close!(w, 1.0 / PI, 1e-10);
    }

    #[test]
    fn cubic_gate_quadrature_matches_frozen_and_closed_form() {
        let spec = QuadratureSpec::default();
        let gate = PhaseGate::cubic(2.0);
        let w = wigner_quadrature(&vacuum(), &gate, 0.0, 0.0, &spec).unwrap();
        assert_close!(w, 0.23305754934917858, 1e-9);

        let ev = apply_phase_gate(&vacuum(), &gate).unwrap();
        for (q, p) in [(0.0, 0.0), (1.0, -1.0), (-0.5, 0.7), (0.3, -2.0)] {
            let oracle = wigner_quadrature(&vacuum(), &gate, q, p, &spec).unwrap();
            let analytic = ev.eval(&[q], &[p]);
            assert_close!(oracle, analytic, 1e-8, "at ({q},{p})");
        }
    }

    #[test]
    fn thermal_quadrature_matches_frozen_value() {
        let spec = QuadratureSpec::default();
        let thermal = GaussianState::thermal(Conventions::default(), 1.0).unwrap();
        let w = wigner_quadrature(&thermal, &PhaseGate::cubic(2.0), 0.0, -1.0, &spec).unwrap();
        assert_close!(w, 0.08870467600287976, 1e-8);
    }

    #[test]
    fn steep_gate_quadrature_matches_closed_form() {
        let spec = QuadratureSpec::default();
        let gate = PhaseGate::tilted_double_well();
        let ev = apply_phase_gate(&vacuum(), &gate).unwrap();
        for (q, p) in [(1.0, -8.0), (0.5, -11.0), (-0.5, -18.0)] {
            let oracle = wigner_quadrature(&vacuum(), &gate, q, p, &spec).unwrap();
            assert_close!(oracle, ev.eval(&[q], &[p]), 1e-8, "at ({q},{p})");
        }
    }

    #[test]
    fn quadrature_reports_small_imaginary_residual() {
        let spec = QuadratureSpec::default();
        let d = wigner_quadrature_detailed(&vacuum(), &PhaseGate::cubic(2.0), 0.5, -1.5, &spec)
            .unwrap();
        assert!(d.imag_residual <= 1e-10);
        assert!(d.subdivisions > 0);
    }

    #[test]
    fn quadrature_is_deterministic() {
        let spec = QuadratureSpec::default();
        let a = wigner_quadrature(&vacuum(), &PhaseGate::cubic(2.0), 0.7, -1.1, &spec).unwrap();
        let b = wigner_quadrature(&vacuum(), &PhaseGate::cubic(2.0), 0.7, -1.1, &spec).unwrap();
        assert_eq!(a.to_bits(), b.to_bits());
    }

    #[test]
    fn quadrature_rejects_multimode_states() {
        let two = GaussianState::vacuum(Conventions::default(), 2).unwrap();
        let spec = QuadratureSpec::default();
        assert!(wigner_quadrature(&two, &PhaseGate::cubic(1.0), 0.0, 0.0, &spec).is_err());
    }

    #[test]
    fn momentum_density_frozen_values() {
        let spec = QuadratureSpec::default();
        for (p, expected) in [
            (-2.0, 0.07570653045550405),
            (0.0, 0.3550279654198198),
            (1.0, 0.11302873895587616),
        ] {
            let got = momentum_distribution_quadrature(&vacuum(), 1.0, p, &spec).unwrap();
            assert_close!(got, expected, 1e-8, "p = {p}");
        }
        let squeezed = vacuum().squeeze(0, 2.0, 0.0).unwrap();
        let got = momentum_distribution_quadrature(&squeezed, 0.5, 0.0, &spec).unwrap();
        assert_close!(got, 0.3380834351380518, 1e-8);
    }

    #[test]
    fn momentum_density_gaussian_limit_and_purity_guard() {
        let spec = QuadratureSpec::default();
        let at_zero = momentum_distribution_quadrature(&vacuum(), 0.0, 0.0, &spec).unwrap();
        // Vacuum momentum density (pi hbar)^{-1/2} exp(-p^2/hbar).
        assert_close!(at_zero, 1.0 / PI.sqrt(), 1e-12);

        let mixed = GaussianState::thermal(Conventions::default(), 0.5).unwrap();
        assert!(matches!(
            momentum_distribution_quadrature(&mixed, 1.0, 0.0, &spec),
            Err(Error::Purity { .. })
        ));
    }
}

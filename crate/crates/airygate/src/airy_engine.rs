//! Closed-form Wigner evaluators for polynomial phase gates on Gaussian
//! states.
//!
//! A gate `exp(-(i/hbar) V(q))` with `V(q) = sum_n gamma_n q^n / n` (n up to
//! 4) maps a Gaussian Wigner function to a Gaussian-times-Airy profile. The
//! momentum dependence enters only through the shifted variable
//! `S = p + gamma_1 + gamma_2 q + gamma_3 q^2 + gamma_4 q^3`, and the Airy
//! scale is set by `alpha^3(q) = (2 gamma_3 + 6 gamma_4 q)/hbar`. For a
//! multimode input the closed form applies to the conditional distribution of
//! the target momentum given every other phase-space variable; the remaining
//! variables contribute a Gaussian marginal factor.
//!
//! All evaluators work in the log domain first. The exponential prefactor
//! `exp(u sigma^2/(2 a^3) + sigma^6/(12 a^6))` and the Airy decay cancel
//! almost exactly for weak gates, so the deep-tail branch combines them
//! analytically before exponentiating (see `GateWigner::eval_log`).

use nalgebra::{Cholesky, DMatrix, DVector, Dyn};

use crate::error::Error;
use crate::gaussian::{wigner_gaussian, GaussianState};
use crate::special_functions::{ai_raw, log_ai_raw, scaled_ai_raw, LogValue};

/// Below this size of `2 gamma_3 + 6 gamma_4 q` the cubic phase-integral
/// coefficient is treated as zero and the evaluator falls back to the exact
/// Gaussian limit of the Airy family.
pub const ALPHA_DEGENERACY_EPS: f64 = 1e-9;

/// A polynomial phase gate `V(q) = sum_{n=1..4} gamma_n q^n / n` acting on
/// one mode, optionally repeated.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PhaseGate {
    /// Target mode index.
    pub mode: usize,
    /// Coefficients `(gamma_1, gamma_2, gamma_3, gamma_4)`.
    pub gamma: [f64; 4],
    /// Number of consecutive applications; folds into the coefficients as
    /// `gamma -> k gamma`.
    pub repetitions: u32,
}

impl PhaseGate {
    pub fn new(mode: usize, gamma: [f64; 4], repetitions: u32) -> Result<Self, Error> {
        let gate = PhaseGate {
            mode,
            gamma,
            repetitions,
        };
        gate.validate()?;
        Ok(gate)
    }

    /// Pure cubic gate on mode 0.
    pub fn cubic(gamma3: f64) -> Self {
        PhaseGate {
            mode: 0,
            gamma: [0.0, 0.0, gamma3, 0.0],
            repetitions: 1,
        }
    }

    /// Pure quartic gate on mode 0.
    pub fn quartic(gamma4: f64) -> Self {
        PhaseGate {
            mode: 0,
            gamma: [0.0, 0.0, 0.0, gamma4],
            repetitions: 1,
        }
    }

    /// Tilted-double-well gate: linear tilt, inverted harmonic term, and a
    /// weak quartic wall. The generating potential's constant offset is a
    /// global phase and does not appear.
    pub fn tilted_double_well() -> Self {
        PhaseGate {
            mode: 0,
            gamma: [15.0, -7.0, 0.0, 0.2],
            repetitions: 1,
        }
    }

    pub fn on_mode(mut self, mode: usize) -> Self {
        self.mode = mode;
        self
    }

    pub fn with_repetitions(mut self, repetitions: u32) -> Self {
        self.repetitions = repetitions;
        self
    }

    pub fn validate(&self) -> Result<(), Error> {
        if self.gamma.iter().any(|g| !g.is_finite()) {
            return Err(Error::Domain(format!(
                "gate coefficients must be finite, got {:?}",
                self.gamma
            )));
        }
        if self.repetitions < 1 {
            return Err(Error::Domain("repetitions must be at least 1".into()));
        }
        Ok(())
    }

    /// The coefficients actually evaluated: `gamma_n * repetitions`.
    ///
    /// This is the only place repetition folding happens, so `k` applications
    /// and a single `k gamma` gate are bit-identical downstream.
    pub fn effective_gamma(&self) -> [f64; 4] {
        let k = self.repetitions as f64;
        [
            self.gamma[0] * k,
            self.gamma[1] * k,
            self.gamma[2] * k,
            self.gamma[3] * k,
        ]
    }
}

/// The algebraic skeleton shared by every gate evaluator: the momentum map
/// and the cubic scale.
#[derive(Clone, Copy, Debug)]
pub struct AirySpec {
    /// Coefficients `(c_0, c_1, c_2, c_3)` of
    /// `S(q, p) = p + c_0 + c_1 q + c_2 q^2 + c_3 q^3`.
    pub s_poly: [f64; 4],
    pub hbar: f64,
}

impl AirySpec {
    pub fn from_gamma(gamma: [f64; 4], hbar: f64) -> Self {
        AirySpec {
            s_poly: gamma,
            hbar,
        }
    }

    /// Shifted momentum `S(q, p)`.
    pub fn s(&self, q: f64, p: f64) -> f64 {
        let [c0, c1, c2, c3] = self.s_poly;
        p + c0 + q * (c1 + q * (c2 + q * c3))
    }

    /// `alpha^3(q) = (2 c_2 + 6 c_3 q)/hbar`; real, any sign.
    pub fn alpha_cubed(&self, q: f64) -> f64 {
        (2.0 * self.s_poly[2] + 6.0 * self.s_poly[3] * q) / self.hbar
    }

    /// Real (sign-preserving) cube root of `alpha^3(q)`.
    pub fn alpha(&self, q: f64) -> f64 {
        self.alpha_cubed(q).cbrt()
    }

    /// True where the Airy scale vanishes and the Gaussian limit applies.
    pub fn is_degenerate_at(&self, q: f64) -> bool {
        (self.alpha_cubed(q) * self.hbar).abs() < ALPHA_DEGENERACY_EPS
    }
}

/// A real-valued Wigner function, evaluable in both linear and log scales.
///
/// `eval` must equal `eval_log(...).to_f64()` wherever the exponential is
/// representable; implementations get that for free from the default method.
pub trait WignerEvaluator: Send + Sync {
    fn n_modes(&self) -> usize;

    fn description(&self) -> String;

    /// Sign and log-magnitude of `W` at the phase-space point
    /// `(q[0], p[0], q[1], p[1], ...)`. The slices hold one entry per mode.
    fn eval_log(&self, q: &[f64], p: &[f64]) -> LogValue;

    fn eval(&self, q: &[f64], p: &[f64]) -> f64 {
        self.eval_log(q, p).to_f64()
    }

    /// Center of the momentum-direction mass at fixed position, for
    /// single-mode evaluators. Integrators shift their momentum interval by
    /// this hint so a sheared, narrow ridge cannot slip between the nodes
    /// of a wide initial panel.
    fn momentum_ridge(&self, _q: f64) -> f64 {
        0.0
    }
}

/// Single-mode convenience wrapper around [`WignerEvaluator::eval_log`].
pub fn eval_log_at(evaluator: &dyn WignerEvaluator, q: f64, p: f64) -> LogValue {
    assert_eq!(
        evaluator.n_modes(),
        1,
        "eval_log_at takes scalar coordinates; this evaluator has {} modes",
        evaluator.n_modes()
    );
    evaluator.eval_log(&[q], &[p])
}

/// Builds the closed-form evaluator for `gate` applied to `state`.
///
/// The result is exact (up to rounding) for every Gaussian input, any mode
/// count, and any coefficient signs, including the degenerate line where
/// `alpha(q) = 0`.
pub fn apply_phase_gate(state: &GaussianState, gate: &PhaseGate) -> Result<GateWigner, Error> {
    GateWigner::new(state, gate)
}

/// Trap-door-well gate applied to a single-mode state.
pub fn tdw_gate(state: &GaussianState) -> Result<GateWigner, Error> {
    if state.n_modes() != 1 {
        return Err(Error::Domain(format!(
            "the trap-door-well gate acts on one mode, state has {}",
            state.n_modes()
        )));
    }
    apply_phase_gate(state, &PhaseGate::tilted_double_well())
}

/// Closed-form Wigner function of a phase gate applied to a Gaussian state.
#[derive(Clone)]
pub struct GateWigner {
    state: GaussianState,
    gate: PhaseGate,
    spec: AirySpec,
    mode: usize,
    /// Indices into `(q1, p1, ...)` excluding the target momentum.
    rest_idx: Vec<usize>,
    mu_rest: DVector<f64>,
    mu_target: f64,
    chol_rest: Cholesky<f64, Dyn>,
    /// Regression weights of the target momentum on the remaining variables.
    weights: DVector<f64>,
    /// Conditional variance of the target momentum; strictly positive.
    sigma_c2: f64,
    /// Log normalization of the marginal over the remaining variables.
    ln_norm_rest: f64,
}

impl GateWigner {
    fn new(state: &GaussianState, gate: &PhaseGate) -> Result<Self, Error> {
        gate.validate()?;
        state.validate()?;
        let n = state.n_modes();
        if gate.mode >= n {
            return Err(Error::Domain(format!(
                "gate mode {} out of range for {n} mode(s)",
                gate.mode
            )));
        }
        let hbar = state.hbar();
        let spec = AirySpec::from_gamma(gate.effective_gamma(), hbar);

        let dim = 2 * n;
        let t_idx = 2 * gate.mode + 1;
        let rest_idx: Vec<usize> = (0..dim).filter(|&i| i != t_idx).collect();
        let m = rest_idx.len();

        let cov = state.cov();
        let sigma_rr = DMatrix::from_fn(m, m, |a, b| cov[(rest_idx[a], rest_idx[b])]);
        let sigma_rt = DVector::from_fn(m, |a, _| cov[(rest_idx[a], t_idx)]);
        let sigma_tt = cov[(t_idx, t_idx)];
        let mu_rest = DVector::from_fn(m, |a, _| state.mean()[rest_idx[a]]);
        let mu_target = state.mean()[t_idx];

        let chol_rest = Cholesky::new(sigma_rr).ok_or_else(|| {
            Error::InvalidState("covariance block of the non-target variables is singular".into())
        })?;
        let weights = chol_rest.solve(&sigma_rt);
        let sigma_c2 = sigma_tt - sigma_rt.dot(&weights);
        if !(sigma_c2 > 0.0) {
            return Err(Error::InvalidState(format!(
                "conditional momentum variance {sigma_c2:e} is not positive"
            )));
        }
        let ln_det = 2.0 * chol_rest.l().diagonal().iter().map(|v| v.ln()).sum::<f64>();
        let ln_norm_rest =
            -0.5 * (m as f64) * (2.0 * std::f64::consts::PI).ln() - 0.5 * ln_det;

        Ok(GateWigner {
            state: state.clone(),
            gate: *gate,
            spec,
            mode: gate.mode,
            rest_idx,
            mu_rest,
            mu_target,
            chol_rest,
            weights,
            sigma_c2,
            ln_norm_rest,
        })
    }

    pub fn state(&self) -> &GaussianState {
        &self.state
    }

    pub fn gate(&self) -> &PhaseGate {
        &self.gate
    }

    pub fn spec(&self) -> &AirySpec {
        &self.spec
    }

}

/// `1 + (3/2)w - (1+w)^{3/2}`: the residual after the leading terms of the
/// exponent cancel against the Airy decay. Series evaluation keeps full
/// relative accuracy where the direct form loses every leading digit
/// (the result is O(w^2) while the terms are O(1)).
fn exponent_cancellation(w: f64) -> f64 {
    if w.abs() <= 0.5 {
        // Binomial series of (1+w)^{3/2} with coefficients b_{k+1} =
        // b_k (3/2 - k)/(k + 1); the constant and linear terms cancel
        // exactly, leaving -sum_{k>=2} b_k w^k = -(3/8)w^2 + O(w^3).
        let mut b = 0.375;
        let mut wk = w * w;
        let mut sum = 0.0;
        for k in 2..60 {
            let term = b * wk;
            sum -= term;
            if term.abs() <= 1e-20 * sum.abs() {
                break;
            }
            b *= (1.5 - k as f64) / (k as f64 + 1.0);
            wk *= w;
        }
        sum
    } else {
        1.0 + 1.5 * w - (1.0 + w).powf(1.5)
    }
}

impl WignerEvaluator for GateWigner {
    fn n_modes(&self) -> usize {
        self.state.n_modes()
    }

    fn momentum_ridge(&self, q: f64) -> f64 {
        if self.state.n_modes() == 1 {
            self.mu_target - self.spec.s(q, 0.0)
        } else {
            0.0
        }
    }

    fn description(&self) -> String {
        format!(
            "phase gate gamma = {:?} x{} on mode {} of a {}-mode Gaussian state",
            self.gate.gamma,
            self.gate.repetitions,
            self.mode,
            self.state.n_modes()
        )
    }

    fn eval_log(&self, q: &[f64], p: &[f64]) -> LogValue {
        let n = self.state.n_modes();
        assert_eq!(q.len(), n, "expected {n} position coordinates");
        assert_eq!(p.len(), n, "expected {n} momentum coordinates");

        // Gaussian marginal over everything except the target momentum.
        let x_rest = DVector::from_fn(self.rest_idx.len(), |a, _| {
            let i = self.rest_idx[a];
            if i % 2 == 0 {
                q[i / 2]
            } else {
                p[i / 2]
            }
        });
        let d = &x_rest - &self.mu_rest;
        let solved = self.chol_rest.solve(&d);
        let ln_marginal = self.ln_norm_rest - 0.5 * d.dot(&solved);

        let mu_c = self.mu_target + self.weights.dot(&d);
        let q_t = q[self.mode];
        let s = self.spec.s(q_t, p[self.mode]);
        let sigma2 = self.sigma_c2;
        let u = s - mu_c;

        let a3_hbar = self.spec.alpha_cubed(q_t) * self.spec.hbar;
        if a3_hbar.abs() < ALPHA_DEGENERACY_EPS {
            // Gaussian limit: the Airy family tends to a normalized Gaussian
            // as its scale vanishes.
            let ln = ln_marginal
                - 0.5 * (2.0 * std::f64::consts::PI * sigma2).ln()
                - 0.5 * u * u / sigma2;
            return LogValue::new(1, ln);
        }

        // a = (hbar/2) alpha(q); the kernel is Ai(./a)/|a|.
        let a = 0.5 * self.spec.hbar * self.spec.alpha_cubed(q_t).cbrt();
        let kernel = airy_gauss_kernel_ln(u, sigma2, a);
        LogValue::new(kernel.sign, ln_marginal + kernel.ln_mag)
    }
}

/// Log of the Gaussian-smoothed Airy kernel
/// `(1/|a|) exp(u s^2/(2a^3) + s^6/(12a^6)) Ai(u/a + s^4/(4a^4))`
/// with `s^2 = sigma2`, evaluated without catastrophic cancellation.
///
/// For weak gates the exponential prefactor and the Airy decay are each
/// astronomically large but nearly cancel; the deep-tail branch subtracts
/// them analytically, which also makes the `a -> 0` limit collapse to the
/// exact Gaussian `exp(-u^2/(2 s^2))/sqrt(2 pi s^2)`.
pub(crate) fn airy_gauss_kernel_ln(u: f64, sigma2: f64, a: f64) -> LogValue {
    let a3 = a * a * a;
    let a4 = a3 * a;
    let a6 = a3 * a3;
    let sigma4 = sigma2 * sigma2;
    let sigma6 = sigma4 * sigma2;
    let w = 4.0 * a3 * u / sigma4;
    let x_arg = sigma4 / (4.0 * a4) * (1.0 + w);

    if x_arg >= 8.0 {
        // ln = -ln|a| + (sigma^6/(12 a^6)) g(w) + ln Ai_scaled(x) with
        // g(w) = 1 + (3/2)w - (1+w)^{3/2} = -(3/8)w^2 + O(w^3).
        let damp = sigma6 / (12.0 * a6) * exponent_cancellation(w);
        LogValue::new(1, -a.abs().ln() + damp + scaled_ai_raw(x_arg).ln())
    } else {
        // Moderate and oscillatory regime: the plain exponent
        // u sigma^2/(2 a^3) + sigma^6/(12 a^6) is well-conditioned here.
        let exponent = sigma6 / (24.0 * a6) * (3.0 * w + 2.0);
        let ai = log_ai_raw(x_arg);
        LogValue::new(ai.sign, -a.abs().ln() + exponent + ai.ln_mag)
    }
}

/// Evaluator for the gate applied to the (non-normalizable) zero-momentum
/// ideal input: a pure scaled-Airy profile in `S(q, p)`.
pub fn ideal_momentum_gate_wigner(gate: &PhaseGate) -> Result<IdealMomentumGateWigner, Error> {
    gate.validate()?;
    let eff = gate.effective_gamma();
    if eff[2] == 0.0 && eff[3] == 0.0 {
        return Err(Error::Domain(
            "gates without cubic or quartic terms map the ideal momentum state \
             to a delta ridge, which has no pointwise evaluator"
                .into(),
        ));
    }
    Ok(IdealMomentumGateWigner {
        spec: AirySpec::from_gamma(eff, 1.0),
    })
}

/// Scaled Airy profile `Ai(S(q,p); alpha(q))`. Not normalizable; intended
/// for shape studies only, with `hbar = 1`.
#[derive(Clone, Copy)]
pub struct IdealMomentumGateWigner {
    spec: AirySpec,
}

impl IdealMomentumGateWigner {
    pub fn spec(&self) -> &AirySpec {
        &self.spec
    }
}

impl WignerEvaluator for IdealMomentumGateWigner {
    fn n_modes(&self) -> usize {
        1
    }

    fn description(&self) -> String {
        format!(
            "scaled Airy profile of an ideal momentum input, S coefficients {:?}",
            self.spec.s_poly
        )
    }

    fn eval_log(&self, q: &[f64], p: &[f64]) -> LogValue {
        let s = self.spec.s(q[0], p[0]);
        let a = 0.5 * self.spec.hbar * self.spec.alpha(q[0]);
        if a == 0.0 {
            // Degenerate line of a quartic-only gate: the profile collapses
            // toward a delta in S; report a saturated magnitude with the
            // correct (positive) sign so plots can clip it.
            return LogValue::new(1, f64::INFINITY);
        }
        let ai = log_ai_raw(s / a);
        LogValue::new(ai.sign, ai.ln_mag - a.abs().ln())
    }
}

/// Output of the two-mode decomposed-gate closed form at one phase-space
/// point: a scaled Airy factor on the free coordinates and the delta
/// constraint pinning the remaining momentum.
#[derive(Clone, Copy, Debug)]
pub struct DecomposedGateFactor {
    /// `Ai(p_j - g3 Q^2 + g4 Q^3 + 2 q_k; alpha(Q))` with `Q = q_j + 2 q_k`.
    pub airy_factor: f64,
    /// The second momentum is supported only on `p_k = -2 (Q - p_j)`; the
    /// delta factor itself is kept symbolic.
    pub constrained_p_k: f64,
}

/// Closed form for the gate decomposed across two ideal momentum inputs.
///
/// `hbar = 1`. The delta constraint is returned as data, never as a numeric
/// spike.
pub fn decomposed_gate_wigner(
    gamma3: f64,
    gamma4: f64,
    q_j: f64,
    q_k: f64,
    p_j: f64,
) -> DecomposedGateFactor {
    let big_q = q_j + 2.0 * q_k;
    let arg = p_j - gamma3 * big_q * big_q + gamma4 * big_q.powi(3) + 2.0 * q_k;
    let alpha3 = 2.0 * gamma3 + 6.0 * gamma4 * big_q;
    let a = 0.5 * alpha3.cbrt();
    let airy_factor = if a == 0.0 {
        f64::INFINITY
    } else {
        ai_raw(arg / a) / a.abs()
    };
    DecomposedGateFactor {
        airy_factor,
        constrained_p_k: -2.0 * (big_q - p_j),
    }
}

/// Two-mode cubic-phase-entangled state: opposite squeezers, a balanced
/// beamsplitter, then a cubic gate on the first mode.
///
/// This evaluator hardcodes the independently derived closed form and exists
/// to cross-check the generic conditional pipeline; the two share no
/// intermediate algebra.
pub fn cpe_wigner(r: f64, gamma3: f64) -> Result<CpeWigner, Error> {
    if !(r.is_finite() && r > 0.0) {
        return Err(Error::Domain(format!("squeeze factor must be positive, got {r}")));
    }
    if !(gamma3.is_finite() && gamma3 != 0.0) {
        return Err(Error::Domain(format!(
            "cubic strength must be nonzero, got {gamma3}"
        )));
    }
    Ok(CpeWigner { r, gamma3 })
}

/// Closed-form Wigner function of the cubic-phase-entangled two-mode state
/// at `hbar = 1`.
#[derive(Clone, Copy)]
pub struct CpeWigner {
    r: f64,
    gamma3: f64,
}

impl WignerEvaluator for CpeWigner {
    fn n_modes(&self) -> usize {
        2
    }

    fn description(&self) -> String {
        format!(
            "cubic-phase-entangled two-mode state (r = {}, gamma3 = {})",
            self.r, self.gamma3
        )
    }

    fn eval_log(&self, q: &[f64], p: &[f64]) -> LogValue {
        let (q1, q2, p1, p2) = (q[0], q[1], p[0], p[1]);
        let r = self.r;
        let g = self.gamma3;
        let cbrt_g = g.cbrt();
        let r2 = r * r;
        let r4 = r2 * r2;
        let r6 = r4 * r2;
        let d = 1.0 + r4;
        let pi = std::f64::consts::PI;

        // Momentum combination carried into the Airy argument.
        let pm = p1 + p2 + (p1 - p2) * r4;

        let ln_prefactor = (7.0 / 6.0) * 2.0_f64.ln() + r.ln()
            - 1.5 * pi.ln()
            - 0.5 * d.ln()
            - cbrt_g.abs().ln();
        let e_const = 4.0 * r6 / (3.0 * d.powi(3) * g * g);
        let e_linear = 2.0 * r2 * pm / (d * d * g);
        let e_gauss = -(4.0 * r4 * p2 * p2 + {
            let s = q2 - q1 + (q1 + q2) * r4;
            s * s
        }) / (2.0 * r2 * d);

        let two_23 = 2.0_f64.powf(2.0 / 3.0);
        let arg = two_23 * r4 / (d * d * cbrt_g.powi(4))
            + two_23 * pm / (d * cbrt_g)
            + two_23 * cbrt_g * cbrt_g * q1 * q1;

        let ai = log_ai_raw(arg);
        LogValue::new(
            ai.sign,
            ln_prefactor + e_const + e_linear + e_gauss + ai.ln_mag,
        )
    }
}

/// Symplectic-core sanity helper: the gate's linear and quadratic parts as a
/// Gaussian evaluator (used to cross-check the degenerate branch).
pub fn sheared_gaussian(
    state: &GaussianState,
    mode: usize,
    gamma1: f64,
    gamma2: f64,
) -> Result<crate::gaussian::GaussianWigner, Error> {
    let sheared = state
        .linear_phase_gate(mode, 1, gamma1)?
        .linear_phase_gate(mode, 2, gamma2)?;
    wigner_gaussian(&sheared)
}

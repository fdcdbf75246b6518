//! Grid evaluation, cuts, marginals, negativity metrics, momentum
//! distributions, and the nonlinear-squeezing diagnostic.
//!
//! Everything operates on [`WignerEvaluator`] values and is pure. Grid rows
//! are computed concurrently, but every cell is an independent evaluation,
//! so results are bit-identical regardless of worker count.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::cell::RefCell;
use std::collections::HashMap;

use crate::airy_engine::{airy_gauss_kernel_ln, GateWigner, PhaseGate, WignerEvaluator};
use crate::error::Error;
use crate::gaussian::GaussianState;
use crate::oracle::{integrate_real, momentum_distribution_quadrature, QuadratureSpec};
use crate::special_functions::LogValue;

/// The varying coordinate of a cut or marginal.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    Q,
    P,
}

/// Rectangular sampling of a single-mode Wigner function.
///
/// `values` is row-major with the position index outermost:
/// `values[i * n_p + j] = W(q_i, p_j)`.
#[derive(Clone, Debug)]
pub struct Grid {
    pub q_range: (f64, f64),
    pub p_range: (f64, f64),
    pub n_q: usize,
    pub n_p: usize,
    pub values: Vec<f64>,
    pub log_values: Vec<LogValue>,
}

impl Grid {
    pub fn q_at(&self, i: usize) -> f64 {
        linspace_at(self.q_range, self.n_q, i)
    }

    pub fn p_at(&self, j: usize) -> f64 {
        linspace_at(self.p_range, self.n_p, j)
    }

    pub fn value(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.n_p + j]
    }

    pub fn min_value(&self) -> f64 {
        self.values.iter().fold(f64::INFINITY, |a, &v| a.min(v))
    }
}

fn linspace_at(range: (f64, f64), n: usize, i: usize) -> f64 {
    range.0 + (range.1 - range.0) * (i as f64) / ((n - 1) as f64)
}

fn check_range(range: (f64, f64), n: usize, what: &str) -> Result<(), Error> {
    if n < 2 {
        return Err(Error::Domain(format!(
            "{what} needs at least 2 samples, got {n}"
        )));
    }
    if !(range.0.is_finite() && range.1.is_finite() && range.0 < range.1) {
        return Err(Error::Domain(format!(
            "{what} range ({}, {}) is degenerate",
            range.0, range.1
        )));
    }
    Ok(())
}

/// Samples a single-mode evaluator on a rectangular grid.
///
/// Rows run concurrently; each cell is `eval(q_i, p_j)`, so the result does
/// not depend on the worker count. A non-finite cell aborts with its
/// location.
pub fn grid_eval(
    evaluator: &dyn WignerEvaluator,
    q_range: (f64, f64),
    p_range: (f64, f64),
    n_q: usize,
    n_p: usize,
) -> Result<Grid, Error> {
    if evaluator.n_modes() != 1 {
        return Err(Error::Domain(format!(
            "grids are two-dimensional; evaluator has {} modes",
            evaluator.n_modes()
        )));
    }
    check_range(q_range, n_q, "q grid")?;
    check_range(p_range, n_p, "p grid")?;

    let rows: Vec<Vec<(f64, LogValue)>> = (0..n_q)
        .into_par_iter()
        .map(|i| {
            let q = linspace_at(q_range, n_q, i);
            (0..n_p)
                .map(|j| {
                    let p = linspace_at(p_range, n_p, j);
                    let lv = evaluator.eval_log(&[q], &[p]);
                    (lv.to_f64(), lv)
                })
                .collect()
        })
        .collect();

    let mut values = Vec::with_capacity(n_q * n_p);
    let mut log_values = Vec::with_capacity(n_q * n_p);
    for (i, row) in rows.into_iter().enumerate() {
        for (j, (v, lv)) in row.into_iter().enumerate() {
            if !v.is_finite() {
                return Err(Error::PoisonedCell {
                    q: linspace_at(q_range, n_q, i),
                    p: linspace_at(p_range, n_p, j),
                    row: i,
                    col: j,
                });
            }
            values.push(v);
            log_values.push(lv);
        }
    }
    Ok(Grid {
        q_range,
        p_range,
        n_q,
        n_p,
        values,
        log_values,
    })
}

/// One-dimensional section of a Wigner function along `axis`, with the
/// conjugate coordinate held at `fixed`.
#[derive(Clone, Debug)]
pub struct Cut {
    pub axis: Axis,
    pub fixed: f64,
    pub coords: Vec<f64>,
    pub values: Vec<f64>,
    pub log_values: Vec<LogValue>,
}

pub fn cut(
    evaluator: &dyn WignerEvaluator,
    axis: Axis,
    fixed: f64,
    range: (f64, f64),
    n: usize,
) -> Result<Cut, Error> {
    if evaluator.n_modes() != 1 {
        return Err(Error::Domain(format!(
            "cuts are single-mode; evaluator has {} modes",
            evaluator.n_modes()
        )));
    }
    check_range(range, n, "cut")?;
    if !fixed.is_finite() {
        return Err(Error::Domain(format!("fixed coordinate {fixed} not finite")));
    }
    let mut coords = Vec::with_capacity(n);
    let mut values = Vec::with_capacity(n);
    let mut log_values = Vec::with_capacity(n);
    for i in 0..n {
        let x = linspace_at(range, n, i);
        let lv = match axis {
            Axis::Q => evaluator.eval_log(&[x], &[fixed]),
            Axis::P => evaluator.eval_log(&[fixed], &[x]),
        };
        coords.push(x);
        values.push(lv.to_f64());
        log_values.push(lv);
    }
    Ok(Cut {
        axis,
        fixed,
        coords,
        values,
        log_values,
    })
}

/// Integration box for normalization, negativity, and moments.
///
/// The box is origin-centered with half-extents generous enough to cover
/// the state's Gaussian support plus the momentum shear of the gate; the
/// consumers still double it until the boundary ring is negligible.
#[derive(Clone, Copy, Debug)]
pub struct ExtentPolicy {
    pub q_half: f64,
    pub p_half: f64,
    /// Accept the box once doubling changes the integral by less than this.
    /// Must sit above the quadrature error floor, or noise reads as mass.
    pub ring_tol: f64,
    pub max_doublings: u32,
}

impl ExtentPolicy {
    /// Six standard deviations around the mean in both directions.
    pub fn for_state(state: &GaussianState) -> Self {
        let sq = state.cov()[(0, 0)].sqrt();
        let sp = state.cov()[(1, 1)].sqrt();
        ExtentPolicy {
            q_half: 6.0 * sq + state.mean()[0].abs(),
            p_half: 6.0 * sp + state.mean()[1].abs(),
            ring_tol: 1e-6,
            max_doublings: 8,
        }
    }

    /// Momentum extent for a gated state, measured from the shear ridge
    /// that [`WignerEvaluator::momentum_ridge`] reports.
    ///
    /// The gate's polynomial shift itself never widens the interval (the
    /// integrators follow the ridge), so the extent only needs the state
    /// width, the conditional tilt of the momentum mean across the
    /// position range, and the reach of the oscillatory Airy tail, whose
    /// envelope decays like `exp(-depth sigma_c^2 / (2 a^3))`.
    pub fn for_gate(evaluator: &GateWigner) -> Self {
        let state = evaluator.state();
        let base = Self::for_state(state);
        let [_, _, g3, g4] = evaluator.gate().effective_gamma();
        let hbar = state.hbar();
        let qh = base.q_half;
        let cov = state.cov();
        let tilt = cov[(0, 1)].abs() / cov[(0, 0)] * (qh + state.mean()[0].abs());
        let a3 = hbar * hbar * (2.0 * g3.abs() + 6.0 * g4.abs() * qh) / 8.0;
        let sigma_c2 = cov[(1, 1)] - cov[(0, 1)] * cov[(0, 1)] / cov[(0, 0)];
        let osc = if a3 > 0.0 {
            50.0 * a3 / sigma_c2 + 6.0 * a3.cbrt()
        } else {
            0.0
        };
        ExtentPolicy {
            p_half: base.p_half + tilt + osc,
            ..base
        }
    }
}

/// Nested quadrature of `f(q) * integral_p g(q, p) dp` over the box,
/// with inner convergence failures surfaced after the outer pass.
///
/// The inner slices must be solved well below the outer tolerance: the
/// outer Kronrod error estimate cannot fall under the noise its samples
/// carry, so equal tolerances stall the outer refinement.
fn box_integral(
    evaluator: &dyn WignerEvaluator,
    q_half: f64,
    p_half: f64,
    absolute: bool,
    q_pow: u32,
    p_pow: u32,
) -> Result<f64, Error> {
    let inner_spec = inner_slice_spec();
    let inner_failure: RefCell<Option<Error>> = RefCell::new(None);
    let outer = |q: f64| -> f64 {
        // Momentum runs in ridge-centered coordinates so the mass sits at
        // the middle of the interval regardless of the shear.
        let center = evaluator.momentum_ridge(q);
        let inner = |t: f64| -> f64 {
            let p = center + t;
            let w = evaluator.eval(&[q], &[p]);
            let w = if absolute { w.abs() } else { w };
            w * p.powi(p_pow as i32)
        };
        match integrate_real(&inner, -p_half, p_half, &inner_spec) {
            Ok((v, _)) => v * q.powi(q_pow as i32),
            Err(e) => {
                inner_failure.borrow_mut().get_or_insert(e);
                0.0
            }
        }
    };
    let (value, _) = integrate_real(&outer, -q_half, q_half, &outer_spec())?;
    if let Some(e) = inner_failure.into_inner() {
        return Err(e);
    }
    Ok(value)
}

fn inner_slice_spec() -> QuadratureSpec {
    QuadratureSpec {
        abs_tol: 1e-10,
        rel_tol: 1e-10,
        max_subdivisions: 1500,
        truncation_threshold: 1e-18,
    }
}

fn outer_spec() -> QuadratureSpec {
    QuadratureSpec {
        abs_tol: 1e-7,
        rel_tol: 1e-7,
        max_subdivisions: 800,
        truncation_threshold: 1e-18,
    }
}

/// Integrals of `W` and `|W|` over an adaptively grown box.
///
/// Doubles the half-extents until both integrals move by less than
/// `ring_tol`, then reports them with the final extents.
fn adaptive_extent_integrals(
    evaluator: &dyn WignerEvaluator,
    policy: &ExtentPolicy,
) -> Result<(f64, f64, f64, f64), Error> {
    let (mut qh, mut ph) = (policy.q_half, policy.p_half);
    let mut total = box_integral(evaluator, qh, ph, false, 0, 0)?;
    let mut abs_total = box_integral(evaluator, qh, ph, true, 0, 0)?;
    for _ in 0..policy.max_doublings {
        let (q2, p2) = (2.0 * qh, 2.0 * ph);
        let next = box_integral(evaluator, q2, p2, false, 0, 0)?;
        let next_abs = box_integral(evaluator, q2, p2, true, 0, 0)?;
        let ring = (next - total).abs().max((next_abs - abs_total).abs());
        total = next;
        abs_total = next_abs;
        qh = q2;
        ph = p2;
        if ring < policy.ring_tol {
            return Ok((total, abs_total, qh, ph));
        }
    }
    Err(Error::UnboundedSupport { extent: qh.max(ph) })
}

/// Total integral of the Wigner function over the adaptive extent.
pub fn normalization(
    evaluator: &dyn WignerEvaluator,
    policy: &ExtentPolicy,
) -> Result<f64, Error> {
    require_single_mode(evaluator)?;
    adaptive_extent_integrals(evaluator, policy).map(|(total, ..)| total)
}

/// Negativity metrics of a single-mode Wigner function.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct NegativityReport {
    pub min_value: f64,
    pub argmin: (f64, f64),
    /// Estimate of `integral |W| - 1`; zero for nonnegative W.
    pub negative_volume: f64,
    /// Fraction of the |W| mass carried by negative regions.
    pub negative_fraction: f64,
}

pub fn negativity(
    evaluator: &dyn WignerEvaluator,
    policy: &ExtentPolicy,
) -> Result<NegativityReport, Error> {
    require_single_mode(evaluator)?;
    let (total, abs_total, _, _) = adaptive_extent_integrals(evaluator, policy)?;

    // Coarse scan in ridge-centered coordinates, then three shrinking
    // refinements in absolute coordinates around the running argmin.
    let mut best = (f64::INFINITY, 0.0, 0.0);
    let n0 = 201usize;
    for i in 0..n0 {
        let q = -policy.q_half + 2.0 * policy.q_half * (i as f64) / ((n0 - 1) as f64);
        let center = evaluator.momentum_ridge(q);
        for j in 0..n0 {
            let p = center - policy.p_half
                + 2.0 * policy.p_half * (j as f64) / ((n0 - 1) as f64);
            let v = evaluator.eval(&[q], &[p]);
            if v < best.0 {
                best = (v, q, p);
            }
        }
    }
    let mut q_h = 4.0 * policy.q_half / ((n0 - 1) as f64);
    let mut p_h = 4.0 * policy.p_half / ((n0 - 1) as f64);
    for _ in 0..3 {
        let n = 41usize;
        let (q_c, p_c) = (best.1, best.2);
        for i in 0..n {
            let q = q_c - q_h + 2.0 * q_h * (i as f64) / ((n - 1) as f64);
            for j in 0..n {
                let p = p_c - p_h + 2.0 * p_h * (j as f64) / ((n - 1) as f64);
                let v = evaluator.eval(&[q], &[p]);
                if v < best.0 {
                    best = (v, q, p);
                }
            }
        }
        q_h = 4.0 * q_h / ((n - 1) as f64);
        p_h = 4.0 * p_h / ((n - 1) as f64);
    }

    let min_value = best.0;
    let negative_fraction = if min_value < 0.0 {
        (0.5 * (abs_total - total)).max(0.0) / abs_total
    } else {
        0.0
    };
    Ok(NegativityReport {
        min_value,
        argmin: (best.1, best.2),
        negative_volume: (abs_total - 1.0).max(0.0),
        negative_fraction,
    })
}

/// One-dimensional probability density samples.
#[derive(Clone, Debug)]
pub struct Density {
    pub coords: Vec<f64>,
    pub density: Vec<f64>,
}

/// Marginal density along `axis`, integrating out the conjugate variable
/// with an extent that doubles until the tail contribution is negligible.
pub fn marginal(
    evaluator: &dyn WignerEvaluator,
    axis: Axis,
    range: (f64, f64),
    n: usize,
    policy: &ExtentPolicy,
) -> Result<Density, Error> {
    require_single_mode(evaluator)?;
    check_range(range, n, "marginal")?;
    let spec = inner_slice_spec();
    let mut coords = Vec::with_capacity(n);
    let mut density = Vec::with_capacity(n);
    for i in 0..n {
        let x = linspace_at(range, n, i);
        // Momentum slices run in ridge-centered coordinates (unit
        // Jacobian); position slices need no shift since gates leave the
        // position support alone.
        let slice = |y: f64| match axis {
            Axis::Q => evaluator.eval(&[x], &[evaluator.momentum_ridge(x) + y]),
            Axis::P => evaluator.eval(&[y], &[x]),
        };
        let mut half = match axis {
            Axis::Q => policy.p_half,
            Axis::P => policy.q_half,
        };
        let (mut value, _) = integrate_real(&slice, -half, half, &spec)?;
        let mut converged = false;
        for _ in 0..policy.max_doublings {
            half *= 2.0;
            let (next, _) = integrate_real(&slice, -half, half, &spec)?;
            let ring = (next - value).abs();
            value = next;
            if ring < policy.ring_tol {
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(Error::UnboundedSupport { extent: half });
        }
        coords.push(x);
        density.push(value);
    }
    Ok(Density { coords, density })
}

/// Phase-space moment `<q^a p^b>` of an evaluator by nested quadrature over
/// the adaptively grown box.
pub fn wigner_moment(
    evaluator: &dyn WignerEvaluator,
    q_pow: u32,
    p_pow: u32,
    policy: &ExtentPolicy,
) -> Result<f64, Error> {
    require_single_mode(evaluator)?;
    let (mut qh, mut ph) = (policy.q_half, policy.p_half);
    let mut value = box_integral(evaluator, qh, ph, false, q_pow, p_pow)?;
    for _ in 0..policy.max_doublings {
        qh *= 2.0;
        ph *= 2.0;
        let next = box_integral(evaluator, qh, ph, false, q_pow, p_pow)?;
        let ring = (next - value).abs();
        value = next;
        if ring < policy.ring_tol.max(1e-6 * value.abs()) {
            return Ok(value);
        }
    }
    Err(Error::UnboundedSupport { extent: qh.max(ph) })
}

fn require_single_mode(evaluator: &dyn WignerEvaluator) -> Result<(), Error> {
    if evaluator.n_modes() != 1 {
        return Err(Error::Domain(format!(
            "this analysis is single-mode; evaluator has {} modes",
            evaluator.n_modes()
        )));
    }
    Ok(())
}

/// Momentum density of a pure single-mode Gaussian state after a cubic
/// gate, by the closed-form Gaussian-smoothed Airy profile.
///
/// The closed form requires an uncorrelated covariance (`sigma_qp = 0`);
/// correlated pure states fall back to the convolution quadrature. Mixed
/// states are rejected: their distribution is a convex combination over
/// explicitly supplied pure components, not a single evaluation.
pub fn momentum_distribution_airy(
    state: &GaussianState,
    gamma3: f64,
    p_samples: &[f64],
) -> Result<Vec<f64>, Error> {
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

    if state.cov()[(0, 1)].abs() > 1e-12 {
        let spec = QuadratureSpec::default();
        return p_samples
            .iter()
            .map(|&p| momentum_distribution_quadrature(state, gamma3, p, &spec))
            .collect();
    }

    let hbar = state.hbar();
    let sp = state.cov()[(1, 1)];
    let p_bar = state.mean()[1];
    if gamma3 == 0.0 {
        return Ok(p_samples
            .iter()
            .map(|&p| {
                let u = p - p_bar;
                (-0.5 * u * u / sp).exp() / (2.0 * std::f64::consts::PI * sp).sqrt()
            })
            .collect());
    }

    // Amplitude = C sqrt(2 pi s2) * kernel(u, s2, a) with s2 = 2 sigma_p,
    // a = (hbar^2 gamma3)^{1/3}, C the momentum-space Gaussian peak
    // normalization; the density is the squared amplitude.
    let s2 = 2.0 * sp;
    let a = (hbar * hbar * gamma3).cbrt();
    let ln_c = -0.25 * (2.0 * std::f64::consts::PI * sp).ln()
        + 0.5 * (2.0 * std::f64::consts::PI * s2).ln();
    Ok(p_samples
        .iter()
        .map(|&p| {
            let kernel = airy_gauss_kernel_ln(p - p_bar, s2, a);
            if kernel.sign == 0 {
                0.0
            } else {
                (2.0 * (ln_c + kernel.ln_mag)).exp()
            }
        })
        .collect())
}

/// Nonlinear-squeezing curve of a post-gate state.
#[derive(Clone, Debug, Serialize)]
pub struct SqueezingReport {
    pub gamma_tilde: Vec<f64>,
    pub variance: Vec<f64>,
    /// Exact minimizer of the (quadratic in gamma_tilde) variance.
    pub optimal_gamma_tilde: f64,
    pub min_variance: f64,
    /// `min_variance / (hbar/2)`: 1 on the ground state, below 1 only for
    /// states squeezed along the nonlinear quadrature.
    pub ratio: f64,
}

/// Variance of the nonlinear quadrature `p - gamma_tilde q^2` on the
/// post-gate state, for `gamma_tilde` sampled over `range`.
///
/// The gate maps the observable back to the input state as
/// `p - g1 - g2 q - (g3 + gamma_tilde) q^2 - g4 q^3`, whose variance is an
/// exact Gaussian-moment computation; no quadrature is involved. Since the
/// variance is quadratic in `gamma_tilde`, the minimizer is computed in
/// closed form alongside the sampled curve.
pub fn nonlinear_squeezing(
    state: &GaussianState,
    gate: &PhaseGate,
    range: (f64, f64),
    n: usize,
) -> Result<SqueezingReport, Error> {
    if state.n_modes() != 1 {
        return Err(Error::Domain(format!(
            "nonlinear squeezing is single-mode, state has {} modes",
            state.n_modes()
        )));
    }
    gate.validate()?;
    check_range(range, n, "gamma_tilde sweep")?;

    let [g1, g2, g3, g4] = gate.effective_gamma();
    // Pullback of p - gamma_tilde q^2 splits as A - gamma_tilde q^2 with
    // A = p - g1 - g2 q - g3 q^2 - g4 q^3 independent of gamma_tilde.
    let base = PhasePoly::from_terms(&[
        (1.0, 0, 1),
        (-g1, 0, 0),
        (-g2, 1, 0),
        (-g3, 2, 0),
        (-g4, 3, 0),
    ]);
    let q2 = PhasePoly::from_terms(&[(1.0, 2, 0)]);

    let var_a = variance(state, &base)?;
    let var_q2 = variance(state, &q2)?;
    let cov_aq2 = covariance(state, &base, &q2)?;

    // V(t) = var_a - 2 t cov + t^2 var_q2.
    let optimal = cov_aq2 / var_q2;
    let min_variance = var_a - cov_aq2 * cov_aq2 / var_q2;

    let mut gamma_tilde = Vec::with_capacity(n);
    let mut curve = Vec::with_capacity(n);
    for i in 0..n {
        let t = linspace_at(range, n, i);
        gamma_tilde.push(t);
        curve.push(var_a - 2.0 * t * cov_aq2 + t * t * var_q2);
    }
    Ok(SqueezingReport {
        gamma_tilde,
        variance: curve,
        optimal_gamma_tilde: optimal,
        min_variance,
        ratio: min_variance / (0.5 * state.hbar()),
    })
}

/// Expectation of a single-mode phase-space polynomial under the state's
/// Gaussian moments; exposed for moment-consistency checks.
pub fn pullback_moment(
    state: &GaussianState,
    gate: &PhaseGate,
    q_pow: u32,
    p_pow: u32,
) -> Result<f64, Error> {
    let [g1, g2, g3, g4] = gate.effective_gamma();
    // The gate substitutes p -> p - (g1 + g2 q + g3 q^2 + g4 q^3) inside
    // expectations taken on the input state.
    let shifted_p = PhasePoly::from_terms(&[
        (1.0, 0, 1),
        (-g1, 0, 0),
        (-g2, 1, 0),
        (-g3, 2, 0),
        (-g4, 3, 0),
    ]);
    let mut poly = PhasePoly::one();
    for _ in 0..q_pow {
        poly = poly.mul(&PhasePoly::from_terms(&[(1.0, 1, 0)]));
    }
    for _ in 0..p_pow {
        poly = poly.mul(&shifted_p);
    }
    poly.expectation(state)
}

fn variance(state: &GaussianState, poly: &PhasePoly) -> Result<f64, Error> {
    let mean = poly.expectation(state)?;
    let second = poly.mul(poly).expectation(state)?;
    Ok(second - mean * mean)
}

fn covariance(state: &GaussianState, a: &PhasePoly, b: &PhasePoly) -> Result<f64, Error> {
    let joint = a.mul(b).expectation(state)?;
    Ok(joint - a.expectation(state)? * b.expectation(state)?)
}

/// Sparse single-mode polynomial in `(q, p)` keyed by exponent pairs.
#[derive(Clone, Debug, Default)]
struct PhasePoly {
    terms: HashMap<(u32, u32), f64>,
}

impl PhasePoly {
    fn one() -> Self {
        Self::from_terms(&[(1.0, 0, 0)])
    }

    fn from_terms(terms: &[(f64, u32, u32)]) -> Self {
        let mut map = HashMap::new();
        for &(c, a, b) in terms {
            if c != 0.0 {
                *map.entry((a, b)).or_insert(0.0) += c;
            }
        }
        PhasePoly { terms: map }
    }

    fn mul(&self, other: &Self) -> Self {
        let mut map = HashMap::new();
        for (&(a1, b1), &c1) in &self.terms {
            for (&(a2, b2), &c2) in &other.terms {
                *map.entry((a1 + a2, b1 + b2)).or_insert(0.0) += c1 * c2;
            }
        }
        PhasePoly { terms: map }
    }

    fn expectation(&self, state: &GaussianState) -> Result<f64, Error> {
        let mut sorted: Vec<_> = self.terms.iter().collect();
        sorted.sort_by_key(|(&k, _)| k);
        let mut total = 0.0;
        for (&(a, b), &c) in sorted {
            total += c * state.gaussian_moment(&[a, b])?;
        }
        Ok(total)
    }
}

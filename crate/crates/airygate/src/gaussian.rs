//! Multimode Gaussian states and Gaussian (symplectic) operations.
//!
//! Phase-space coordinates are ordered `(q1, p1, q2, p2, ...)`. The
//! covariance is the symmetrized second moment, so the vacuum covariance is
//! `(hbar/2) I`. Operations act on the state: mean -> S mean + shift,
//! cov -> S cov S^T, where S is the phase-space flow of the channel. The
//! Wigner function transforms with the inverse substitution,
//! `W'(x) = W(S^{-1} x)`.

use nalgebra::{Cholesky, DMatrix, DVector, Dyn, SymmetricEigen};
use num_complex::Complex64;
use std::collections::HashMap;

use crate::airy_engine::WignerEvaluator;
use crate::error::Error;
use crate::special_functions::LogValue;

/// Unit conventions shared by every object in one computation.
///
/// Mixing two `Conventions` values in a single pipeline is rejected by the
/// operations that combine states.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Conventions {
    pub hbar: f64,
}

impl Conventions {
    pub fn new(hbar: f64) -> Result<Self, Error> {
        if !(hbar.is_finite() && hbar > 0.0) {
            return Err(Error::Domain(format!("hbar must be positive, got {hbar}")));
        }
        Ok(Conventions { hbar })
    }
}

impl Default for Conventions {
    fn default() -> Self {
        Conventions { hbar: 1.0 }
    }
}

/// The standard symplectic form on N modes in (q1, p1, ...) ordering.
pub fn symplectic_form(n_modes: usize) -> DMatrix<f64> {
    let mut omega = DMatrix::zeros(2 * n_modes, 2 * n_modes);
    for m in 0..n_modes {
        omega[(2 * m, 2 * m + 1)] = 1.0;
        omega[(2 * m + 1, 2 * m)] = -1.0;
    }
    omega
}

/// A Gaussian state: mean vector and covariance matrix over
/// `(q1, p1, ..., qN, pN)`, tagged with its unit conventions.
#[derive(Clone, Debug)]
pub struct GaussianState {
    conventions: Conventions,
    n_modes: usize,
    mean: DVector<f64>,
    cov: DMatrix<f64>,
}

impl GaussianState {
    /// Ground state of `n_modes` modes: zero mean, covariance `(hbar/2) I`.
    pub fn vacuum(conventions: Conventions, n_modes: usize) -> Result<Self, Error> {
        if n_modes < 1 {
            return Err(Error::InvalidState("n_modes must be at least 1".into()));
        }
        let dim = 2 * n_modes;
        Ok(GaussianState {
            conventions,
            n_modes,
            mean: DVector::zeros(dim),
            cov: DMatrix::identity(dim, dim) * (conventions.hbar / 2.0),
        })
    }

    /// Single-mode thermal state with mean occupation `n_bar`:
    /// covariance `(hbar/2)(1 + 2 n_bar) I`.
    pub fn thermal(conventions: Conventions, n_bar: f64) -> Result<Self, Error> {
        if !(n_bar.is_finite() && n_bar >= 0.0) {
            return Err(Error::InvalidState(format!(
                "mean occupation must be nonnegative, got {n_bar}"
            )));
        }
        let mut state = Self::vacuum(conventions, 1)?;
        state.cov *= 1.0 + 2.0 * n_bar;
        Ok(state)
    }

    /// Builds a state from explicit mean and covariance, validating the
    /// structural invariants.
    pub fn from_parts(
        conventions: Conventions,
        mean: DVector<f64>,
        cov: DMatrix<f64>,
    ) -> Result<Self, Error> {
        if mean.len() % 2 != 0 || mean.is_empty() {
            return Err(Error::InvalidState(format!(
                "mean length {} is not twice a positive mode count",
                mean.len()
            )));
        }
        let state = GaussianState {
            conventions,
            n_modes: mean.len() / 2,
            mean,
            cov,
        };
        state.validate()?;
        Ok(state)
    }

    /// Two-mode squeezed state: opposite squeezers on two vacua followed by
    /// a balanced beamsplitter.
    pub fn two_mode_squeezed(conventions: Conventions, r: f64) -> Result<Self, Error> {
        Self::vacuum(conventions, 2)?
            .squeeze(0, r, 0.0)?
            .squeeze(1, 1.0 / r, 0.0)?
            .beamsplitter(0, 1, std::f64::consts::FRAC_PI_4)
    }

    pub fn conventions(&self) -> Conventions {
        self.conventions
    }

    pub fn hbar(&self) -> f64 {
        self.conventions.hbar
    }

    pub fn n_modes(&self) -> usize {
        self.n_modes
    }

    pub fn mean(&self) -> &DVector<f64> {
        &self.mean
    }

    pub fn cov(&self) -> &DMatrix<f64> {
        &self.cov
    }

    /// `(hbar/2)^N / sqrt(det cov)`; 1 for pure states, below 1 for mixed.
    pub fn purity(&self) -> f64 {
        (self.conventions.hbar / 2.0).powi(self.n_modes as i32) / self.cov.determinant().sqrt()
    }

    /// Checks symmetry, the uncertainty bound, and the purity range.
    pub fn validate(&self) -> Result<(), Error> {
        let dim = 2 * self.n_modes;
        if self.cov.nrows() != dim || self.cov.ncols() != dim {
            return Err(Error::InvalidState(format!(
                "covariance is {}x{}, expected {dim}x{dim}",
                self.cov.nrows(),
                self.cov.ncols()
            )));
        }
        let asym = (&self.cov - self.cov.transpose()).abs().max();
        if !(asym <= 1e-12) {
            return Err(Error::InvalidState(format!(
                "covariance asymmetry {asym:e} exceeds 1e-12"
            )));
        }
        // cov + i (hbar/2) Omega >= 0. For a Hermitian A + iB with A
        // symmetric and B antisymmetric this is equivalent to positivity of
        // the real symmetric embedding [[A, -B], [B, A]].
        let b = symplectic_form(self.n_modes) * (self.conventions.hbar / 2.0);
        let mut embed = DMatrix::zeros(2 * dim, 2 * dim);
        embed.view_mut((0, 0), (dim, dim)).copy_from(&self.cov);
        embed.view_mut((dim, dim), (dim, dim)).copy_from(&self.cov);
        embed.view_mut((0, dim), (dim, dim)).copy_from(&(-&b));
        embed.view_mut((dim, 0), (dim, dim)).copy_from(&b);
        let min_eig = SymmetricEigen::new(embed)
            .eigenvalues
            .iter()
            .fold(f64::INFINITY, |a, &e| a.min(e));
        if !(min_eig >= -1e-10) {
            return Err(Error::InvalidState(format!(
                "uncertainty bound violated: min eigenvalue {min_eig:e}"
            )));
        }
        let purity = self.purity();
        if !(purity > 0.0 && purity <= 1.0 + 1e-10) {
            return Err(Error::InvalidState(format!(
                "purity {purity} outside (0, 1]"
            )));
        }
        Ok(())
    }

    /// Applies a symplectic operation, consuming neither operand.
    pub fn apply(&self, op: &SymplecticOp) -> Result<Self, Error> {
        op.validate()?;
        if op.matrix.nrows() != 2 * self.n_modes {
            return Err(Error::InvalidState(format!(
                "operation acts on {} coordinates, state has {}",
                op.matrix.nrows(),
                2 * self.n_modes
            )));
        }
        Ok(GaussianState {
            conventions: self.conventions,
            n_modes: self.n_modes,
            mean: &op.matrix * &self.mean + &op.shift,
            cov: &op.matrix * &self.cov * op.matrix.transpose(),
        })
    }

    pub fn squeeze(&self, mode: usize, r: f64, theta: f64) -> Result<Self, Error> {
        self.apply(&SymplecticOp::squeeze(self.n_modes, mode, r, theta)?)
    }

    pub fn displace(&self, mode: usize, dq: f64, dp: f64) -> Result<Self, Error> {
        self.apply(&SymplecticOp::displace(self.n_modes, mode, dq, dp)?)
    }

    pub fn fourier(&self, mode: usize) -> Result<Self, Error> {
        self.apply(&SymplecticOp::fourier(self.n_modes, mode)?)
    }

    pub fn beamsplitter(&self, i: usize, j: usize, theta: f64) -> Result<Self, Error> {
        self.apply(&SymplecticOp::beamsplitter(self.n_modes, i, j, theta)?)
    }

    /// Polynomial phase gate of linear (`n = 1`) or quadratic (`n = 2`)
    /// order; these stay Gaussian. Higher orders leave the Gaussian family.
    pub fn linear_phase_gate(&self, mode: usize, n: u32, gamma: f64) -> Result<Self, Error> {
        self.apply(&SymplecticOp::linear_phase_gate(
            self.n_modes,
            mode,
            n,
            gamma,
        )?)
    }

    /// Anti-diagonal matrix element `<q - t| rho |q + t>` in closed form.
    ///
    /// The momentum integral of the Wigner function against `e^{-2ip.t/hbar}`
    /// factorizes into the position marginal at `q` times the characteristic
    /// function of the conditional momentum Gaussian. Satisfies
    /// `conj(A(q, t)) = A(q, -t)`.
    pub fn anti_diagonal(&self, q: &[f64], t: &[f64]) -> Result<Complex64, Error> {
        if q.len() != self.n_modes || t.len() != self.n_modes {
            return Err(Error::Domain(format!(
                "anti_diagonal wants {} coordinates per vector, got ({}, {})",
                self.n_modes,
                q.len(),
                t.len()
            )));
        }
        let hbar = self.conventions.hbar;
        let n = self.n_modes;
        let (sqq, spq, spp) = self.position_momentum_blocks();
        let mu_q = DVector::from_fn(n, |m, _| self.mean[2 * m]);
        let mu_p = DVector::from_fn(n, |m, _| self.mean[2 * m + 1]);

        let chol = Cholesky::new(sqq.clone())
            .ok_or_else(|| Error::InvalidState("position covariance block not positive".into()))?;
        let d = DVector::from_column_slice(q) - &mu_q;
        let solved = chol.solve(&d);
        let quad_q = d.dot(&solved);
        let ln_det = 2.0 * chol.l().diagonal().iter().map(|v| v.ln()).sum::<f64>();
        let ln_marginal =
            -0.5 * quad_q - 0.5 * (n as f64) * (2.0 * std::f64::consts::PI).ln() - 0.5 * ln_det;

        let mu_cond = &mu_p + &spq * &solved;
        let cov_cond = &spp - &spq * chol.solve(&spq.transpose());
        let tv = DVector::from_column_slice(t);
        let phase = -2.0 / hbar * mu_cond.dot(&tv);
        let decay = 2.0 / (hbar * hbar) * tv.dot(&(&cov_cond * &tv));
        Ok(Complex64::new(ln_marginal - decay, phase).exp())
    }

    /// Splits the covariance into position, cross, and momentum blocks.
    fn position_momentum_blocks(&self) -> (DMatrix<f64>, DMatrix<f64>, DMatrix<f64>) {
        let n = self.n_modes;
        let sqq = DMatrix::from_fn(n, n, |a, b| self.cov[(2 * a, 2 * b)]);
        let spq = DMatrix::from_fn(n, n, |a, b| self.cov[(2 * a + 1, 2 * b)]);
        let spp = DMatrix::from_fn(n, n, |a, b| self.cov[(2 * a + 1, 2 * b + 1)]);
        (sqq, spq, spp)
    }

    /// Phase-space moment `< x1^{k1} x2^{k2} ... >` of the Wigner
    /// distribution (equivalently, the Weyl-symmetrized operator moment).
    ///
    /// `powers` indexes `(q1, p1, ...)`; total degree is capped at 8, which
    /// covers the variance of any quartic-in-position quadrature.
    pub fn gaussian_moment(&self, powers: &[u32]) -> Result<f64, Error> {
        if powers.len() != 2 * self.n_modes {
            return Err(Error::Domain(format!(
                "powers has length {}, expected {}",
                powers.len(),
                2 * self.n_modes
            )));
        }
        let degree: u32 = powers.iter().sum();
        if degree > 8 {
            return Err(Error::UnsupportedDegree { degree });
        }
        let mut memo = HashMap::new();
        Ok(self.moment_rec(powers.to_vec(), &mut memo))
    }

    /// Stein recursion: E[x_j M] = mu_j E[M] + sum_l cov_{jl} E[dM/dx_l].
    fn moment_rec(&self, powers: Vec<u32>, memo: &mut HashMap<Vec<u32>, f64>) -> f64 {
        if let Some(&v) = memo.get(&powers) {
            return v;
        }
        let Some(j) = powers.iter().position(|&k| k > 0) else {
            return 1.0;
        };
        let mut rest = powers.clone();
        rest[j] -= 1;
        let mut value = self.mean[j] * self.moment_rec(rest.clone(), memo);
        for l in 0..rest.len() {
            if rest[l] > 0 {
                let mut lowered = rest.clone();
                lowered[l] -= 1;
                value +=
                    self.cov[(j, l)] * rest[l] as f64 * self.moment_rec(lowered, memo);
            }
        }
        memo.insert(powers, value);
        value
    }
}

/// Closed-form normalized Gaussian Wigner evaluator.
pub fn wigner_gaussian(state: &GaussianState) -> Result<GaussianWigner, Error> {
    GaussianWigner::new(state.clone())
}

/// Evaluator for `W_G(x) = exp(-(x-mu)^T cov^{-1} (x-mu)/2) / ((2pi)^N sqrt(det cov))`.
#[derive(Clone)]
pub struct GaussianWigner {
    state: GaussianState,
    chol: Cholesky<f64, Dyn>,
    ln_norm: f64,
}

impl GaussianWigner {
    fn new(state: GaussianState) -> Result<Self, Error> {
        state.validate()?;
        let chol = Cholesky::new(state.cov.clone()).ok_or_else(|| {
            Error::InvalidState("covariance is not positive definite".into())
        })?;
        let ln_det = 2.0 * chol.l().diagonal().iter().map(|v| v.ln()).sum::<f64>();
        let ln_norm =
            -(state.n_modes as f64) * (2.0 * std::f64::consts::PI).ln() - 0.5 * ln_det;
        Ok(GaussianWigner {
            state,
            chol,
            ln_norm,
        })
    }

    pub fn state(&self) -> &GaussianState {
        &self.state
    }
}

impl WignerEvaluator for GaussianWigner {
    fn n_modes(&self) -> usize {
        self.state.n_modes
    }

    fn description(&self) -> String {
        format!("Gaussian Wigner function on {} mode(s)", self.state.n_modes)
    }

    fn eval_log(&self, q: &[f64], p: &[f64]) -> LogValue {
        debug_assert_eq!(q.len(), self.state.n_modes);
        debug_assert_eq!(p.len(), self.state.n_modes);
        let dim = 2 * self.state.n_modes;
        let x = DVector::from_fn(dim, |i, _| {
            if i % 2 == 0 {
                q[i / 2]
            } else {
                p[i / 2]
            }
        });
        let d = x - &self.state.mean;
        let quad = d.dot(&self.chol.solve(&d));
        LogValue::new(1, self.ln_norm - 0.5 * quad)
    }
}

/// An affine phase-space map `x -> matrix x + shift` with symplectic linear
/// part.
#[derive(Clone, Debug)]
pub struct SymplecticOp {
    pub matrix: DMatrix<f64>,
    pub shift: DVector<f64>,
}

impl SymplecticOp {
    pub fn identity(n_modes: usize) -> Self {
        SymplecticOp {
            matrix: DMatrix::identity(2 * n_modes, 2 * n_modes),
            shift: DVector::zeros(2 * n_modes),
        }
    }

    /// Checks `S Omega S^T = Omega` to 1e-10.
    pub fn validate(&self) -> Result<(), Error> {
        let n2 = self.matrix.nrows();
        if n2 % 2 != 0 || self.matrix.ncols() != n2 || self.shift.len() != n2 {
            return Err(Error::InvalidState(
                "symplectic operation has inconsistent dimensions".into(),
            ));
        }
        let omega = symplectic_form(n2 / 2);
        let residual = (&self.matrix * &omega * self.matrix.transpose() - &omega)
            .abs()
            .max();
        if !(residual <= 1e-10) {
            return Err(Error::InvalidState(format!(
                "matrix is not symplectic: residual {residual:e}"
            )));
        }
        Ok(())
    }

    /// Embeds a 2x2 block acting on one mode into the identity on N modes.
    fn single_mode(n_modes: usize, mode: usize, block: [[f64; 2]; 2]) -> Result<Self, Error> {
        if mode >= n_modes {
            return Err(Error::Domain(format!(
                "mode {mode} out of range for {n_modes} mode(s)"
            )));
        }
        let mut op = Self::identity(n_modes);
        for r in 0..2 {
            for c in 0..2 {
                op.matrix[(2 * mode + r, 2 * mode + c)] = block[r][c];
            }
        }
        Ok(op)
    }

    /// Squeezer with principal axes rotated by `theta`; at `theta = 0` the
    /// position flow is scaled by `r` (position variance by `r^2`).
    pub fn squeeze(n_modes: usize, mode: usize, r: f64, theta: f64) -> Result<Self, Error> {
        if !(r.is_finite() && r > 0.0) {
            return Err(Error::Domain(format!(
                "squeeze factor must be positive, got {r}"
            )));
        }
        let (s, c) = theta.sin_cos();
        // R(theta) diag(r, 1/r) R(-theta) with R the mode-rotation below.
        let ri = 1.0 / r;
        let block = [
            [c * c * r + s * s * ri, s * c * (ri - r)],
            [s * c * (ri - r), s * s * r + c * c * ri],
        ];
        Self::single_mode(n_modes, mode, block)
    }

    pub fn displace(n_modes: usize, mode: usize, dq: f64, dp: f64) -> Result<Self, Error> {
        if mode >= n_modes {
            return Err(Error::Domain(format!(
                "mode {mode} out of range for {n_modes} mode(s)"
            )));
        }
        let mut op = Self::identity(n_modes);
        op.shift[2 * mode] = dq;
        op.shift[2 * mode + 1] = dp;
        Ok(op)
    }

    /// Quarter rotation `q -> p, p -> -q`.
    pub fn fourier(n_modes: usize, mode: usize) -> Result<Self, Error> {
        Self::single_mode(n_modes, mode, [[0.0, 1.0], [-1.0, 0.0]])
    }

    /// Beamsplitter mixing modes `i` and `j`:
    /// `q_i -> cos(theta) q_i + sin(theta) q_j`, likewise for p, with the
    /// orthogonal complement on mode `j`.
    pub fn beamsplitter(n_modes: usize, i: usize, j: usize, theta: f64) -> Result<Self, Error> {
        if i >= n_modes || j >= n_modes || i == j {
            return Err(Error::Domain(format!(
                "beamsplitter needs two distinct modes below {n_modes}, got ({i}, {j})"
            )));
        }
        let (s, c) = theta.sin_cos();
        let mut op = Self::identity(n_modes);
        for off in 0..2 {
            op.matrix[(2 * i + off, 2 * i + off)] = c;
            op.matrix[(2 * i + off, 2 * j + off)] = s;
            op.matrix[(2 * j + off, 2 * i + off)] = -s;
            op.matrix[(2 * j + off, 2 * j + off)] = c;
        }
        Ok(op)
    }

    /// Order `n = 1` or `n = 2` polynomial phase gate.
    ///
    /// The Wigner function picks up the substitution
    /// `W'(q, p) = W(q, p + gamma q^{n-1})`, so the state flow is the
    /// inverse: the mean momentum moves by `-gamma q^{n-1}`.
    pub fn linear_phase_gate(
        n_modes: usize,
        mode: usize,
        n: u32,
        gamma: f64,
    ) -> Result<Self, Error> {
        if !gamma.is_finite() {
            return Err(Error::Domain(format!("gate strength {gamma} not finite")));
        }
        match n {
            1 => Self::displace(n_modes, mode, 0.0, -gamma),
            2 => Self::single_mode(n_modes, mode, [[1.0, 0.0], [-gamma, 1.0]]),
            _ => Err(Error::Domain(format!(
                "order-{n} phase gates are not Gaussian; use the gate evaluators"
            ))),
        }
    }
}

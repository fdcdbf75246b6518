//! Phase-space toolkit for nonlinear phase gates on Gaussian states.
//!
//! A polynomial phase gate `exp(-i/hbar * sum_n gamma_n q^n / n)` maps a
//! Gaussian Wigner function to a closed form: a Gaussian envelope in position
//! times an Airy factor in a sheared momentum variable. This crate implements
//! that closed form for arbitrary (multimode, pure or thermal) Gaussian
//! inputs, together with the machinery needed to trust and use it:
//!
//! - [`special_functions`]: the Airy function `Ai` in double precision, plus
//!   scaled and log-domain variants that survive the extreme prefactors the
//!   closed form produces at small gate strengths.
//! - [`gaussian`]: Gaussian states, symplectic operations, closed-form
//!   Gaussian Wigner functions, anti-diagonal matrix elements, and moments.
//! - [`airy_engine`]: the gate evaluators themselves.
//! - [`oracle`]: slow brute-force references (oscillatory quadrature and an
//!   extended-precision Airy series) used to validate the fast paths.
//! - [`analysis`]: grids, cuts, marginals, negativity metrics, momentum
//!   distributions, and the nonlinear-squeezing diagnostic.
//! - [`cli`]: a scene-config front end wiring the above to files.
//!
//! # Example
//!
//! ```
//! use airygate::airy_engine::{apply_phase_gate, PhaseGate, WignerEvaluator};
//! use airygate::gaussian::{Conventions, GaussianState};
//!
//! let conv = Conventions::default();
//! let state = GaussianState::vacuum(conv, 1).unwrap();
//! let w = apply_phase_gate(&state, &PhaseGate::cubic(2.0)).unwrap();
//! let value = w.eval(&[0.0], &[0.0]);
//! assert!((value - 0.23305754934917858).abs() < 1e-12);
//! ```

pub mod analysis;
pub mod airy_engine;
pub mod cli;
mod error;
pub mod gaussian;
pub mod oracle;
pub mod special_functions;

pub use error::Error;

/// Asserts two floats agree within an absolute tolerance, with a diagnostic
/// message on failure. Exported for this crate's integration tests.
#[macro_export]
macro_rules! assert_close {
    ($a:expr, $b:expr, $tol:expr) => {{
        let (a, b, tol) = ($a, $b, $tol);
        assert!(
            (a - b).abs() <= tol,
            "|{} - {}| = {:e} > {:e}",
            a,
            b,
            (a - b).abs(),
            tol
        );
    }};
    ($a:expr, $b:expr, $tol:expr, $($ctx:tt)+) => {{
        let (a, b, tol) = ($a, $b, $tol);
        assert!(
            (a - b).abs() <= tol,
            "{}: |{} - {}| = {:e} > {:e}",
            format_args!($($ctx)+),
            a,
            b,
            (a - b).abs(),
            tol
        );
    }};
}

//! Time domain decomposition Neumann-Neumann algorithms for spatially
//! semi-discretized parabolic optimal control.
//!
//! After diagonalizing the spatial operator, the coupled forward-backward
//! optimality system splits into independent scalar modes
//! `z'' - sigma^2 z = 0` on the time interval (0, T), decomposed at an
//! interface alpha into two subdomains. Nine Neumann-Neumann variants arise
//! from the choice of Dirichlet step, Neumann correction and update step;
//! this crate provides
//!
//! - [`problem`]: problem scalars, eigenvalue sources, per-mode parameters;
//! - [`modal`]: nodal/modal transforms for a symmetric spatial operator;
//! - [`closed_form`]: E/F coefficients, iteration matrices, convergence
//!   factors, zero/infinity limits and equioscillated relaxation parameters;
//! - [`optimize`]: derivative-free minimax tuning of the relaxation
//!   parameter over a spectrum;
//! - [`engine`]: the executable three-step iteration on the exact per-mode
//!   subdomain solutions, with observed contraction rates;
//! - [`oracle`]: finite-difference ground truth (monolithic forward-backward
//!   solve and time-discretized sweeps);
//! - [`sweep`]: convergence-factor profiles over a spectrum with parallel
//!   and sequential entry points.
//!
//! Bulk operations run in parallel through rayon when the default
//! `parallel` feature is enabled; disabling it falls back to sequential
//! loops with identical results.

pub mod closed_form;
pub mod engine;
pub mod error;
mod exec;
mod factors;
pub mod modal;
pub mod optimize;
pub mod oracle;
pub mod problem;
pub mod sweep;
pub mod variant;

pub use error::{Error, Result};
pub use problem::{ControlProblem, Mode, Spectrum, SpectrumSource};
pub use variant::Variant;

/// Format a float with 17 significant digits, the fixed width used by every
/// CSV emitter in this workspace.
pub fn fmt_g17(x: f64) -> String {
    format!("{x:.16e}")
}

#[cfg(test)]
mod tests {
    use super::fmt_g17;

    #[test]
    fn seventeen_significant_digits() {
        assert_eq!(fmt_g17(0.1), "1.0000000000000001e-1");
        assert_eq!(fmt_g17(1.0), "1.0000000000000000e0");
        let x = 0.1f64;
        let parsed: f64 = fmt_g17(x).parse().unwrap();
        assert_eq!(parsed, x);
    }
}

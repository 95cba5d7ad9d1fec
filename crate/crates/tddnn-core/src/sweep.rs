//! Convergence-factor profiles over a spectrum, with parallel and
//! sequential entry points and the CSV layout used by the command line.

use crate::closed_form::{rho_theory, Relaxation};
use crate::error::Result;
use crate::exec;
use crate::problem::{ControlProblem, Spectrum};
use crate::variant::Variant;

/// One point of a convergence-factor profile.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RhoPoint {
    pub d: f64,
    pub rho: f64,
}

fn profile_impl(
    variant: Variant,
    thetas: &Relaxation,
    problem: &ControlProblem,
    spectrum: &Spectrum,
    sequential: bool,
) -> Result<Vec<RhoPoint>> {
    let modes = problem.modes(spectrum)?;
    let eval = |mode: &crate::problem::Mode| {
        Ok(RhoPoint {
            d: mode.d(),
            rho: rho_theory(variant, mode, thetas)?,
        })
    };
    if sequential {
        exec::try_map_seq(&modes, eval)
    } else {
        exec::try_map(&modes, eval)
    }
}

/// Per-eigenvalue convergence factor of a variant at fixed relaxation.
/// The analysis-only formulations report the spectral radius of their
/// iteration matrix. Runs in parallel when the `parallel` feature is on.
pub fn rho_profile(
    variant: Variant,
    thetas: &Relaxation,
    problem: &ControlProblem,
    spectrum: &Spectrum,
) -> Result<Vec<RhoPoint>> {
    profile_impl(variant, thetas, problem, spectrum, false)
}

/// Sequential fallback of [`rho_profile`], kept callable regardless of the
/// feature set so the two paths can be compared.
pub fn rho_profile_seq(
    variant: Variant,
    thetas: &Relaxation,
    problem: &ControlProblem,
    spectrum: &Spectrum,
) -> Result<Vec<RhoPoint>> {
    profile_impl(variant, thetas, problem, spectrum, true)
}

/// Worst convergence factor of a profile.
pub fn max_rho(points: &[RhoPoint]) -> f64 {
    points.iter().map(|p| p.rho).fold(0.0, f64::max)
}

/// CSV with header `d,rho` and 17 significant digits per value.
pub fn rho_csv(points: &[RhoPoint]) -> String {
    let mut out = String::from("d,rho\n");
    for p in points {
        out.push_str(&crate::fmt_g17(p.d));
        out.push(',');
        out.push_str(&crate::fmt_g17(p.rho));
        out.push('\n');
    }
    out
}

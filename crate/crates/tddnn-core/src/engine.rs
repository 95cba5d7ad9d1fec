//! Executable two-subdomain iteration: Dirichlet solve, Neumann correction,
//! relaxed interface update, all through the exact per-mode amplitude
//! algebra of the homogeneous error equation.
//!
//! On each subdomain the error solves `z'' = sigma^2 z`, so the iterates are
//! spanned by one amplitude per subdomain and per step:
//!
//! ```text
//! z1(t)   = A sinh(sigma t)
//! z2(t)   = B (sigma cosh(sigma (T-t)) + omega sinh(sigma (T-t)))
//! psi1(t) = C sinh(sigma t)
//! psi2(t) = D (sigma cosh(sigma (T-t)) + omega sinh(sigma (T-t)))
//! ```
//!
//! The left basis function absorbs the initial condition at 0 and the right
//! one the final Robin condition at T, so only the interface conditions at
//! alpha remain and each step reduces to a 1x1 solve per subdomain. Working
//! with exact amplitudes isolates algorithmic behavior from time
//! discretization error; the time-discretized counterpart lives in
//! [`crate::oracle`].

use crate::closed_form::Relaxation;
use crate::error::{Error, Result};
use crate::exec;
use crate::factors::{ModeFactors, PhysicalFactors};
use crate::problem::{ControlProblem, Mode, Spectrum};
use crate::variant::{DirichletFamily, NeumannFamily, UpdateKind, Variant};

/// Transmission unknowns carried between iterations. `g` is present exactly
/// for the formulations that exchange a pair of interface data.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InterfaceState {
    pub f: f64,
    pub g: Option<f64>,
}

impl InterfaceState {
    pub fn single(f: f64) -> Self {
        Self { f, g: None }
    }

    pub fn pair(f: f64, g: f64) -> Self {
        Self { f, g: Some(g) }
    }

    /// The default initial guess: every transmission unknown set to one.
    pub fn default_for(variant: Variant) -> Self {
        if variant.carries_pair() {
            Self::pair(1.0, 1.0)
        } else {
            Self::single(1.0)
        }
    }

    pub fn norm(&self) -> f64 {
        match self.g {
            Some(g) => self.f.hypot(g),
            None => self.f.abs(),
        }
    }

    pub fn scaled(&self, c: f64) -> Self {
        Self {
            f: c * self.f,
            g: self.g.map(|g| c * g),
        }
    }

    fn validate(&self, variant: Variant) -> Result<()> {
        let ok = self.g.is_some() == variant.carries_pair();
        if !ok {
            return Err(Error::ArityMismatch {
                variant,
                expected: if variant.carries_pair() {
                    "state with (f, g)"
                } else {
                    "state with f only"
                },
                got: if self.g.is_some() {
                    "state with (f, g)"
                } else {
                    "state with f only"
                },
            });
        }
        if !self.f.is_finite() || self.g.is_some_and(|g| !g.is_finite()) {
            return Err(Error::NonFinite("interface state"));
        }
        Ok(())
    }
}

/// Relative cancellation level below which an interface denominator is
/// reported as singular instead of dividing through.
const SINGULAR_REL: f64 = 1e-12;

fn guard_denominator(value: f64, magnitude: f64, what: &str) -> Result<f64> {
    if !value.is_finite() || value.abs() < SINGULAR_REL * magnitude {
        return Err(Error::SingularStep(format!(
            "{what} vanished (value {value:.3e}, scale {magnitude:.3e})"
        )));
    }
    Ok(value)
}

/// Magnitude scale of the gamma/beta Robin combinations, used to detect the
/// genuine sign-change cancellation that occurs only for gamma d > 1.
fn q3_scale(k: &ModeFactors, phys: bool) -> f64 {
    let s = (k.sigma * k.gamma).abs() + k.beta.abs();
    if phys {
        s * k.b.exp()
    } else {
        s
    }
}

/// Dirichlet-step amplitudes (A, B) for the variant's first solve.
pub fn dirichlet_step(variant: Variant, mode: &Mode, state: &InterfaceState) -> Result<(f64, f64)> {
    state.validate(variant)?;
    let k = ModeFactors::new(mode);
    let p = k.physical();
    let f = state.f;
    let right_datum = state.g.unwrap_or(f);
    let (a, b) = match variant.dirichlet_family() {
        DirichletFamily::RobinDirichlet => (f / p.p1r, right_datum / p.q2d),
        DirichletFamily::DirichletDirichlet => (f / p.sh_a, right_datum / p.q2d),
        DirichletFamily::RobinRobin => {
            let q3r = guard_denominator(p.q3r, q3_scale(&k, true), "Robin denominator")?;
            (f / p.p1r, -k.nu * f / q3r)
        }
    };
    if !a.is_finite() || !b.is_finite() {
        return Err(Error::NonFinite("Dirichlet-step amplitudes"));
    }
    Ok((a, b))
}

/// Neumann-step amplitudes (C, D) from the Dirichlet amplitudes.
pub fn neumann_step(variant: Variant, mode: &Mode, a: f64, b: f64) -> Result<(f64, f64)> {
    let k = ModeFactors::new(mode);
    let p = k.physical();
    let (c, d) = match variant.neumann_family() {
        NeumannFamily::RobinNeumann => (
            a - b * k.nu_inv * p.q3rc / p.p1n,
            a * p.ch_a / p.q2n + b,
        ),
        NeumannFamily::NeumannNeumann => (
            a + b * p.q2n / p.ch_a,
            a * p.ch_a / p.q2n + b,
        ),
        NeumannFamily::RobinRobin => {
            let q3rc = guard_denominator(p.q3rc, q3_scale(&k, true), "Robin correction denominator")?;
            (
                a - b * k.nu_inv * q3rc / p.p1n,
                b - k.nu * a * p.p1n / q3rc,
            )
        }
    };
    if !c.is_finite() || !d.is_finite() {
        return Err(Error::NonFinite("Neumann-step amplitudes"));
    }
    Ok((c, d))
}

/// Interface traces of the correction states used by the update steps.
fn correction_traces(p: &PhysicalFactors, k: &ModeFactors, c: f64, d: f64) -> (f64, f64) {
    // psi1(alpha) + psi2(alpha)
    let value_sum = c * p.sh_a + d * p.q2d;
    // (psi1' + d psi1)(alpha) + (psi2' + d psi2)(alpha)
    let robin_sum = c * p.p1r - d * k.nu_inv * p.q3r;
    (value_sum, robin_sum)
}

/// Relaxed interface update from the Neumann amplitudes.
pub fn update_step(
    variant: Variant,
    mode: &Mode,
    state: &InterfaceState,
    c: f64,
    d: f64,
    thetas: &Relaxation,
) -> Result<InterfaceState> {
    state.validate(variant)?;
    thetas.validate(variant)?;
    let k = ModeFactors::new(mode);
    let p = k.physical();
    let (value_sum, robin_sum) = correction_traces(&p, &k, c, d);
    let next = match variant.update_kind() {
        UpdateKind::ValueTrace => {
            InterfaceState::single(state.f - thetas.single(variant)? * value_sum)
        }
        UpdateKind::RobinTrace => {
            InterfaceState::single(state.f - thetas.single(variant)? * robin_sum)
        }
        UpdateKind::PairRobinValue => {
            let (t1, t2) = thetas.pair(variant)?;
            let g = state.g.expect("validated pair state");
            InterfaceState::pair(state.f - t1 * robin_sum, g - t2 * value_sum)
        }
        UpdateKind::PairValueValue => {
            let (t1, t2) = thetas.pair(variant)?;
            let g = state.g.expect("validated pair state");
            InterfaceState::pair(state.f - t1 * value_sum, g - t2 * value_sum)
        }
    };
    if !next.f.is_finite() || next.g.is_some_and(|g| !g.is_finite()) {
        return Err(Error::NonFinite("updated interface state"));
    }
    Ok(next)
}

/// One full Dirichlet/Neumann/update sweep.
pub fn sweep(
    variant: Variant,
    mode: &Mode,
    state: &InterfaceState,
    thetas: &Relaxation,
) -> Result<InterfaceState> {
    let (a, b) = dirichlet_step(variant, mode, state)?;
    let (c, d) = neumann_step(variant, mode, a, b)?;
    update_step(variant, mode, state, c, d, thetas)
}

/// The four amplitudes of one sweep together with trace evaluators, for
/// inspecting the reconstructed subdomain solutions.
#[derive(Debug, Clone, Copy)]
pub struct SubdomainSolution {
    mode: Mode,
    /// Dirichlet-step amplitudes.
    pub a: f64,
    pub b: f64,
    /// Neumann-step amplitudes.
    pub c: f64,
    pub d: f64,
}

impl SubdomainSolution {
    /// Solve both steps for the given interface data.
    pub fn solve(variant: Variant, mode: &Mode, state: &InterfaceState) -> Result<Self> {
        let (a, b) = dirichlet_step(variant, mode, state)?;
        let (c, d) = neumann_step(variant, mode, a, b)?;
        Ok(Self {
            mode: *mode,
            a,
            b,
            c,
            d,
        })
    }

    pub fn mode(&self) -> &Mode {
        &self.mode
    }

    /// Fundamental solution on the right subdomain and its time derivative.
    fn right_basis(&self, t: f64) -> (f64, f64) {
        let m = &self.mode;
        let s = m.sigma() * (m.problem().horizon() - t);
        let val = m.sigma() * s.cosh() + m.omega() * s.sinh();
        let deriv = -m.sigma() * (m.sigma() * s.sinh() + m.omega() * s.cosh());
        (val, deriv)
    }

    pub fn z1(&self, t: f64) -> f64 {
        self.a * (self.mode.sigma() * t).sinh()
    }

    pub fn dz1(&self, t: f64) -> f64 {
        self.a * self.mode.sigma() * (self.mode.sigma() * t).cosh()
    }

    pub fn z2(&self, t: f64) -> f64 {
        self.b * self.right_basis(t).0
    }

    pub fn dz2(&self, t: f64) -> f64 {
        self.b * self.right_basis(t).1
    }

    pub fn psi1(&self, t: f64) -> f64 {
        self.c * (self.mode.sigma() * t).sinh()
    }

    pub fn dpsi1(&self, t: f64) -> f64 {
        self.c * self.mode.sigma() * (self.mode.sigma() * t).cosh()
    }

    pub fn psi2(&self, t: f64) -> f64 {
        self.d * self.right_basis(t).0
    }

    pub fn dpsi2(&self, t: f64) -> f64 {
        self.d * self.right_basis(t).1
    }

    /// Dual traces recovered through `mu = nu (z' + d z)`.
    pub fn mu1(&self, t: f64) -> f64 {
        self.mode.nu() * (self.dz1(t) + self.mode.d() * self.z1(t))
    }

    pub fn mu2(&self, t: f64) -> f64 {
        self.mode.nu() * (self.dz2(t) + self.mode.d() * self.z2(t))
    }

    pub fn phi1(&self, t: f64) -> f64 {
        self.mode.nu() * (self.dpsi1(t) + self.mode.d() * self.psi1(t))
    }

    pub fn phi2(&self, t: f64) -> f64 {
        self.mode.nu() * (self.dpsi2(t) + self.mode.d() * self.psi2(t))
    }
}

/// One row of an iteration history.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceEntry {
    pub k: usize,
    pub f: f64,
    pub g: Option<f64>,
    pub error_norm: f64,
}

/// Interface history of one per-mode run with the estimated contraction rate.
#[derive(Debug, Clone, PartialEq)]
pub struct IterationTrace {
    pub history: Vec<TraceEntry>,
    pub converged: bool,
    pub diverged: bool,
    /// Geometric mean of the error-norm ratios over the trailing half of the
    /// trace; `None` when fewer than one ratio is available.
    pub rho_observed: Option<f64>,
}

impl IterationTrace {
    /// CSV with columns `k,f,g,error_norm` (g empty for single-f variants).
    pub fn to_csv(&self) -> String {
        let mut out = String::from("k,f,g,error_norm\n");
        for e in &self.history {
            let g = e.g.map(crate::fmt_g17).unwrap_or_default();
            out.push_str(&format!(
                "{},{},{},{}\n",
                e.k,
                crate::fmt_g17(e.f),
                g,
                crate::fmt_g17(e.error_norm)
            ));
        }
        out
    }
}

fn estimate_rate(norms: &[f64]) -> Option<f64> {
    let last = norms.len().checked_sub(1)?;
    if last == 0 {
        return None;
    }
    let mut start = last / 2;
    while start < last && norms[start] == 0.0 {
        start += 1;
    }
    if start >= last || norms[start] == 0.0 {
        return None;
    }
    let ratio = norms[last] / norms[start];
    Some(ratio.powf(1.0 / (last - start) as f64))
}

/// Ratio above the initial norm at which a run is declared divergent.
const DIVERGENCE_GUARD: f64 = 1e12;

/// Iterate one mode until the interface error drops below `tol` times its
/// initial size, diverges past 1e12 times it, or `max_iter` is reached.
pub fn run(
    variant: Variant,
    mode: &Mode,
    init: &InterfaceState,
    thetas: &Relaxation,
    max_iter: usize,
    tol: f64,
) -> Result<IterationTrace> {
    if max_iter < 2 {
        return Err(Error::InvalidParameter(format!(
            "max_iter must be at least 2, got {max_iter}"
        )));
    }
    if !(tol.is_finite() && tol > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "tol must be positive, got {tol}"
        )));
    }
    init.validate(variant)?;
    thetas.validate(variant)?;

    let norm0 = init.norm();
    let mut history = vec![TraceEntry {
        k: 0,
        f: init.f,
        g: init.g,
        error_norm: norm0,
    }];
    if norm0 == 0.0 {
        return Ok(IterationTrace {
            history,
            converged: true,
            diverged: false,
            rho_observed: None,
        });
    }

    let mut state = *init;
    let mut converged = false;
    let mut diverged = false;
    for k in 1..=max_iter {
        state = sweep(variant, mode, &state, thetas)?;
        let norm = state.norm();
        history.push(TraceEntry {
            k,
            f: state.f,
            g: state.g,
            error_norm: norm,
        });
        if norm <= tol * norm0 {
            converged = true;
            break;
        }
        if norm > DIVERGENCE_GUARD * norm0 {
            diverged = true;
            break;
        }
    }

    let norms: Vec<f64> = history.iter().map(|e| e.error_norm).collect();
    Ok(IterationTrace {
        history,
        converged,
        diverged,
        rho_observed: estimate_rate(&norms),
    })
}

/// Run every mode of a spectrum independently from the default initial
/// state, in parallel when the `parallel` feature is enabled.
pub fn run_spectrum(
    variant: Variant,
    spectrum: &Spectrum,
    problem: &ControlProblem,
    thetas: &Relaxation,
    max_iter: usize,
    tol: f64,
) -> Result<Vec<IterationTrace>> {
    let modes = problem.modes(spectrum)?;
    let init = InterfaceState::default_for(variant);
    let results = exec::map_results(&modes, |mode| {
        run(variant, mode, &init, thetas, max_iter, tol)
    });
    let total = results.len();
    let mut traces = Vec::with_capacity(total);
    let mut failures = Vec::new();
    for (i, r) in results.into_iter().enumerate() {
        match r {
            Ok(t) => traces.push(t),
            Err(e) => failures.push((i, e.to_string())),
        }
    }
    if let Some((_, first)) = failures.first() {
        return Err(Error::ModeFailures {
            total,
            first: first.clone(),
            failures,
        });
    }
    Ok(traces)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::closed_form::{self, Relaxation};
    use approx::assert_relative_eq;

    fn case_a() -> ControlProblem {
        ControlProblem::new(0.1, 0.0, 1.0, 0.5).unwrap()
    }

    fn case_b() -> ControlProblem {
        ControlProblem::new(10.0, 10.0, 5.0, 1.0).unwrap()
    }

    #[test]
    fn zero_data_produces_zero_amplitudes() {
        for variant in Variant::ALL {
            let state = if variant.carries_pair() {
                InterfaceState::pair(0.0, 0.0)
            } else {
                InterfaceState::single(0.0)
            };
            let m = case_a().mode(1.3).unwrap();
            let (a, b) = dirichlet_step(variant, &m, &state).unwrap();
            assert_eq!((a, b), (0.0, 0.0), "{variant}");
            let (c, d) = neumann_step(variant, &m, a, b).unwrap();
            assert_eq!((c, d), (0.0, 0.0), "{variant}");
        }
    }

    #[test]
    fn nn2a_dirichlet_amplitudes_case_a() {
        // A = 1/sinh(a), B = 1/(sigma cosh(b) + omega sinh(b)) with
        // sigma = sqrt(1 + 10) and omega = d = 1 at gamma = 0.
        let m = case_a().mode(1.0).unwrap();
        let s = m.sigma();
        assert_relative_eq!(s, 11f64.sqrt(), max_relative = 1e-15);
        let (a, b) = dirichlet_step(Variant::Nn2a, &m, &InterfaceState::single(1.0)).unwrap();
        assert_relative_eq!(a, 1.0 / (0.5 * s).sinh(), max_relative = 1e-13);
        assert_relative_eq!(
            b,
            1.0 / (s * (0.5 * s).cosh() + (0.5 * s).sinh()),
            max_relative = 1e-13
        );
    }

    #[test]
    fn nn3a_right_amplitude_negative_in_case_b() {
        let m = case_b().mode(1.0).unwrap();
        let (_, b) = dirichlet_step(Variant::Nn3a, &m, &InterfaceState::single(1.0)).unwrap();
        assert!(b < 0.0, "B = {b}");
    }

    #[test]
    fn robin_neumann_correction_with_zero_right_amplitude() {
        // With B = 0: C = A and D = A cosh(a) / (sigma sinh b + omega cosh b).
        let m = case_b().mode(0.7).unwrap();
        let a = 1.7;
        let (c, d) = neumann_step(Variant::Nn1a, &m, a, 0.0).unwrap();
        assert_eq!(c, a);
        let expected =
            a * m.a().cosh() / (m.sigma() * m.b().sinh() + m.omega() * m.b().cosh());
        assert_relative_eq!(d, expected, max_relative = 1e-12);
    }

    #[test]
    fn zero_theta_keeps_state() {
        let m = case_a().mode(2.0).unwrap();
        let state = InterfaceState::single(0.8);
        let next = sweep(Variant::Nn2c, &m, &state, &Relaxation::Single(0.0)).unwrap();
        assert_eq!(next, state);

        let state = InterfaceState::pair(0.8, -0.3);
        let next = sweep(Variant::Nn1a, &m, &state, &Relaxation::Pair(0.0, 0.0)).unwrap();
        assert_eq!(next, state);
    }

    #[test]
    fn nn2a_update_matches_scalar_factor() {
        let m = case_a().mode(1.0).unwrap();
        let theta = 0.249;
        let ef = closed_form::ef_coefficients(Variant::Nn2a, &m).unwrap();
        let state = InterfaceState::single(1.0);
        let next = sweep(Variant::Nn2a, &m, &state, &Relaxation::Single(theta)).unwrap();
        assert_relative_eq!(next.f, 1.0 - theta * (ef.e + ef.f), max_relative = 1e-12);
    }

    #[test]
    fn nn1a_sweep_reproduces_matrix_columns() {
        let m = case_a().mode(1.0).unwrap();
        let mat = closed_form::iteration_matrix(Variant::Nn1a, &m, 1.0, 1.0).unwrap();
        let thetas = Relaxation::Pair(1.0, 1.0);
        let col1 = sweep(Variant::Nn1a, &m, &InterfaceState::pair(1.0, 0.0), &thetas).unwrap();
        assert_relative_eq!(col1.f, mat.m[0][0], max_relative = 1e-11);
        assert_relative_eq!(col1.g.unwrap(), mat.m[1][0], max_relative = 1e-11);
        let col2 = sweep(Variant::Nn1a, &m, &InterfaceState::pair(0.0, 1.0), &thetas).unwrap();
        assert_relative_eq!(col2.f, mat.m[0][1], max_relative = 1e-11);
        assert_relative_eq!(col2.g.unwrap(), mat.m[1][1], max_relative = 1e-11);
    }

    #[test]
    fn dirichlet_traces_satisfy_transmission_conditions() {
        let alpha = 0.5;
        let m = case_a().mode(1.7).unwrap();

        // Category I: Robin trace on the left, value trace on the right.
        let sol =
            SubdomainSolution::solve(Variant::Nn1a, &m, &InterfaceState::pair(1.1, -0.4))
                .unwrap();
        assert_relative_eq!(sol.dz1(alpha) + m.d() * sol.z1(alpha), 1.1, max_relative = 1e-11);
        assert_relative_eq!(sol.mu1(alpha), m.nu() * 1.1, max_relative = 1e-11);
        assert_relative_eq!(sol.z2(alpha), -0.4, max_relative = 1e-11);

        // Category II: continuous primal trace.
        let sol =
            SubdomainSolution::solve(Variant::Nn2a, &m, &InterfaceState::single(0.9)).unwrap();
        assert_relative_eq!(sol.z1(alpha), 0.9, max_relative = 1e-11);
        assert_relative_eq!(sol.z2(alpha), 0.9, max_relative = 1e-11);

        // Category III: continuous dual trace (mu = nu (z' + d z)).
        let sol =
            SubdomainSolution::solve(Variant::Nn3c, &m, &InterfaceState::single(0.9)).unwrap();
        assert_relative_eq!(sol.mu1(alpha), m.nu() * 0.9, max_relative = 1e-11);
        assert_relative_eq!(sol.mu2(alpha), m.nu() * 0.9, max_relative = 1e-11);
    }

    #[test]
    fn neumann_traces_satisfy_transmission_conditions() {
        let alpha = 1.0;
        let m = case_b().mode(0.35).unwrap();

        // Primal correction: psi1' = z1' - z2', psi2' = z2' - z1' at alpha.
        let sol =
            SubdomainSolution::solve(Variant::Nn2a, &m, &InterfaceState::single(1.0)).unwrap();
        let jump = sol.dz1(alpha) - sol.dz2(alpha);
        assert_relative_eq!(sol.dpsi1(alpha), jump, max_relative = 1e-10);
        assert_relative_eq!(sol.dpsi2(alpha), -jump, max_relative = 1e-10);

        // Dual correction: phi1' = mu1' - mu2' at alpha, where
        // mu' = nu (z'' + d z') = nu (sigma^2 z + d z').
        let sol =
            SubdomainSolution::solve(Variant::Nn3a, &m, &InterfaceState::single(1.0)).unwrap();
        let s2 = m.sigma() * m.sigma();
        let dmu = |z: f64, dz: f64| m.nu() * (s2 * z + m.d() * dz);
        let dphi1 = dmu(sol.psi1(alpha), sol.dpsi1(alpha));
        let dmu_jump = dmu(sol.z1(alpha), sol.dz1(alpha)) - dmu(sol.z2(alpha), sol.dz2(alpha));
        assert_relative_eq!(dphi1, dmu_jump, max_relative = 1e-10);

        // The final condition holds identically for the right basis.
        let t_end = m.problem().horizon();
        assert!(
            (sol.phi2(t_end) + m.gamma() * sol.psi2(t_end)).abs()
                <= 1e-12 * sol.psi2(t_end).abs().max(1.0)
        );
    }

    #[test]
    fn singular_robin_correction_is_reported() {
        // gamma d > 1 with tanh(b) = (gamma d - 1)/(sigma gamma) makes the
        // Robin-Robin correction denominator cross zero.
        let (d, gamma, nu): (f64, f64, f64) = (1.0, 2.0, 1.0);
        let sigma = (d * d + 1.0 / nu).sqrt();
        let target_b = ((gamma * d - 1.0) / (sigma * gamma)).atanh();
        let alpha = 0.5;
        let horizon = alpha + target_b / sigma;
        let p = ControlProblem::new(nu, gamma, horizon, alpha).unwrap();
        let m = p.mode(d).unwrap();
        let err = neumann_step(Variant::Nn1c, &m, 1.0, 1.0).unwrap_err();
        assert!(matches!(err, Error::SingularStep(_)), "{err}");
    }

    #[test]
    fn run_matches_closed_form_rate() {
        let m = case_a().mode(1.0).unwrap();
        let theta = Relaxation::Single(0.249);
        let rho = closed_form::convergence_factor(Variant::Nn2a, &m, &theta).unwrap();
        let trace = run(Variant::Nn2a, &m, &InterfaceState::single(1.0), &theta, 60, 1e-10)
            .unwrap();
        assert!(trace.converged);
        let observed = trace.rho_observed.unwrap();
        assert!((observed - rho).abs() / rho < 0.01, "{observed} vs {rho}");
    }

    #[test]
    fn run_flags_divergence_with_quadratic_rate() {
        let p = case_a();
        let m = p.mode(100.0).unwrap();
        let theta = Relaxation::Single(0.25);
        let trace = run(Variant::Nn2b, &m, &InterfaceState::single(1.0), &theta, 50, 1e-10)
            .unwrap();
        assert!(trace.diverged);
        assert!(!trace.converged);
        let ratio = trace.history[1].error_norm / trace.history[0].error_norm;
        let model = 4.0 * p.nu() * 0.25 * 1e4;
        assert!((ratio - model).abs() / model < 0.05, "{ratio} vs {model}");
    }

    #[test]
    fn raw_variant_stalls_with_unit_component() {
        let m = case_a().mode(0.9).unwrap();
        let trace = run(
            Variant::Raw1b,
            &m,
            &InterfaceState::pair(1.0, 0.4),
            &Relaxation::Pair(0.8, 0.6),
            80,
            1e-12,
        )
        .unwrap();
        assert!(!trace.converged && !trace.diverged);
        let observed = trace.rho_observed.unwrap();
        assert!((observed - 1.0).abs() < 1e-6, "rho = {observed}");
    }

    #[test]
    fn linearity_of_runs() {
        let m = case_b().mode(3.0).unwrap();
        let theta = Relaxation::Single(0.214);
        let base = run(Variant::Nn3a, &m, &InterfaceState::single(1.0), &theta, 25, 1e-30)
            .unwrap();
        let scaled = run(Variant::Nn3a, &m, &InterfaceState::single(-2.5), &theta, 25, 1e-30)
            .unwrap();
        for (b, s) in base.history.iter().zip(&scaled.history) {
            assert_relative_eq!(s.f, -2.5 * b.f, max_relative = 1e-12);
        }
        assert_relative_eq!(
            base.rho_observed.unwrap(),
            scaled.rho_observed.unwrap(),
            max_relative = 1e-12
        );
    }

    #[test]
    fn zero_initial_state_converges_immediately() {
        let trace = run(
            Variant::Nn1b,
            &case_a().mode(1.0).unwrap(),
            &InterfaceState::single(0.0),
            &Relaxation::Single(0.4),
            10,
            1e-8,
        )
        .unwrap();
        assert!(trace.converged);
        assert_eq!(trace.history.len(), 1);
    }

    #[test]
    fn run_spectrum_reduces_to_run_on_single_mode() {
        let p = case_a();
        let spectrum = Spectrum::explicit(vec![2.0]).unwrap();
        let theta = Relaxation::Single(0.3);
        let traces =
            run_spectrum(Variant::Nn1b, &spectrum, &p, &theta, 30, 1e-8).unwrap();
        let single = run(
            Variant::Nn1b,
            &p.mode(2.0).unwrap(),
            &InterfaceState::single(1.0),
            &theta,
            30,
            1e-8,
        )
        .unwrap();
        assert_eq!(traces.len(), 1);
        assert_eq!(traces[0], single);
    }

    #[test]
    fn bad_arguments_rejected() {
        let m = case_a().mode(1.0).unwrap();
        let s = InterfaceState::single(1.0);
        let t = Relaxation::Single(0.5);
        assert!(run(Variant::Nn1b, &m, &s, &t, 1, 1e-8).is_err());
        assert!(run(Variant::Nn1b, &m, &s, &t, 10, 0.0).is_err());
        assert!(run(Variant::Nn1b, &m, &InterfaceState::pair(1.0, 1.0), &t, 10, 1e-8).is_err());
        assert!(run(Variant::Nn1a, &m, &s, &Relaxation::Pair(1.0, 1.0), 10, 1e-8).is_err());
    }

    #[test]
    fn trace_csv_shape() {
        let m = case_a().mode(1.0).unwrap();
        let trace = run(
            Variant::Nn1b,
            &m,
            &InterfaceState::single(1.0),
            &Relaxation::Single(0.446),
            5,
            1e-30,
        )
        .unwrap();
        let csv = trace.to_csv();
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some("k,f,g,error_norm"));
        let first = lines.next().unwrap();
        assert!(first.starts_with("0,1.0000000000000000e0,,"));
    }
}

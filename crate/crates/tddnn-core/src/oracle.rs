//! Independent finite-difference ground truth: a monolithic solver for the
//! coupled forward-backward mode with general data, and time-discretized
//! Neumann-Neumann sweeps that converge to the analytic engine at second
//! order as the time grid refines.
//!
//! Eliminating the dual state turns one mode of the optimality system into
//! the two-point boundary value problem
//!
//! ```text
//! z'' - sigma^2 z = -(1/nu) zhat        on (0, T),
//! z(0) = z0,
//! z'(T) + omega z(T) = (gamma/nu) zhat(T),
//! ```
//!
//! discretized with the second-order centered stencil inside and
//! ghost-free one-sided second-order stencils on Robin rows (the stencil's
//! third point is eliminated through the neighboring interior equation, so
//! the assembled system stays tridiagonal). The dual state is recovered
//! from the identity `mu = nu (z' + d z)`.

use crate::closed_form::Relaxation;
use crate::engine::InterfaceState;
use crate::error::{Error, Result};
use crate::problem::Mode;
use crate::variant::{DirichletFamily, NeumannFamily, UpdateKind, Variant};

/// Per-mode data of the monolithic problem: initial primal value and the
/// target trajectory sampled on a uniform grid of `nt + 1` points.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeData {
    pub z0: f64,
    target: Vec<f64>,
}

impl ModeData {
    pub fn new(z0: f64, target: Vec<f64>) -> Result<Self> {
        if target.len() < 3 {
            return Err(Error::InvalidParameter(format!(
                "target needs nt >= 2 intervals ({} samples), got {}",
                3,
                target.len()
            )));
        }
        if !z0.is_finite() || target.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("mode data"));
        }
        Ok(Self { z0, target })
    }

    /// Homogeneous data on `nt` intervals.
    pub fn zeros(z0: f64, nt: usize) -> Result<Self> {
        Self::new(z0, vec![0.0; nt + 1])
    }

    /// Sample a target function on the uniform grid over [0, T].
    pub fn from_target_fn<F: Fn(f64) -> f64>(z0: f64, horizon: f64, nt: usize, f: F) -> Result<Self> {
        let target = (0..=nt)
            .map(|j| f(horizon * j as f64 / nt as f64))
            .collect();
        Self::new(z0, target)
    }

    pub fn nt(&self) -> usize {
        self.target.len() - 1
    }

    pub fn target(&self) -> &[f64] {
        &self.target
    }
}

/// Primal and dual trajectories on the uniform time grid.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteSolution {
    pub times: Vec<f64>,
    pub z: Vec<f64>,
    pub mu: Vec<f64>,
}

impl DiscreteSolution {
    /// CSV with columns `t,z,mu`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("t,z,mu\n");
        for i in 0..self.times.len() {
            out.push_str(&format!(
                "{},{},{}\n",
                crate::fmt_g17(self.times[i]),
                crate::fmt_g17(self.z[i]),
                crate::fmt_g17(self.mu[i])
            ));
        }
        out
    }
}

/// Boundary row of a subdomain solve: either a prescribed value or a Robin
/// combination `p z' + q z = value`.
#[derive(Debug, Clone, Copy)]
enum EndCondition {
    Dirichlet(f64),
    Robin { p: f64, q: f64, value: f64 },
}

/// Tridiagonal solve with partial pivoting (one fill-in superdiagonal).
fn solve_tridiagonal(
    mut low: Vec<f64>,
    mut diag: Vec<f64>,
    mut up1: Vec<f64>,
    mut rhs: Vec<f64>,
) -> Result<Vec<f64>> {
    let n = diag.len();
    let mut up2 = vec![0.0; n];
    for i in 0..n - 1 {
        if low[i + 1].abs() > diag[i].abs() {
            // Row i spans columns (i, i+1, i+2); row i+1 spans the same
            // after its subdiagonal entry is used as pivot.
            std::mem::swap(&mut diag[i], &mut low[i + 1]);
            let tmp = up1[i];
            up1[i] = diag[i + 1];
            diag[i + 1] = tmp;
            let tmp = up2[i];
            up2[i] = up1[i + 1];
            up1[i + 1] = tmp;
            rhs.swap(i, i + 1);
        }
        let scale = diag[i].abs().max(up1[i].abs()).max(up2[i].abs());
        if diag[i] == 0.0 || diag[i].abs() < 1e-14 * scale {
            return Err(Error::SingularStep(format!(
                "tridiagonal pivot {:.3e} at row {i}",
                diag[i]
            )));
        }
        let m = low[i + 1] / diag[i];
        diag[i + 1] -= m * up1[i];
        up1[i + 1] -= m * up2[i];
        rhs[i + 1] -= m * rhs[i];
        low[i + 1] = 0.0;
    }
    let scale = diag[n - 1].abs().max(rhs[n - 1].abs());
    if diag[n - 1] == 0.0 || diag[n - 1].abs() < 1e-14 * scale.max(1e-300) {
        return Err(Error::SingularStep(format!(
            "tridiagonal pivot {:.3e} at last row",
            diag[n - 1]
        )));
    }
    let mut x = vec![0.0; n];
    x[n - 1] = rhs[n - 1] / diag[n - 1];
    if n >= 2 {
        x[n - 2] = (rhs[n - 2] - up1[n - 2] * x[n - 1]) / diag[n - 2];
    }
    for i in (0..n.saturating_sub(2)).rev() {
        x[i] = (rhs[i] - up1[i] * x[i + 1] - up2[i] * x[i + 2]) / diag[i];
    }
    Ok(x)
}

/// Solve `z'' - sigma2 z = rhs` on an interval of length `len` with `nt`
/// uniform steps and the given end rows. Robin rows use the one-sided
/// second-order stencil with the off-pattern point eliminated through the
/// adjacent interior equation.
fn solve_bvp(
    sigma2: f64,
    len: f64,
    nt: usize,
    left: EndCondition,
    right: EndCondition,
    rhs_fn: &dyn Fn(usize) -> f64,
) -> Result<Vec<f64>> {
    if nt < 2 {
        return Err(Error::InvalidParameter(format!(
            "subdomain grid needs nt >= 2, got {nt}"
        )));
    }
    let n = nt + 1;
    let tau = len / nt as f64;
    let tau2 = tau * tau;

    let mut low = vec![0.0; n];
    let mut diag = vec![0.0; n];
    let mut up1 = vec![0.0; n];
    let mut r = vec![0.0; n];
    for j in 1..nt {
        low[j] = 1.0 / tau2;
        diag[j] = -(2.0 / tau2 + sigma2);
        up1[j] = 1.0 / tau2;
        r[j] = rhs_fn(j);
    }
    match left {
        EndCondition::Dirichlet(v) => {
            diag[0] = 1.0;
            r[0] = v;
        }
        EndCondition::Robin { p, q, value } => {
            diag[0] = q - p / tau;
            up1[0] = p * (2.0 - sigma2 * tau2) / (2.0 * tau);
            r[0] = value + p * tau * rhs_fn(1) / 2.0;
        }
    }
    match right {
        EndCondition::Dirichlet(v) => {
            diag[nt] = 1.0;
            low[nt] = 0.0;
            r[nt] = v;
        }
        EndCondition::Robin { p, q, value } => {
            low[nt] = -p * (2.0 - sigma2 * tau2) / (2.0 * tau);
            diag[nt] = q + p / tau;
            r[nt] = value - p * tau * rhs_fn(nt - 1) / 2.0;
        }
    }
    solve_tridiagonal(low, diag, up1, r)
}

/// One-sided second-order derivative at the left end of a grid.
fn deriv_left(z: &[f64], tau: f64) -> f64 {
    (-3.0 * z[0] + 4.0 * z[1] - z[2]) / (2.0 * tau)
}

/// One-sided second-order derivative at the right end of a grid.
fn deriv_right(z: &[f64], tau: f64) -> f64 {
    let n = z.len() - 1;
    (3.0 * z[n] - 4.0 * z[n - 1] + z[n - 2]) / (2.0 * tau)
}

/// Solve the monolithic two-point boundary value problem of one mode and
/// recover the dual trajectory through `mu = nu (z' + d z)`.
pub fn monolithic_solve(mode: &Mode, data: &ModeData) -> Result<DiscreteSolution> {
    let nt = data.nt();
    let horizon = mode.problem().horizon();
    let tau = horizon / nt as f64;
    let sigma2 = mode.sigma() * mode.sigma();
    let nu_inv = mode.nu_inv();
    let gamma_nu_inv = mode.omega() - mode.d();
    let target = data.target();

    let z = solve_bvp(
        sigma2,
        horizon,
        nt,
        EndCondition::Dirichlet(data.z0),
        EndCondition::Robin {
            p: 1.0,
            q: mode.omega(),
            value: gamma_nu_inv * target[nt],
        },
        &|j| -nu_inv * target[j],
    )?;

    // Endpoint derivatives eliminate the ghost value through the ODE
    // (z'' = sigma^2 z - zhat/nu), which reproduces the leading error
    // constant of the centered stencil; the recovery error is then a smooth
    // O(tau^2) field and the discrete dual equation holds to O(tau^2)
    // uniformly, including the rows next to the boundary.
    let curvature = |j: usize| sigma2 * z[j] - nu_inv * target[j];
    let mut dz = vec![0.0; nt + 1];
    dz[0] = (z[1] - z[0]) / tau - 0.5 * tau * curvature(0);
    for j in 1..nt {
        dz[j] = (z[j + 1] - z[j - 1]) / (2.0 * tau);
    }
    dz[nt] = (z[nt] - z[nt - 1]) / tau + 0.5 * tau * curvature(nt);

    let mu = (0..=nt)
        .map(|j| mode.nu() * (dz[j] + mode.d() * z[j]))
        .collect();
    let times = (0..=nt).map(|j| tau * j as f64).collect();
    Ok(DiscreteSolution {
        times,
        z,
        mu,
    })
}

/// Maximum absolute residual of the assembled rows (initial value, interior
/// second-order stencil, one-sided final Robin row) for a candidate primal
/// trajectory.
pub fn residual_check(solution: &DiscreteSolution, mode: &Mode, data: &ModeData) -> f64 {
    let z = &solution.z;
    let nt = z.len() - 1;
    let horizon = mode.problem().horizon();
    let tau = horizon / nt as f64;
    let sigma2 = mode.sigma() * mode.sigma();
    let nu_inv = mode.nu_inv();
    let gamma_nu_inv = mode.omega() - mode.d();
    let target = data.target();

    let mut worst = (z[0] - data.z0).abs();
    for j in 1..nt {
        let res = (z[j - 1] - 2.0 * z[j] + z[j + 1]) / (tau * tau) - sigma2 * z[j]
            + nu_inv * target[j];
        worst = worst.max(res.abs());
    }
    let final_row = deriv_right(z, tau) + mode.omega() * z[nt] - gamma_nu_inv * target[nt];
    worst.max(final_row.abs())
}

/// One time-discretized Dirichlet/Neumann/update sweep of a variant on the
/// homogeneous error equation, with `nt` intervals per subdomain. Converges
/// to [`crate::engine::sweep`] at second order in the time step.
pub fn discrete_sweep(
    variant: Variant,
    mode: &Mode,
    state: &InterfaceState,
    thetas: &Relaxation,
    nt: usize,
) -> Result<InterfaceState> {
    thetas.validate(variant)?;
    if state.g.is_some() != variant.carries_pair() {
        return Err(Error::ArityMismatch {
            variant,
            expected: if variant.carries_pair() {
                "state with (f, g)"
            } else {
                "state with f only"
            },
            got: "mismatched state",
        });
    }
    let problem = mode.problem();
    let alpha = problem.interface();
    let len2 = problem.horizon() - alpha;
    let tau1 = alpha / nt as f64;
    let tau2 = len2 / nt as f64;
    let sigma2 = mode.sigma() * mode.sigma();
    let d = mode.d();
    let omega = mode.omega();
    let zero = |_: usize| 0.0;
    let f = state.f;
    let right_datum = state.g.unwrap_or(f);

    // Dirichlet step.
    let (left1, left2) = match variant.dirichlet_family() {
        DirichletFamily::RobinDirichlet => (
            EndCondition::Robin {
                p: 1.0,
                q: d,
                value: f,
            },
            EndCondition::Dirichlet(right_datum),
        ),
        DirichletFamily::DirichletDirichlet => (
            EndCondition::Dirichlet(f),
            EndCondition::Dirichlet(right_datum),
        ),
        DirichletFamily::RobinRobin => (
            EndCondition::Robin {
                p: 1.0,
                q: d,
                value: f,
            },
            EndCondition::Robin {
                p: 1.0,
                q: d,
                value: f,
            },
        ),
    };
    let z1 = solve_bvp(sigma2, alpha, nt, EndCondition::Dirichlet(0.0), left1, &zero)?;
    let z2 = solve_bvp(
        sigma2,
        len2,
        nt,
        left2,
        EndCondition::Robin {
            p: 1.0,
            q: omega,
            value: 0.0,
        },
        &zero,
    )?;

    let z1a = z1[nt];
    let z2a = z2[0];
    let dz1a = deriv_right(&z1, tau1);
    let dz2a = deriv_left(&z2, tau2);

    // Neumann correction. The sigma^2/d Robin rows are scaled by d so the
    // zero eigenvalue degenerates to a value condition instead of dividing
    // by zero.
    let scaled_jump_left = d * (dz1a - dz2a) + sigma2 * (z1a - z2a);
    let scaled_jump_right = d * (dz2a - dz1a) + sigma2 * (z2a - z1a);
    let (corr1, corr2) = match variant.neumann_family() {
        NeumannFamily::RobinNeumann => (
            EndCondition::Robin {
                p: d,
                q: sigma2,
                value: scaled_jump_left,
            },
            EndCondition::Robin {
                p: 1.0,
                q: 0.0,
                value: dz2a - dz1a,
            },
        ),
        NeumannFamily::NeumannNeumann => (
            EndCondition::Robin {
                p: 1.0,
                q: 0.0,
                value: dz1a - dz2a,
            },
            EndCondition::Robin {
                p: 1.0,
                q: 0.0,
                value: dz2a - dz1a,
            },
        ),
        NeumannFamily::RobinRobin => (
            EndCondition::Robin {
                p: d,
                q: sigma2,
                value: scaled_jump_left,
            },
            EndCondition::Robin {
                p: d,
                q: sigma2,
                value: scaled_jump_right,
            },
        ),
    };
    let psi1 = solve_bvp(sigma2, alpha, nt, EndCondition::Dirichlet(0.0), corr1, &zero)?;
    let psi2 = solve_bvp(
        sigma2,
        len2,
        nt,
        corr2,
        EndCondition::Robin {
            p: 1.0,
            q: omega,
            value: 0.0,
        },
        &zero,
    )?;

    let value_sum = psi1[nt] + psi2[0];
    let robin_sum = deriv_right(&psi1, tau1)
        + d * psi1[nt]
        + deriv_left(&psi2, tau2)
        + d * psi2[0];

    let next = match variant.update_kind() {
        UpdateKind::ValueTrace => {
            InterfaceState::single(state.f - thetas.single(variant)? * value_sum)
        }
        UpdateKind::RobinTrace => {
            InterfaceState::single(state.f - thetas.single(variant)? * robin_sum)
        }
        UpdateKind::PairRobinValue => {
            let (t1, t2) = thetas.pair(variant)?;
            InterfaceState::pair(
                state.f - t1 * robin_sum,
                state.g.expect("pair state") - t2 * value_sum,
            )
        }
        UpdateKind::PairValueValue => {
            let (t1, t2) = thetas.pair(variant)?;
            InterfaceState::pair(
                state.f - t1 * value_sum,
                state.g.expect("pair state") - t2 * value_sum,
            )
        }
    };
    if !next.f.is_finite() || next.g.is_some_and(|g| !g.is_finite()) {
        return Err(Error::NonFinite("discrete sweep"));
    }
    Ok(next)
}

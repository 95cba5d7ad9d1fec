//! Control problem scalars, the time decomposition, eigenvalue sources and
//! per-mode derived quantities.
//!
//! After semi-discretizing the heat equation in space and diagonalizing the
//! stiffness matrix, each eigenvalue `d` of the spatial operator yields an
//! independent scalar forward-backward system. All later analysis depends on
//! the problem only through the derived quantities collected in [`Mode`]:
//!
//! ```text
//! sigma = sqrt(d^2 + 1/nu),  omega = d + gamma/nu,  beta = 1 - gamma*d,
//! a = sigma*alpha,           b = sigma*(T - alpha).
//! ```

use crate::error::{Error, Result};

/// Global scalars of the optimal control problem and its time decomposition.
///
/// `nu` weighs the control cost (strictly positive: every derived formula
/// divides by it), `gamma` weighs the final-time target, `horizon` is the
/// final time T and `interface` the splitting point alpha in (0, T).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ControlProblem {
    nu: f64,
    gamma: f64,
    horizon: f64,
    interface: f64,
}

impl ControlProblem {
    pub fn new(nu: f64, gamma: f64, horizon: f64, interface: f64) -> Result<Self> {
        if !nu.is_finite() || nu <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "nu must be finite and > 0, got {nu}"
            )));
        }
        if !gamma.is_finite() || gamma < 0.0 {
            return Err(Error::InvalidParameter(format!(
                "gamma must be finite and >= 0, got {gamma}"
            )));
        }
        if !horizon.is_finite() || horizon <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "final time must be finite and > 0, got {horizon}"
            )));
        }
        if !interface.is_finite() || interface <= 0.0 || interface >= horizon {
            return Err(Error::InvalidParameter(format!(
                "interface must satisfy 0 < alpha < T, got alpha={interface}, T={horizon}"
            )));
        }
        Ok(Self {
            nu,
            gamma,
            horizon,
            interface,
        })
    }

    pub fn nu(&self) -> f64 {
        self.nu
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn horizon(&self) -> f64 {
        self.horizon
    }

    pub fn interface(&self) -> f64 {
        self.interface
    }

    pub fn nu_inv(&self) -> f64 {
        1.0 / self.nu
    }

    /// Derived per-mode quantities for eigenvalue `d`.
    pub fn mode(&self, d: f64) -> Result<Mode> {
        Mode::new(*self, d)
    }

    /// Modes for every eigenvalue of a spectrum.
    pub fn modes(&self, spectrum: &Spectrum) -> Result<Vec<Mode>> {
        spectrum.eigenvalues().iter().map(|&d| self.mode(d)).collect()
    }
}

/// One eigencomponent: the eigenvalue and its derived parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mode {
    problem: ControlProblem,
    d: f64,
    sigma: f64,
    omega: f64,
    beta: f64,
    a: f64,
    b: f64,
}

impl Mode {
    fn new(problem: ControlProblem, d: f64) -> Result<Self> {
        if !d.is_finite() || d < 0.0 {
            return Err(Error::InvalidParameter(format!(
                "eigenvalue must be finite and >= 0, got {d}"
            )));
        }
        let nu_inv = problem.nu_inv();
        let sigma = (d * d + nu_inv).sqrt();
        let omega = d + problem.gamma * nu_inv;
        let beta = 1.0 - problem.gamma * d;
        let a = sigma * problem.interface;
        let b = sigma * (problem.horizon - problem.interface);
        Ok(Self {
            problem,
            d,
            sigma,
            omega,
            beta,
            a,
            b,
        })
    }

    pub fn problem(&self) -> &ControlProblem {
        &self.problem
    }

    pub fn d(&self) -> f64 {
        self.d
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// sigma * alpha.
    pub fn a(&self) -> f64 {
        self.a
    }

    /// sigma * (T - alpha).
    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn nu(&self) -> f64 {
        self.problem.nu
    }

    pub fn nu_inv(&self) -> f64 {
        self.problem.nu_inv()
    }

    pub fn gamma(&self) -> f64 {
        self.problem.gamma
    }
}

/// Where a spectrum came from.
#[derive(Debug, Clone, PartialEq)]
pub enum SpectrumSource {
    /// Eigenvalues of the finite-difference 1D Laplacian on (0,1) with
    /// homogeneous Dirichlet conditions, n interior points.
    Laplacian1d { n: usize },
    /// Caller-supplied list (covers 2D/3D discretizations and sweeps).
    Explicit,
    /// Logarithmically spaced sweep grid.
    LogGrid { dmin: f64, dmax: f64, points: usize },
}

/// An ascending list of spatial eigenvalues.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    eigenvalues: Vec<f64>,
    source: SpectrumSource,
}

impl Spectrum {
    /// Eigenvalues of (1/h^2) tridiag(-1, 2, -1), h = 1/(n+1), in closed form:
    /// d_j = (4/h^2) sin^2(j pi h / 2), j = 1..n. The dense eigensolve is kept
    /// as a test oracle only.
    pub fn laplacian_1d(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter(
                "grid size must be at least 1".into(),
            ));
        }
        let h = 1.0 / (n as f64 + 1.0);
        let scale = 4.0 / (h * h);
        let eigenvalues = (1..=n)
            .map(|j| {
                let s = (0.5 * j as f64 * std::f64::consts::PI * h).sin();
                scale * s * s
            })
            .collect();
        Ok(Self {
            eigenvalues,
            source: SpectrumSource::Laplacian1d { n },
        })
    }

    /// Wrap an explicit eigenvalue list. Values are sorted ascending; all
    /// must be finite and nonnegative.
    pub fn explicit(mut eigenvalues: Vec<f64>) -> Result<Self> {
        if eigenvalues.is_empty() {
            return Err(Error::InvalidParameter("empty spectrum".into()));
        }
        for &d in &eigenvalues {
            if !d.is_finite() || d < 0.0 {
                return Err(Error::InvalidParameter(format!(
                    "eigenvalues must be finite and >= 0, got {d}"
                )));
            }
        }
        eigenvalues.sort_by(|x, y| x.partial_cmp(y).expect("finite eigenvalues"));
        Ok(Self {
            eigenvalues,
            source: SpectrumSource::Explicit,
        })
    }

    /// `points` logarithmically spaced values covering [dmin, dmax].
    pub fn log_grid(dmin: f64, dmax: f64, points: usize) -> Result<Self> {
        if !(dmin.is_finite() && dmax.is_finite()) || dmin <= 0.0 || dmax < dmin {
            return Err(Error::InvalidParameter(format!(
                "log grid needs 0 < dmin <= dmax, got [{dmin}, {dmax}]"
            )));
        }
        if points < 2 {
            return Err(Error::InvalidParameter(
                "log grid needs at least 2 points".into(),
            ));
        }
        let ratio = dmax / dmin;
        let last = (points - 1) as f64;
        let eigenvalues = (0..points)
            .map(|i| dmin * ratio.powf(i as f64 / last))
            .collect();
        Ok(Self {
            eigenvalues,
            source: SpectrumSource::LogGrid { dmin, dmax, points },
        })
    }

    /// The default sweep grid: 200 log-spaced points on [1e-2, 1e2].
    pub fn default_sweep() -> Self {
        Self::log_grid(1e-2, 1e2, 200).expect("static bounds")
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn source(&self) -> &SpectrumSource {
        &self.source
    }

    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    /// CSV serialization: header `d`, one eigenvalue per line, 17 significant
    /// digits.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("d\n");
        for &d in &self.eigenvalues {
            out.push_str(&crate::fmt_g17(d));
            out.push('\n');
        }
        out
    }

    /// Parse the CSV format produced by [`Spectrum::to_csv`].
    pub fn from_csv(text: &str) -> Result<Self> {
        let mut lines = text.lines();
        match lines.next().map(str::trim) {
            Some("d") => {}
            other => {
                return Err(Error::InvalidParameter(format!(
                    "expected header `d`, got {other:?}"
                )))
            }
        }
        let mut eigenvalues = Vec::new();
        for line in lines {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let d: f64 = line.parse().map_err(|_| {
                Error::InvalidParameter(format!("bad eigenvalue line `{line}`"))
            })?;
            eigenvalues.push(d);
        }
        Self::explicit(eigenvalues)
    }
}

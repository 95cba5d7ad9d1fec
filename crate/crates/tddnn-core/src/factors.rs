//! Exponentially rescaled hyperbolic building blocks shared by the closed
//! forms and the iteration engine.
//!
//! Every coefficient in the convergence analysis is a ratio whose numerator
//! grows like `e^{sigma T}` and whose denominator splits into an `e^a` factor
//! from the left subdomain and an `e^b` factor from the right one, with
//! `a + b = sigma T`. Factoring those exponentials out leaves quantities of
//! the form `(u (1 + e^{-2x}) + v (1 - e^{-2x})) / 2`, all of size O(sigma),
//! so no intermediate overflows no matter how large `sigma T` gets. The
//! `1 - e^{-2x}` terms go through `exp_m1` to stay accurate for small
//! subdomains.

use crate::problem::Mode;

/// Scaled combination `e^{-x} (u cosh x + v sinh x)` for `x >= 0`.
#[inline]
fn scaled_combo(u: f64, v: f64, x: f64) -> f64 {
    let q = (-2.0 * x).exp();
    let shrink = -(-2.0 * x).exp_m1(); // 1 - e^{-2x}
    0.5 * (u * (1.0 + q) + v * shrink)
}

/// All rescaled interface denominators and the common numerator for one mode.
///
/// Naming follows the role at the interface: `p1*` live on the left
/// subdomain (argument `a`), `q2*`/`q3*` on the right one (argument `b`).
/// `2` marks combinations built from (sigma, omega), `3` those built from
/// (sigma gamma, beta); the `c` suffix swaps cosh and sinh.
#[derive(Debug, Clone, Copy)]
pub(crate) struct ModeFactors {
    pub d: f64,
    pub sigma: f64,
    pub omega: f64,
    pub beta: f64,
    pub nu: f64,
    pub nu_inv: f64,
    pub gamma: f64,
    pub a: f64,
    pub b: f64,
    /// e^{-sigma T} (sigma cosh(sigma T) + omega sinh(sigma T))
    pub n_t: f64,
    /// e^{-a} sinh a
    pub sh_a: f64,
    /// e^{-a} cosh a
    pub ch_a: f64,
    /// e^{-a} (sigma cosh a + d sinh a)
    pub p1r: f64,
    /// e^{-a} (sigma sinh a + d cosh a)
    pub p1n: f64,
    /// e^{-b} (sigma cosh b + omega sinh b)
    pub q2d: f64,
    /// e^{-b} (sigma sinh b + omega cosh b)
    pub q2n: f64,
    /// e^{-b} (sigma gamma cosh b + beta sinh b)
    pub q3r: f64,
    /// e^{-b} (sigma gamma sinh b + beta cosh b)
    pub q3rc: f64,
}

impl ModeFactors {
    pub fn new(mode: &Mode) -> Self {
        let d = mode.d();
        let sigma = mode.sigma();
        let omega = mode.omega();
        let beta = mode.beta();
        let gamma = mode.gamma();
        let a = mode.a();
        let b = mode.b();
        Self {
            d,
            sigma,
            omega,
            beta,
            nu: mode.nu(),
            nu_inv: mode.nu_inv(),
            gamma,
            a,
            b,
            n_t: scaled_combo(sigma, omega, a + b),
            sh_a: scaled_combo(0.0, 1.0, a),
            ch_a: scaled_combo(1.0, 0.0, a),
            p1r: scaled_combo(sigma, d, a),
            p1n: scaled_combo(d, sigma, a),
            q2d: scaled_combo(sigma, omega, b),
            q2n: scaled_combo(omega, sigma, b),
            q3r: scaled_combo(sigma * gamma, beta, b),
            q3rc: scaled_combo(beta, sigma * gamma, b),
        }
    }

    /// Unscaled interface quantities for the executable iteration. These
    /// carry the true `e^a` / `e^b` growth, so they are only usable while
    /// `a` and `b` stay below the `exp` overflow threshold (~709).
    pub fn physical(&self) -> PhysicalFactors {
        let ea = self.a.exp();
        let eb = self.b.exp();
        PhysicalFactors {
            sh_a: self.sh_a * ea,
            ch_a: self.ch_a * ea,
            p1r: self.p1r * ea,
            p1n: self.p1n * ea,
            q2d: self.q2d * eb,
            q2n: self.q2n * eb,
            q3r: self.q3r * eb,
            q3rc: self.q3rc * eb,
        }
    }
}

/// True (unscaled) values of the interface denominators.
#[derive(Debug, Clone, Copy)]
pub(crate) struct PhysicalFactors {
    /// sinh a
    pub sh_a: f64,
    /// cosh a
    pub ch_a: f64,
    /// sigma cosh a + d sinh a
    pub p1r: f64,
    /// sigma sinh a + d cosh a
    pub p1n: f64,
    /// sigma cosh b + omega sinh b
    pub q2d: f64,
    /// sigma sinh b + omega cosh b
    pub q2n: f64,
    /// sigma gamma cosh b + beta sinh b
    pub q3r: f64,
    /// sigma gamma sinh b + beta cosh b
    pub q3rc: f64,
}

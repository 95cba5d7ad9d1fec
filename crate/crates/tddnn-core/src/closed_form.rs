//! Closed-form convergence analysis: E/F coefficients, iteration matrices,
//! per-mode convergence factors, zero/infinity limits and equioscillated
//! relaxation parameters.
//!
//! With the common numerator `N = sigma cosh(sigma T) + omega sinh(sigma T)`
//! and the interface denominators of [`crate::factors`], each variant's pair
//! (E, F) is a product of two reciprocals, and one sweep multiplies the
//! interface datum by `1 - theta * c` where `c` is a variant-specific
//! combination of E and F (for the two-unknown formulations, a 2x2 matrix
//! acts on (f, g) instead). All expressions are evaluated with `e^{sigma T}`
//! factored out, so they stay finite far beyond the range where naive
//! cosh/sinh overflow.

use crate::error::{Error, Result};
use crate::factors::ModeFactors;
use crate::problem::{ControlProblem, Mode};
use crate::variant::Variant;

/// Relaxation parameters of an update step: one theta for the single-f
/// variants, a (theta1, theta2) pair for the two-unknown formulations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Relaxation {
    Single(f64),
    Pair(f64, f64),
}

impl Relaxation {
    pub fn validate(&self, variant: Variant) -> Result<()> {
        let finite = match self {
            Relaxation::Single(t) => t.is_finite(),
            Relaxation::Pair(t1, t2) => t1.is_finite() && t2.is_finite(),
        };
        if !finite {
            return Err(Error::NonFinite("relaxation parameter"));
        }
        let got = match self {
            Relaxation::Single(_) => "one theta",
            Relaxation::Pair(..) => "two thetas",
        };
        let expected = if variant.theta_count() == 2 {
            "two thetas"
        } else {
            "one theta"
        };
        if got != expected {
            return Err(Error::ArityMismatch {
                variant,
                expected,
                got,
            });
        }
        Ok(())
    }

    pub fn single(&self, variant: Variant) -> Result<f64> {
        match self {
            Relaxation::Single(t) => Ok(*t),
            Relaxation::Pair(..) => Err(Error::ArityMismatch {
                variant,
                expected: "one theta",
                got: "two thetas",
            }),
        }
    }

    pub fn pair(&self, variant: Variant) -> Result<(f64, f64)> {
        match self {
            Relaxation::Pair(t1, t2) => Ok((*t1, *t2)),
            Relaxation::Single(_) => Err(Error::ArityMismatch {
                variant,
                expected: "two thetas",
                got: "one theta",
            }),
        }
    }
}

/// The (E, F) coefficient pair entering a variant's interface map.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EfPair {
    pub e: f64,
    pub f: f64,
}

/// E and F for every variant. The analysis-only tags reuse the pair of the
/// algorithm they modify (Raw1b -> NN1b, Raw1c -> NN1c, PairNN2a -> NN2a).
pub fn ef_coefficients(variant: Variant, mode: &Mode) -> Result<EfPair> {
    let k = ModeFactors::new(mode);
    let n = k.n_t;
    let pair = match variant {
        Variant::Nn1a => EfPair {
            e: n / (k.q2n * k.p1r),
            f: n / (k.q2d * k.p1n),
        },
        Variant::Nn1b | Variant::Raw1b => EfPair {
            e: n / (k.q2n * k.p1r),
            f: n / (k.q2d * k.ch_a),
        },
        Variant::Nn1c | Variant::Raw1c => EfPair {
            e: n / (k.q3rc * k.p1r),
            f: n / (k.q2d * k.p1n),
        },
        Variant::Nn2a | Variant::PairNn2a => EfPair {
            e: n / (k.q2n * k.sh_a),
            f: n / (k.q2d * k.ch_a),
        },
        Variant::Nn2b => EfPair {
            e: n / (k.q3rc * k.sh_a),
            f: n / (k.q2d * k.p1n),
        },
        Variant::Nn2c => EfPair {
            e: n / (k.q2n * k.sh_a),
            f: n / (k.q2d * k.p1n),
        },
        Variant::Nn3a => EfPair {
            e: n / (k.q3rc * k.p1r),
            f: n / (k.q3r * k.p1n),
        },
        Variant::Nn3b => EfPair {
            e: n / (k.q2n * k.p1r),
            f: n / (k.q3r * k.ch_a),
        },
        Variant::Nn3c => EfPair {
            e: n / (k.q2n * k.p1r),
            f: n / (k.q3r * k.p1n),
        },
    };
    if !pair.e.is_finite() || !pair.f.is_finite() {
        return Err(Error::NonFinite("E/F coefficients"));
    }
    Ok(pair)
}

/// Scalar contraction coefficient `c` with one-sweep factor `1 - theta c`,
/// for the eight single-theta variants.
pub(crate) fn contraction_coefficient(variant: Variant, mode: &Mode) -> Result<f64> {
    let EfPair { e, f } = ef_coefficients(variant, mode)?;
    let d = mode.d();
    let nu = mode.nu();
    let nu_inv = mode.nu_inv();
    let c = match variant {
        Variant::Nn1b | Variant::Nn2a | Variant::Nn3a => e + f,
        Variant::Nn1c => e - nu_inv * f,
        Variant::Nn2b => d * (f - nu * e),
        Variant::Nn2c => e + d * f,
        Variant::Nn3b => d * (e - nu * f),
        Variant::Nn3c => d * e + f,
        other => {
            return Err(Error::UnsupportedVariant {
                variant: other,
                operation: "scalar contraction coefficient",
            })
        }
    };
    Ok(c)
}

/// One eigenvalue of a 2x2 iteration matrix, kept as a (re, im) pair because
/// the symmetric two-parameter case has a complex-conjugate spectrum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Eigenvalue {
    pub re: f64,
    pub im: f64,
}

impl Eigenvalue {
    pub fn modulus(&self) -> f64 {
        self.re.hypot(self.im)
    }
}

/// The 2x2 map from (f, g) at one iteration to the next.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IterationMatrix2x2 {
    pub m: [[f64; 2]; 2],
}

impl IterationMatrix2x2 {
    /// Eigenvalues from the characteristic polynomial. The discriminant is
    /// formed as `(m11 - m22)^2 + 4 m12 m21`, which avoids the cancellation
    /// of `tr^2 - 4 det` both for the stagnating formulations (off-diagonal
    /// product positive) and for the complex-spectrum two-parameter case
    /// (off-diagonal product negative).
    pub fn eigenvalues(&self) -> [Eigenvalue; 2] {
        let [[m11, m12], [m21, m22]] = self.m;
        let tr = m11 + m22;
        let disc = (m11 - m22) * (m11 - m22) + 4.0 * m12 * m21;
        if disc >= 0.0 {
            let root = disc.sqrt();
            [
                Eigenvalue {
                    re: 0.5 * (tr + root),
                    im: 0.0,
                },
                Eigenvalue {
                    re: 0.5 * (tr - root),
                    im: 0.0,
                },
            ]
        } else {
            let im = 0.5 * (-disc).sqrt();
            [
                Eigenvalue { re: 0.5 * tr, im },
                Eigenvalue {
                    re: 0.5 * tr,
                    im: -im,
                },
            ]
        }
    }

    pub fn spectral_radius(&self) -> f64 {
        let [l1, l2] = self.eigenvalues();
        l1.modulus().max(l2.modulus())
    }

    pub fn apply(&self, f: f64, g: f64) -> (f64, f64) {
        (
            self.m[0][0] * f + self.m[0][1] * g,
            self.m[1][0] * f + self.m[1][1] * g,
        )
    }
}

/// The 2x2 interface map of the two-unknown formulations.
///
/// Only NN1a and the three analysis-only formulations carry a pair (f, g);
/// the six single-theta variants have scalar factors, not matrices.
pub fn iteration_matrix(
    variant: Variant,
    mode: &Mode,
    theta1: f64,
    theta2: f64,
) -> Result<IterationMatrix2x2> {
    if !theta1.is_finite() || !theta2.is_finite() {
        return Err(Error::NonFinite("relaxation parameter"));
    }
    let EfPair { e, f } = ef_coefficients(variant, mode)?;
    let d = mode.d();
    let nu = mode.nu();
    let nu_inv = mode.nu_inv();
    let m = match variant {
        Variant::Nn1a => [
            [1.0 - theta1 * d * e, theta1 * nu_inv * f],
            [-theta2 * e, 1.0 - theta2 * d * f],
        ],
        Variant::Raw1b => [
            [1.0 - theta1 * d * e, -theta1 * d * f],
            [-theta2 * e, 1.0 - theta2 * f],
        ],
        Variant::Raw1c => [
            [1.0 - theta1 * e, theta1 * nu_inv * f],
            [theta2 * nu * d * e, 1.0 - theta2 * d * f],
        ],
        Variant::PairNn2a => [
            [1.0 - theta1 * e, -theta1 * f],
            [-theta2 * e, 1.0 - theta2 * f],
        ],
        other => {
            return Err(Error::UnsupportedVariant {
                variant: other,
                operation: "iteration_matrix (scalar-factor variant)",
            })
        }
    };
    Ok(IterationMatrix2x2 { m })
}

/// Per-mode convergence factor of one of the nine algorithms: the modulus of
/// the scalar one-sweep factor, or the spectral radius of the 2x2 map for
/// the two-parameter algorithm.
pub fn convergence_factor(variant: Variant, mode: &Mode, thetas: &Relaxation) -> Result<f64> {
    thetas.validate(variant)?;
    if variant.is_analysis_only() {
        return Err(Error::UnsupportedVariant {
            variant,
            operation: "convergence_factor",
        });
    }
    match variant {
        Variant::Nn1a => {
            let (t1, t2) = thetas.pair(variant)?;
            Ok(iteration_matrix(variant, mode, t1, t2)?.spectral_radius())
        }
        _ => {
            let theta = thetas.single(variant)?;
            let c = contraction_coefficient(variant, mode)?;
            Ok((1.0 - theta * c).abs())
        }
    }
}

/// Convergence factor for any of the twelve tags; the analysis-only
/// formulations report the spectral radius of their iteration matrix.
pub(crate) fn rho_theory(variant: Variant, mode: &Mode, thetas: &Relaxation) -> Result<f64> {
    if variant.is_analysis_only() {
        let (t1, t2) = thetas.pair(variant)?;
        Ok(iteration_matrix(variant, mode, t1, t2)?.spectral_radius())
    } else {
        convergence_factor(variant, mode, thetas)
    }
}

/// Limit of the convergence factor as the eigenvalue grows without bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RhoLimit {
    Finite(f64),
    /// The factor grows like `4 nu |theta| d^2`.
    Divergent,
}

/// Convergence factor at the two extremes of the eigenvalue axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RhoLimits {
    pub at_zero: f64,
    pub at_infinity: RhoLimit,
}

/// The d = 0 reductions share a few hyperbolic ratios; with
/// `s0 = sqrt(1/nu)`, `g = gamma s0`, `tb = tanh(s0 (T - alpha))`:
/// `wnd = (tb + g) / (1 + g tb)` and its reciprocal `wdn`.
struct ZeroParts {
    s0: f64,
    ta: f64,
    cta: f64,
    wnd: f64,
    wdn: f64,
}

impl ZeroParts {
    fn new(problem: &ControlProblem) -> Self {
        let s0 = problem.nu_inv().sqrt();
        let a0 = s0 * problem.interface();
        let b0 = s0 * (problem.horizon() - problem.interface());
        let g = problem.gamma() * s0;
        let ta = a0.tanh();
        let tb = b0.tanh();
        let wnd = (tb + g) / (1.0 + g * tb);
        Self {
            s0,
            ta,
            cta: 1.0 / ta,
            wnd,
            wdn: 1.0 / ((tb + g) / (1.0 + g * tb)),
        }
    }
}

/// The d = 0 value of the scalar contraction coefficient (or of E*F for the
/// two-parameter algorithm, where the spectral radius at zero is
/// `sqrt(1 + theta1 theta2 (EF)|_0)`).
fn zero_coefficient(variant: Variant, problem: &ControlProblem) -> Result<f64> {
    let z = ZeroParts::new(problem);
    let c = match variant {
        // Also the value of (E F)|_0 entering the NN1a zero-limit modulus.
        Variant::Nn1a | Variant::Nn2a | Variant::Nn3a => {
            2.0 + z.cta * z.wdn + z.ta * z.wnd
        }
        Variant::Nn1b => {
            let sqrt_nu = 1.0 / z.s0;
            1.0 + z.ta * z.wnd + sqrt_nu * (z.wdn + z.ta)
        }
        Variant::Nn1c => 1.0 + z.ta * z.wnd - z.s0 * (z.cta + z.wnd),
        Variant::Nn2c | Variant::Nn3c => 1.0 + z.cta * z.wdn,
        Variant::Nn2b | Variant::Nn3b => 0.0,
        other => {
            return Err(Error::UnsupportedVariant {
                variant: other,
                operation: "zero-eigenvalue coefficient",
            })
        }
    };
    Ok(c)
}

/// Limit coefficient as d -> infinity: `rho -> |1 - theta * c_inf|` for the
/// single-theta variants that stay bounded.
fn infinity_coefficient(variant: Variant) -> Option<f64> {
    match variant {
        Variant::Nn1b | Variant::Nn1c => Some(2.0),
        Variant::Nn2a | Variant::Nn3a => Some(4.0),
        Variant::Nn2c | Variant::Nn3c => Some(3.0),
        _ => None,
    }
}

/// Closed d = 0 formula and analytic d -> infinity limit of the convergence
/// factor.
pub fn rho_limits(
    variant: Variant,
    problem: &ControlProblem,
    thetas: &Relaxation,
) -> Result<RhoLimits> {
    thetas.validate(variant)?;
    if variant.is_analysis_only() {
        return Err(Error::UnsupportedVariant {
            variant,
            operation: "rho_limits",
        });
    }
    match variant {
        Variant::Nn1a => {
            let (t1, t2) = thetas.pair(variant)?;
            let ef0 = zero_coefficient(Variant::Nn1a, problem)?;
            // At d = 0 both diagonal entries are 1 and the off-diagonal
            // product is -theta1 theta2 (EF)|_0 < 0: a conjugate pair of
            // modulus sqrt(1 + theta1 theta2 (EF)|_0).
            let prod = t1 * t2 * ef0;
            let at_zero = if prod >= -1.0 {
                (1.0 + prod).sqrt()
            } else {
                // Negative thetas can push the discriminant positive again.
                let root = (-1.0 - prod).sqrt();
                (1.0 + root).max((1.0 - root).abs())
            };
            Ok(RhoLimits {
                at_zero,
                at_infinity: RhoLimit::Finite(
                    (1.0 - t1).abs().max((1.0 - t2).abs()),
                ),
            })
        }
        Variant::Nn2b | Variant::Nn3b => {
            let theta = thetas.single(variant)?;
            let at_infinity = if theta == 0.0 {
                RhoLimit::Finite(1.0)
            } else {
                RhoLimit::Divergent
            };
            Ok(RhoLimits {
                at_zero: 1.0,
                at_infinity,
            })
        }
        _ => {
            let theta = thetas.single(variant)?;
            let c0 = zero_coefficient(variant, problem)?;
            let cinf = infinity_coefficient(variant).expect("bounded variant");
            Ok(RhoLimits {
                at_zero: (1.0 - theta * c0).abs(),
                at_infinity: RhoLimit::Finite((1.0 - theta * cinf).abs()),
            })
        }
    }
}

/// Result of equioscillating the convergence factor between d = 0 and
/// d -> infinity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Equioscillation {
    /// `2 / (c_0 + c_inf)`; may come out non-positive (then no positive
    /// relaxation balances the two ends and the value cannot be optimal).
    pub theta: f64,
    /// The balanced factor at both ends, present only for a valid theta.
    pub balanced_rho: Option<f64>,
}

impl Equioscillation {
    pub fn is_valid(&self) -> bool {
        self.theta.is_finite() && self.theta > 0.0
    }
}

/// Equioscillated relaxation parameter for the six variants with bounded
/// limits. NN3a and NN3c reuse the NN2a and NN2c closed forms.
pub fn theta_equioscillation(
    variant: Variant,
    problem: &ControlProblem,
) -> Result<Equioscillation> {
    let cinf = infinity_coefficient(variant).ok_or(Error::UnsupportedVariant {
        variant,
        operation: "theta_equioscillation",
    })?;
    let c0 = zero_coefficient(variant, problem)?;
    let theta = 2.0 / (c0 + cinf);
    if !(theta.is_finite() && theta > 0.0) {
        return Ok(Equioscillation {
            theta,
            balanced_rho: None,
        });
    }
    let limits = rho_limits(variant, problem, &Relaxation::Single(theta))?;
    let RhoLimit::Finite(rho_inf) = limits.at_infinity else {
        unreachable!("bounded variant");
    };
    if (limits.at_zero - rho_inf).abs() > 1e-8 {
        return Err(Error::InvalidParameter(format!(
            "equioscillation imbalance {:.3e} for {variant}",
            (limits.at_zero - rho_inf).abs()
        )));
    }
    Ok(Equioscillation {
        theta,
        balanced_rho: Some(rho_inf),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn case_a() -> ControlProblem {
        ControlProblem::new(0.1, 0.0, 1.0, 0.5).unwrap()
    }

    fn case_b() -> ControlProblem {
        ControlProblem::new(10.0, 10.0, 5.0, 1.0).unwrap()
    }

    #[test]
    fn nn1b_large_d_coefficients() {
        // E ~ 1/d and F ~ 2 for large eigenvalues.
        let m = case_a().mode(1e6).unwrap();
        let ef = ef_coefficients(Variant::Nn1b, &m).unwrap();
        assert!((ef.f - 2.0).abs() < 1e-4, "F = {}", ef.f);
        assert_relative_eq!(ef.e * 1e6, 1.0, max_relative = 1e-3);
    }

    #[test]
    fn nn2b_certificate_f_minus_nu_e_nonpositive() {
        for &d in &[0.0, 1e-3, 0.3, 1.0, 17.0, 1e2, 1e4] {
            for problem in [case_a(), case_b()] {
                let m = problem.mode(d).unwrap();
                let ef = ef_coefficients(Variant::Nn2b, &m).unwrap();
                assert!(
                    ef.f - m.nu() * ef.e <= 1e-12 * ef.f.abs().max(1.0),
                    "d = {d}"
                );
            }
        }
    }

    #[test]
    fn overflow_safe_far_beyond_naive_cosh_range() {
        // sigma T ~ 2e4 here; naive cosh overflows near 710.
        let p = ControlProblem::new(1e-4, 1.0, 2.0, 0.7).unwrap();
        let m = p.mode(1e4).unwrap();
        assert!(m.sigma() * 2.0 > 1e4);
        for v in Variant::NINE {
            let ef = ef_coefficients(v, &m).unwrap();
            assert!(ef.e.is_finite() && ef.f.is_finite(), "{v}");
        }
    }

    #[test]
    fn nn1a_zero_theta_is_identity() {
        let m = case_a().mode(3.0).unwrap();
        let mat = iteration_matrix(Variant::Nn1a, &m, 0.0, 0.0).unwrap();
        assert_eq!(mat.m, [[1.0, 0.0], [0.0, 1.0]]);
        let [l1, l2] = mat.eigenvalues();
        assert_eq!((l1.re, l1.im), (1.0, 0.0));
        assert_eq!((l2.re, l2.im), (1.0, 0.0));
    }

    #[test]
    fn stagnating_formulations_keep_a_unit_eigenvalue() {
        for variant in [Variant::Raw1b, Variant::Raw1c, Variant::PairNn2a] {
            for &d in &[0.01, 0.8, 5.0, 80.0] {
                for problem in [case_a(), case_b()] {
                    let m = problem.mode(d).unwrap();
                    let mat = iteration_matrix(variant, &m, 0.7, 1.3).unwrap();
                    let gap = mat
                        .eigenvalues()
                        .iter()
                        .map(|l| (l.re - 1.0).hypot(l.im))
                        .fold(f64::INFINITY, f64::min);
                    assert!(gap <= 1e-10, "{variant} d={d} gap={gap:.2e}");
                }
            }
        }
    }

    #[test]
    fn raw1b_second_eigenvalue_matches_closed_form() {
        let m = case_a().mode(2.0).unwrap();
        let (t1, t2) = (0.6, 0.9);
        let mat = iteration_matrix(Variant::Raw1b, &m, t1, t2).unwrap();
        let ef = ef_coefficients(Variant::Nn1b, &m).unwrap();
        let expected = 1.0 - (t1 * m.d() * ef.e + t2 * ef.f);
        let best = mat
            .eigenvalues()
            .iter()
            .map(|l| (l.re - expected).hypot(l.im))
            .fold(f64::INFINITY, f64::min);
        assert!(best <= 1e-12);
    }

    #[test]
    fn raw1c_second_eigenvalue_matches_closed_form() {
        let m = case_b().mode(2.0).unwrap();
        let (t1, t2) = (0.6, 0.9);
        let mat = iteration_matrix(Variant::Raw1c, &m, t1, t2).unwrap();
        let ef = ef_coefficients(Variant::Nn1c, &m).unwrap();
        let expected = 1.0 - (t1 * ef.e + t2 * m.d() * ef.f);
        let best = mat
            .eigenvalues()
            .iter()
            .map(|l| (l.re - expected).hypot(l.im))
            .fold(f64::INFINITY, f64::min);
        assert!(best <= 1e-12);
    }

    #[test]
    fn pair_nn2a_second_eigenvalue_matches_closed_form() {
        let m = case_a().mode(0.5).unwrap();
        let (t1, t2) = (0.25, 0.75);
        let mat = iteration_matrix(Variant::PairNn2a, &m, t1, t2).unwrap();
        let ef = ef_coefficients(Variant::Nn2a, &m).unwrap();
        let expected = 1.0 - (t1 * ef.e + t2 * ef.f);
        let best = mat
            .eigenvalues()
            .iter()
            .map(|l| (l.re - expected).hypot(l.im))
            .fold(f64::INFINITY, f64::min);
        assert!(best <= 1e-12);
    }

    #[test]
    fn scalar_factor_variants_reject_matrix_request() {
        let m = case_a().mode(1.0).unwrap();
        assert!(iteration_matrix(Variant::Nn2a, &m, 0.5, 0.5).is_err());
    }

    #[test]
    fn high_frequency_smoothing_factors() {
        let m = case_a().mode(1e6).unwrap();
        let rho_1a =
            convergence_factor(Variant::Nn1a, &m, &Relaxation::Pair(1.0, 1.0)).unwrap();
        assert!(rho_1a <= 1e-3, "rho_1a = {rho_1a:.2e}");
        let rho_1b =
            convergence_factor(Variant::Nn1b, &m, &Relaxation::Single(0.5)).unwrap();
        assert!(rho_1b <= 1e-3, "rho_1b = {rho_1b:.2e}");
        let rho_2c =
            convergence_factor(Variant::Nn2c, &m, &Relaxation::Single(1.0 / 3.0)).unwrap();
        assert!(rho_2c <= 1e-3, "rho_2c = {rho_2c:.2e}");
    }

    #[test]
    fn nn2b_zero_eigenvalue_factor_is_one() {
        for &theta in &[0.1, 0.25, 1.0, 1.9] {
            let m = case_a().mode(0.0).unwrap();
            let rho =
                convergence_factor(Variant::Nn2b, &m, &Relaxation::Single(theta)).unwrap();
            assert_eq!(rho, 1.0);
        }
    }

    #[test]
    fn rho_limits_match_published_structure() {
        // NN1a at d = 0 exceeds one for any positive pair.
        let lim = rho_limits(Variant::Nn1a, &case_a(), &Relaxation::Pair(1.0, 1.0)).unwrap();
        assert!(lim.at_zero > 1.0);
        assert_eq!(lim.at_infinity, RhoLimit::Finite(0.0));

        // NN2a with theta = 1/4 annihilates the high-frequency end.
        let lim = rho_limits(Variant::Nn2a, &case_a(), &Relaxation::Single(0.25)).unwrap();
        assert_eq!(lim.at_infinity, RhoLimit::Finite(0.0));

        // The b-variants are flagged divergent for any nonzero theta.
        let lim = rho_limits(Variant::Nn3b, &case_b(), &Relaxation::Single(0.3)).unwrap();
        assert_eq!(lim.at_zero, 1.0);
        assert_eq!(lim.at_infinity, RhoLimit::Divergent);
        let frozen = rho_limits(Variant::Nn3b, &case_b(), &Relaxation::Single(0.0)).unwrap();
        assert_eq!(frozen.at_infinity, RhoLimit::Finite(1.0));
    }

    #[test]
    fn nn3b_growth_matches_4_nu_theta_d_squared() {
        let theta = 0.3;
        let m = case_b().mode(1e3).unwrap();
        let rho = convergence_factor(Variant::Nn3b, &m, &Relaxation::Single(theta)).unwrap();
        let model = 4.0 * m.nu() * theta * 1e6;
        assert!(
            (rho - model).abs() / model < 0.05,
            "rho = {rho:.4e}, model = {model:.4e}"
        );
    }

    #[test]
    fn equioscillation_published_values() {
        let eq = theta_equioscillation(Variant::Nn2a, &case_a()).unwrap();
        assert!((eq.theta - 0.249).abs() < 0.005, "theta = {}", eq.theta);
        assert!(eq.is_valid());

        let eq = theta_equioscillation(Variant::Nn2c, &case_a()).unwrap();
        assert!((eq.theta - 0.385).abs() < 0.005, "theta = {}", eq.theta);

        let eq = theta_equioscillation(Variant::Nn1b, &case_a()).unwrap();
        assert!((eq.theta - 0.446).abs() < 0.005, "theta = {}", eq.theta);

        let eq = theta_equioscillation(Variant::Nn1b, &case_b()).unwrap();
        assert!((eq.theta - 0.278).abs() < 0.005, "theta = {}", eq.theta);

        let eq = theta_equioscillation(Variant::Nn2a, &case_b()).unwrap();
        assert!((eq.theta - 0.214).abs() < 0.005, "theta = {}", eq.theta);

        let eq = theta_equioscillation(Variant::Nn2c, &case_b()).unwrap();
        assert!((eq.theta - 0.285).abs() < 0.005, "theta = {}", eq.theta);

        // NN3a/NN3c reuse the NN2a/NN2c closed forms.
        for problem in [case_a(), case_b()] {
            assert_eq!(
                theta_equioscillation(Variant::Nn3a, &problem).unwrap().theta,
                theta_equioscillation(Variant::Nn2a, &problem).unwrap().theta,
            );
            assert_eq!(
                theta_equioscillation(Variant::Nn3c, &problem).unwrap().theta,
                theta_equioscillation(Variant::Nn2c, &problem).unwrap().theta,
            );
        }
    }

    #[test]
    fn nn1c_equioscillation_flags() {
        // Case A: the zero-end coefficient is so negative that theta* < 0.
        let eq = theta_equioscillation(Variant::Nn1c, &case_a()).unwrap();
        assert!(eq.theta < 0.0);
        assert!(!eq.is_valid());
        assert_eq!(eq.balanced_rho, None);

        // Case B: the formula balances at theta ~ 1.0226 (both ends sit
        // slightly above one; the grid-restricted optimum is smaller).
        let eq = theta_equioscillation(Variant::Nn1c, &case_b()).unwrap();
        assert!((eq.theta - 1.0226).abs() < 0.001, "theta = {}", eq.theta);
        assert!(eq.is_valid());
    }

    #[test]
    fn nn2a_equioscillation_below_quarter_for_symmetric_case() {
        for nu in [0.05, 0.1, 1.0, 3.0] {
            let p = ControlProblem::new(nu, 0.0, 2.0, 1.0).unwrap();
            let eq = theta_equioscillation(Variant::Nn2a, &p).unwrap();
            assert!(eq.theta < 0.25, "nu = {nu}: theta = {}", eq.theta);
        }
    }

    #[test]
    fn zero_limit_continuity() {
        // The closed d = 0 formulas agree with the general factor at d = 1e-12.
        for problem in [case_a(), case_b()] {
            for variant in Variant::NINE {
                let thetas = if variant == Variant::Nn1a {
                    Relaxation::Pair(0.9, 0.7)
                } else {
                    Relaxation::Single(0.31)
                };
                let m = problem.mode(1e-12).unwrap();
                let rho = convergence_factor(variant, &m, &thetas).unwrap();
                let lim = rho_limits(variant, &problem, &thetas).unwrap();
                assert!(
                    (rho - lim.at_zero).abs() <= 1e-6,
                    "{variant}: rho(1e-12) = {rho}, closed form = {}",
                    lim.at_zero
                );
            }
        }
    }

    #[test]
    fn asymptotic_limits_at_huge_eigenvalue() {
        let d = 1e6;
        for problem in [case_a(), case_b()] {
            let checks: [(Variant, Relaxation); 7] = [
                (Variant::Nn1a, Relaxation::Pair(0.8, 1.4)),
                (Variant::Nn1b, Relaxation::Single(0.45)),
                (Variant::Nn1c, Relaxation::Single(0.45)),
                (Variant::Nn2a, Relaxation::Single(0.21)),
                (Variant::Nn3a, Relaxation::Single(0.21)),
                (Variant::Nn2c, Relaxation::Single(0.3)),
                (Variant::Nn3c, Relaxation::Single(0.3)),
            ];
            for (variant, thetas) in checks {
                let m = problem.mode(d).unwrap();
                let rho = convergence_factor(variant, &m, &thetas).unwrap();
                let RhoLimit::Finite(limit) =
                    rho_limits(variant, &problem, &thetas).unwrap().at_infinity
                else {
                    panic!("bounded variant");
                };
                assert!(
                    (rho - limit).abs() <= 1e-3,
                    "{variant}: rho = {rho}, limit = {limit}"
                );
            }
        }
    }

    #[test]
    fn arity_is_enforced() {
        let m = case_a().mode(1.0).unwrap();
        assert!(convergence_factor(Variant::Nn1a, &m, &Relaxation::Single(0.5)).is_err());
        assert!(convergence_factor(Variant::Nn2a, &m, &Relaxation::Pair(0.5, 0.5)).is_err());
        assert!(
            convergence_factor(Variant::Nn2a, &m, &Relaxation::Single(f64::NAN)).is_err()
        );
        assert!(convergence_factor(Variant::Raw1b, &m, &Relaxation::Pair(0.5, 0.5)).is_err());
    }
}

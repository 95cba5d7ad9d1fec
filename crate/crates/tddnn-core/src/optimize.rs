//! Derivative-free minimax tuning of the relaxation parameter: minimize the
//! worst convergence factor over a spectrum.
//!
//! For the single-theta variants the objective `max_d |1 - theta c(d)|` is a
//! maximum of convex functions of theta, hence convex, and golden-section
//! search on [0, 2] is globally correct. The two-parameter algorithm gets a
//! bounded Nelder-Mead simplex restarted from a fixed set of points; its
//! minimax landscape is a flat valley (one parameter drifts to zero), so the
//! search is deterministic but only locally optimal, matching the behavior
//! reported for generic optimization toolboxes.

use crate::closed_form::{convergence_factor, Relaxation};
use crate::error::{Error, Result};
use crate::exec;
use crate::problem::{ControlProblem, Mode, Spectrum};
use crate::variant::Variant;

/// Search interval for every relaxation parameter.
pub const THETA_RANGE: (f64, f64) = (0.0, 2.0);
/// Parameter tolerance of the searches.
pub const THETA_TOL: f64 = 1e-6;
/// Total objective-evaluation budget per optimization.
pub const EVAL_BUDGET: usize = 500;

/// Outcome of a minimax search.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThetaOptimum {
    pub relaxation: Relaxation,
    /// Achieved minimax convergence factor over the spectrum.
    pub rho: f64,
    pub evaluations: usize,
    pub converged: bool,
}

impl ThetaOptimum {
    /// The single optimal theta, for the one-parameter variants.
    pub fn theta(&self) -> f64 {
        match self.relaxation {
            Relaxation::Single(t) => t,
            Relaxation::Pair(t1, _) => t1,
        }
    }
}

/// Golden-section search for the minimum of `f` on [lo, hi].
///
/// Returns (x, f(x), evaluations, converged). Deterministic; stops when the
/// bracket is shorter than `tol` or the evaluation budget runs out.
pub fn golden_section<F>(
    f: F,
    mut lo: f64,
    mut hi: f64,
    tol: f64,
    max_evals: usize,
) -> (f64, f64, usize, bool)
where
    F: Fn(f64) -> f64,
{
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    let mut evals = 2;
    while hi - lo > tol && evals < max_evals {
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = f(x2);
        }
        evals += 1;
    }
    let converged = hi - lo <= tol;
    // Include the endpoints: the minimax optimum can sit on the boundary
    // (theta = 0 for the divergent variants).
    let f_lo = f(lo);
    let f_hi = f(hi);
    evals += 2;
    let mut best = (x1, f1);
    for cand in [(x2, f2), (lo, f_lo), (hi, f_hi)] {
        if cand.1 < best.1 {
            best = cand;
        }
    }
    (best.0, best.1, evals, converged)
}

/// Bounded Nelder-Mead on a rectangle, minimizing `f`.
///
/// Standard reflection/expansion/contraction/shrink with points clamped to
/// the box. Returns (x, f(x), evaluations, converged); convergence means the
/// simplex collapsed below `tol` in both coordinates.
pub fn nelder_mead_2d<F>(
    f: F,
    start: [f64; 2],
    scale: f64,
    bounds: ([f64; 2], [f64; 2]),
    tol: f64,
    max_evals: usize,
) -> ([f64; 2], f64, usize, bool)
where
    F: Fn([f64; 2]) -> f64,
{
    let clamp = |p: [f64; 2]| {
        [
            p[0].clamp(bounds.0[0], bounds.1[0]),
            p[1].clamp(bounds.0[1], bounds.1[1]),
        ]
    };
    let mut evals = 0;
    let eval = |p: [f64; 2]| f(clamp(p));

    let mut simplex = [
        clamp(start),
        clamp([start[0] + scale, start[1]]),
        clamp([start[0], start[1] + scale]),
    ];
    let mut values = simplex.map(&mut |p: [f64; 2]| {
        evals += 1;
        eval(p)
    });

    let mut converged = false;
    while evals + 4 <= max_evals {
        // Order: best, middle, worst.
        let mut idx = [0usize, 1, 2];
        idx.sort_by(|&i, &j| values[i].partial_cmp(&values[j]).expect("finite objective"));
        let (b, m, w) = (idx[0], idx[1], idx[2]);

        let spread_x = simplex.iter().map(|p| p[0]).fold(f64::INFINITY, f64::min)
            - simplex.iter().map(|p| p[0]).fold(f64::NEG_INFINITY, f64::max);
        let spread_y = simplex.iter().map(|p| p[1]).fold(f64::INFINITY, f64::min)
            - simplex.iter().map(|p| p[1]).fold(f64::NEG_INFINITY, f64::max);
        if spread_x.abs() <= tol && spread_y.abs() <= tol {
            converged = true;
            break;
        }

        let centroid = [
            0.5 * (simplex[b][0] + simplex[m][0]),
            0.5 * (simplex[b][1] + simplex[m][1]),
        ];
        let reflect = |c: f64, wv: f64| c + (c - wv);
        let refl = clamp([
            reflect(centroid[0], simplex[w][0]),
            reflect(centroid[1], simplex[w][1]),
        ]);
        evals += 1;
        let f_refl = eval(refl);

        if f_refl < values[b] {
            let expand = clamp([
                centroid[0] + 2.0 * (centroid[0] - simplex[w][0]),
                centroid[1] + 2.0 * (centroid[1] - simplex[w][1]),
            ]);
            evals += 1;
            let f_exp = eval(expand);
            if f_exp < f_refl {
                simplex[w] = expand;
                values[w] = f_exp;
            } else {
                simplex[w] = refl;
                values[w] = f_refl;
            }
        } else if f_refl < values[m] {
            simplex[w] = refl;
            values[w] = f_refl;
        } else {
            let contract = clamp([
                centroid[0] + 0.5 * (simplex[w][0] - centroid[0]),
                centroid[1] + 0.5 * (simplex[w][1] - centroid[1]),
            ]);
            evals += 1;
            let f_con = eval(contract);
            if f_con < values[w] {
                simplex[w] = contract;
                values[w] = f_con;
            } else {
                // Shrink toward the best point.
                for i in [m, w] {
                    simplex[i] = clamp([
                        simplex[b][0] + 0.5 * (simplex[i][0] - simplex[b][0]),
                        simplex[b][1] + 0.5 * (simplex[i][1] - simplex[b][1]),
                    ]);
                    evals += 1;
                    values[i] = eval(simplex[i]);
                }
            }
        }
    }

    let mut best = 0;
    for i in 1..3 {
        if values[i] < values[best] {
            best = i;
        }
    }
    (simplex[best], values[best], evals, converged)
}

/// Worst convergence factor over the modes.
fn minimax(variant: Variant, modes: &[Mode], thetas: &Relaxation) -> f64 {
    let rhos = exec::try_map(modes, |m| convergence_factor(variant, m, thetas))
        .expect("validated modes and thetas");
    rhos.into_iter().fold(0.0, f64::max)
}

/// Minimize the worst convergence factor over the spectrum.
///
/// Single-theta variants use golden-section search on [0, 2]; the
/// two-parameter algorithm uses bounded Nelder-Mead restarted from three
/// fixed points. The analysis-only formulations are rejected: their unit
/// eigenvalue cannot be removed by relaxation.
pub fn optimize_theta(
    variant: Variant,
    spectrum: &Spectrum,
    problem: &ControlProblem,
) -> Result<ThetaOptimum> {
    if variant.is_analysis_only() {
        return Err(Error::UnsupportedVariant {
            variant,
            operation: "optimize_theta",
        });
    }
    if spectrum.is_empty() {
        return Err(Error::InvalidParameter("empty spectrum".into()));
    }
    let modes = problem.modes(spectrum)?;
    let (lo, hi) = THETA_RANGE;

    if variant == Variant::Nn1a {
        let objective =
            |p: [f64; 2]| minimax(variant, &modes, &Relaxation::Pair(p[0], p[1]));
        let starts = [[1.0, 1.0], [0.5, 0.5], [0.2, 1.5]];
        let budget = EVAL_BUDGET / starts.len();
        let mut best: Option<([f64; 2], f64, usize, bool)> = None;
        let mut total_evals = 0;
        let mut any_converged = false;
        for start in starts {
            let (x, fx, evals, conv) = nelder_mead_2d(
                objective,
                start,
                0.3,
                ([lo, lo], [hi, hi]),
                THETA_TOL,
                budget,
            );
            total_evals += evals;
            any_converged |= conv;
            if best.map_or(true, |(_, b, _, _)| fx < b) {
                best = Some((x, fx, evals, conv));
            }
        }
        let (x, fx, _, _) = best.expect("at least one start");
        if !any_converged {
            return Err(Error::OptimizerStalled {
                evaluations: total_evals,
            });
        }
        return Ok(ThetaOptimum {
            relaxation: Relaxation::Pair(x[0], x[1]),
            rho: fx,
            evaluations: total_evals,
            converged: any_converged,
        });
    }

    let objective = |t: f64| minimax(variant, &modes, &Relaxation::Single(t));
    let (theta, rho, evaluations, converged) =
        golden_section(objective, lo, hi, THETA_TOL, EVAL_BUDGET);
    if !converged {
        return Err(Error::OptimizerStalled { evaluations });
    }
    Ok(ThetaOptimum {
        relaxation: Relaxation::Single(theta),
        rho,
        evaluations,
        converged,
    })
}

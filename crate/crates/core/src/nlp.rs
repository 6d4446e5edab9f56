//! The two-constraint program behind the 0.514 guarantee and the lower-bound
//! functions behind the P3 guarantee.
//!
//! With `x = Δ_A` and `y = f(O ∩ V_A)/f(O)` the guarantee is
//! `min_{x,y} max(f₁(x,y), f₂(x,y))` over `[0,1] × [0,∞)`.

use std::f64::consts::E;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const INV_E: f64 = 1.0 / E;
const ONE_MINUS_INV_E: f64 = 1.0 - 1.0 / E;

/// `x ln x`, with the value 0 at `x = 0`.
pub fn x_ln_x(x: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        x * x.ln()
    }
}

pub fn f1(x: f64, y: f64) -> f64 {
    ONE_MINUS_INV_E - (ONE_MINUS_INV_E * x - INV_E - INV_E * x_ln_x(x)) * y
}

pub fn f2(x: f64, y: f64) -> f64 {
    0.5 * ONE_MINUS_INV_E + 0.5 * (INV_E + x_ln_x(x) + ONE_MINUS_INV_E * x) * y
}

pub fn nlp_objective(x: f64, y: f64) -> f64 {
    f1(x, y).max(f2(x, y))
}

/// Greedy on Alice's side: `f(G_A) ≥ (1 + Δ ln Δ)·f(O ∩ V_A)`.
pub fn bound_greedy(delta: f64, f_oa: f64) -> f64 {
    (1.0 + x_ln_x(delta)) * f_oa
}

/// Lower bound on `f(X_{k_A})`:
/// `(1−1/e)·f(O) + f(G_A)/e − (1−1/e)·Δ·f(O ∩ V_A)`.
pub fn bound_x(delta: f64, f_oa: f64, f_o: f64, f_ga: f64) -> f64 {
    ONE_MINUS_INV_E * f_o + INV_E * f_ga - ONE_MINUS_INV_E * delta * f_oa
}

/// Lower bound on `f(Y_{k_A})`:
/// `½(1−1/e)·f(O) + ½(1/e + Δ ln Δ + (1−1/e)Δ)·f(O ∩ V_A)`.
pub fn bound_y(delta: f64, f_oa: f64, f_o: f64) -> f64 {
    0.5 * ONE_MINUS_INV_E * f_o + 0.5 * (INV_E + x_ln_x(delta) + ONE_MINUS_INV_E * delta) * f_oa
}

/// `ln x + 3 − (e+1)x`; its roots are the stationary points of the
/// equalized objective.
pub fn kkt_residual(x: f64) -> f64 {
    x.ln() + 3.0 - (E + 1.0) * x
}

fn bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let f_lo = f(lo);
    assert!(f_lo * f(hi) <= 0.0, "no sign change on [{lo}, {hi}]");
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if (f(mid) > 0.0) == (f_lo > 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= f64::EPSILON * hi {
            break;
        }
    }
    0.5 * (lo + hi)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NlpPoint {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

/// The stationary point in `[0.5, 1]` and `y*` from its closed form.
pub fn closed_form_optimum() -> NlpPoint {
    let x = bisect(kkt_residual, 0.5, 1.0);
    let y = (1.0 - E) / (1.0 + x * (3.0 - 3.0 * E + (2.0 - E) * x.ln()));
    NlpPoint { x, y, z: f1(x, y) }
}

/// The other root of the stationarity equation, below 0.07.
pub fn spurious_root() -> f64 {
    bisect(kkt_residual, 0.01, 0.5)
}

/// `min_y max(f₁, f₂)` for fixed `x` over `y ∈ [0, y_max]`. Both parts are
/// affine in `y`, so the minimum sits at an end point or at their crossing.
pub fn min_over_y(x: f64, y_max: f64) -> (f64, f64) {
    let (c1, s1) = (f1(x, 0.0), f1(x, 0.0) - f1(x, 1.0));
    let (c2, s2) = (f2(x, 0.0), f2(x, 1.0) - f2(x, 0.0));
    let mut candidates = vec![0.0, y_max];
    if s1 + s2 > 0.0 {
        let cross = (c1 - c2) / (s1 + s2);
        if (0.0..=y_max).contains(&cross) {
            candidates.push(cross);
        }
    }
    candidates
        .into_iter()
        .map(|y| (y, nlp_objective(x, y)))
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .expect("non-empty")
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridReport {
    pub step: f64,
    pub points: u64,
    pub min: NlpPoint,
}

/// Evaluates the objective on every grid point of `[0,1] × [0,y_max]`.
pub fn grid_search(step: f64, y_max: f64) -> GridReport {
    let nx = (1.0 / step).round() as usize;
    let ny = (y_max / step).round() as usize;
    let min = (0..=nx)
        .into_par_iter()
        .map(|i| {
            let x = (i as f64 * step).min(1.0);
            (0..=ny)
                .map(|j| {
                    let y = j as f64 * step;
                    NlpPoint {
                        x,
                        y,
                        z: nlp_objective(x, y),
                    }
                })
                .min_by(|a, b| a.z.total_cmp(&b.z))
                .expect("non-empty row")
        })
        .min_by(|a, b| a.z.total_cmp(&b.z).then(a.x.total_cmp(&b.x)))
        .expect("non-empty grid");
    GridReport {
        step,
        points: ((nx + 1) * (ny + 1)) as u64,
        min,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NlpSolution {
    pub closed_form: NlpPoint,
    pub numeric: NlpPoint,
    pub spurious_root: f64,
}

pub const NLP_Y_MAX: f64 = 10.0;

/// Solves the program twice: once through the stationarity equation and the
/// closed form for `y*`, once by a scan over `x` followed by golden-section
/// refinement of `x ↦ min_y max(f₁, f₂)`. Fails if the two disagree by more
/// than `refine_tol`.
pub fn solve_nlp(grid_step: f64, refine_tol: f64) -> Result<NlpSolution> {
    if !(grid_step > 0.0 && grid_step <= 0.01) {
        return Err(Error::Precondition(format!("grid step {grid_step} must lie in (0, 0.01]")));
    }
    let closed_form = closed_form_optimum();
    let spurious = spurious_root();
    // the second root is useless: there f₁ never drops below 1 − 1/e
    let slope = ONE_MINUS_INV_E * spurious - INV_E - INV_E * x_ln_x(spurious);
    if slope > 0.0 {
        return Err(Error::Disagreement(format!("f₁ decreases in y at the spurious root {spurious}")));
    }

    // scan x with y solved exactly, so the bracket is not skewed by the y grid
    let g = |x: f64| min_over_y(x, NLP_Y_MAX).1;
    let nx = (1.0 / grid_step).round() as usize;
    let best = (0..=nx)
        .into_par_iter()
        .map(|i| ((i as f64 * grid_step).min(1.0), g((i as f64 * grid_step).min(1.0))))
        .min_by(|a, b| a.1.total_cmp(&b.1).then(a.0.total_cmp(&b.0)))
        .expect("non-empty scan");
    let mut lo = (best.0 - grid_step).max(0.0);
    let mut hi = (best.0 + grid_step).min(1.0);
    let ratio = (5f64.sqrt() - 1.0) / 2.0;
    for _ in 0..200 {
        if hi - lo < 1e-13 {
            break;
        }
        let m1 = hi - ratio * (hi - lo);
        let m2 = lo + ratio * (hi - lo);
        if g(m1) <= g(m2) {
            hi = m2;
        } else {
            lo = m1;
        }
    }
    let x = 0.5 * (lo + hi);
    let (y, z) = min_over_y(x, NLP_Y_MAX);
    let numeric = NlpPoint { x, y, z };

    let gap = (numeric.x - closed_form.x)
        .abs()
        .max((numeric.y - closed_form.y).abs())
        .max((numeric.z - closed_form.z).abs());
    if gap > refine_tol {
        return Err(Error::Disagreement(format!(
            "closed form {closed_form:?} vs numeric {numeric:?} (gap {gap:e})"
        )));
    }
    Ok(NlpSolution {
        closed_form,
        numeric,
        spurious_root: spurious,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn boundary_values() {
        for y in [0.0, 0.3, 1.0, 7.0] {
            assert!(f1(0.0, y) >= ONE_MINUS_INV_E - 1e-15);
            assert!((f2(0.0, y) - (0.5 * ONE_MINUS_INV_E + 0.5 * INV_E * y)).abs() < 1e-15);
        }
        assert!((f2(0.0, 0.0) - 0.316_060_279_414_278_8).abs() < 1e-12);
        for x in [0.0, 0.2, 0.9, 1.0] {
            assert!((nlp_objective(x, 0.0) - ONE_MINUS_INV_E).abs() < 1e-15);
        }
        assert_eq!(x_ln_x(0.0), 0.0);
        assert_eq!(x_ln_x(1.0), 0.0);
    }

    #[test]
    fn closed_form_values() {
        let p = closed_form_optimum();
        assert!((p.x - 0.717_564_723_249_895_6).abs() < 1e-12);
        assert!((p.y - 0.679_734_097_639_318_6).abs() < 1e-12);
        assert!((0.514..0.515).contains(&p.z));
        assert!(kkt_residual(p.x).abs() < 1e-10);
        assert!((f1(p.x, p.y) - f2(p.x, p.y)).abs() < 1e-9);
        let r = spurious_root();
        assert!(r < 0.07 && kkt_residual(r).abs() < 1e-10);
    }

    #[test]
    fn two_routes_agree() {
        let s = solve_nlp(0.01, 1e-6).unwrap();
        assert!((s.numeric.z - s.closed_form.z).abs() < 1e-9);
        assert!(solve_nlp(0.1, 1e-6).is_err());
    }

    #[test]
    fn coarse_grid_stays_above() {
        let g = grid_search(0.01, NLP_Y_MAX);
        assert_eq!(g.points, 101 * 1001);
        assert!(g.min.z >= 0.514);
        assert!((g.min.z - closed_form_optimum().z).abs() < 1e-2);
    }

    #[test]
    fn greedy_bound_at_inverse_e() {
        assert!((bound_greedy(INV_E, 1.0) - ONE_MINUS_INV_E).abs() < 1e-15);
        assert_eq!(bound_greedy(1.0, 2.0), 2.0);
    }

    #[test]
    fn lemma_bounds_special_cases() {
        assert!((bound_x(0.0, 0.0, 2.0, 1.0) - (ONE_MINUS_INV_E * 2.0 + INV_E)).abs() < 1e-15);
        let with_one = bound_y(1.0, 1.0, 0.0);
        assert!((with_one - 0.5 * (INV_E + ONE_MINUS_INV_E)).abs() < 1e-15);
        // the program's two parts are the bounds normalized by f(O)
        let (x, y) = (0.4, 0.7);
        let fx = bound_x(x, y, 1.0, bound_greedy(x, y));
        assert!((fx - f1(x, y)).abs() < 1e-12);
        assert!((bound_y(x, y, 1.0) - f2(x, y)).abs() < 1e-12);
    }
}

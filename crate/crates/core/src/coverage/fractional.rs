use serde::{Deserialize, Serialize};

use super::WeightedCoverage;
use crate::error::{Error, Result};
use crate::oracle::SetFunction;

/// Largest ground set [`fractional_to_weighted`] will expand; the equivalent
/// coverage universe has one point per subset of the ground set.
pub const CONVERSION_GUARD: usize = 12;

/// Universe points lighter than this are dropped by the conversion.
pub const CONVERSION_PRUNE: f64 = 1e-15;

/// Weighted fractional coverage: element `v` covers point `u` with
/// probability `p_v(u)`, and
/// `f(S) = Σ_u a_u · (1 − Π_{v∈S} (1 − p_v(u)))`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FractionalCoverage {
    weights: Vec<f64>,
    /// Sparse `(point, probability)` lists, one per ground element.
    probs: Vec<Vec<(usize, f64)>>,
}

impl FractionalCoverage {
    pub fn new(weights: Vec<f64>, probs: Vec<Vec<(usize, f64)>>) -> Result<Self> {
        if let Some(w) = weights.iter().find(|w| !(**w >= 0.0) || !w.is_finite()) {
            return Err(Error::Invalid(format!("coverage weight {w} must be finite and non-negative")));
        }
        for (v, row) in probs.iter().enumerate() {
            for &(u, p) in row {
                if u >= weights.len() {
                    return Err(Error::Invalid(format!("element {v} covers unknown point {u}")));
                }
                if !(0.0..=1.0).contains(&p) {
                    return Err(Error::Invalid(format!("probability {p} of element {v} outside [0,1]")));
                }
            }
            let mut points: Vec<usize> = row.iter().map(|&(u, _)| u).collect();
            points.sort_unstable();
            if points.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::Invalid(format!("element {v} lists a point twice")));
            }
        }
        Ok(Self { weights, probs })
    }

    /// Binary specialization: `p_v(u) = 1` for the listed points.
    pub fn from_coverage(f: &WeightedCoverage) -> Self {
        let probs = f
            .sets()
            .iter()
            .map(|set| set.iter().map(|&u| (u, 1.0)).collect())
            .collect();
        Self {
            weights: f.weights().to_vec(),
            probs,
        }
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn probs(&self) -> &[Vec<(usize, f64)>] {
        &self.probs
    }

    /// Dense `p_v(u)`.
    pub fn prob(&self, v: usize, u: usize) -> f64 {
        self.probs[v]
            .iter()
            .find(|&&(point, _)| point == u)
            .map_or(0.0, |&(_, p)| p)
    }
}

impl SetFunction for FractionalCoverage {
    fn ground_size(&self) -> usize {
        self.probs.len()
    }

    fn value(&self, set: &[usize]) -> f64 {
        let mut survive = vec![1.0f64; self.weights.len()];
        for &v in set {
            for &(u, p) in &self.probs[v] {
                survive[u] *= 1.0 - p;
            }
        }
        self.weights.iter().zip(&survive).map(|(a, s)| a * (1.0 - s)).sum()
    }
}

/// Equivalent weighted coverage function over the universe of subsets of the
/// ground set: the point `X ⊆ V` weighs
/// `Σ_u a_u Π_{v∈X} p_v(u) Π_{v∉X} (1 − p_v(u))` and is covered by every
/// `v ∈ X`. The empty subset and points below [`CONVERSION_PRUNE`] are
/// omitted since no element can cover them or they cannot matter.
pub fn fractional_to_weighted(f: &FractionalCoverage) -> Result<WeightedCoverage> {
    let n = f.ground_size();
    if n > CONVERSION_GUARD {
        return Err(Error::guard("fractional_to_weighted ground set", n, CONVERSION_GUARD));
    }
    let dense: Vec<Vec<f64>> = (0..n)
        .map(|v| (0..f.weights.len()).map(|u| f.prob(v, u)).collect())
        .collect();

    let mut weights = Vec::new();
    let mut sets = vec![Vec::new(); n];
    for mask in 1usize..1 << n {
        let weight: f64 = f
            .weights
            .iter()
            .enumerate()
            .map(|(u, &a)| {
                (0..n).fold(a, |acc, v| {
                    let p = dense[v][u];
                    acc * if mask >> v & 1 == 1 { p } else { 1.0 - p }
                })
            })
            .sum();
        if weight < CONVERSION_PRUNE {
            continue;
        }
        let point = weights.len();
        weights.push(weight);
        for (v, set) in sets.iter_mut().enumerate() {
            if mask >> v & 1 == 1 {
                set.push(point);
            }
        }
    }
    WeightedCoverage::new(weights, sets)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn half_half() -> FractionalCoverage {
        FractionalCoverage::new(vec![1.0], vec![vec![(0, 0.5)], vec![(0, 0.5)]]).unwrap()
    }

    #[test]
    fn empty_set_is_zero() {
        assert_eq!(half_half().value(&[]), 0.0);
    }

    #[test]
    fn two_halves_cover_three_quarters() {
        assert!((half_half().value(&[0, 1]) - 0.75).abs() < 1e-15);
        let w = fractional_to_weighted(&half_half()).unwrap();
        assert!((w.value(&[0, 1]) - 0.75).abs() < 1e-9);
        assert!((w.value(&[1]) - 0.5).abs() < 1e-9);
    }

    #[test]
    fn binary_probabilities_match_plain_coverage() {
        let c = WeightedCoverage::new(vec![1.0, 2.0, 0.5], vec![vec![0, 1], vec![1], vec![2, 0]]).unwrap();
        let f = FractionalCoverage::from_coverage(&c);
        let w = fractional_to_weighted(&f).unwrap();
        for mask in 0..8usize {
            let s: Vec<usize> = (0..3).filter(|b| mask >> b & 1 == 1).collect();
            assert_eq!(f.value(&s), c.value(&s));
            assert!((w.value(&s) - c.value(&s)).abs() < 1e-12);
        }
        // concentrated: only the exact cover patterns carry weight
        assert_eq!(w.universe_size(), 3);
    }

    #[test]
    fn validation_and_guard() {
        assert!(FractionalCoverage::new(vec![1.0], vec![vec![(0, 1.5)]]).is_err());
        assert!(FractionalCoverage::new(vec![1.0], vec![vec![(0, 0.5), (0, 0.5)]]).is_err());
        let big = FractionalCoverage::new(vec![1.0], vec![vec![(0, 0.5)]; 13]).unwrap();
        assert!(fractional_to_weighted(&big).is_err());
    }
}

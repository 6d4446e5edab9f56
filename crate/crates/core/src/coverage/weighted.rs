use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::oracle::SetFunction;

/// Weighted coverage: each ground element covers a subset of a weighted
/// universe, and a set is worth the total weight of the points it covers.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightedCoverage {
    weights: Vec<f64>,
    sets: Vec<Vec<usize>>,
}

impl WeightedCoverage {
    pub fn new(weights: Vec<f64>, sets: Vec<Vec<usize>>) -> Result<Self> {
        if let Some(w) = weights.iter().find(|w| !(**w >= 0.0) || !w.is_finite()) {
            return Err(Error::Invalid(format!("coverage weight {w} must be finite and non-negative")));
        }
        for (v, set) in sets.iter().enumerate() {
            if let Some(u) = set.iter().find(|&&u| u >= weights.len()) {
                return Err(Error::Invalid(format!("element {v} covers unknown point {u}")));
            }
        }
        Ok(Self { weights, sets })
    }

    pub fn universe_size(&self) -> usize {
        self.weights.len()
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn sets(&self) -> &[Vec<usize>] {
        &self.sets
    }

    /// Ground set extended by `extra` elements covering nothing.
    pub fn with_dummies(&self, extra: usize) -> Self {
        let mut sets = self.sets.clone();
        sets.extend(std::iter::repeat_with(Vec::new).take(extra));
        Self {
            weights: self.weights.clone(),
            sets,
        }
    }
}

impl SetFunction for WeightedCoverage {
    fn ground_size(&self) -> usize {
        self.sets.len()
    }

    fn value(&self, set: &[usize]) -> f64 {
        let mut covered = vec![false; self.weights.len()];
        let mut total = 0.0;
        for &v in set {
            for &u in &self.sets[v] {
                if !covered[u] {
                    covered[u] = true;
                    total += self.weights[u];
                }
            }
        }
        total
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::ValueOracle;
    use crate::solve::{brute_force_opt, check_monotone_submodular, marginal};

    #[test]
    fn dominating_element_wins() {
        // elements {a}, {b}, {a,b} over unit-weight points a, b
        let f = WeightedCoverage::new(vec![1.0, 1.0], vec![vec![0], vec![1], vec![0, 1]]).unwrap();
        let o = ValueOracle::from_fn(f, Some(1));
        assert_eq!(brute_force_opt(&o, &[0, 1, 2], 1).unwrap(), (vec![2], 2.0));
        assert_eq!(marginal(&o, 0, &[2]).unwrap(), 0.0);
        assert!(check_monotone_submodular(&o, &[0, 1, 2]).unwrap().passed());
    }

    #[test]
    fn rejects_bad_data() {
        assert!(WeightedCoverage::new(vec![-1.0], vec![vec![0]]).is_err());
        assert!(WeightedCoverage::new(vec![1.0], vec![vec![1]]).is_err());
        assert!(WeightedCoverage::new(vec![f64::NAN], vec![]).is_err());
    }

    #[test]
    fn dummies_add_nothing() {
        let f = WeightedCoverage::new(vec![2.0], vec![vec![0]]).unwrap().with_dummies(2);
        assert_eq!(f.ground_size(), 3);
        assert_eq!(f.value(&[1, 2]), 0.0);
        assert_eq!(f.value(&[0, 2]), 2.0);
    }
}

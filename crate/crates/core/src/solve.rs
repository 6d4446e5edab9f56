//! Exact baselines: exhaustive search, Greedy, and an exhaustive checker for
//! monotonicity and submodularity.
//!
//! Ties are resolved deterministically everywhere: two values within
//! [`VALUE_TOLERANCE`] are tied, tied sets resolve to the lexicographically
//! smallest sorted index list, tied elements to the smallest index.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::oracle::{Evaluate, VALUE_TOLERANCE};

/// Default cap on the number of candidates an exhaustive search may enumerate.
pub const ENUMERATION_GUARD: usize = 30;

/// Cap on the domain size for [`check_monotone_submodular`].
pub const PROPERTY_CHECK_GUARD: usize = 12;

fn canonical(candidates: &[usize]) -> Vec<usize> {
    let mut c = candidates.to_vec();
    c.sort_unstable();
    c.dedup();
    c
}

/// `true` when `(value, set)` beats `(best_value, best_set)` under the tie rule.
fn improves(value: f64, set: &[usize], best_value: f64, best_set: &[usize]) -> bool {
    if value > best_value + VALUE_TOLERANCE {
        true
    } else if value >= best_value - VALUE_TOLERANCE {
        set.cmp(best_set) == Ordering::Less
    } else {
        false
    }
}

/// Maximizer of the oracle over subsets of `candidates` of size at most `k`.
pub fn brute_force_opt<O: Evaluate + ?Sized>(
    oracle: &O,
    candidates: &[usize],
    k: usize,
) -> Result<(Vec<usize>, f64)> {
    brute_force_opt_guarded(oracle, candidates, k, ENUMERATION_GUARD)
}

pub fn brute_force_opt_guarded<O: Evaluate + ?Sized>(
    oracle: &O,
    candidates: &[usize],
    k: usize,
    guard: usize,
) -> Result<(Vec<usize>, f64)> {
    let mut by_size = brute_force_by_size(oracle, candidates, k, guard)?;
    Ok(by_size.pop().expect("one entry per size bound"))
}

/// Entry `i` is the maximizer over subsets of size at most `i`, for every
/// `i ≤ max_size`, from a single enumeration. Each entry equals what
/// [`brute_force_opt`] returns for that bound, ties included.
pub fn brute_force_by_size<O: Evaluate + ?Sized>(
    oracle: &O,
    candidates: &[usize],
    max_size: usize,
    guard: usize,
) -> Result<Vec<(Vec<usize>, f64)>> {
    let cands = canonical(candidates);
    if cands.len() > guard {
        return Err(Error::guard("brute_force_opt candidates", cands.len(), guard));
    }
    oracle.check_domain(&cands)?;

    let empty = oracle.eval(&[])?;
    let mut best = vec![(Vec::new(), empty); max_size + 1];
    let mut current = Vec::with_capacity(max_size);
    // Depth-first over index positions; visits subsets in lexicographic order.
    fn dfs<O: Evaluate + ?Sized>(
        oracle: &O,
        cands: &[usize],
        start: usize,
        current: &mut Vec<usize>,
        best: &mut [(Vec<usize>, f64)],
    ) -> Result<()> {
        if current.len() + 1 == best.len() {
            return Ok(());
        }
        for i in start..cands.len() {
            current.push(cands[i]);
            let v = oracle.eval(current)?;
            for (set, value) in best[current.len()..].iter_mut() {
                if improves(v, current, *value, set) {
                    *value = v;
                    set.clone_from(current);
                }
            }
            dfs(oracle, cands, i + 1, current, best)?;
            current.pop();
        }
        Ok(())
    }
    dfs(oracle, &cands, 0, &mut current, &mut best)?;
    Ok(best)
}

/// Exact marginal gain `f(v | S) = f(S ∪ {v}) − f(S)`; both evaluations are
/// recorded in the oracle's ledger.
pub fn marginal<O: Evaluate + ?Sized>(oracle: &O, v: usize, set: &[usize]) -> Result<f64> {
    if set.contains(&v) {
        return Err(Error::Precondition(format!("element {v} already in the set")));
    }
    let mut with = set.to_vec();
    with.push(v);
    let hi = oracle.eval(&with)?;
    let lo = oracle.eval(set)?;
    Ok(hi - lo)
}

/// Greedy for `rounds` steps from the empty set.
pub fn greedy<O: Evaluate + ?Sized>(oracle: &O, candidates: &[usize], rounds: usize) -> Result<Vec<usize>> {
    greedy_from(oracle, &[], candidates, rounds)
}

/// Greedy extension of `base` by `rounds` elements of `candidates ∖ base`.
/// Returns only the added elements, in selection order. When every marginal
/// gain is zero the smallest remaining index is still taken.
pub fn greedy_from<O: Evaluate + ?Sized>(
    oracle: &O,
    base: &[usize],
    candidates: &[usize],
    rounds: usize,
) -> Result<Vec<usize>> {
    let mut pool: Vec<usize> = canonical(candidates);
    pool.retain(|c| !base.contains(c));
    if rounds > pool.len() {
        return Err(Error::Precondition(format!(
            "greedy asked for {rounds} rounds over {} candidates",
            pool.len()
        )));
    }
    oracle.check_domain(&pool)?;

    let mut current = base.to_vec();
    let mut picked = Vec::with_capacity(rounds);
    for _ in 0..rounds {
        let base_value = oracle.eval(&current)?;
        let mut gains = Vec::with_capacity(pool.len());
        for &c in &pool {
            current.push(c);
            let v = oracle.eval(&current)?;
            current.pop();
            gains.push(v - base_value);
        }
        let top = gains.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        // pool is sorted, so the first near-maximal gain has the smallest index
        let pos = gains
            .iter()
            .position(|&g| g >= top - VALUE_TOLERANCE)
            .expect("non-empty pool");
        let chosen = pool.remove(pos);
        current.push(chosen);
        picked.push(chosen);
    }
    Ok(picked)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PropertyViolation {
    Negative {
        set: Vec<usize>,
        value: f64,
    },
    NotMonotone {
        set: Vec<usize>,
        element: usize,
        gain: f64,
    },
    NotSubmodular {
        smaller: Vec<usize>,
        larger: Vec<usize>,
        element: usize,
        gain_smaller: f64,
        gain_larger: f64,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PropertyReport {
    pub domain: Vec<usize>,
    pub sets_checked: usize,
    pub violation: Option<PropertyViolation>,
}

impl PropertyReport {
    pub fn passed(&self) -> bool {
        self.violation.is_none()
    }
}

/// Exhaustively checks non-negativity, monotonicity and diminishing returns
/// `f(v|X) ≥ f(v|Y)` for all `X ⊆ Y ⊆ domain`, `v ∉ Y`. Stops at the first
/// counterexample.
pub fn check_monotone_submodular<O: Evaluate + ?Sized>(oracle: &O, domain: &[usize]) -> Result<PropertyReport> {
    let dom = canonical(domain);
    let n = dom.len();
    if n > PROPERTY_CHECK_GUARD {
        return Err(Error::guard("check_monotone_submodular domain", n, PROPERTY_CHECK_GUARD));
    }
    oracle.check_domain(&dom)?;

    let to_set = |mask: usize| -> Vec<usize> { (0..n).filter(|b| mask >> b & 1 == 1).map(|b| dom[b]).collect() };
    let full = 1usize << n;
    let mut table = Vec::with_capacity(full);
    for mask in 0..full {
        table.push(oracle.eval(&to_set(mask))?);
    }
    let report = |violation| PropertyReport {
        domain: dom.clone(),
        sets_checked: full,
        violation,
    };

    for (mask, &value) in table.iter().enumerate() {
        if value < -VALUE_TOLERANCE {
            return Ok(report(Some(PropertyViolation::Negative {
                set: to_set(mask),
                value,
            })));
        }
    }
    for mask in 0..full {
        for b in (0..n).filter(|b| mask >> b & 1 == 0) {
            let gain = table[mask | 1 << b] - table[mask];
            if gain < -VALUE_TOLERANCE {
                return Ok(report(Some(PropertyViolation::NotMonotone {
                    set: to_set(mask),
                    element: dom[b],
                    gain,
                })));
            }
        }
    }
    for larger in 0..full {
        for b in (0..n).filter(|b| larger >> b & 1 == 0) {
            let gain_larger = table[larger | 1 << b] - table[larger];
            // every submask of `larger`, including the empty set
            let mut smaller = larger;
            loop {
                let gain_smaller = table[smaller | 1 << b] - table[smaller];
                if gain_smaller < gain_larger - VALUE_TOLERANCE {
                    return Ok(report(Some(PropertyViolation::NotSubmodular {
                        smaller: to_set(smaller),
                        larger: to_set(larger),
                        element: dom[b],
                        gain_smaller,
                        gain_larger,
                    })));
                }
                if smaller == 0 {
                    break;
                }
                smaller = (smaller - 1) & larger;
            }
        }
    }
    Ok(report(None))
}

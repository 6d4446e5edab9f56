//! Value-oracle access to set functions, with query accounting.
//!
//! A [`SetFunction`] is the pure mathematical object. A [`ValueOracle`] wraps
//! one with a query domain and a shared [`Ledger`] that records how many
//! queries were made and the largest set ever queried. Restricting an oracle
//! to a subdomain keeps the ledger, so a player's queries are counted
//! against the run that handed the oracle out.

use std::fmt;
use std::sync::atomic::{AtomicU64, AtomicUsize, Ordering};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Two values closer than this are treated as tied.
pub const VALUE_TOLERANCE: f64 = 1e-9;

/// A set function on the dense ground set `0..ground_size()`.
///
/// Callers pass sets as slices of distinct indices, in any order.
pub trait SetFunction: Send + Sync {
    fn ground_size(&self) -> usize;
    fn value(&self, set: &[usize]) -> f64;
}

impl<F: SetFunction + ?Sized> SetFunction for Arc<F> {
    fn ground_size(&self) -> usize {
        (**self).ground_size()
    }
    fn value(&self, set: &[usize]) -> f64 {
        (**self).value(set)
    }
}

/// Anything that answers value queries on a restricted domain.
pub trait Evaluate {
    fn eval(&self, set: &[usize]) -> Result<f64>;
    fn in_domain(&self, element: usize) -> bool;

    fn check_domain(&self, set: &[usize]) -> Result<()> {
        match set.iter().find(|&&e| !self.in_domain(e)) {
            Some(&element) => Err(Error::Domain { element }),
            None => Ok(()),
        }
    }
}

/// Set function given by a closure.
pub struct FnSetFunction {
    ground_size: usize,
    f: Box<dyn Fn(&[usize]) -> f64 + Send + Sync>,
}

impl FnSetFunction {
    pub fn new(ground_size: usize, f: impl Fn(&[usize]) -> f64 + Send + Sync + 'static) -> Self {
        Self {
            ground_size,
            f: Box::new(f),
        }
    }
}

impl fmt::Debug for FnSetFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FnSetFunction")
            .field("ground_size", &self.ground_size)
            .finish_non_exhaustive()
    }
}

impl SetFunction for FnSetFunction {
    fn ground_size(&self) -> usize {
        self.ground_size
    }
    fn value(&self, set: &[usize]) -> f64 {
        (self.f)(set)
    }
}

/// Additive set function, `f(S) = Σ_{v∈S} w_v`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Modular {
    pub weights: Vec<f64>,
}

impl SetFunction for Modular {
    fn ground_size(&self) -> usize {
        self.weights.len()
    }
    fn value(&self, set: &[usize]) -> f64 {
        set.iter().map(|&v| self.weights[v]).sum()
    }
}

/// Query counters. Safe to update from several threads; a child ledger
/// forwards every record to its parent.
#[derive(Debug)]
pub struct Ledger {
    queries: AtomicU64,
    max_cardinality: AtomicUsize,
    bound: Option<usize>,
    parent: Option<Arc<Ledger>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LedgerSnapshot {
    pub queries: u64,
    pub max_cardinality: usize,
    /// Whether some queried set was larger than the cardinality bound.
    pub infeasible_query: bool,
}

impl Ledger {
    pub fn new(bound: Option<usize>) -> Arc<Self> {
        Arc::new(Self {
            queries: AtomicU64::new(0),
            max_cardinality: AtomicUsize::new(0),
            bound,
            parent: None,
        })
    }

    pub fn child(parent: &Arc<Ledger>) -> Arc<Self> {
        Arc::new(Self {
            queries: AtomicU64::new(0),
            max_cardinality: AtomicUsize::new(0),
            bound: parent.bound,
            parent: Some(Arc::clone(parent)),
        })
    }

    pub fn record(&self, cardinality: usize) {
        self.queries.fetch_add(1, Ordering::Relaxed);
        self.max_cardinality.fetch_max(cardinality, Ordering::Relaxed);
        if let Some(parent) = &self.parent {
            parent.record(cardinality);
        }
    }

    pub fn bound(&self) -> Option<usize> {
        self.bound
    }

    pub fn snapshot(&self) -> LedgerSnapshot {
        let max_cardinality = self.max_cardinality.load(Ordering::Relaxed);
        LedgerSnapshot {
            queries: self.queries.load(Ordering::Relaxed),
            max_cardinality,
            infeasible_query: self.bound.is_some_and(|k| max_cardinality > k),
        }
    }
}

/// A set function behind a query domain and a ledger.
#[derive(Clone)]
pub struct ValueOracle {
    func: Arc<dyn SetFunction>,
    domain: Arc<[bool]>,
    ledger: Arc<Ledger>,
}

impl fmt::Debug for ValueOracle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ValueOracle")
            .field("ground_size", &self.func.ground_size())
            .field("domain_size", &self.domain.iter().filter(|&&b| b).count())
            .field("ledger", &self.ledger.snapshot())
            .finish()
    }
}

impl ValueOracle {
    /// Oracle over the whole ground set. `bound` is the cardinality bound
    /// used to flag infeasible-size queries.
    pub fn new(func: Arc<dyn SetFunction>, bound: Option<usize>) -> Self {
        let n = func.ground_size();
        Self {
            func,
            domain: vec![true; n].into(),
            ledger: Ledger::new(bound),
        }
    }

    pub fn from_fn(func: impl SetFunction + 'static, bound: Option<usize>) -> Self {
        Self::new(Arc::new(func), bound)
    }

    /// New oracle whose domain is `domain ∩ subdomain`, sharing this
    /// oracle's ledger.
    pub fn restrict(&self, subdomain: &[usize]) -> ValueOracle {
        let mut domain = vec![false; self.domain.len()];
        for &e in subdomain {
            if e < domain.len() && self.domain[e] {
                domain[e] = true;
            }
        }
        ValueOracle {
            func: Arc::clone(&self.func),
            domain: domain.into(),
            ledger: Arc::clone(&self.ledger),
        }
    }

    /// Same function and domain, with a fresh ledger that also reports to
    /// this oracle's ledger.
    pub fn with_child_ledger(&self) -> ValueOracle {
        ValueOracle {
            func: Arc::clone(&self.func),
            domain: Arc::clone(&self.domain),
            ledger: Ledger::child(&self.ledger),
        }
    }

    /// Same function and domain, detached onto a fresh ledger.
    pub fn with_fresh_ledger(&self, bound: Option<usize>) -> ValueOracle {
        ValueOracle {
            func: Arc::clone(&self.func),
            domain: Arc::clone(&self.domain),
            ledger: Ledger::new(bound),
        }
    }

    pub fn ground_size(&self) -> usize {
        self.func.ground_size()
    }

    pub fn domain(&self) -> Vec<usize> {
        self.domain
            .iter()
            .enumerate()
            .filter_map(|(e, &inside)| inside.then_some(e))
            .collect()
    }

    pub fn ledger(&self) -> &Arc<Ledger> {
        &self.ledger
    }

    pub fn function(&self) -> &Arc<dyn SetFunction> {
        &self.func
    }

    /// Value of a set without touching the ledger or the domain. For
    /// reporting results, not for use inside player programs.
    pub fn value_unrecorded(&self, set: &[usize]) -> f64 {
        self.func.value(set)
    }
}

impl Evaluate for ValueOracle {
    fn eval(&self, set: &[usize]) -> Result<f64> {
        self.check_domain(set)?;
        debug_assert!(is_distinct(set), "oracle queried with repeated elements: {set:?}");
        self.ledger.record(set.len());
        Ok(self.func.value(set))
    }

    fn in_domain(&self, element: usize) -> bool {
        self.domain.get(element).copied().unwrap_or(false)
    }
}

fn is_distinct(set: &[usize]) -> bool {
    let mut sorted = set.to_vec();
    sorted.sort_unstable();
    sorted.windows(2).all(|w| w[0] != w[1])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn modular(weights: &[f64]) -> ValueOracle {
        ValueOracle::from_fn(
            Modular {
                weights: weights.to_vec(),
            },
            Some(2),
        )
    }

    #[test]
    fn ledger_tracks_count_and_cardinality() {
        let o = modular(&[3.0, 1.0, 2.0]);
        assert_eq!(o.eval(&[]).unwrap(), 0.0);
        assert_eq!(o.eval(&[0, 2]).unwrap(), 5.0);
        let s = o.ledger().snapshot();
        assert_eq!((s.queries, s.max_cardinality, s.infeasible_query), (2, 2, false));
        o.eval(&[0, 1, 2]).unwrap();
        assert!(o.ledger().snapshot().infeasible_query);
    }

    #[test]
    fn restriction_shares_ledger_and_rejects_outside() {
        let o = modular(&[3.0, 1.0, 2.0]);
        let r = o.restrict(&[0, 1]);
        assert_eq!(r.eval(&[1]).unwrap(), 1.0);
        assert_eq!(r.eval(&[2]), Err(Error::Domain { element: 2 }));
        assert_eq!(o.ledger().snapshot().queries, 1);
        // identity restriction keeps values
        let id = o.restrict(&o.domain());
        assert_eq!(id.eval(&[0, 1, 2]).unwrap(), o.eval(&[0, 1, 2]).unwrap());
        // restricting twice intersects
        assert_eq!(r.restrict(&[1, 2]).domain(), vec![1]);
    }

    #[test]
    fn child_ledger_reports_upwards() {
        let o = modular(&[1.0, 1.0, 1.0]);
        let c = o.with_child_ledger();
        c.eval(&[0, 1, 2]).unwrap();
        assert_eq!(c.ledger().snapshot().queries, 1);
        assert_eq!(o.ledger().snapshot().max_cardinality, 3);
        let fresh = o.with_fresh_ledger(None);
        fresh.eval(&[0]).unwrap();
        assert_eq!(o.ledger().snapshot().queries, 1);
    }
}

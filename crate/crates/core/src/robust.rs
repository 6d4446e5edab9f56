//! Deletion-robust maximization: `d + 1` Alice messages computed on
//! successively thinned inputs, and a query that answers from the first
//! message untouched by the deletions.

use rand::seq::index::sample;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::oracle::ValueOracle;
use crate::protocol::{alice_phase, bob_phase, Message, ProtocolKind};
use crate::rng::SeedSplitter;

/// Largest ground set the greedy-damage adversary will search.
pub const GREEDY_DAMAGE_GUARD: usize = 20;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RobustSummary {
    pub protocol: ProtocolKind,
    pub k: usize,
    pub d: usize,
    /// The ground set `V` the summary was built over.
    pub ground: Vec<usize>,
    /// `M_1..M_{d+1}`.
    pub copies: Vec<Message>,
}

impl RobustSummary {
    pub fn stored_elements(&self) -> usize {
        self.copies.iter().map(Message::len).sum()
    }

    pub fn pairwise_disjoint(&self) -> bool {
        let mut all: Vec<usize> = self.copies.iter().flat_map(|m| m.elements.iter().copied()).collect();
        let before = all.len();
        all.sort_unstable();
        all.dedup();
        all.len() == before
    }
}

fn dedup(mut v: Vec<usize>) -> Vec<usize> {
    v.sort_unstable();
    v.dedup();
    v
}

/// Copy `i` runs Alice on `V ∖ (M_1 ∪ … ∪ M_{i−1})` with oracle access to
/// exactly that set.
pub fn build_summary(
    oracle: &ValueOracle,
    ground: &[usize],
    k: usize,
    d: usize,
    protocol: ProtocolKind,
) -> Result<RobustSummary> {
    let inner = protocol.build()?;
    let ground = dedup(ground.to_vec());
    let mut remaining = ground.clone();
    let mut copies = Vec::with_capacity(d + 1);
    for _ in 0..=d {
        let (mut message, _) = alice_phase(inner.as_ref(), oracle, &remaining, &remaining, k)?;
        if !message.aux.is_empty() {
            return Err(Error::Precondition(format!(
                "{} sends {} auxiliary bytes; only plain element lists can be wrapped",
                inner.name(),
                message.aux.len()
            )));
        }
        message.elements = dedup(message.elements);
        remaining.retain(|e| message.elements.binary_search(e).is_err());
        copies.push(message);
    }
    let summary = RobustSummary {
        protocol,
        k,
        d,
        ground,
        copies,
    };
    assert!(summary.pairwise_disjoint(), "summary messages overlap");
    Ok(summary)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RobustAnswer {
    /// One-based index of the copy that answered.
    pub ell: usize,
    pub solution: Vec<usize>,
    pub value: f64,
}

/// Answers from the first copy whose message avoids `deleted`.
pub fn query_summary(summary: &RobustSummary, oracle: &ValueOracle, deleted: &[usize]) -> Result<RobustAnswer> {
    let deleted = dedup(deleted.to_vec());
    if deleted.len() > summary.d {
        return Err(Error::Precondition(format!(
            "{} deletions exceed the budget d = {}",
            deleted.len(),
            summary.d
        )));
    }
    let hit = |e: &usize| deleted.binary_search(e).is_ok();
    let ell = summary
        .copies
        .iter()
        .position(|m| !m.elements.iter().any(hit))
        .expect("pigeonhole: d deletions cannot touch d + 1 disjoint messages");
    let v_b: Vec<usize> = summary.copies[..ell]
        .iter()
        .flat_map(|m| m.elements.iter().copied())
        .filter(|e| !hit(e))
        .collect();
    let message = &summary.copies[ell];
    let mut domain = v_b.clone();
    domain.extend_from_slice(&message.elements);
    let domain = dedup(domain);
    let inner = summary.protocol.build()?;
    let (solution, _) = bob_phase(inner.as_ref(), oracle, &domain, &dedup(v_b), message, summary.k)?;
    debug_assert!(!solution.iter().any(hit));
    let value = oracle.value_unrecorded(&solution);
    Ok(RobustAnswer {
        ell: ell + 1,
        solution,
        value,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Adversary {
    Random,
    GreedyDamage,
}

impl Adversary {
    pub fn from_name(name: &str) -> Result<Self> {
        match name {
            "random" => Ok(Self::Random),
            "greedy" | "greedy-damage" | "greedy_damage" => Ok(Self::GreedyDamage),
            other => Err(Error::Invalid(format!("unknown adversary {other:?}; expected random or greedy"))),
        }
    }
}

/// A deletion set of size `min(d, |V|)`.
pub fn adversary(
    kind: Adversary,
    summary: &RobustSummary,
    oracle: &ValueOracle,
    d: usize,
    seed: u64,
) -> Result<Vec<usize>> {
    let ground = &summary.ground;
    let d = d.min(ground.len());
    match kind {
        Adversary::Random => {
            let mut rng = SeedSplitter::new(seed).rng(0);
            Ok(dedup(sample(&mut rng, ground.len(), d).into_iter().map(|i| ground[i]).collect()))
        }
        Adversary::GreedyDamage => {
            if ground.len() > GREEDY_DAMAGE_GUARD {
                return Err(Error::GuardExceeded {
                    what: "greedy-damage adversary",
                    size: ground.len(),
                    limit: GREEDY_DAMAGE_GUARD,
                });
            }
            let mut deleted: Vec<usize> = Vec::with_capacity(d);
            for _ in 0..d {
                let mut best: Option<(usize, f64)> = None;
                for &e in ground.iter().filter(|e| !deleted.contains(e)) {
                    let mut trial = deleted.clone();
                    trial.push(e);
                    let v = query_summary(summary, oracle, &trial)?.value;
                    if best.map_or(true, |(_, bv)| v < bv - crate::oracle::VALUE_TOLERANCE) {
                        best = Some((e, v));
                    }
                }
                deleted.push(best.expect("ground larger than d").0);
            }
            Ok(dedup(deleted))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coverage::WeightedCoverage;
    use crate::protocol::{run_two_player, TwoPlayerProtocol};
    use crate::ground::{GroundSet, Partition};
    use crate::solve::brute_force_opt;

    fn oracle(sets: Vec<Vec<usize>>, points: usize) -> ValueOracle {
        ValueOracle::from_fn(WeightedCoverage::new(vec![1.0; points], sets).unwrap(), None)
    }

    fn sample_oracle() -> ValueOracle {
        let sets: Vec<Vec<usize>> = (0..10).map(|v| vec![v % 7, (3 * v + 1) % 7, (v * v) % 7]).collect();
        oracle(sets, 7)
    }

    #[test]
    fn zero_budget_is_one_plain_message() {
        let o = sample_oracle();
        let ground: Vec<usize> = (0..10).collect();
        let s = build_summary(&o, &ground, 3, 0, ProtocolKind::P3).unwrap();
        assert_eq!(s.copies.len(), 1);
        let a = query_summary(&s, &o, &[]).unwrap();
        assert_eq!(a.ell, 1);
        // with D = ∅ Bob holds nothing, matching a plain run with V_B = ∅
        let part = Partition::two_player(GroundSet::new(10).unwrap(), ground.clone(), vec![]).unwrap();
        let plain = run_two_player(&crate::protocol::SplitGreedy, &part, &o, 3).unwrap();
        assert_eq!(a.solution, plain.solution);
    }

    #[test]
    fn sizes_and_disjointness() {
        let o = sample_oracle();
        let ground: Vec<usize> = (0..10).collect();
        let s = build_summary(&o, &ground, 3, 2, ProtocolKind::P3).unwrap();
        assert!(s.pairwise_disjoint());
        assert!(s.stored_elements() <= 3 * 6);
        let s1 = build_summary(&o, &ground, 2, 1, ProtocolKind::P1).unwrap();
        assert!(s1.stored_elements() <= 2 * ProtocolKind::P1.build().unwrap().message_bound(2));
    }

    #[test]
    fn deleting_first_message_moves_on() {
        let o = sample_oracle();
        let ground: Vec<usize> = (0..10).collect();
        let s = build_summary(&o, &ground, 1, 3, ProtocolKind::P3).unwrap();
        let m1 = s.copies[0].elements.clone();
        assert!(m1.len() <= 3);
        let a = query_summary(&s, &o, &m1).unwrap();
        assert_eq!(a.ell, 2);
        assert!(a.solution.iter().all(|e| !m1.contains(e)));
        assert!(query_summary(&s, &o, &[0, 1, 2, 3]).is_err());
    }

    #[test]
    fn sieve_state_cannot_be_wrapped() {
        let o = sample_oracle();
        let r = build_summary(&o, &(0..10).collect::<Vec<_>>(), 2, 1, ProtocolKind::Sieve { eps: 0.5 });
        assert!(matches!(r, Err(Error::Precondition(_))));
    }

    #[test]
    fn adversaries() {
        // element 0 alone covers everything
        let o = oracle(vec![vec![0, 1, 2, 3], vec![0], vec![1], vec![2], vec![3]], 4);
        let ground: Vec<usize> = (0..5).collect();
        let s = build_summary(&o, &ground, 1, 1, ProtocolKind::P1).unwrap();
        assert_eq!(adversary(Adversary::GreedyDamage, &s, &o, 1, 0).unwrap(), vec![0]);
        assert!(adversary(Adversary::Random, &s, &o, 0, 5).unwrap().is_empty());
        assert_eq!(
            adversary(Adversary::Random, &s, &o, 1, 5).unwrap(),
            adversary(Adversary::Random, &s, &o, 1, 5).unwrap()
        );
        let big = ValueOracle::from_fn(WeightedCoverage::new(vec![1.0], vec![vec![0]; 21]).unwrap(), None);
        let s = build_summary(&big, &(0..21).collect::<Vec<_>>(), 1, 1, ProtocolKind::P3).unwrap();
        assert!(matches!(
            adversary(Adversary::GreedyDamage, &s, &big, 1, 0),
            Err(Error::GuardExceeded { .. })
        ));
    }

    #[test]
    fn ratio_after_deletions() {
        let o = sample_oracle();
        let ground: Vec<usize> = (0..10).collect();
        for kind in [ProtocolKind::P1, ProtocolKind::P3] {
            let s = build_summary(&o, &ground, 3, 2, kind).unwrap();
            for seed in 0..5 {
                let del = adversary(Adversary::Random, &s, &o, 2, seed).unwrap();
                let a = query_summary(&s, &o, &del).unwrap();
                let rest: Vec<usize> = ground.iter().copied().filter(|e| !del.contains(e)).collect();
                let (_, opt) = brute_force_opt(&o, &rest, 3).unwrap();
                let g = kind.build().unwrap().guarantee();
                assert!(a.value >= g * opt - 1e-9);
            }
        }
    }
}

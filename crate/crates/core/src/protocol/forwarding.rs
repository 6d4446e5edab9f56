use super::{Message, MultiPlayerProtocol, PlayerView, TwoPlayerProtocol};
use crate::error::{Error, Result};
use crate::solve::{brute_force_opt, greedy};

fn pool(view: &PlayerView<'_>, incoming: Option<&Message>) -> Vec<usize> {
    let mut pool: Vec<usize> = incoming.map(|m| m.elements.clone()).unwrap_or_default();
    pool.extend_from_slice(view.private);
    pool.sort_unstable();
    pool.dedup();
    pool
}

/// Every player runs Greedy for `k` rounds over what it received plus its
/// own elements and forwards the result.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct GreedyForwarding;

impl MultiPlayerProtocol for GreedyForwarding {
    fn name(&self) -> String {
        "greedy-forwarding".into()
    }

    fn send(&self, view: &PlayerView<'_>, incoming: Option<&Message>) -> Result<Message> {
        let pool = pool(view, incoming);
        let rounds = view.k.min(pool.len());
        Ok(Message::new(greedy(view.oracle, &pool, rounds)?))
    }

    fn output(&self, view: &PlayerView<'_>, incoming: Option<&Message>) -> Result<Vec<usize>> {
        Ok(self.send(view, incoming)?.elements)
    }
}

/// Every player forwards everything it has seen; the last one solves exactly.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct FullForwarding;

impl MultiPlayerProtocol for FullForwarding {
    fn name(&self) -> String {
        "full-forwarding".into()
    }

    fn send(&self, view: &PlayerView<'_>, incoming: Option<&Message>) -> Result<Message> {
        Ok(Message::new(pool(view, incoming)))
    }

    fn output(&self, view: &PlayerView<'_>, incoming: Option<&Message>) -> Result<Vec<usize>> {
        Ok(brute_force_opt(view.oracle, &pool(view, incoming), view.k)?.0)
    }
}

/// A two-player protocol seen as a chain of two.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoAsMulti<P>(pub P);

impl<P: TwoPlayerProtocol> MultiPlayerProtocol for TwoAsMulti<P> {
    fn name(&self) -> String {
        self.0.name()
    }

    fn send(&self, view: &PlayerView<'_>, incoming: Option<&Message>) -> Result<Message> {
        if view.players != 2 || incoming.is_some() {
            return Err(Error::Precondition("two-player protocol in a longer chain".into()));
        }
        self.0.alice(view.oracle, view.private, view.k)
    }

    fn output(&self, view: &PlayerView<'_>, incoming: Option<&Message>) -> Result<Vec<usize>> {
        let msg = incoming.ok_or_else(|| Error::Precondition("Bob without a message".into()))?;
        self.0.bob(view.oracle, view.private, msg, view.k)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coverage::WeightedCoverage;
    use crate::ground::{GroundSet, Partition};
    use crate::hardness::{harmonic, make_weights, HardnessInstance};
    use crate::oracle::ValueOracle;
    use crate::protocol::{run_p_player, run_two_player, RepeatedSolving};

    #[test]
    fn two_players_match_the_two_player_runtime() {
        let sets = vec![vec![0], vec![1, 2], vec![2, 3], vec![0, 3], vec![4], vec![1]];
        let o = ValueOracle::from_fn(WeightedCoverage::new(vec![1.0; 5], sets).unwrap(), None);
        let part = Partition::two_player(GroundSet::new(6).unwrap(), vec![0, 1, 2], vec![3, 4, 5]).unwrap();
        let a = run_two_player(&RepeatedSolving::exact(), &part, &o, 2).unwrap();
        let b = run_p_player(&TwoAsMulti(RepeatedSolving::exact()), &part, &o, 2).unwrap();
        assert_eq!(a.solution, b.solution);
        assert_eq!(a.messages, b.messages);
    }

    #[test]
    fn empty_middle_players_pass_through() {
        let sets: Vec<Vec<usize>> = (0..5).map(|v| vec![v]).collect();
        let o = ValueOracle::from_fn(WeightedCoverage::new(vec![1.0; 5], sets).unwrap(), None);
        let blocks = vec![vec![0, 1], vec![2], vec![3], vec![4]];
        let private = vec![vec![0, 1], vec![], vec![], vec![4]];
        let part = Partition::new(GroundSet::new(5).unwrap(), blocks, private).unwrap();
        let t = run_p_player(&FullForwarding, &part, &o, 3).unwrap();
        assert_eq!(t.messages[0], t.messages[1]);
        assert_eq!(t.messages[1], t.messages[2]);
        assert_eq!(t.solution, vec![0, 1, 4]);
    }

    #[test]
    fn greedy_forwarding_on_hard_instance() {
        let inst = HardnessInstance::from_offsets(make_weights(3).unwrap(), 3, &[2, 2, 2]).unwrap();
        let part = inst.partition();
        let o = ValueOracle::from_fn(inst.clone(), Some(3));
        let t = run_p_player(&GreedyForwarding, &part, &o, 3).unwrap();
        assert_eq!(t.ledgers.len(), 3);
        if t.solution.iter().all(|e| !inst.hidden().contains(e)) {
            assert!(t.value <= 3.0 + harmonic(3).powi(2) + 1e-9);
        }
    }

    #[test]
    fn players_cannot_look_ahead() {
        struct LookAhead;
        impl MultiPlayerProtocol for LookAhead {
            fn name(&self) -> String {
                "look-ahead".into()
            }
            fn send(&self, view: &PlayerView<'_>, _: Option<&Message>) -> Result<Message> {
                use crate::oracle::Evaluate;
                view.oracle.eval(&[5])?;
                Ok(Message::default())
            }
            fn output(&self, _: &PlayerView<'_>, _: Option<&Message>) -> Result<Vec<usize>> {
                Ok(vec![])
            }
        }
        let sets: Vec<Vec<usize>> = (0..6).map(|v| vec![v]).collect();
        let o = ValueOracle::from_fn(WeightedCoverage::new(vec![1.0; 6], sets).unwrap(), None);
        let part = Partition::full(GroundSet::new(6).unwrap(), vec![vec![0, 1], vec![2, 3], vec![4, 5]]).unwrap();
        assert!(matches!(
            run_p_player(&LookAhead, &part, &o, 2),
            Err(Error::AccessViolation { player: 0, .. })
        ));
    }
}

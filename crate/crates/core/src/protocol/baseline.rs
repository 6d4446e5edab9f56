use super::{Message, TwoPlayerProtocol};
use crate::error::Result;
use crate::oracle::{Evaluate, ValueOracle, VALUE_TOLERANCE};
use crate::solve::brute_force_opt;

/// Alice sends her best feasible set; Bob keeps the better of it and his own
/// best feasible set. Half of the optimum, never more in the worst case.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct BaselineHalf;

impl TwoPlayerProtocol for BaselineHalf {
    fn name(&self) -> String {
        "half".into()
    }

    fn alice(&self, oracle: &ValueOracle, v_a: &[usize], k: usize) -> Result<Message> {
        Ok(Message::new(brute_force_opt(oracle, v_a, k)?.0))
    }

    fn bob(&self, oracle: &ValueOracle, v_b: &[usize], message: &Message, k: usize) -> Result<Vec<usize>> {
        let (s_b, value_b) = brute_force_opt(oracle, v_b, k)?;
        let value_a = oracle.eval(&message.elements)?;
        // Bob's own set wins ties
        Ok(if value_a > value_b + VALUE_TOLERANCE {
            message.elements.clone()
        } else {
            s_b
        })
    }

    fn message_bound(&self, k: usize) -> usize {
        k
    }

    fn guarantee(&self) -> f64 {
        0.5
    }
}

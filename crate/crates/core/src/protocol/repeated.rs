use super::{Message, TwoPlayerProtocol};
use crate::error::{Error, Result};
use crate::oracle::ValueOracle;
use crate::solve::{brute_force_by_size, brute_force_opt, ENUMERATION_GUARD};

/// Alice solves her side exactly for several size bounds above and below `k`
/// and sends the union of the optimal sets; Bob solves exactly over what he
/// received plus his own elements.
///
/// Without grouping the bounds are `0, 1, …, 2k`. With grouping parameter
/// `ε` they are [`grouped_indices`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RepeatedSolving {
    eps: Option<f64>,
}

impl RepeatedSolving {
    pub fn exact() -> Self {
        Self { eps: None }
    }

    pub fn grouped(eps: f64) -> Result<Self> {
        if !(eps > 0.0 && eps <= 1.0) {
            return Err(Error::Precondition(format!("grouping parameter {eps} must lie in (0, 1]")));
        }
        Ok(Self { eps: Some(eps) })
    }

    pub fn eps(&self) -> Option<f64> {
        self.eps
    }

    pub fn sizes(&self, k: usize) -> Vec<usize> {
        match self.eps {
            None => (0..=2 * k).collect(),
            Some(eps) => grouped_indices(k, eps),
        }
    }
}

/// `{0} ∪ {⌊(1+ε)^j⌋, 2⌊(1+ε)^j⌋ : (1+ε)^j ≤ k}`, sorted and deduplicated.
/// Powers are built by repeated multiplication rather than logarithms so the
/// last power is never lost to rounding.
pub fn grouped_indices(k: usize, eps: f64) -> Vec<usize> {
    let mut out = vec![0];
    let mut power = 1.0f64;
    while power <= k as f64 + 1e-9 {
        let base = (power + 1e-9).floor() as usize;
        out.push(base);
        out.push(2 * base);
        power *= 1.0 + eps;
    }
    out.sort_unstable();
    out.dedup();
    out
}

impl TwoPlayerProtocol for RepeatedSolving {
    fn name(&self) -> String {
        match self.eps {
            None => "p1".into(),
            Some(eps) => format!("p1g(eps={eps})"),
        }
    }

    fn alice(&self, oracle: &ValueOracle, v_a: &[usize], k: usize) -> Result<Message> {
        let sizes = self.sizes(k);
        let top = *sizes.last().expect("size 0 is always present");
        let best = brute_force_by_size(oracle, v_a, top, ENUMERATION_GUARD)?;
        let mut elements: Vec<usize> = Vec::new();
        let mut raw_len = 0;
        for &i in &sizes {
            let (set, _) = &best[i];
            raw_len += set.len();
            for &e in set {
                if !elements.contains(&e) {
                    elements.push(e);
                }
            }
        }
        Ok(Message {
            elements,
            aux: Vec::new(),
            raw_len,
        })
    }

    fn bob(&self, oracle: &ValueOracle, v_b: &[usize], message: &Message, k: usize) -> Result<Vec<usize>> {
        let mut pool = v_b.to_vec();
        pool.extend_from_slice(&message.elements);
        Ok(brute_force_opt(oracle, &pool, k)?.0)
    }

    fn message_bound(&self, k: usize) -> usize {
        match self.eps {
            None => (2 * k + 1) * 2 * k,
            Some(eps) => {
                let logs = if k > 1 { (k as f64).ln() / eps.ln_1p() } else { 0.0 };
                (2.0 * k as f64 * (3.0 + 2.0 * logs)).floor() as usize
            }
        }
    }

    fn guarantee(&self) -> f64 {
        2.0 / 3.0 - self.eps.unwrap_or(0.0)
    }
}

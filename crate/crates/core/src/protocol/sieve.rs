use serde::{Deserialize, Serialize};

use super::{Message, MultiPlayerProtocol, PlayerView, TwoPlayerProtocol};
use crate::error::{Error, Result};
use crate::oracle::{Evaluate, LedgerSnapshot, ValueOracle, VALUE_TOLERANCE};

/// A single-pass algorithm whose memory is a [`Message`], so that handing the
/// memory to the next player is the whole protocol.
pub trait StreamAlgorithm: Send + Sync {
    fn name(&self) -> String;

    fn start(&self, k: usize) -> Message;

    fn process(&self, oracle: &ValueOracle, state: Message, element: usize, k: usize) -> Result<Message>;

    fn finish(&self, oracle: &ValueOracle, state: &Message, k: usize) -> Result<Vec<usize>>;
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StreamRun {
    pub solution: Vec<usize>,
    pub value: f64,
    /// Largest memory state seen, in elements and in bytes.
    pub peak_elements: usize,
    pub peak_bytes: usize,
    pub ledger: LedgerSnapshot,
}

/// Feeds `order` through the algorithm one element at a time.
pub fn run_stream<A: StreamAlgorithm + ?Sized>(
    alg: &A,
    oracle: &ValueOracle,
    order: &[usize],
    k: usize,
) -> Result<StreamRun> {
    let o = oracle.with_child_ledger();
    let mut state = alg.start(k);
    let mut peak_elements = state.len();
    let mut peak_bytes = state.byte_size();
    for &e in order {
        state = alg.process(&o, state, e, k)?;
        peak_elements = peak_elements.max(state.len());
        peak_bytes = peak_bytes.max(state.byte_size());
    }
    let mut solution = alg.finish(&o, &state, k)?;
    solution.sort_unstable();
    Ok(StreamRun {
        value: oracle.value_unrecorded(&solution),
        solution,
        peak_elements,
        peak_bytes,
        ledger: o.ledger().snapshot(),
    })
}

/// A stream algorithm run by `p` players in turn, each feeding its own
/// elements and passing the memory on.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StreamPlayers<A> {
    alg: A,
}

pub fn stream_to_players<A: StreamAlgorithm>(alg: A) -> StreamPlayers<A> {
    StreamPlayers { alg }
}

impl<A: StreamAlgorithm> StreamPlayers<A> {
    fn feed(&self, view: &PlayerView<'_>, incoming: Option<&Message>) -> Result<Message> {
        let mut state = incoming.cloned().unwrap_or_else(|| self.alg.start(view.k));
        for &e in view.private {
            state = self.alg.process(view.oracle, state, e, view.k)?;
        }
        Ok(state)
    }
}

impl<A: StreamAlgorithm> MultiPlayerProtocol for StreamPlayers<A> {
    fn name(&self) -> String {
        format!("stream:{}", self.alg.name())
    }

    fn send(&self, view: &PlayerView<'_>, incoming: Option<&Message>) -> Result<Message> {
        self.feed(view, incoming)
    }

    fn output(&self, view: &PlayerView<'_>, incoming: Option<&Message>) -> Result<Vec<usize>> {
        let state = self.feed(view, incoming)?;
        self.alg.finish(view.oracle, &state, view.k)
    }
}

/// Threshold sieve: one candidate set per guess `τ = (1+ε)^i` of the optimum
/// with `m ≤ τ ≤ 2km`, `m` the best singleton seen. An element joins the
/// set for `τ` when its gain reaches `(τ/2 − f(S))/(k − |S|)`. Only sets of
/// size at most `k` are ever queried.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SieveStream {
    eps: f64,
}

#[derive(Debug, Clone, PartialEq)]
struct SieveState {
    m: f64,
    /// `(exponent, set)`, exponents increasing
    sieves: Vec<(i32, Vec<usize>)>,
}

impl SieveState {
    fn encode(&self) -> Message {
        let mut aux = Vec::with_capacity(12 + 8 * self.sieves.len());
        aux.extend_from_slice(&self.m.to_le_bytes());
        aux.extend_from_slice(&(self.sieves.len() as u32).to_le_bytes());
        let mut elements = Vec::new();
        for (exp, set) in &self.sieves {
            aux.extend_from_slice(&exp.to_le_bytes());
            aux.extend_from_slice(&(set.len() as u32).to_le_bytes());
            elements.extend_from_slice(set);
        }
        let raw_len = elements.len();
        Message { elements, aux, raw_len }
    }

    fn decode(msg: &Message) -> Result<Self> {
        let bad = || Error::Invalid("malformed sieve state".into());
        let aux = &msg.aux;
        if aux.len() < 12 {
            return Err(bad());
        }
        let m = f64::from_le_bytes(aux[0..8].try_into().expect("8 bytes"));
        let count = u32::from_le_bytes(aux[8..12].try_into().expect("4 bytes")) as usize;
        if aux.len() != 12 + 8 * count {
            return Err(bad());
        }
        let mut sieves = Vec::with_capacity(count);
        let mut offset = 0;
        for c in 0..count {
            let at = 12 + 8 * c;
            let exp = i32::from_le_bytes(aux[at..at + 4].try_into().expect("4 bytes"));
            let len = u32::from_le_bytes(aux[at + 4..at + 8].try_into().expect("4 bytes")) as usize;
            let set = msg.elements.get(offset..offset + len).ok_or_else(bad)?.to_vec();
            offset += len;
            sieves.push((exp, set));
        }
        if offset != msg.elements.len() {
            return Err(bad());
        }
        Ok(Self { m, sieves })
    }
}

impl SieveStream {
    pub fn new(eps: f64) -> Result<Self> {
        if !(eps > 0.0 && eps <= 1.0) {
            return Err(Error::Precondition(format!("sieve parameter {eps} must lie in (0, 1]")));
        }
        Ok(Self { eps })
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    fn exponent_range(&self, m: f64, k: usize) -> (i32, i32) {
        let base = self.eps.ln_1p();
        let lo = (m.ln() / base - 1e-9).ceil() as i32;
        let hi = ((2.0 * k as f64 * m).ln() / base + 1e-9).floor() as i32;
        (lo, hi)
    }

    fn feed_all(&self, oracle: &ValueOracle, mut state: Message, elements: &[usize], k: usize) -> Result<Message> {
        for &e in elements {
            state = self.process(oracle, state, e, k)?;
        }
        Ok(state)
    }
}

impl StreamAlgorithm for SieveStream {
    fn name(&self) -> String {
        format!("sieve(eps={})", self.eps)
    }

    fn start(&self, _k: usize) -> Message {
        SieveState {
            m: 0.0,
            sieves: Vec::new(),
        }
        .encode()
    }

    fn process(&self, oracle: &ValueOracle, state: Message, element: usize, k: usize) -> Result<Message> {
        let mut st = SieveState::decode(&state)?;
        let base_value = oracle.eval(&[])?;
        let single = oracle.eval(&[element])? - base_value;
        if single > st.m + VALUE_TOLERANCE {
            st.m = single;
            let (lo, hi) = self.exponent_range(st.m, k);
            let mut sieves: Vec<(i32, Vec<usize>)> = Vec::with_capacity((hi - lo + 1).max(0) as usize);
            for exp in lo..=hi {
                let kept = st.sieves.iter().find(|(e, _)| *e == exp).map(|(_, s)| s.clone());
                sieves.push((exp, kept.unwrap_or_default()));
            }
            st.sieves = sieves;
        }
        for (exp, set) in st.sieves.iter_mut() {
            if set.len() >= k || set.contains(&element) {
                continue;
            }
            let tau = (1.0 + self.eps).powi(*exp);
            let current = oracle.eval(set)? - base_value;
            set.push(element);
            let gain = oracle.eval(set)? - base_value - current;
            let needed = (tau / 2.0 - current) / (k - (set.len() - 1)) as f64;
            if gain < needed - VALUE_TOLERANCE {
                set.pop();
            }
        }
        Ok(st.encode())
    }

    fn finish(&self, oracle: &ValueOracle, state: &Message, _k: usize) -> Result<Vec<usize>> {
        let st = SieveState::decode(state)?;
        let mut best: Option<(f64, &Vec<usize>)> = None;
        for (_, set) in &st.sieves {
            let v = oracle.eval(set)?;
            if best.is_none_or(|(bv, _)| v > bv + VALUE_TOLERANCE) {
                best = Some((v, set));
            }
        }
        Ok(best.map(|(_, s)| s.clone()).unwrap_or_default())
    }
}

impl TwoPlayerProtocol for SieveStream {
    fn name(&self) -> String {
        StreamAlgorithm::name(self)
    }

    fn alice(&self, oracle: &ValueOracle, v_a: &[usize], k: usize) -> Result<Message> {
        self.feed_all(oracle, self.start(k), v_a, k)
    }

    fn bob(&self, oracle: &ValueOracle, v_b: &[usize], message: &Message, k: usize) -> Result<Vec<usize>> {
        let state = self.feed_all(oracle, message.clone(), v_b, k)?;
        self.finish(oracle, &state, k)
    }

    /// At most `k` elements per threshold, and at most
    /// `⌊ln(2k)/ln(1+ε)⌋ + 1` thresholds alive at once.
    fn message_bound(&self, k: usize) -> usize {
        k * (((2.0 * k as f64).ln() / self.eps.ln_1p() + 1e-9).floor() as usize + 1)
    }

    fn guarantee(&self) -> f64 {
        0.5 - self.eps
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coverage::WeightedCoverage;
    use crate::ground::{GroundSet, Partition};
    use crate::protocol::{run_p_player, run_two_player};

    fn instance() -> ValueOracle {
        let sets = vec![vec![0, 1], vec![1, 2], vec![3], vec![0, 1, 2], vec![4, 5], vec![3, 4]];
        ValueOracle::from_fn(WeightedCoverage::new(vec![1.0; 6], sets).unwrap(), Some(2))
    }

    #[test]
    fn state_round_trips() {
        let st = SieveState {
            m: 2.5,
            sieves: vec![(1, vec![3, 4]), (2, vec![]), (3, vec![7])],
        };
        let msg = st.encode();
        assert_eq!(msg.elements, vec![3, 4, 7]);
        assert_eq!(SieveState::decode(&msg).unwrap(), st);
        let mut broken = msg.clone();
        broken.elements.pop();
        assert!(SieveState::decode(&broken).is_err());
    }

    #[test]
    fn only_feasible_queries() {
        let o = instance();
        let sieve = SieveStream::new(0.1).unwrap();
        let run = run_stream(&sieve, &o, &[0, 1, 2, 3, 4, 5], 2).unwrap();
        assert!(run.ledger.max_cardinality <= 2 && !run.ledger.infeasible_query);
        assert!(run.solution.len() <= 2);
        assert!(run.value >= 2.0);
    }

    #[test]
    fn stream_equals_players() {
        let o = instance();
        let sieve = SieveStream::new(0.2).unwrap();
        let order: Vec<usize> = (0..6).collect();
        let run = run_stream(&sieve, &o, &order, 2).unwrap();
        let part = Partition::full(GroundSet::new(6).unwrap(), vec![vec![0, 1], vec![2, 3], vec![4, 5]]).unwrap();
        let t = run_p_player(&stream_to_players(sieve), &part, &o, 2).unwrap();
        assert_eq!(t.solution, run.solution);
        assert!(t.message_elements() <= run.peak_elements);
        assert!(t.message_bytes() <= run.peak_bytes);
        let two = Partition::two_player(GroundSet::new(6).unwrap(), vec![0, 1, 2], vec![3, 4, 5]).unwrap();
        let t2 = run_two_player(&sieve, &two, &o, 2).unwrap();
        assert_eq!(t2.solution, run.solution);
        assert!(!t2.infeasible_query());
        assert!(t2.message_elements() <= TwoPlayerProtocol::message_bound(&sieve, 2));
    }

    #[test]
    fn order_matters_but_both_are_feasible() {
        let sets = vec![vec![0, 2, 3, 4], vec![0, 2, 3, 4], vec![2], vec![1, 3]];
        let o = ValueOracle::from_fn(WeightedCoverage::new(vec![1.0; 5], sets).unwrap(), Some(2));
        let sieve = SieveStream::new(0.5).unwrap();
        let a = run_stream(&sieve, &o, &[0, 1, 2, 3], 2).unwrap();
        let b = run_stream(&sieve, &o, &[3, 2, 1, 0], 2).unwrap();
        for r in [&a, &b] {
            assert!(r.solution.len() <= 2 && !r.ledger.infeasible_query);
        }
        assert_eq!(a.value, 4.0);
        assert_eq!(b.value, 5.0);
    }
}

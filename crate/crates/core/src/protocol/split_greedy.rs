use serde::{Deserialize, Serialize};

use super::{Message, TwoPlayerProtocol};
use crate::error::{Error, Result};
use crate::nlp::{bound_greedy, bound_x, bound_y};
use crate::oracle::{Evaluate, ValueOracle, VALUE_TOLERANCE};
use crate::solve::{brute_force_opt, greedy, greedy_from};

/// An oracle extended by zero-value dummy elements `N, N+1, …`. Dummies are
/// dropped before a set reaches the wrapped oracle.
pub struct PaddedOracle<'a> {
    inner: &'a ValueOracle,
    real: usize,
    dummies: usize,
}

impl<'a> PaddedOracle<'a> {
    pub fn new(inner: &'a ValueOracle, dummies: usize) -> Self {
        Self {
            inner,
            real: inner.ground_size(),
            dummies,
        }
    }

    pub fn is_dummy(&self, e: usize) -> bool {
        e >= self.real
    }

    /// The `i`-th dummy element.
    pub fn dummy(&self, i: usize) -> usize {
        debug_assert!(i < self.dummies);
        self.real + i
    }

    pub fn strip(&self, set: &[usize]) -> Vec<usize> {
        set.iter().copied().filter(|&e| !self.is_dummy(e)).collect()
    }
}

impl Evaluate for PaddedOracle<'_> {
    fn eval(&self, set: &[usize]) -> Result<f64> {
        self.check_domain(set)?;
        self.inner.eval(&self.strip(set))
    }

    fn in_domain(&self, e: usize) -> bool {
        if self.is_dummy(e) {
            e < self.real + self.dummies
        } else {
            self.inner.in_domain(e)
        }
    }
}

/// The polynomial-time protocol: Alice runs Greedy for `2k` steps on her
/// side and sends the picks in order; Bob tries, for every split `p`, both
/// "Alice's first `p` picks completed greedily from `V_B`" and "a greedy
/// `k−p` from `V_B` completed greedily by `p` of Alice's picks", and keeps
/// the best.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SplitGreedy;

/// Bob's candidate sets with dummies removed, `X_0..X_k` and `Y_0..Y_k`.
#[derive(Debug, Clone, PartialEq)]
pub struct SplitCandidates {
    pub x: Vec<(Vec<usize>, f64)>,
    pub y: Vec<(Vec<usize>, f64)>,
}

impl SplitCandidates {
    /// Best candidate; the earliest in `X_0, …, X_k, Y_0, …, Y_k` on ties.
    pub fn best(&self) -> &(Vec<usize>, f64) {
        let mut best = &self.x[0];
        for c in self.x.iter().chain(&self.y) {
            if c.1 > best.1 + VALUE_TOLERANCE {
                best = c;
            }
        }
        best
    }
}

impl SplitGreedy {
    pub fn candidates(oracle: &ValueOracle, v_b: &[usize], a_list: &[usize], k: usize) -> Result<SplitCandidates> {
        let pad_a = (2 * k).saturating_sub(a_list.len());
        let pad_b = k.saturating_sub(v_b.len());
        let padded = PaddedOracle::new(oracle, pad_a + pad_b);
        let mut a: Vec<usize> = a_list.to_vec();
        a.extend((0..pad_a).map(|i| padded.dummy(i)));
        let mut b: Vec<usize> = v_b.to_vec();
        b.extend((0..pad_b).map(|i| padded.dummy(pad_a + i)));

        let mut x = Vec::with_capacity(k + 1);
        let mut y = Vec::with_capacity(k + 1);
        for p in 0..=k {
            let mut xp = a[..p].to_vec();
            xp.extend(greedy_from(&padded, &a[..p], &b, k - p)?);
            let vx = padded.eval(&xp)?;
            x.push((padded.strip(&xp), vx));

            let mut yp = greedy(&padded, &b, k - p)?;
            let extra = greedy_from(&padded, &yp, &a, p)?;
            yp.extend(extra);
            let vy = padded.eval(&yp)?;
            y.push((padded.strip(&yp), vy));
        }
        Ok(SplitCandidates { x, y })
    }
}

impl TwoPlayerProtocol for SplitGreedy {
    fn name(&self) -> String {
        "p3".into()
    }

    fn alice(&self, oracle: &ValueOracle, v_a: &[usize], k: usize) -> Result<Message> {
        let pad = (2 * k).saturating_sub(v_a.len());
        let padded = PaddedOracle::new(oracle, pad);
        let mut pool = v_a.to_vec();
        pool.extend((0..pad).map(|i| padded.dummy(i)));
        let picks = greedy(&padded, &pool, 2 * k)?;
        // dummies have zero gain and the largest indices, so they come last
        Ok(Message::new(padded.strip(&picks)))
    }

    fn bob(&self, oracle: &ValueOracle, v_b: &[usize], message: &Message, k: usize) -> Result<Vec<usize>> {
        Ok(Self::candidates(oracle, v_b, &message.elements, k)?.best().0.clone())
    }

    fn message_bound(&self, k: usize) -> usize {
        2 * k
    }

    fn guarantee(&self) -> f64 {
        0.514
    }
}

/// The quantities of the 0.514 analysis measured on one run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Protocol3Analysis {
    pub optimum: Vec<usize>,
    pub k_a: usize,
    pub f_o: f64,
    /// `f(O ∩ V_A)`
    pub f_oa: f64,
    /// `f(G_A)` with `G_A` Alice's first `k_A` picks
    pub f_ga: f64,
    /// `f(O ∩ V_A | G_A) / f(O ∩ V_A)`, or 0 when `f(O ∩ V_A) = 0`
    pub delta: f64,
    pub x_value: f64,
    pub y_value: f64,
    pub greedy_bound: f64,
    pub x_bound: f64,
    pub y_bound: f64,
    pub protocol_value: f64,
}

impl Protocol3Analysis {
    fn slack(&self) -> f64 {
        VALUE_TOLERANCE * self.f_o.max(1.0)
    }

    pub fn greedy_bound_holds(&self) -> bool {
        self.f_ga >= self.greedy_bound - self.slack()
    }

    pub fn x_bound_holds(&self) -> bool {
        self.x_value >= self.x_bound - self.slack()
    }

    pub fn y_bound_holds(&self) -> bool {
        self.y_value >= self.y_bound - self.slack()
    }

    pub fn holds(&self) -> bool {
        self.greedy_bound_holds() && self.x_bound_holds() && self.y_bound_holds()
    }
}

/// Replays the protocol on `V_A`, `V_B` next to an exact optimum `O`.
pub fn protocol3_analysis(oracle: &ValueOracle, v_a: &[usize], v_b: &[usize], k: usize) -> Result<Protocol3Analysis> {
    if v_a.iter().any(|e| v_b.contains(e)) {
        return Err(Error::Precondition("V_A and V_B overlap".into()));
    }
    let o = oracle.with_fresh_ledger(None);
    let mut all = v_a.to_vec();
    all.extend_from_slice(v_b);
    let (optimum, f_o) = brute_force_opt(&o, &all, k)?;
    let o_a: Vec<usize> = optimum.iter().copied().filter(|e| v_a.contains(e)).collect();
    let k_a = o_a.len();

    let a_list = SplitGreedy.alice(&o, v_a, k)?.elements;
    let g_a = &a_list[..k_a];
    let f_oa = o.eval(&o_a)?;
    let f_ga = o.eval(g_a)?;
    let mut union = g_a.to_vec();
    union.extend(o_a.iter().filter(|e| !g_a.contains(e)));
    let delta = if f_oa > 0.0 {
        ((o.eval(&union)? - f_ga) / f_oa).clamp(0.0, 1.0)
    } else {
        0.0
    };

    let cands = SplitGreedy::candidates(&o, v_b, &a_list, k)?;
    Ok(Protocol3Analysis {
        k_a,
        f_o,
        f_oa,
        f_ga,
        delta,
        x_value: cands.x[k_a].1,
        y_value: cands.y[k_a].1,
        greedy_bound: bound_greedy(delta, f_oa),
        x_bound: bound_x(delta, f_oa, f_o, f_ga),
        y_bound: bound_y(delta, f_oa, f_o),
        protocol_value: cands.best().1,
        optimum,
    })
}

//! INDEX and CHAIN instances and the simulators that decide them by running a
//! Max-Card-k protocol on a hard instance built from the input.
//!
//! Indices are zero-based throughout: `t` in `0..n`.

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::coverage::IndexHardness;
use crate::error::{Error, Result};
use crate::ground::{GroundSet, Partition};
use crate::hardness::{harmonic, make_weights, HardnessInstance};
use crate::oracle::{ValueOracle, VALUE_TOLERANCE};
use crate::protocol::{run_p_player_views, run_two_player_views, AccessPolicy, MultiPlayerProtocol, Transcript, TwoPlayerProtocol};
use crate::rng::SeedSplitter;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndexInstance {
    pub x: Vec<bool>,
    pub t: usize,
}

impl IndexInstance {
    pub fn new(x: Vec<bool>, t: usize) -> Result<Self> {
        if x.is_empty() || t >= x.len() {
            return Err(Error::Invalid(format!("index {t} out of range for a string of length {}", x.len())));
        }
        Ok(Self { x, t })
    }

    pub fn n(&self) -> usize {
        self.x.len()
    }

    pub fn answer(&self) -> bool {
        self.x[self.t]
    }
}

/// `x[i]` belongs to player `i`, `t[i]` to player `i + 1`; the promise is
/// `x[i][t[i]] == case` for every `i`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainInstance {
    pub p: usize,
    pub n: usize,
    pub x: Vec<Vec<bool>>,
    pub t: Vec<usize>,
    pub case: bool,
}

impl ChainInstance {
    pub fn new(x: Vec<Vec<bool>>, t: Vec<usize>, case: bool) -> Result<Self> {
        let p = x.len() + 1;
        let n = x.first().map_or(0, Vec::len);
        if n == 0 || t.len() != x.len() {
            return Err(Error::Invalid("chain needs p ≥ 2, n ≥ 1 and one index per string".into()));
        }
        for (i, (xi, &ti)) in x.iter().zip(&t).enumerate() {
            if xi.len() != n || ti >= n {
                return Err(Error::Invalid(format!("chain pair {i} has the wrong shape")));
            }
            if xi[ti] != case {
                return Err(Error::Invalid(format!("chain pair {i} breaks the promise")));
            }
        }
        Ok(Self { p, n, x, t, case })
    }
}

fn sample_pair<R: Rng>(rng: &mut R, n: usize, bit: bool) -> (Vec<bool>, usize) {
    let t = rng.gen_range(0..n);
    let mut x: Vec<bool> = (0..n).map(|_| rng.gen()).collect();
    x[t] = bit;
    (x, t)
}

/// Uniform over strings with `x_t = bit`.
pub fn sample_index(n: usize, bit: bool, seed: u64) -> Result<IndexInstance> {
    if n == 0 {
        return Err(Error::Invalid("n must be at least 1".into()));
    }
    let (x, t) = sample_pair(&mut SeedSplitter::new(seed).rng(0), n, bit);
    IndexInstance::new(x, t)
}

/// Each pair `(x[i], t[i])` uniform among pairs with `x[i][t[i]] = case`.
pub fn sample_chain(p: usize, n: usize, case: bool, seed: u64) -> Result<ChainInstance> {
    if p < 2 || n == 0 {
        return Err(Error::Invalid(format!("chain needs p ≥ 2 and n ≥ 1, got p={p}, n={n}")));
    }
    let mut rng = SeedSplitter::new(seed).rng(0);
    let (x, t) = (0..p - 1).map(|_| sample_pair(&mut rng, n, case)).unzip();
    ChainInstance::new(x, t, case)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IndexOutcome {
    pub decision: bool,
    pub threshold: f64,
    pub ground_size: usize,
    pub transcript: Transcript,
}

/// Decides INDEX with a two-player protocol for Max-Card-k.
pub fn reduce_index_to_maxcard<P: TwoPlayerProtocol + ?Sized>(
    inst: &IndexInstance,
    k: usize,
    inner: &P,
) -> Result<IndexOutcome> {
    if k < 2 {
        return Err(Error::Precondition("the index reduction needs k ≥ 2".into()));
    }
    let truth = IndexHardness::new(inst.n(), k, inst.t)?;
    // every f_i agrees on Alice's block, so she can use any of them
    let alice_fn = truth.with_index(0)?;
    let mut v_a: Vec<usize> = Vec::new();
    for (a, &bit) in inst.x.iter().enumerate() {
        if bit {
            v_a.extend(truth.copies_of(a));
        }
    }
    let ground = GroundSet::new(truth.w() + 1)?;
    let partition = Partition::new(
        ground,
        vec![truth.alice_block(), truth.bob_block()],
        vec![v_a, vec![truth.w()]],
    )?;
    let threshold = truth.threshold();
    let alice_view = ValueOracle::from_fn(alice_fn, Some(k));
    let bob_view = ValueOracle::from_fn(truth, Some(k));
    let transcript = run_two_player_views(inner, &alice_view, &bob_view, &partition, k, AccessPolicy::Model)?;
    Ok(IndexOutcome {
        decision: transcript.value > threshold + VALUE_TOLERANCE,
        threshold,
        ground_size: partition.ground().size(),
        transcript,
    })
}

pub fn chain_threshold(p: usize) -> f64 {
    let h = harmonic(p);
    p as f64 + h * h
}

/// Bits spent forwarding the indices `t` alongside the inner messages.
pub fn index_bits(p: usize, n: usize) -> usize {
    p * (usize::BITS - (n.max(1) - 1).leading_zeros()) as usize
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChainOutcome {
    pub decision: bool,
    pub threshold: f64,
    pub ground_size: usize,
    /// Largest inner message in bits plus the index overhead.
    pub message_bits: usize,
    pub transcript: Transcript,
}

/// Decides CHAIN with a p-player protocol for Max-Card-p.
pub fn reduce_chain_to_maxcard<P: MultiPlayerProtocol + ?Sized>(inst: &ChainInstance, inner: &P) -> Result<ChainOutcome> {
    let (p, n) = (inst.p, inst.n);
    let weights = make_weights(p)?;
    // player i knows t[0..i], hence o_1..o_i; later hidden elements are
    // pinned to the first element of their block
    let offsets_for = |known: usize| -> Vec<usize> { (0..p).map(|j| if j < known { inst.t[j] } else { 0 }).collect() };
    let truth = HardnessInstance::from_offsets(weights.clone(), n, &offsets_for(p - 1))?;
    let partition = {
        let mut private: Vec<Vec<usize>> = inst
            .x
            .iter()
            .enumerate()
            .map(|(i, xi)| (0..n).filter(|&j| xi[j]).map(|j| i * n + j).collect())
            .collect();
        private.push(truth.block(p - 1));
        let blocks = (0..p).map(|j| truth.block(j)).collect();
        Partition::new(GroundSet::new(n * p)?, blocks, private)?
    };
    let views = (0..p)
        .map(|i| {
            let inst = HardnessInstance::from_offsets(weights.clone(), n, &offsets_for(i))?;
            Ok(ValueOracle::from_fn(inst, Some(p)))
        })
        .collect::<Result<Vec<_>>>()?;
    let transcript = run_p_player_views(inner, &views, &partition, p)?;
    let threshold = chain_threshold(p);
    Ok(ChainOutcome {
        decision: transcript.value > threshold + VALUE_TOLERANCE,
        threshold,
        ground_size: partition.ground().size(),
        message_bits: 8 * transcript.message_bytes() + index_bits(p, n),
        transcript,
    })
}

/// `⌈2/ε⌉`, the number of parallel copies that pushes a one-sided success
/// rate of `ε` above `1 − e^{−2}`.
pub fn copies_for(eps: f64) -> Result<usize> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::Invalid(format!("eps must lie in (0, 1), got {eps}")));
    }
    Ok((2.0 / eps).ceil() as usize)
}

/// Runs `copies` independently seeded copies and answers 1 iff one of them
/// does.
pub fn amplify<F>(reduction: F, copies: usize, seed: u64) -> Result<bool>
where
    F: Fn(u64) -> Result<bool> + Sync,
{
    let seeds = SeedSplitter::new(seed);
    let decisions = (0..copies as u64)
        .into_par_iter()
        .map(|c| reduction(seeds.derive(c)))
        .collect::<Result<Vec<bool>>>()?;
    Ok(decisions.into_iter().any(|d| d))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SuccessEstimate {
    pub trials: usize,
    pub successes: usize,
    pub rate: f64,
    /// 95% Wilson score interval.
    pub low: f64,
    pub high: f64,
}

pub fn wilson_interval(successes: usize, trials: usize, z: f64) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let n = trials as f64;
    let phat = successes as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let centre = (phat + z2 / (2.0 * n)) / denom;
    let half = z * (phat * (1.0 - phat) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    ((centre - half).max(0.0), (centre + half).min(1.0))
}

/// Monte Carlo success rate of `trial`, which gets a seed and reports
/// whether it answered correctly.
pub fn estimate_success<F>(trial: F, trials: usize, seed: u64) -> Result<SuccessEstimate>
where
    F: Fn(u64) -> Result<bool> + Sync,
{
    let seeds = SeedSplitter::new(seed);
    let outcomes = (0..trials as u64)
        .into_par_iter()
        .map(|i| trial(seeds.derive(i)))
        .collect::<Result<Vec<bool>>>()?;
    let successes = outcomes.iter().filter(|&&ok| ok).count();
    let (low, high) = wilson_interval(successes, trials, 1.96);
    Ok(SuccessEstimate {
        trials,
        successes,
        rate: if trials == 0 { 0.0 } else { successes as f64 / trials as f64 },
        low,
        high,
    })
}

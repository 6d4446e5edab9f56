//! The hard instance family: `p` blocks of `n` elements, one hidden optimal
//! element per block, and weights tuned so that a set missing the hidden
//! elements is worth about half of the optimum while every prefix of blocks
//! looks the same no matter where the later hidden elements sit.

use serde::{Deserialize, Serialize};

use crate::coverage::FractionalCoverage;
use crate::error::{Error, Result};
use crate::ground::{GroundSet, Partition};
use crate::oracle::{SetFunction, ValueOracle};
use crate::solve::brute_force_opt;

/// Largest `p` accepted by [`make_weights`]; the weights grow like `√p`, so
/// this keeps every quantity far from overflow.
pub const MAX_PLAYERS: usize = 1_000_000;

/// Absolute tolerance for the weight identities.
pub const IDENTITY_TOLERANCE: f64 = 1e-9;

/// `H_m = 1 + 1/2 + … + 1/m` by direct summation.
pub fn harmonic(m: usize) -> f64 {
    (1..=m).map(|i| 1.0 / i as f64).sum()
}

/// `[H_0, H_1, …, H_m]`.
pub fn harmonic_table(m: usize) -> Vec<f64> {
    let mut h = Vec::with_capacity(m + 1);
    h.push(0.0);
    for i in 1..=m {
        h.push(h[i - 1] + 1.0 / i as f64);
    }
    h
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HardnessWeights {
    delta: Vec<f64>,
    a: Vec<f64>,
    suffix: Vec<f64>,
}

/// Worst residuals of the weight identities.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WeightsReport {
    pub p: usize,
    /// `max_j |a_j Π_{i<j} (1 − a_i/A_{≥i}) − 1|`
    pub product_residual: f64,
    /// `max_j |Σ_{i≥j} (2 − a_i/A_{≥i}) − A_{≥j}/a_j|`
    pub sum_residual: f64,
    /// Whether `2j − H_j ≤ A_{≥p−j+1}/a_{p−j+1} ≤ 2j − 1` holds for every `j`.
    pub ratio_bounds_hold: bool,
    /// `max_i |(1 − 1/δ_i)(δ_i − 1) − δ_{i+1}| / δ_{i+1}`
    pub quadratic_residual: f64,
}

impl WeightsReport {
    pub fn holds(&self) -> bool {
        self.product_residual <= IDENTITY_TOLERANCE
            && self.sum_residual <= IDENTITY_TOLERANCE * self.p as f64
            && self.ratio_bounds_hold
            && self.quadratic_residual <= IDENTITY_TOLERANCE
    }
}

/// Weights for `p` blocks: `δ_p = 1`,
/// `δ_i = 1 + (1 + √(1 + 4/δ_{i+1}))/2 · δ_{i+1}`, `a_j = Π_{i<j} 1/(1 − 1/δ_i)`.
pub fn make_weights(p: usize) -> Result<HardnessWeights> {
    if p == 0 || p > MAX_PLAYERS {
        return Err(Error::Precondition(format!("weights need 1 ≤ p ≤ {MAX_PLAYERS}, got {p}")));
    }
    let mut delta = vec![1.0; p];
    for i in (0..p - 1).rev() {
        let next = delta[i + 1];
        delta[i] = 1.0 + (1.0 + (1.0f64 + 4.0 / next).sqrt()) / 2.0 * next;
    }
    let mut a = Vec::with_capacity(p);
    a.push(1.0);
    for j in 1..p {
        a.push(a[j - 1] / (1.0 - 1.0 / delta[j - 1]));
    }
    let mut suffix = vec![0.0; p];
    let mut acc = 0.0;
    for j in (0..p).rev() {
        acc += a[j];
        suffix[j] = acc;
    }
    let weights = HardnessWeights { delta, a, suffix };
    let report = weights.report();
    if !report.holds() {
        return Err(Error::Invalid(format!("weight identities fail for p={p}: {report:?}")));
    }
    Ok(weights)
}

impl HardnessWeights {
    pub fn p(&self) -> usize {
        self.a.len()
    }

    pub fn delta(&self) -> &[f64] {
        &self.delta
    }

    pub fn a(&self) -> &[f64] {
        &self.a
    }

    /// `A_{≥j} = Σ_{i≥j} a_i`.
    pub fn suffix(&self) -> &[f64] {
        &self.suffix
    }

    /// `a_j / A_{≥j}`; exactly 1 for the last block.
    pub fn ratio(&self, j: usize) -> f64 {
        if j + 1 == self.p() {
            1.0
        } else {
            self.a[j] / self.suffix[j]
        }
    }

    /// `1 − a_j / A_{≥j}`; exactly 0 for the last block.
    pub fn survival(&self, j: usize) -> f64 {
        if j + 1 == self.p() {
            0.0
        } else {
            1.0 - self.a[j] / self.suffix[j]
        }
    }

    /// Optimum value `A_{≥1}`.
    pub fn total(&self) -> f64 {
        self.suffix[0]
    }

    pub fn product_residuals(&self) -> Vec<f64> {
        let mut prod = 1.0;
        (0..self.p())
            .map(|j| {
                let r = (self.a[j] * prod - 1.0).abs();
                prod *= self.survival(j);
                r
            })
            .collect()
    }

    pub fn sum_residuals(&self) -> Vec<f64> {
        let p = self.p();
        let mut tail = vec![0.0; p];
        let mut acc = 0.0;
        for i in (0..p).rev() {
            acc += 2.0 - self.ratio(i);
            tail[i] = acc;
        }
        (0..p).map(|j| (tail[j] - self.suffix[j] / self.a[j]).abs()).collect()
    }

    /// `(lower, ratio, upper)` for `j = 1..=p`, where `ratio = A_{≥p−j+1}/a_{p−j+1}`.
    pub fn ratio_bounds(&self) -> Vec<(f64, f64, f64)> {
        let p = self.p();
        let h = harmonic_table(p);
        (1..=p)
            .map(|j| {
                let idx = p - j;
                let lower = 2.0 * j as f64 - h[j];
                let upper = 2.0 * j as f64 - 1.0;
                (lower, self.suffix[idx] / self.a[idx], upper)
            })
            .collect()
    }

    pub fn quadratic_residuals(&self) -> Vec<f64> {
        self.delta
            .windows(2)
            .map(|w| ((1.0 - 1.0 / w[0]) * (w[0] - 1.0) - w[1]).abs() / w[1])
            .collect()
    }

    pub fn report(&self) -> WeightsReport {
        let max = |v: Vec<f64>| v.into_iter().fold(0.0f64, f64::max);
        WeightsReport {
            p: self.p(),
            product_residual: max(self.product_residuals()),
            sum_residual: max(self.sum_residuals()),
            ratio_bounds_hold: self
                .ratio_bounds()
                .iter()
                .all(|&(lo, r, hi)| r >= lo - IDENTITY_TOLERANCE && r <= hi + IDENTITY_TOLERANCE),
            quadratic_residual: max(self.quadratic_residuals()),
        }
    }

    /// The concave upper proxy
    /// `F̂(s) = a_p + Σ_{j<p} a_j (1 − Π_{i≤j} (1 − a_i/A_{≥i})^{s_i})`.
    pub fn f_hat(&self, s: &[f64]) -> f64 {
        let p = self.p();
        assert_eq!(s.len(), p, "f_hat takes one coordinate per block");
        let mut log_survive = 0.0;
        let mut total = self.a[p - 1];
        for j in 0..p - 1 {
            log_survive += s[j] * (-self.ratio(j)).ln_1p();
            total += self.a[j] * (1.0 - log_survive.exp());
        }
        total
    }

    /// Closed form of `∂F̂/∂s_ℓ` at the all-ones point (zero-based `ell`).
    pub fn derivative_at_ones(&self, ell: usize) -> f64 {
        let p = self.p();
        if ell + 1 == p {
            return 0.0;
        }
        let remaining = (p - ell) as f64;
        -(-self.ratio(ell)).ln_1p() * (self.suffix[ell] / self.a[ell] - remaining)
    }
}

/// A member of the family: weights, block size `n`, and one hidden element
/// per block. Block `j` holds indices `j·n .. (j+1)·n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "HardnessSpec", into = "HardnessSpec")]
pub struct HardnessInstance {
    weights: HardnessWeights,
    n: usize,
    hidden: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HardnessSpec {
    pub p: usize,
    pub n: usize,
    pub hidden: Vec<usize>,
}

impl TryFrom<HardnessSpec> for HardnessInstance {
    type Error = Error;
    fn try_from(spec: HardnessSpec) -> Result<Self> {
        HardnessInstance::new(make_weights(spec.p)?, spec.n, spec.hidden)
    }
}

impl From<HardnessInstance> for HardnessSpec {
    fn from(inst: HardnessInstance) -> Self {
        HardnessSpec {
            p: inst.p(),
            n: inst.n,
            hidden: inst.hidden,
        }
    }
}

impl HardnessInstance {
    /// `hidden[j]` is the absolute index of `o_j` and must lie in block `j`.
    pub fn new(weights: HardnessWeights, n: usize, hidden: Vec<usize>) -> Result<Self> {
        if n == 0 {
            return Err(Error::Invalid("block size must be positive".into()));
        }
        if hidden.len() != weights.p() {
            return Err(Error::Invalid(format!(
                "{} hidden elements for {} blocks",
                hidden.len(),
                weights.p()
            )));
        }
        if let Some((j, &o)) = hidden.iter().enumerate().find(|&(j, &o)| o / n != j) {
            return Err(Error::Invalid(format!("hidden element {o} is not in block {j}")));
        }
        Ok(Self { weights, n, hidden })
    }

    /// Hidden elements given as offsets within their blocks.
    pub fn from_offsets(weights: HardnessWeights, n: usize, offsets: &[usize]) -> Result<Self> {
        if let Some(&o) = offsets.iter().find(|&&o| o >= n) {
            return Err(Error::Invalid(format!("offset {o} outside block of size {n}")));
        }
        let hidden = offsets.iter().enumerate().map(|(j, &o)| j * n + o).collect();
        Self::new(weights, n, hidden)
    }

    pub fn weights(&self) -> &HardnessWeights {
        &self.weights
    }

    pub fn p(&self) -> usize {
        self.weights.p()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn hidden(&self) -> &[usize] {
        &self.hidden
    }

    pub fn block(&self, j: usize) -> Vec<usize> {
        (j * self.n..(j + 1) * self.n).collect()
    }

    /// Each player receives the whole block.
    pub fn partition(&self) -> Partition {
        let blocks = (0..self.p()).map(|j| self.block(j)).collect();
        Partition::full(GroundSet::new(self.p() * self.n).expect("non-empty"), blocks)
            .expect("blocks tile the ground set")
    }

    /// Everything except the hidden elements.
    pub fn non_optimal(&self) -> Vec<usize> {
        (0..self.ground_size()).filter(|e| !self.hidden.contains(e)).collect()
    }

    /// The fractional-coverage encoding: one point `u_j` of weight `a_j` per
    /// block; `o_j` covers `u_j` surely, any other element of block `j`
    /// covers `u_j, …, u_p` each with probability `a_j/A_{≥j}`.
    pub fn fractional_encoding(&self) -> FractionalCoverage {
        let p = self.p();
        let mut probs = Vec::with_capacity(self.ground_size());
        for j in 0..p {
            for e in self.block(j) {
                if e == self.hidden[j] {
                    probs.push(vec![(j, 1.0)]);
                } else {
                    let q = self.weights.ratio(j);
                    probs.push((j..p).map(|u| (u, q)).collect());
                }
            }
        }
        FractionalCoverage::new(self.weights.a.clone(), probs).expect("valid probabilities")
    }
}

impl SetFunction for HardnessInstance {
    fn ground_size(&self) -> usize {
        self.p() * self.n
    }

    fn value(&self, set: &[usize]) -> f64 {
        let p = self.p();
        let mut count = vec![0i32; p];
        let mut has_opt = vec![false; p];
        for &e in set {
            let j = e / self.n;
            if e == self.hidden[j] {
                has_opt[j] = true;
            } else {
                count[j] += 1;
            }
        }
        let mut survive = 1.0;
        let mut total = 0.0;
        for j in 0..p {
            // powi gives 0^0 = 1 for the last block
            survive *= self.weights.survival(j).powi(count[j]);
            let a = self.weights.a[j];
            total += if has_opt[j] { a } else { a * (1.0 - survive) };
        }
        total
    }
}

/// Every choice of hidden elements for `p` blocks of size `n`, as absolute
/// indices, in lexicographic order of offsets.
pub fn hidden_choices(p: usize, n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut offsets = vec![0usize; p];
    loop {
        out.push(offsets.iter().enumerate().map(|(j, &o)| j * n + o).collect());
        let mut pos = p;
        loop {
            if pos == 0 {
                return out;
            }
            pos -= 1;
            offsets[pos] += 1;
            if offsets[pos] < n {
                break;
            }
            offsets[pos] = 0;
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValueGapReport {
    pub p: usize,
    pub n: usize,
    pub k: usize,
    /// Best value over sets avoiding every hidden element.
    pub max_disjoint: f64,
    pub argmax: Vec<usize>,
    /// `p + H_p²`
    pub bound: f64,
    pub optimum: f64,
    /// `2p − H_p`
    pub optimum_lower: f64,
}

impl ValueGapReport {
    pub fn holds(&self) -> bool {
        self.max_disjoint <= self.bound + IDENTITY_TOLERANCE
            && self.optimum >= self.optimum_lower - IDENTITY_TOLERANCE
            && self.optimum <= 2.0 * self.p as f64 + IDENTITY_TOLERANCE
    }
}

pub const VALUE_GAP_MAX_P: usize = 5;
pub const VALUE_GAP_MAX_N: usize = 4;

/// Exhaustive best value among sets of size `≤ k` that avoid the hidden
/// elements, next to the optimum.
pub fn value_gap_check(inst: &HardnessInstance, k: usize) -> Result<ValueGapReport> {
    let (p, n) = (inst.p(), inst.n());
    if p > VALUE_GAP_MAX_P {
        return Err(Error::guard("value_gap_check players", p, VALUE_GAP_MAX_P));
    }
    if n > VALUE_GAP_MAX_N {
        return Err(Error::guard("value_gap_check block size", n, VALUE_GAP_MAX_N));
    }
    let oracle = ValueOracle::from_fn(inst.clone(), Some(k));
    let (argmax, max_disjoint) = brute_force_opt(&oracle, &inst.non_optimal(), k)?;
    let h = harmonic(p);
    Ok(ValueGapReport {
        p,
        n,
        k,
        max_disjoint,
        argmax,
        bound: p as f64 + h * h,
        optimum: inst.value(inst.hidden()),
        optimum_lower: 2.0 * p as f64 - h,
    })
}

pub const INDISTINGUISHABILITY_GUARD: usize = 12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IndistinguishabilityReport {
    pub p: usize,
    pub n: usize,
    pub ell: usize,
    pub instances: usize,
    pub pairs_compared: usize,
    pub sets_per_pair: usize,
    pub max_difference: f64,
}

impl IndistinguishabilityReport {
    pub fn holds(&self, tol: f64) -> bool {
        self.max_difference <= tol
    }
}

/// Compares every pair of instances that share `o_1, …, o_{ℓ−1}` on every
/// subset of the first `ℓ` blocks (`ell` is one-based).
pub fn indistinguishability_check(p: usize, n: usize, ell: usize) -> Result<IndistinguishabilityReport> {
    if p * n > INDISTINGUISHABILITY_GUARD {
        return Err(Error::guard("indistinguishability_check ground set", p * n, INDISTINGUISHABILITY_GUARD));
    }
    if ell == 0 || ell > p {
        return Err(Error::Precondition(format!("prefix length {ell} outside 1..={p}")));
    }
    let weights = make_weights(p)?;
    let visible = ell * n;
    let sets: Vec<Vec<usize>> = (0usize..1 << visible)
        .map(|mask| (0..visible).filter(|b| mask >> b & 1 == 1).collect())
        .collect();

    let choices = hidden_choices(p, n);
    let mut groups: std::collections::BTreeMap<Vec<usize>, Vec<Vec<f64>>> = Default::default();
    for hidden in &choices {
        let inst = HardnessInstance::new(weights.clone(), n, hidden.clone())?;
        let table: Vec<f64> = sets.iter().map(|s| inst.value(s)).collect();
        groups.entry(hidden[..ell - 1].to_vec()).or_default().push(table);
    }

    let mut pairs = 0;
    let mut max_difference = 0.0f64;
    for tables in groups.values() {
        for (x, tx) in tables.iter().enumerate() {
            for ty in &tables[x + 1..] {
                pairs += 1;
                for (vx, vy) in tx.iter().zip(ty) {
                    max_difference = max_difference.max((vx - vy).abs());
                }
            }
        }
    }
    Ok(IndistinguishabilityReport {
        p,
        n,
        ell,
        instances: choices.len(),
        pairs_compared: pairs,
        sets_per_pair: sets.len(),
        max_difference,
    })
}

pub const DERIVATIVE_MAX_P: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DerivativeBound {
    /// One-based block index.
    pub ell: usize,
    pub value: f64,
    pub lower: f64,
    pub upper: f64,
}

impl DerivativeBound {
    pub fn holds(&self) -> bool {
        self.value >= self.lower - IDENTITY_TOLERANCE && self.value <= self.upper + IDENTITY_TOLERANCE
    }
}

/// `1/2 − H_m/m ≤ ∂F̂/∂s_ℓ(1) ≤ 1/2` with `m = p + 1 − ℓ`, for every `ℓ`.
pub fn derivative_bounds_check(p: usize) -> Result<Vec<DerivativeBound>> {
    if p > DERIVATIVE_MAX_P {
        return Err(Error::guard("derivative_bounds_check players", p, DERIVATIVE_MAX_P));
    }
    let weights = make_weights(p)?;
    let h = harmonic_table(p);
    Ok((0..p)
        .map(|ell| {
            let m = p - ell;
            DerivativeBound {
                ell: ell + 1,
                value: weights.derivative_at_ones(ell),
                lower: 0.5 - h[m] / m as f64,
                upper: 0.5,
            }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coverage::fractional_to_weighted;

    const PHI: f64 = 1.618_033_988_749_895;

    fn instance(p: usize, n: usize, offsets: &[usize]) -> HardnessInstance {
        HardnessInstance::from_offsets(make_weights(p).unwrap(), n, offsets).unwrap()
    }

    #[test]
    fn small_weights() {
        let w1 = make_weights(1).unwrap();
        assert_eq!((w1.delta(), w1.a()), (&[1.0][..], &[1.0][..]));
        let w2 = make_weights(2).unwrap();
        assert!((w2.delta()[0] - (3.0 + 5f64.sqrt()) / 2.0).abs() < 1e-12);
        assert!((w2.a()[1] - PHI).abs() < 1e-12);
        assert!((w2.total() - (1.0 + PHI)).abs() < 1e-12);
        // the defining product for block 2
        assert!((w2.a()[1] * (1.0 - w2.a()[0] / w2.total()) - 1.0).abs() < 1e-12);
        assert!(make_weights(0).is_err());
        assert!(make_weights(MAX_PLAYERS + 1).is_err());
    }

    #[test]
    fn weights_increase_and_identities_hold() {
        for p in [3, 20, 200] {
            let w = make_weights(p).unwrap();
            assert!(w.a().windows(2).all(|x| x[0] < x[1]));
            assert!(w.report().holds(), "p={p}: {:?}", w.report());
        }
        let w = make_weights(20).unwrap();
        let (lo, r, hi) = w.ratio_bounds()[19];
        assert!((lo - (40.0 - harmonic(20))).abs() < 1e-12 && hi == 39.0);
        assert!(lo <= r && r <= hi);
    }

    #[test]
    fn optimum_and_one_per_block() {
        for p in 1..=6 {
            let inst = instance(p, 3, &vec![1; p]);
            assert!((inst.value(inst.hidden()) - inst.weights().total()).abs() < 1e-12);
            let all: Vec<usize> = (0..inst.ground_size()).collect();
            assert!((inst.value(&all) - inst.weights().total()).abs() < 1e-9);
            let one_each: Vec<usize> = (0..p).map(|j| j * 3 + 2).collect();
            assert!((inst.value(&one_each) - p as f64).abs() < 1e-9, "p={p}");
        }
    }

    #[test]
    fn two_non_optimal_in_last_block() {
        let inst = instance(2, 3, &[0, 0]);
        assert!((inst.value(&[4, 5]) - PHI).abs() < 1e-12);
    }

    #[test]
    fn brute_force_two_by_two_optimum() {
        let inst = instance(2, 2, &[1, 0]);
        let o = ValueOracle::from_fn(inst, Some(2));
        let (set, v) = brute_force_opt(&o, &o.domain(), 2).unwrap();
        assert!((v - (1.0 + PHI)).abs() < 1e-9);
        assert_eq!(set, vec![1, 2]);
    }

    #[test]
    fn fractional_encoding_agrees() {
        for (p, n) in [(2, 3), (3, 2), (3, 4), (4, 3), (6, 2)] {
            let inst = instance(p, n, &(0..p).map(|j| j % n).collect::<Vec<_>>());
            let frac = inst.fractional_encoding();
            let weighted = (p * n <= 12).then(|| fractional_to_weighted(&frac).unwrap());
            for mask in 0usize..1 << (p * n) {
                let s: Vec<usize> = (0..p * n).filter(|b| mask >> b & 1 == 1).collect();
                let v = inst.value(&s);
                assert!((v - frac.value(&s)).abs() < 1e-12, "p={p} n={n} S={s:?}");
                if let Some(w) = &weighted {
                    assert!((v - w.value(&s)).abs() < 1e-9);
                }
            }
        }
    }

    #[test]
    fn permuting_non_optimal_elements_is_invisible() {
        let inst = instance(3, 4, &[0, 1, 2]);
        assert_eq!(inst.value(&[1, 2, 4]).to_bits(), inst.value(&[3, 1, 6]).to_bits());
        assert_eq!(inst.value(&[0, 9, 10]).to_bits(), inst.value(&[0, 8, 11]).to_bits());
    }

    #[test]
    fn value_gap_small_cases() {
        let r = value_gap_check(&instance(2, 3, &[0, 2]), 2).unwrap();
        assert!((r.max_disjoint - 2.0).abs() < 1e-9 && (r.bound - 4.25).abs() < 1e-12);
        assert!(r.holds());
        let r = value_gap_check(&instance(3, 3, &[0, 1, 2]), 3).unwrap();
        assert!(r.max_disjoint <= 3.0 + harmonic(3).powi(2) + 1e-9 && r.holds());
        // with one block any single element already reaches the optimum
        let r = value_gap_check(&instance(1, 4, &[2]), 1).unwrap();
        assert_eq!(r.max_disjoint, 1.0);
        assert!((r.optimum - 1.0).abs() < 1e-12);
        assert!(value_gap_check(&instance(6, 1, &[0; 6]), 6).is_err());
    }

    #[test]
    fn prefix_agreement() {
        for (p, n, ell) in [(2, 2, 1), (2, 2, 2), (3, 2, 2), (3, 3, 3)] {
            let r = indistinguishability_check(p, n, ell).unwrap();
            assert!(r.holds(1e-12), "{r:?}");
            assert!(r.pairs_compared > 0);
        }
        assert!(indistinguishability_check(5, 3, 1).is_err());
    }

    #[test]
    fn prefix_agreement_fails_when_the_prefix_differs() {
        // inside block 1 the position of o_1 is invisible, but together with
        // block 2 it is not
        let a = instance(2, 3, &[0, 0]);
        let b = instance(2, 3, &[1, 0]);
        for s in [&[0][..], &[0, 2], &[0, 1, 2]] {
            assert!((a.value(s) - b.value(s)).abs() < 1e-12);
        }
        assert!((a.value(&[0, 3]) - b.value(&[0, 3])).abs() > 0.5);
    }

    #[test]
    fn derivative_values() {
        let d = derivative_bounds_check(2).unwrap();
        assert!((d[0].value - 0.297_405_263_675_203_3).abs() < 1e-12);
        assert!((d[0].lower + 0.25).abs() < 1e-15);
        assert_eq!(d[1].value, 0.0);
        assert!(d.iter().all(DerivativeBound::holds));
        assert!(derivative_bounds_check(50).unwrap().iter().all(DerivativeBound::holds));
    }

    #[test]
    fn derivative_matches_finite_differences() {
        for p in [2, 3, 7, 15] {
            let w = make_weights(p).unwrap();
            let h = 1e-5;
            for ell in 0..p {
                let mut up = vec![1.0; p];
                let mut down = vec![1.0; p];
                up[ell] += h;
                down[ell] -= h;
                let fd = (w.f_hat(&up) - w.f_hat(&down)) / (2.0 * h);
                assert!((fd - w.derivative_at_ones(ell)).abs() < 1e-6, "p={p} ell={ell}");
            }
            // F̂ agrees with f at the all-ones point
            assert!((w.f_hat(&vec![1.0; p]) - p as f64).abs() < 1e-9);
        }
    }

    #[test]
    fn hidden_choices_enumerates_all() {
        let c = hidden_choices(2, 3);
        assert_eq!(c.len(), 9);
        assert_eq!(c[0], vec![0, 3]);
        assert_eq!(c[8], vec![2, 5]);
    }

    #[test]
    fn serde_round_trip() {
        let inst = instance(3, 2, &[1, 0, 1]);
        let json = serde_json::to_string(&inst).unwrap();
        assert_eq!(json, r#"{"p":3,"n":2,"hidden":[1,2,5]}"#);
        let back: HardnessInstance = serde_json::from_str(&json).unwrap();
        assert_eq!(back, inst);
        assert!(serde_json::from_str::<HardnessInstance>(r#"{"p":2,"n":2,"hidden":[2,3]}"#).is_err());
    }
}

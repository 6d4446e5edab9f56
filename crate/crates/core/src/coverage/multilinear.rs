use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::oracle::SetFunction;

/// The small function `g_i` on `W′ = {v_0, …, v_{n−1}, w}`, with `v_j`
/// encoded as `j` and `w` as `n`:
/// `1/3` on `{w}`, `1` on `{w, v_i}`, otherwise `min(2/3·|S∖{w}|, 1)`.
pub fn eval_g(n: usize, index: usize, set: &[usize]) -> f64 {
    let has_w = set.contains(&n);
    let others = set.len() - usize::from(has_w);
    g_from_counts(has_w, others, others == 1 && set.contains(&index))
}

fn g_from_counts(has_w: bool, others: usize, only_hidden: bool) -> f64 {
    match (has_w, others) {
        (true, 0) => 1.0 / 3.0,
        (true, 1) if only_hidden => 1.0,
        _ => (2.0 / 3.0 * others as f64).min(1.0),
    }
}

/// `g_i` as a set function on `W′`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndexG {
    pub n: usize,
    pub index: usize,
}

impl SetFunction for IndexG {
    fn ground_size(&self) -> usize {
        self.n + 1
    }
    fn value(&self, set: &[usize]) -> f64 {
        eval_g(self.n, self.index, set)
    }
}

/// Probability mass function of a sum of independent Bernoulli variables.
pub fn poisson_binomial(probs: &[f64]) -> Vec<f64> {
    let mut pmf = vec![0.0; probs.len() + 1];
    pmf[0] = 1.0;
    for (done, &p) in probs.iter().enumerate() {
        for count in (0..=done + 1).rev() {
            let stay = pmf[count] * (1.0 - p);
            let step = if count > 0 { pmf[count - 1] * p } else { 0.0 };
            pmf[count] = stay + step;
        }
    }
    pmf
}

/// The two-player index-hardness function `f_i(S) = G_i(y^S)`.
///
/// Ground set: `u_a^b` for `a < n`, `b < k−1` at index `a·(k−1) + b` (Alice's
/// block), then the single element `w` at index `n·(k−1)` (Bob's block).
/// `y^S` puts `|S ∩ {u_a^·}|/(k−1)` on `v_a` and `[w ∈ S]` on `w`, and the
/// multilinear extension `G_i` is evaluated exactly.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndexHardness {
    n: usize,
    k: usize,
    index: usize,
}

impl IndexHardness {
    pub fn new(n: usize, k: usize, index: usize) -> Result<Self> {
        if n == 0 || k < 2 || index >= n {
            return Err(Error::Invalid(format!(
                "index hardness needs n ≥ 1, k ≥ 2 and index < n (got n={n}, k={k}, index={index})"
            )));
        }
        Ok(Self { n, k, index })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn index(&self) -> usize {
        self.index
    }

    pub fn copies(&self) -> usize {
        self.k - 1
    }

    pub fn u(&self, a: usize, b: usize) -> usize {
        debug_assert!(a < self.n && b < self.copies());
        a * self.copies() + b
    }

    pub fn w(&self) -> usize {
        self.n * self.copies()
    }

    /// All copies `u_a^0, …, u_a^{k−2}`.
    pub fn copies_of(&self, a: usize) -> Vec<usize> {
        (0..self.copies()).map(|b| self.u(a, b)).collect()
    }

    pub fn alice_block(&self) -> Vec<usize> {
        (0..self.w()).collect()
    }

    pub fn bob_block(&self) -> Vec<usize> {
        vec![self.w()]
    }

    /// Same construction with a different hidden index.
    pub fn with_index(&self, index: usize) -> Result<Self> {
        Self::new(self.n, self.k, index)
    }

    /// The point `y^S ∈ [0,1]^{W′}` (`v_0..v_{n−1}` then `w`).
    pub fn y_vector(&self, set: &[usize]) -> Vec<f64> {
        let mut counts = vec![0usize; self.n];
        let mut has_w = false;
        for &e in set {
            if e == self.w() {
                has_w = true;
            } else {
                counts[e / self.copies()] += 1;
            }
        }
        let mut y: Vec<f64> = counts.iter().map(|&c| c as f64 / self.copies() as f64).collect();
        y.push(if has_w { 1.0 } else { 0.0 });
        y
    }

    /// The decision threshold `2k / (3(k−1))` used by the index reduction.
    pub fn threshold(&self) -> f64 {
        2.0 * self.k as f64 / (3.0 * (self.k - 1) as f64)
    }
}

impl SetFunction for IndexHardness {
    fn ground_size(&self) -> usize {
        self.w() + 1
    }

    fn value(&self, set: &[usize]) -> f64 {
        // Coordinates are count/(k−1); keep the counts exact until division.
        let copies = self.copies();
        let mut counts = vec![0usize; self.n];
        let mut has_w = false;
        for &e in set {
            if e == self.w() {
                has_w = true;
            } else {
                counts[e / copies] += 1;
            }
        }
        let hidden = counts[self.index] as f64 / copies as f64;
        let others: Vec<f64> = counts
            .iter()
            .enumerate()
            .filter(|&(a, &c)| a != self.index && c > 0)
            .map(|(_, &c)| c as f64 / copies as f64)
            .collect();
        let pmf = poisson_binomial(&others);

        let mut expectation = 0.0;
        for (hidden_in, p_hidden) in [(false, 1.0 - hidden), (true, hidden)] {
            if p_hidden == 0.0 {
                continue;
            }
            for (rest, &p_rest) in pmf.iter().enumerate() {
                let others_in = rest + usize::from(hidden_in);
                let only_hidden = hidden_in && rest == 0;
                expectation += p_hidden * p_rest * g_from_counts(has_w, others_in, only_hidden);
            }
        }
        expectation
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::ValueOracle;
    use crate::solve::{brute_force_opt, check_monotone_submodular};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn g_special_values() {
        let n = 3;
        assert!((eval_g(n, 1, &[3]) - 1.0 / 3.0).abs() < 1e-15);
        assert_eq!(eval_g(n, 1, &[3, 1]), 1.0);
        assert!((eval_g(n, 1, &[0]) - 2.0 / 3.0).abs() < 1e-15);
        assert!((eval_g(n, 1, &[3, 0]) - 2.0 / 3.0).abs() < 1e-15);
        assert_eq!(eval_g(n, 1, &[0, 2]), 1.0);
        assert_eq!(eval_g(n, 1, &[]), 0.0);
    }

    #[test]
    fn pmf_sums_to_one() {
        let pmf = poisson_binomial(&[0.5, 0.25, 1.0]);
        assert!((pmf.iter().sum::<f64>() - 1.0).abs() < 1e-15);
        assert_eq!(pmf[0], 0.0);
        assert!((pmf[1] - 0.375).abs() < 1e-15);
        assert_eq!(poisson_binomial(&[]), vec![1.0]);
    }

    #[test]
    fn hidden_block_with_w_is_worth_one() {
        let f = IndexHardness::new(4, 5, 2).unwrap();
        let mut s = f.copies_of(2);
        s.push(f.w());
        assert!((f.value(&s) - 1.0).abs() < 1e-15);
        assert_eq!(f.value(&[]), 0.0);
        assert!((f.value(&[f.w()]) - 1.0 / 3.0).abs() < 1e-15);
        assert_eq!(f.ground_size(), 1 + 4 * 4);
    }

    #[test]
    fn construction_validates() {
        assert!(IndexHardness::new(0, 3, 0).is_err());
        assert!(IndexHardness::new(2, 1, 0).is_err());
        assert!(IndexHardness::new(2, 3, 2).is_err());
        let f = IndexHardness::new(2, 4, 0).unwrap();
        assert!((f.threshold() - 8.0 / 9.0).abs() < 1e-15);
    }

    /// `E[g_i(R)]` by listing every outcome of the independent coordinates.
    fn enumerate_expectation(f: &IndexHardness, set: &[usize]) -> f64 {
        let y = f.y_vector(set);
        let m = y.len();
        (0usize..1 << m)
            .map(|mask| {
                let mut prob = 1.0;
                let mut r = Vec::new();
                for (c, &yc) in y.iter().enumerate() {
                    if mask >> c & 1 == 1 {
                        prob *= yc;
                        r.push(c);
                    } else {
                        prob *= 1.0 - yc;
                    }
                }
                prob * eval_g(f.n(), f.index(), &r)
            })
            .sum()
    }

    fn subsets(domain: &[usize], max_len: usize) -> Vec<Vec<usize>> {
        (0usize..1 << domain.len())
            .filter(|m| m.count_ones() as usize <= max_len)
            .map(|m| (0..domain.len()).filter(|b| m >> b & 1 == 1).map(|b| domain[b]).collect())
            .collect()
    }

    #[test]
    fn matches_monte_carlo_and_enumeration() {
        // n=2, k=3, hidden index 1 (zero-based 0), S = {u_1^1, u_2^1}
        let f = IndexHardness::new(2, 3, 0).unwrap();
        let s = [f.u(0, 0), f.u(1, 0)];
        let exact = f.value(&s);
        assert!((exact - enumerate_expectation(&f, &s)).abs() < 1e-12);

        let y = f.y_vector(&s);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let samples = 10_000;
        let mut sum = 0.0;
        let mut sq = 0.0;
        for _ in 0..samples {
            let r: Vec<usize> = (0..y.len()).filter(|&c| rng.gen::<f64>() < y[c]).collect();
            let g = eval_g(f.n(), f.index(), &r);
            sum += g;
            sq += g * g;
        }
        let mean = sum / samples as f64;
        let sd = ((sq / samples as f64 - mean * mean) / samples as f64).sqrt();
        assert!((mean - exact).abs() <= 3.0 * sd, "mc {mean} vs exact {exact} (sd {sd})");
    }

    #[test]
    fn exact_value_agrees_with_enumeration_everywhere() {
        for n in 1..=3 {
            for k in 2..=4 {
                for index in 0..n {
                    let f = IndexHardness::new(n, k, index).unwrap();
                    let ground: Vec<usize> = (0..f.ground_size()).collect();
                    for s in subsets(&ground, ground.len()) {
                        let e = enumerate_expectation(&f, &s);
                        assert!((f.value(&s) - e).abs() < 1e-12, "n={n} k={k} S={s:?}");
                    }
                }
            }
        }
    }

    #[test]
    fn g_and_f_are_monotone_submodular() {
        for n in 1..=3 {
            for index in 0..n {
                let g = ValueOracle::from_fn(IndexG { n, index }, None);
                assert!(check_monotone_submodular(&g, &g.domain()).unwrap().passed());
            }
        }
        for (n, k) in [(2, 3), (3, 3), (3, 4), (2, 4)] {
            let f = ValueOracle::from_fn(IndexHardness::new(n, k, n - 1).unwrap(), None);
            let report = check_monotone_submodular(&f, &f.domain()).unwrap();
            assert!(report.passed(), "n={n} k={k}: {report:?}");
        }
    }

    #[test]
    fn hidden_block_excluded_stays_below_threshold() {
        for n in 1..=3 {
            for k in 2..=4 {
                for t in 0..n {
                    let f = IndexHardness::new(n, k, t).unwrap();
                    let hidden = f.copies_of(t);
                    let cands: Vec<usize> = (0..f.ground_size()).filter(|e| !hidden.contains(e)).collect();
                    let o = ValueOracle::from_fn(f, None);
                    let (_, best) = brute_force_opt(&o, &cands, k).unwrap();
                    assert!(best <= f.threshold() + 1e-9, "n={n} k={k} t={t}: {best}");
                }
            }
        }
    }

    #[test]
    fn alice_side_does_not_reveal_the_index() {
        let f1 = IndexHardness::new(3, 3, 0).unwrap();
        let f2 = f1.with_index(1).unwrap();
        for s in subsets(&f1.alice_block(), 6) {
            assert_eq!(f1.value(&s), f2.value(&s), "S={s:?}");
        }
    }
}

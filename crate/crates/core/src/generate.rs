//! Seeded instance generators.

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::coverage::{IndexHardness, WeightedCoverage};
use crate::error::{Error, Result};
use crate::ground::{GroundSet, Partition};
use crate::hardness::{make_weights, HardnessInstance};
use crate::instance::Instance;
use crate::rng::SeedSplitter;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GeneratorSpec {
    /// `n` elements over a universe of `universe` points with integer
    /// weights in `1..=9`; each element covers each point with probability
    /// `density`. Elements are split between two players at random.
    Coverage { n: usize, universe: usize, density: f64 },
    /// Two players whose private inputs are worth the same on their own and
    /// twice as much together, so that keeping one side's best set loses
    /// exactly half. `per_side` elements each, `k ≥ 2`.
    Adversarial { per_side: usize, k: usize },
    /// A hard instance with `p` blocks of `n` elements and a uniform hidden
    /// optimum.
    Hardness { p: usize, n: usize },
    /// The two-player index instance for a uniform string and index.
    Index { n: usize, k: usize },
}

impl GeneratorSpec {
    pub fn kind(&self) -> &'static str {
        match self {
            Self::Coverage { .. } => "coverage",
            Self::Adversarial { .. } => "adversarial",
            Self::Hardness { .. } => "hardness",
            Self::Index { .. } => "index",
        }
    }
}

pub fn generate(spec: &GeneratorSpec, seed: u64, id: Option<String>) -> Result<Instance> {
    let mut rng = SeedSplitter::new(seed).rng(0);
    match *spec {
        GeneratorSpec::Coverage { n, universe, density } => {
            if n < 2 || universe == 0 || !(0.0..=1.0).contains(&density) {
                return Err(Error::Invalid("coverage needs n ≥ 2, a non-empty universe and density in [0,1]".into()));
            }
            let weights: Vec<f64> = (0..universe).map(|_| rng.gen_range(1..=9) as f64).collect();
            let sets: Vec<Vec<usize>> = (0..n)
                .map(|_| (0..universe).filter(|_| rng.gen_bool(density)).collect())
                .collect();
            let mut order: Vec<usize> = (0..n).collect();
            order.shuffle(&mut rng);
            let cut = rng.gen_range(1..n);
            let (mut a, mut b) = (order[..cut].to_vec(), order[cut..].to_vec());
            a.sort_unstable();
            b.sort_unstable();
            let part = Partition::two_player(GroundSet::new(n)?, a, b)?;
            Instance::new(id, &part, (&WeightedCoverage::new(weights, sets)?).into())
        }
        GeneratorSpec::Adversarial { per_side, k } => {
            if per_side == 0 || k < 2 {
                return Err(Error::Invalid("adversarial split needs per_side ≥ 1 and k ≥ 2".into()));
            }
            let m = rng.gen_range(1..=4);
            let side: Vec<f64> = (0..m).map(|_| rng.gen_range(1..=9) as f64).collect();
            let mut weights = side.clone();
            weights.extend(side.iter().rev());
            // element 0 of each side covers its whole region, the rest cover
            // random parts of it
            let region = |offset: usize, rng: &mut rand_chacha::ChaCha8Rng| -> Vec<Vec<usize>> {
                (0..per_side)
                    .map(|i| {
                        if i == 0 {
                            (offset..offset + m).collect()
                        } else {
                            (offset..offset + m).filter(|_| rng.gen_bool(0.5)).collect()
                        }
                    })
                    .collect()
            };
            let mut sets = region(0, &mut rng);
            sets.extend(region(m, &mut rng));
            let mut order: Vec<usize> = (0..2 * per_side).collect();
            order.shuffle(&mut rng);
            // relabel so the two sides interleave in index order
            let mut shuffled = vec![Vec::new(); 2 * per_side];
            for (old, &new) in order.iter().enumerate() {
                shuffled[new] = sets[old].clone();
            }
            let mut a: Vec<usize> = order[..per_side].to_vec();
            let mut b: Vec<usize> = order[per_side..].to_vec();
            a.sort_unstable();
            b.sort_unstable();
            let part = Partition::two_player(GroundSet::new(2 * per_side)?, a, b)?;
            Instance::new(id, &part, (&WeightedCoverage::new(weights, shuffled)?).into())
        }
        GeneratorSpec::Hardness { p, n } => {
            let offsets: Vec<usize> = (0..p).map(|_| rng.gen_range(0..n.max(1))).collect();
            let inst = HardnessInstance::from_offsets(make_weights(p)?, n, &offsets)?;
            Instance::new(id, &inst.partition(), (&inst).into())
        }
        GeneratorSpec::Index { n, k } => {
            if n == 0 {
                return Err(Error::Invalid("index needs n ≥ 1".into()));
            }
            let t = rng.gen_range(0..n);
            let f = IndexHardness::new(n, k, t)?;
            let v_a: Vec<usize> = (0..n).filter(|_| rng.gen_bool(0.5)).flat_map(|a| f.copies_of(a)).collect();
            let part = Partition::new(
                GroundSet::new(f.w() + 1)?,
                vec![f.alice_block(), f.bob_block()],
                vec![v_a, vec![f.w()]],
            )?;
            Instance::new(id, &part, (&f).into())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::protocol::{run_two_player, BaselineHalf};
    use crate::solve::{brute_force_opt, check_monotone_submodular};

    #[test]
    fn seeds_replay_byte_for_byte() {
        let spec = GeneratorSpec::Coverage {
            n: 12,
            universe: 10,
            density: 0.3,
        };
        let a = generate(&spec, 42, Some("c".into())).unwrap().to_json();
        let b = generate(&spec, 42, Some("c".into())).unwrap().to_json();
        assert_eq!(a, b);
        assert_ne!(a, generate(&spec, 43, Some("c".into())).unwrap().to_json());
    }

    #[test]
    fn coverage_is_submodular() {
        let spec = GeneratorSpec::Coverage {
            n: 12,
            universe: 8,
            density: 0.3,
        };
        let inst = generate(&spec, 1, None).unwrap();
        assert_eq!(inst.ground_size, 12);
        let o = inst.oracle(None).unwrap();
        assert!(check_monotone_submodular(&o, &(0..12).collect::<Vec<_>>()).unwrap().passed());
    }

    #[test]
    fn hardness_shape() {
        let inst = generate(&GeneratorSpec::Hardness { p: 3, n: 3 }, 0, None).unwrap();
        assert_eq!(inst.ground_size, 9);
        assert_eq!(inst.blocks.len(), 3);
    }

    #[test]
    fn adversarial_split_halves_the_baseline() {
        for seed in 0..20 {
            let k = 2 + (seed as usize % 3);
            let inst = generate(&GeneratorSpec::Adversarial { per_side: 4, k }, seed, None).unwrap();
            let part = inst.partition().unwrap();
            let o = inst.oracle(None).unwrap();
            let (_, opt) = brute_force_opt(&o, &(0..8).collect::<Vec<_>>(), k).unwrap();
            let t = run_two_player(&BaselineHalf, &part, &o, k).unwrap();
            assert!((t.value / opt - 0.5).abs() < 1e-12);
        }
    }

    #[test]
    fn index_instance_is_valid() {
        let inst = generate(&GeneratorSpec::Index { n: 3, k: 4 }, 5, None).unwrap();
        assert_eq!(inst.ground_size, 10);
        assert_eq!(inst.private_sets[1], vec![9]);
    }
}

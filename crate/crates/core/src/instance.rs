//! On-disk instance format: a ground set, its split into player blocks and
//! private inputs, and the set function, tagged by `kind`.

use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::coverage::{FractionalCoverage, IndexHardness, WeightedCoverage};
use crate::error::{Error, Result};
use crate::ground::{GroundSet, Partition};
use crate::hardness::{make_weights, HardnessInstance};
use crate::oracle::{SetFunction, ValueOracle};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FunctionSpec {
    Coverage {
        weights: Vec<f64>,
        sets: Vec<Vec<usize>>,
    },
    FractionalCoverage {
        weights: Vec<f64>,
        probs: Vec<Vec<(usize, f64)>>,
    },
    MultilinearIndex {
        n: usize,
        k: usize,
        index: usize,
    },
    Hardness {
        p: usize,
        n: usize,
        hidden: Vec<usize>,
    },
}

impl FunctionSpec {
    pub fn kind(&self) -> &'static str {
        match self {
            Self::Coverage { .. } => "coverage",
            Self::FractionalCoverage { .. } => "fractional_coverage",
            Self::MultilinearIndex { .. } => "multilinear_index",
            Self::Hardness { .. } => "hardness",
        }
    }

    pub fn build(&self) -> Result<Arc<dyn SetFunction>> {
        Ok(match self {
            Self::Coverage { weights, sets } => Arc::new(WeightedCoverage::new(weights.clone(), sets.clone())?),
            Self::FractionalCoverage { weights, probs } => {
                Arc::new(FractionalCoverage::new(weights.clone(), probs.clone())?)
            }
            Self::MultilinearIndex { n, k, index } => Arc::new(IndexHardness::new(*n, *k, *index)?),
            Self::Hardness { p, n, hidden } => Arc::new(HardnessInstance::new(make_weights(*p)?, *n, hidden.clone())?),
        })
    }
}

impl From<&WeightedCoverage> for FunctionSpec {
    fn from(f: &WeightedCoverage) -> Self {
        Self::Coverage {
            weights: f.weights().to_vec(),
            sets: f.sets().to_vec(),
        }
    }
}

impl From<&FractionalCoverage> for FunctionSpec {
    fn from(f: &FractionalCoverage) -> Self {
        Self::FractionalCoverage {
            weights: f.weights().to_vec(),
            probs: f.probs().to_vec(),
        }
    }
}

impl From<&IndexHardness> for FunctionSpec {
    fn from(f: &IndexHardness) -> Self {
        Self::MultilinearIndex {
            n: f.n(),
            k: f.k(),
            index: f.index(),
        }
    }
}

impl From<&HardnessInstance> for FunctionSpec {
    fn from(f: &HardnessInstance) -> Self {
        Self::Hardness {
            p: f.p(),
            n: f.n(),
            hidden: f.hidden().to_vec(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Instance {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub id: Option<String>,
    pub ground_size: usize,
    pub blocks: Vec<Vec<usize>>,
    pub private_sets: Vec<Vec<usize>>,
    pub function: FunctionSpec,
}

impl Instance {
    pub fn new(id: Option<String>, partition: &Partition, function: FunctionSpec) -> Result<Self> {
        let inst = Self {
            id,
            ground_size: partition.ground().size(),
            blocks: partition.blocks().to_vec(),
            private_sets: partition.private_sets().to_vec(),
            function,
        };
        inst.validate()?;
        Ok(inst)
    }

    pub fn partition(&self) -> Result<Partition> {
        Partition::new(GroundSet::new(self.ground_size)?, self.blocks.clone(), self.private_sets.clone())
    }

    pub fn function(&self) -> Result<Arc<dyn SetFunction>> {
        let f = self.function.build()?;
        if f.ground_size() != self.ground_size {
            return Err(Error::Invalid(format!(
                "{} function has {} elements but the instance declares {}",
                self.function.kind(),
                f.ground_size(),
                self.ground_size
            )));
        }
        Ok(f)
    }

    pub fn validate(&self) -> Result<()> {
        self.partition()?;
        self.function()?;
        Ok(())
    }

    /// A fresh oracle over the whole ground set.
    pub fn oracle(&self, bound: Option<usize>) -> Result<ValueOracle> {
        Ok(ValueOracle::new(self.function()?, bound))
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let inst: Self = serde_json::from_str(text).map_err(|e| Error::Invalid(format!("instance JSON: {e}")))?;
        inst.validate()?;
        Ok(inst)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("instances always serialize")
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Invalid(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json() + "\n")
            .map_err(|e| Error::Invalid(format!("cannot write {}: {e}", path.display())))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> Instance {
        let f = WeightedCoverage::new(vec![1.0, 2.0], vec![vec![0], vec![1], vec![0, 1]]).unwrap();
        let part = Partition::two_player(GroundSet::new(3).unwrap(), vec![0, 1], vec![2]).unwrap();
        Instance::new(Some("tiny".into()), &part, (&f).into()).unwrap()
    }

    #[test]
    fn json_round_trip() {
        let inst = small();
        let json = inst.to_json();
        assert!(json.contains(r#""kind": "coverage""#));
        let back = Instance::from_json(&json).unwrap();
        assert_eq!(back, inst);
        assert_eq!(back.to_json(), json);
        assert_eq!(back.oracle(None).unwrap().value_unrecorded(&[2]), 3.0);
    }

    #[test]
    fn every_kind_parses() {
        let docs = [
            r#"{"ground_size":2,"blocks":[[0],[1]],"private_sets":[[0],[1]],
                "function":{"kind":"fractional_coverage","weights":[1.0],"probs":[[[0,0.5]],[[0,0.5]]]}}"#,
            r#"{"ground_size":5,"blocks":[[0,1,2,3],[4]],"private_sets":[[0,1],[4]],
                "function":{"kind":"multilinear_index","n":2,"k":3,"index":1}}"#,
            r#"{"id":"h","ground_size":4,"blocks":[[0,1],[2,3]],"private_sets":[[0,1],[2,3]],
                "function":{"kind":"hardness","p":2,"n":2,"hidden":[1,2]}}"#,
        ];
        for d in docs {
            Instance::from_json(d).unwrap();
        }
        let f = Instance::from_json(docs[0]).unwrap().oracle(None).unwrap();
        assert!((f.value_unrecorded(&[0, 1]) - 0.75).abs() < 1e-15);
    }

    #[test]
    fn rejects_bad_documents() {
        let mismatch = r#"{"ground_size":3,"blocks":[[0],[1,2]],"private_sets":[[0],[1]],
            "function":{"kind":"coverage","weights":[1.0],"sets":[[0],[0]]}}"#;
        assert!(Instance::from_json(mismatch).is_err());
        let bad_index = r#"{"ground_size":5,"blocks":[[0,1,2,3],[4]],"private_sets":[[0],[4]],
            "function":{"kind":"multilinear_index","n":2,"k":3,"index":2}}"#;
        assert!(Instance::from_json(bad_index).is_err());
        let unknown = r#"{"ground_size":1,"blocks":[[0]],"private_sets":[[0]],"function":{"kind":"matroid"}}"#;
        assert!(Instance::from_json(unknown).is_err());
    }
}

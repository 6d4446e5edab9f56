//! Desk-scale toolkit for one-way communication protocols that maximize a
//! monotone submodular function under a cardinality constraint, along with
//! hard instance families, a deletion-robust wrapper and numeric checks of
//! the analysis behind the 0.514 protocol.

pub mod coverage;
pub mod error;
pub mod generate;
pub mod ground;
pub mod hardness;
pub mod instance;
pub mod nlp;
pub mod oracle;
pub mod protocol;
pub mod reduction;
pub mod robust;
pub mod rng;
pub mod solve;

pub use coverage::{FractionalCoverage, IndexHardness, WeightedCoverage};
pub use error::{Error, Result};
pub use generate::{generate, GeneratorSpec};
pub use ground::{CardinalityConstraint, GroundSet, Partition};
pub use instance::{FunctionSpec, Instance};
pub use oracle::{Evaluate, FnSetFunction, Ledger, LedgerSnapshot, Modular, SetFunction, ValueOracle, VALUE_TOLERANCE};
pub use rng::SeedSplitter;
pub use solve::{brute_force_opt, check_monotone_submodular, greedy, greedy_from, marginal};

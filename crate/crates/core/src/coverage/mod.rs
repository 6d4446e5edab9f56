//! Explicit submodular constructions: weighted coverage, weighted fractional
//! coverage and the two-player index-hardness functions.

mod fractional;
mod multilinear;
mod weighted;

pub use fractional::{fractional_to_weighted, FractionalCoverage, CONVERSION_GUARD, CONVERSION_PRUNE};
pub use multilinear::{eval_g, poisson_binomial, IndexG, IndexHardness};
pub use weighted::WeightedCoverage;

//! Fixtures shared by the benchmarks.

use maxcard_core::{generate, GeneratorSpec, Instance};

/// A seeded two-player coverage instance with `n` elements.
pub fn coverage_instance(n: usize, seed: u64) -> Instance {
    let spec = GeneratorSpec::Coverage {
        n,
        universe: 2 * n,
        density: 0.25,
    };
    generate(&spec, seed, None).expect("valid generator spec")
}

//! Fixture graphs shared by the benchmarks.

use rigidity_core::{generators, Graph};

/// Connected `degree`-regular graphs, one per entry of `sizes`.
pub fn regular_fixtures(degree: usize, sizes: &[usize]) -> Vec<Graph> {
    sizes
        .iter()
        .map(|&n| generators::random_regular(n, degree, n as u64).expect("feasible fixture"))
        .collect()
}

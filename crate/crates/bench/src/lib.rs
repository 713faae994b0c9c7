//! Instances shared by the benchmarks.

use hallkit::fixtures::{gen_random_hypergraph, gen_simple, SimpleKind};
use hallkit::{MultiHypergraph, SimpleGraph};

/// `(n, δ, r)` grid for the orientation benchmarks.
pub const HSO_GRID: [(usize, usize, usize); 4] = [(1000, 3, 2), (1000, 8, 3), (10_000, 4, 2), (10_000, 6, 3)];

pub fn hypergraph(n: usize, delta: usize, r: usize) -> MultiHypergraph {
    gen_random_hypergraph(n, delta, r, 1).expect("feasible grid point")
}

pub fn simple(n: usize, delta: usize) -> SimpleGraph {
    gen_simple(SimpleKind::RandomDelta { n, delta }, 1).expect("feasible grid point")
}

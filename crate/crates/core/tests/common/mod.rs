#![allow(dead_code)]

use std::collections::BTreeSet;

use hallkit::{BipartiteView, MultiHypergraph};
use proptest::prelude::*;

/// Vertex count and member masks of a small multihypergraph on `0..n`.
pub fn small_masks(max_n: usize, max_m: usize) -> impl Strategy<Value = (usize, Vec<u32>)> {
    (1..=max_n).prop_flat_map(move |n| {
        let full = (1u32 << n) - 1;
        (Just(n), prop::collection::vec(1..=full, 0..=max_m))
    })
}

pub fn from_masks(n: usize, masks: &[u32]) -> MultiHypergraph {
    let edges = masks.iter().enumerate().map(|(i, &m)| (i as u32, (0..n as u32).filter(|v| m >> v & 1 == 1).collect()));
    MultiHypergraph::with_vertex_range(n, edges).unwrap()
}

pub fn mask_of(vs: &[u32]) -> u32 {
    vs.iter().fold(0, |m, &v| m | 1 << v)
}

/// Whether every vertex set `T` meets at least `|T|` edges.
pub fn is_hall(n: usize, masks: &[u32]) -> bool {
    (1u32..1 << n).all(|t| masks.iter().filter(|&&m| m & t != 0).count() >= t.count_ones() as usize)
}

/// Union of all vertex sets `S` whose induced subgraph (edges entirely
/// inside `S`) is Hall. With `f(U)` the number of edges inside `U`, `S`
/// qualifies iff `f(S) - |S| >= f(U) - |U|` for every `U ⊆ S`.
pub fn induced_hall_union(n: usize, masks: &[u32]) -> u32 {
    let size = 1usize << n;
    let mut f = vec![0i64; size];
    for &m in masks {
        f[m as usize] += 1;
    }
    for b in 0..n {
        for s in 0..size {
            if s >> b & 1 == 1 {
                f[s] += f[s ^ 1 << b];
            }
        }
    }
    let h: Vec<i64> = (0..size).map(|s| f[s] - (s as u32).count_ones() as i64).collect();
    let mut best = h.clone();
    for b in 0..n {
        for s in 0..size {
            if s >> b & 1 == 1 {
                best[s] = best[s].max(best[s ^ 1 << b]);
            }
        }
    }
    (1..size).filter(|&s| h[s] == best[s]).fold(0, |u, s| u | s as u32)
}

/// Maximum matching size by the deficiency formula
/// `|L| - max_T (|T| - |N(T)|)`, enumerating every left subset.
pub fn deficiency_matching_size(b: &BipartiteView) -> usize {
    let l = b.left.len();
    assert!(l <= 16);
    let mut worst = 0usize;
    for t in 0u32..1 << l {
        let nb: BTreeSet<u32> = (0..l).filter(|&i| t >> i & 1 == 1).flat_map(|i| b.left_adj[i].iter().copied()).collect();
        worst = worst.max((t.count_ones() as usize).saturating_sub(nb.len()));
    }
    l - worst
}

/// Random bipartite graph with every left degree `dl` and right degrees at
/// most `dr`, or `None` if the greedy fill gets stuck.
pub fn left_regular(nl: usize, nr: usize, dl: usize, dr: usize, seed: u64) -> Option<BipartiteView> {
    use rand::seq::SliceRandom;
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut load = vec![0usize; nr];
    let mut pairs = Vec::new();
    for l in 0..nl {
        let mut open: Vec<usize> = (0..nr).filter(|&r| load[r] < dr).collect();
        if open.len() < dl {
            return None;
        }
        open.shuffle(&mut rng);
        for &r in &open[..dl] {
            load[r] += 1;
            pairs.push((l as u32, r as u32));
        }
    }
    BipartiteView::from_pairs(0..nl as u32, 0..nr as u32, pairs).ok()
}

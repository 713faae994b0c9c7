//! Seeded instance generators. Every generator is a pure function of its
//! parameters and seed.

use std::collections::HashSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::edge_color::SimpleGraph;
use crate::error::{Error, Result};
use crate::hypergraph::{BipartiteView, EdgeId, MultiHypergraph, VertexId};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Topology {
    /// Vertex `v` draws its partners from `v+1 ..= v+window` (mod n),
    /// preferring vertices it does not share an edge with yet.
    Ring { window: usize },
    /// Partners drawn uniformly from all other vertices.
    Uniform,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HyperGenConfig {
    pub n: usize,
    pub delta: usize,
    pub rank: usize,
    pub topology: Topology,
    /// Joins components with rank-2 edges after generation.
    pub connected: bool,
    pub allow_equal: bool,
}

impl HyperGenConfig {
    pub fn new(n: usize, delta: usize, rank: usize) -> Self {
        HyperGenConfig {
            n,
            delta,
            rank,
            topology: Topology::Ring { window: (2 * rank).max(delta) },
            connected: true,
            allow_equal: false,
        }
    }

    pub fn topology(mut self, t: Topology) -> Self {
        self.topology = t;
        self
    }

    pub fn connected(mut self, c: bool) -> Self {
        self.connected = c;
        self
    }
}

/// Random multihypergraph with minimum degree at least `delta` and every
/// edge of rank exactly `r`, on the ring topology.
pub fn gen_random_hypergraph(n: usize, delta: usize, r: usize, seed: u64) -> Result<MultiHypergraph> {
    gen_random_hypergraph_with(&HyperGenConfig::new(n, delta, r), seed)
}

pub fn gen_random_hypergraph_with(cfg: &HyperGenConfig, seed: u64) -> Result<MultiHypergraph> {
    let HyperGenConfig { n, delta, rank: r, .. } = *cfg;
    if r < 2 || (delta <= r && !(cfg.allow_equal && delta == r)) {
        return Err(Error::Infeasible(format!("need delta > r >= 2, got delta={delta}, r={r}")));
    }
    if n < r {
        return Err(Error::Infeasible(format!("{n} vertices cannot carry an edge of rank {r}")));
    }
    let window = match cfg.topology {
        Topology::Ring { window } => {
            let w = window.min(n - 1);
            if w + 1 < r {
                return Err(Error::Infeasible(format!("window {window} too small for rank {r}")));
            }
            Some(w)
        }
        Topology::Uniform => None,
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut deg = vec![0usize; n];
    let mut edges: Vec<Vec<VertexId>> = Vec::new();
    let mut seen: Vec<HashSet<u32>> = if window.is_some() { vec![HashSet::new(); n] } else { Vec::new() };
    let mut cand: Vec<(bool, u64, u32)> = Vec::new();
    for v in 0..n {
        while deg[v] < delta {
            let mut members = vec![v as u32];
            match window {
                Some(w) => {
                    cand.clear();
                    cand.extend((1..=w).map(|k| {
                        let u = ((v + k) % n) as u32;
                        (seen[v].contains(&u), rng.gen(), u)
                    }));
                    cand.sort_unstable();
                    members.extend(cand.iter().take(r - 1).map(|c| c.2));
                }
                None => {
                    while members.len() < r {
                        let u = rng.gen_range(0..n) as u32;
                        if !members.contains(&u) {
                            members.push(u);
                        }
                    }
                }
            }
            members.sort_unstable();
            for &a in &members {
                deg[a as usize] += 1;
                if window.is_some() {
                    seen[a as usize].extend(members.iter().copied().filter(|&b| b != a));
                }
            }
            edges.push(members);
        }
    }
    let mut g = MultiHypergraph::with_vertex_range(
        n,
        edges.iter().enumerate().map(|(i, m)| (i as EdgeId, m.clone())),
    )?;
    if cfg.connected {
        let comps = g.components();
        if comps.len() > 1 {
            let mut next = edges.len() as EdgeId;
            for w in comps.windows(2) {
                edges.push(vec![w[0][0], w[1][0]]);
                next += 1;
            }
            debug_assert_eq!(next as usize, edges.len());
            g = MultiHypergraph::with_vertex_range(
                n,
                edges.into_iter().enumerate().map(|(i, m)| (i as EdgeId, m)),
            )?;
        }
    }
    Ok(g)
}

/// Four vertices and three edges that each contain all four vertices.
pub fn gen_fig1() -> MultiHypergraph {
    MultiHypergraph::with_vertex_range(4, (0..3).map(|e| (e, vec![0, 1, 2, 3]))).expect("well formed")
}

/// Chain of `K_{delta,delta}`-minus-an-edge gadgets between a right node
/// `a` and a left node `b`. Both sides are `delta`-regular.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LowerBound {
    pub view: BipartiteView,
    pub delta: usize,
    /// Gadgets per chain.
    pub length: usize,
    /// Right-side id of `a`.
    pub a: u32,
    /// Left-side id of `b`.
    pub b: u32,
}

impl LowerBound {
    fn gadget(&self, id: u32) -> Option<(usize, usize)> {
        let g = id as usize / self.delta;
        (g < self.delta * self.length).then_some((g / self.length, g % self.length))
    }

    /// `(chain, position)` of the gadget holding a left node.
    pub fn gadget_of_left(&self, id: u32) -> Option<(usize, usize)> {
        if id == self.b {
            None
        } else {
            self.gadget(id)
        }
    }

    /// `(chain, position)` of the gadget holding a right node.
    pub fn gadget_of_right(&self, id: u32) -> Option<(usize, usize)> {
        if id == self.a {
            None
        } else {
            self.gadget(id)
        }
    }

    /// The hypergraph whose bipartite view this is.
    pub fn hypergraph(&self) -> MultiHypergraph {
        self.view.to_hypergraph()
    }
}

/// Gadget `(i, j)` holds left nodes `P_k` and right nodes `Q_k` with id
/// `(i * L + j) * delta + k`; `u = P_0`, `v = Q_0` and the edge `u v` is
/// missing. `a` joins every `u` of position 0, `v` of position `j` joins
/// `u` of position `j + 1`, and every last `v` joins `b`.
pub fn gen_lowerbound(delta: usize, n: usize) -> Result<LowerBound> {
    let sq = delta * delta;
    if delta < 2 || n <= 1 || !(n - 1).is_multiple_of(sq) {
        return Err(Error::Infeasible(format!("n - 1 = {} is not a positive multiple of {sq}", n.saturating_sub(1))));
    }
    let len = (n - 1) / sq;
    let node = |i: usize, j: usize, k: usize| ((i * len + j) * delta + k) as u32;
    let last = (delta * delta * len) as u32;
    let (a, b) = (last, last);
    let mut pairs = Vec::new();
    for i in 0..delta {
        for j in 0..len {
            for p in 0..delta {
                for q in 0..delta {
                    if p != 0 || q != 0 {
                        pairs.push((node(i, j, p), node(i, j, q)));
                    }
                }
            }
            if j == 0 {
                pairs.push((node(i, j, 0), a));
            } else {
                pairs.push((node(i, j, 0), node(i, j - 1, 0)));
            }
            if j == len - 1 {
                pairs.push((b, node(i, j, 0)));
            }
        }
    }
    let view = BipartiteView::from_pairs(0..=last, 0..=last, pairs)?;
    Ok(LowerBound { view, delta, length: len, a, b })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SimpleKind {
    CubicRandom { n: usize },
    Petersen,
    Path { n: usize },
    Cycle { n: usize },
    /// Random simple graph with maximum degree exactly `delta` (almost regular).
    RandomDelta { n: usize, delta: usize },
}

const PAIRING_RETRIES: usize = 1000;

pub fn gen_simple(kind: SimpleKind, seed: u64) -> Result<SimpleGraph> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match kind {
        SimpleKind::Petersen => {
            let mut pairs = Vec::new();
            for i in 0..5 {
                pairs.push((i, (i + 1) % 5));
                pairs.push((i, i + 5));
                pairs.push((5 + i, 5 + (i + 2) % 5));
            }
            SimpleGraph::from_pairs(10, pairs)
        }
        SimpleKind::Path { n } => SimpleGraph::from_pairs(n, (1..n as u32).map(|v| (v - 1, v))),
        SimpleKind::Cycle { n } => {
            if n < 3 {
                return Err(Error::Infeasible(format!("cycle on {n} vertices")));
            }
            SimpleGraph::from_pairs(n, (0..n as u32).map(|v| (v, (v + 1) % n as u32)))
        }
        SimpleKind::CubicRandom { n } => {
            if n < 4 || n % 2 == 1 {
                return Err(Error::Infeasible(format!("no cubic graph on {n} vertices")));
            }
            let mut stubs: Vec<u32> = (0..n as u32).flat_map(|v| [v; 3]).collect();
            for _ in 0..PAIRING_RETRIES {
                stubs.shuffle(&mut rng);
                let mut seen = HashSet::new();
                let ok = stubs.chunks(2).all(|p| p[0] != p[1] && seen.insert((p[0].min(p[1]), p[0].max(p[1]))));
                if ok {
                    let mut pairs: Vec<_> = seen.into_iter().collect();
                    pairs.sort_unstable();
                    return SimpleGraph::from_pairs(n, pairs);
                }
            }
            Err(Error::RetriesExhausted(PAIRING_RETRIES))
        }
        SimpleKind::RandomDelta { n, delta } => {
            if delta == 0 || n <= delta {
                return Err(Error::Infeasible(format!("max degree {delta} on {n} vertices")));
            }
            let mut deg = vec![0usize; n];
            let mut seen = HashSet::new();
            let mut open: Vec<u32> = (0..n as u32).collect();
            let mut misses = 0;
            while open.len() >= 2 && misses < 1000 {
                let i = rng.gen_range(0..open.len());
                let j = rng.gen_range(0..open.len());
                let (u, v) = (open[i], open[j]);
                if u == v || !seen.insert((u.min(v), u.max(v))) {
                    misses += 1;
                    continue;
                }
                misses = 0;
                deg[u as usize] += 1;
                deg[v as usize] += 1;
                let (hi, lo) = (i.max(j), i.min(j));
                if deg[open[hi] as usize] == delta {
                    open.swap_remove(hi);
                }
                if deg[open[lo] as usize] == delta {
                    open.swap_remove(lo);
                }
            }
            if deg.iter().all(|&d| d < delta) {
                return Err(Error::Infeasible(format!("no vertex reached degree {delta}")));
            }
            let mut pairs: Vec<_> = seen.into_iter().collect();
            pairs.sort_unstable();
            SimpleGraph::from_pairs(n, pairs)
        }
    }
}

/// Replaces every edge `u v` by a path `u w v` through a new vertex.
pub fn subdivide(g: &SimpleGraph) -> Result<SimpleGraph> {
    let n = g.num_vertices();
    let mut pairs = Vec::new();
    for (k, (_, u, v)) in g.edges().enumerate() {
        let w = (n + k) as VertexId;
        let (a, b) = (g.vertex_index(u).unwrap() as VertexId, g.vertex_index(v).unwrap() as VertexId);
        pairs.push((a, w));
        pairs.push((w, b));
    }
    SimpleGraph::from_pairs(n + g.num_edges(), pairs)
}

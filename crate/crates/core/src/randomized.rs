//! Randomized HSO by shattering.
//!
//! Random draws are tied to edge ids, never to iteration order: the draws of
//! edge `e` under seed `s` are the words of `ChaCha8Rng::seed_from_u64(s)`
//! switched to stream `e`. The first word activates the edge when its top two
//! bits are zero (probability 1/4); the second picks the owner among the
//! edge's members as `(word * rank) >> 64`. Subsampling uses the seed
//! `s ^ SUBSAMPLE_TAG`, one word per member in ascending vertex order.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hso::{solve_hso, Orientation};
use crate::hypergraph::{EdgeId, MultiHypergraph, VertexId};
use crate::oracles::verify_hso;

const SUBSAMPLE_TAG: u64 = 0x5eed_5a3b_1e00_0000;

/// `⌈log₂ x⌉`, with `log₂ 1 = 0`.
pub fn ceil_log2(x: usize) -> usize {
    x.next_power_of_two().trailing_zeros() as usize
}

/// Constants of the randomized pipeline. The defaults are the ones the
/// analysis uses; tests scale them down to reach the high-rank regime at
/// small `n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RandomizedConfig {
    /// Target degree is `degree_factor * r * ⌈log₂ r⌉`.
    pub degree_factor: usize,
    /// Subsampling applies when `r >= rank_factor * ⌈log₂ n⌉`.
    pub rank_factor: usize,
    /// Subsampled ranks must stay at most `cap_factor * ⌈log₂ n⌉`.
    pub cap_factor: usize,
    pub retries: usize,
}

impl Default for RandomizedConfig {
    fn default() -> Self {
        RandomizedConfig { degree_factor: 320, rank_factor: 100, cap_factor: 200, retries: 16 }
    }
}

impl RandomizedConfig {
    pub fn target_degree(&self, r: usize) -> usize {
        self.degree_factor * r * ceil_log2(r)
    }
}

fn edge_stream(seed: u64, e: EdgeId) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(e as u64);
    rng
}

/// Keeps every vertex in its `target` smallest-id incident edges only.
/// Edges left without members disappear.
pub fn regularize_to(g: &MultiHypergraph, target: usize) -> Result<MultiHypergraph> {
    let mut members: Vec<Vec<u32>> = vec![Vec::new(); g.num_edges()];
    for v in 0..g.num_vertices() {
        let inc = g.incident_of(v);
        if inc.len() < target {
            return Err(Error::precondition(format!(
                "vertex {} has degree {} < {target}",
                g.vertices()[v],
                inc.len()
            )));
        }
        for &e in &inc[..target] {
            members[e as usize].push(v as u32);
        }
    }
    let edges = g
        .edge_ids()
        .iter()
        .zip(members)
        .filter(|(_, m)| !m.is_empty())
        .map(|(&id, m)| (id, m))
        .collect();
    Ok(MultiHypergraph::from_sorted_parts(g.vertices().to_vec(), edges))
}

/// [`regularize_to`] the default target degree `320 r ⌈log₂ r⌉` of `g`'s rank.
pub fn regularize(g: &MultiHypergraph) -> Result<MultiHypergraph> {
    regularize_with(g, &RandomizedConfig::default())
}

pub fn regularize_with(g: &MultiHypergraph, cfg: &RandomizedConfig) -> Result<MultiHypergraph> {
    let r = g.profile().rank;
    if r < 2 {
        return Err(Error::precondition(format!("rank {r} < 2")));
    }
    regularize_to(g, cfg.target_degree(r))
}

/// Outcome of the random phase. All sets are sorted.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShatterState {
    pub rng_seed: u64,
    pub degree: usize,
    /// Edges still active after the overloaded vertices gave theirs up.
    pub activated: Vec<EdgeId>,
    pub owner_draft: Orientation,
    pub bad1: Vec<VertexId>,
    pub bad2: Vec<VertexId>,
    pub bad3: Vec<VertexId>,
}

impl ShatterState {
    pub fn bad(&self) -> Vec<VertexId> {
        let mut b: Vec<VertexId> = self.bad1.iter().chain(&self.bad2).chain(&self.bad3).copied().collect();
        b.sort_unstable();
        b
    }

    pub fn is_activated(&self, e: EdgeId) -> bool {
        self.activated.binary_search(&e).is_ok()
    }
}

fn common_degree(g: &MultiHypergraph) -> Result<usize> {
    let d = if g.num_vertices() == 0 { 0 } else { g.degree_of(0) };
    if (0..g.num_vertices()).any(|v| g.degree_of(v) != d) {
        return Err(Error::precondition("graph is not regular"));
    }
    Ok(d)
}

/// Activation and owner draws, then the three bad sets.
pub fn pre_shatter(g: &MultiHypergraph, seed: u64) -> Result<ShatterState> {
    let draws: Vec<Option<u32>> = (0..g.num_edges())
        .into_par_iter()
        .map(|e| {
            let mut rng = edge_stream(seed, g.edge_ids()[e]);
            let act = rng.next_u64() >> 62 == 0;
            let pick = rng.next_u64();
            act.then(|| {
                let m = g.members_of(e);
                m[((pick as u128 * m.len() as u128) >> 64) as usize]
            })
        })
        .collect();
    shatter_from(g, seed, draws, true)
}

/// Test hook: every edge active and owned by its smallest endpoint. The load
/// test is skipped (it would mark every vertex), so only the
/// no-outgoing-edge rule decides the bad set.
pub fn pre_shatter_forced(g: &MultiHypergraph) -> Result<ShatterState> {
    let draws = (0..g.num_edges()).map(|e| Some(g.members_of(e)[0])).collect();
    shatter_from(g, 0, draws, false)
}

fn shatter_from(g: &MultiHypergraph, seed: u64, mut draws: Vec<Option<u32>>, load_test: bool) -> Result<ShatterState> {
    let degree = common_degree(g)?;
    let n = g.num_vertices();
    let mut bad1 = vec![false; n];
    if load_test {
        for (v, b) in bad1.iter_mut().enumerate() {
            let active = g.incident_of(v).iter().filter(|&&e| draws[e as usize].is_some()).count();
            *b = active * 2 > degree || active * 8 < degree;
        }
    }
    let mut bad2 = vec![false; n];
    for v in (0..n).filter(|&v| bad1[v]) {
        g.for_each_neighbor(v, |u| bad2[u] |= !bad1[u]);
    }
    for v in (0..n).filter(|&v| bad1[v]) {
        for &e in g.incident_of(v) {
            draws[e as usize] = None;
        }
    }
    let mut owns = vec![false; n];
    for o in draws.iter().flatten() {
        owns[*o as usize] = true;
    }
    let ids = |f: &dyn Fn(usize) -> bool| (0..n).filter(|&v| f(v)).map(|v| g.vertices()[v]).collect();
    let bad3 = ids(&|v| !bad1[v] && !bad2[v] && !owns[v]);
    let activated: Vec<EdgeId> = (0..g.num_edges()).filter(|&e| draws[e].is_some()).map(|e| g.edge_ids()[e]).collect();
    let owner_draft = Orientation::from_pairs(
        draws
            .iter()
            .enumerate()
            .filter_map(|(e, o)| o.map(|v| (g.edge_ids()[e], g.vertices()[v as usize]))),
    )?;
    Ok(ShatterState {
        rng_seed: seed,
        degree,
        activated,
        owner_draft,
        bad1: ids(&|v| bad1[v]),
        bad2: ids(&|v| bad2[v]),
        bad3,
    })
}

/// Sizes of the deterministic phase.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PostShatterStats {
    pub bad_vertices: usize,
    pub residual_edges: usize,
    pub components: usize,
    pub max_component: usize,
}

/// Solves the unactivated edges meeting the bad set, restricted to it, one
/// component at a time, and merges with the draft: residual edges take the
/// component owner, other activated edges keep their draft owner and the
/// rest go to their smallest endpoint.
pub fn post_shatter(g: &MultiHypergraph, st: &ShatterState) -> Result<(Orientation, PostShatterStats)> {
    let bad = st.bad();
    let kept: Vec<usize> = bad
        .iter()
        .map(|&v| g.vertex_index(v).ok_or(Error::UnknownVertex(v)))
        .collect::<Result<_>>()?;
    let mut in_b = vec![false; g.num_vertices()];
    for &v in &kept {
        in_b[v] = true;
    }
    let edges: Vec<usize> = (0..g.num_edges())
        .filter(|&e| !st.is_activated(g.edge_ids()[e]) && g.members_of(e).iter().any(|&v| in_b[v as usize]))
        .collect();
    let residual = g.project(&kept, &edges);
    let rank = g.profile().rank;
    for v in 0..residual.num_vertices() {
        let d = residual.degree_of(v);
        if 2 * d < st.degree || d <= rank {
            return Err(Error::internal(format!(
                "bad vertex {} keeps only {d} unactivated edges (degree {}, rank {rank})",
                residual.vertices()[v],
                st.degree
            )));
        }
    }
    let comps = residual.components();
    let stats = PostShatterStats {
        bad_vertices: bad.len(),
        residual_edges: residual.num_edges(),
        components: comps.len(),
        max_component: comps.iter().map(Vec::len).max().unwrap_or(0),
    };
    let solved: Vec<Orientation> =
        comps.par_iter().map(|c| solve_hso(&residual.induced(c)?)).collect::<Result<_>>()?;
    let mut owner: Vec<VertexId> = (0..g.num_edges()).map(|e| g.vertices()[g.members_of(e)[0] as usize]).collect();
    for (e, v) in st.owner_draft.iter() {
        owner[g.edge_index(e).ok_or(Error::UnknownEdge(e))?] = v;
    }
    for o in &solved {
        for (e, v) in o.iter() {
            owner[g.edge_index(e).unwrap()] = v;
        }
    }
    let o = Orientation::from_pairs(g.edge_ids().iter().copied().zip(owner))?;
    let rep = verify_hso(g, &o);
    if !rep.certified() {
        return Err(Error::internal(format!("merged orientation invalid: {rep}")));
    }
    Ok((o, stats))
}

/// Keeps each membership independently with probability
/// `p = rank_factor ⌈log₂ n⌉ / r` after every vertex votes for its `n²`
/// smallest incident edges, then trims all degrees to `⌊p δ / 2⌋` where `δ`
/// is the minimum degree after voting. Retries with the next seed when a
/// rank exceeds `cap_factor ⌈log₂ n⌉` or a degree falls below the trim
/// target. Returns the graph and the seed that succeeded.
pub fn subsample_high_rank(g: &MultiHypergraph, seed: u64, cfg: &RandomizedConfig) -> Result<(MultiHypergraph, u64)> {
    let n = g.num_vertices();
    let r = g.profile().rank;
    let logn = ceil_log2(n).max(1);
    if r < cfg.rank_factor * logn {
        return Err(Error::precondition(format!("rank {r} < {} * {logn}", cfg.rank_factor)));
    }
    if g.profile().delta < cfg.target_degree(r) {
        return Err(Error::precondition(format!(
            "minimum degree {} < {}",
            g.profile().delta,
            cfg.target_degree(r)
        )));
    }
    // votes
    let cap = n.saturating_mul(n);
    let mut voted = vec![false; g.num_edges()];
    for v in 0..n {
        for &e in g.incident_of(v).iter().take(cap) {
            voted[e as usize] = true;
        }
    }
    let edges: Vec<usize> = (0..g.num_edges()).filter(|&e| voted[e]).collect();
    let all: Vec<usize> = (0..n).collect();
    let capped = g.project(&all, &edges);
    let delta = capped.profile().delta;
    let (num, den) = (cfg.rank_factor * logn, r);
    let target = (num.min(den) * delta) / (2 * den);
    let max_rank = cfg.cap_factor * logn;
    for attempt in 0..cfg.retries as u64 {
        let s = seed.wrapping_add(attempt);
        let members: Vec<(EdgeId, Vec<u32>)> = (0..capped.num_edges())
            .into_par_iter()
            .map(|e| {
                let id = capped.edge_ids()[e];
                let mut rng = edge_stream(s ^ SUBSAMPLE_TAG, id);
                let m = capped
                    .members_of(e)
                    .iter()
                    .copied()
                    .filter(|_| num >= den || (rng.next_u64() as u128 * den as u128) >> 64 < num as u128)
                    .collect();
                (id, m)
            })
            .collect();
        let sampled = MultiHypergraph::from_sorted_parts(
            capped.vertices().to_vec(),
            members.into_iter().filter(|(_, m)| !m.is_empty()).collect(),
        );
        let p = sampled.profile();
        if p.rank <= max_rank && p.delta >= target && target > 0 {
            return Ok((regularize_to(&sampled, target)?, s));
        }
        log::debug!("subsample attempt {attempt}: rank {} degree {} target {target}", p.rank, p.delta);
    }
    Err(Error::RetriesExhausted(cfg.retries))
}

/// Machine-readable summary of one randomized run.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RandomizedReport {
    pub seed: u64,
    pub subsampled: bool,
    pub subsample_seed: Option<u64>,
    pub rank: usize,
    pub degree: usize,
    pub activated: usize,
    pub bad1: usize,
    pub bad2: usize,
    pub bad3: usize,
    pub post: PostShatterStats,
    pub certified: bool,
}

pub fn solve_randomized(g: &MultiHypergraph, seed: u64) -> Result<(Orientation, RandomizedReport)> {
    solve_randomized_with(g, seed, &RandomizedConfig::default())
}

/// Optional subsampling, regularization, the random phase and the
/// deterministic phase; the result is checked against `g` before returning.
pub fn solve_randomized_with(
    g: &MultiHypergraph,
    seed: u64,
    cfg: &RandomizedConfig,
) -> Result<(Orientation, RandomizedReport)> {
    let mut report = RandomizedReport { seed, ..RandomizedReport::default() };
    let n = g.num_vertices();
    let r = g.profile().rank;
    let sub;
    let base = if r >= 2 && r >= cfg.rank_factor * ceil_log2(n).max(1) {
        let (h, s) = subsample_high_rank(g, seed, cfg)?;
        report.subsampled = true;
        report.subsample_seed = Some(s);
        sub = h;
        &sub
    } else {
        if r < 2 {
            return Err(Error::precondition(format!("rank {r} < 2")));
        }
        let need = cfg.target_degree(r);
        if g.profile().delta < need {
            return Err(Error::precondition(format!("minimum degree {} < {need}", g.profile().delta)));
        }
        sub = regularize_to(g, need)?;
        &sub
    };
    report.rank = base.profile().rank;
    let st = pre_shatter(base, seed)?;
    report.degree = st.degree;
    report.activated = st.activated.len();
    report.bad1 = st.bad1.len();
    report.bad2 = st.bad2.len();
    report.bad3 = st.bad3.len();
    let (o, post) = post_shatter(base, &st)?;
    report.post = post;
    // edges that lost every member go to their smallest endpoint in `g`
    let pairs: Vec<(EdgeId, VertexId)> = g
        .edges()
        .map(|(e, m)| (e, o.owner(e).unwrap_or(m[0])))
        .collect();
    let o = Orientation::from_pairs(pairs)?;
    let rep = verify_hso(g, &o);
    report.certified = rep.certified();
    if !report.certified {
        return Err(Error::internal(format!("randomized orientation invalid: {rep}")));
    }
    Ok((o, report))
}

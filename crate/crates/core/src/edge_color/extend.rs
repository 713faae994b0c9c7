use std::collections::{BTreeMap, HashMap, VecDeque};
use std::sync::atomic::{AtomicUsize, Ordering};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hypergraph::VertexId;

use super::cluster::{avail_mask, choose_cluster_edges, cluster, color_intercluster, smallest, Clustering, InterStats};
use super::graph::{EdgeColoring, SimpleGraph};

/// Search-node budget of the backtracking fallback per cluster.
pub const FALLBACK_BUDGET: usize = 1 << 22;

static FALLBACKS: AtomicUsize = AtomicUsize::new(0);

/// Number of clusters, process-wide, that needed the backtracking fallback.
pub fn fallback_count() -> usize {
    FALLBACKS.load(Ordering::Relaxed)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExtendCase {
    NoEdges,
    LowEdgeDegree,
    EvenCycle,
    Tree,
    TreeRepaired,
}

/// Coloring of one cluster's internal edges.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClusterExtension {
    pub coloring: EdgeColoring,
    pub case: ExtendCase,
    pub fallback: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ThreeColorStats {
    pub clusters: usize,
    pub expanding: usize,
    pub inter: InterStats,
    pub cases: BTreeMap<ExtendCase, usize>,
    pub fallbacks: usize,
}

struct Local<'a> {
    g: &'a SimpleGraph,
    base: &'a [u32],
    own: HashMap<usize, u32>,
}

impl Local<'_> {
    fn color(&self, e: usize) -> u32 {
        self.own.get(&e).copied().unwrap_or(self.base[e])
    }

    fn avail(&self, e: usize) -> u8 {
        avail_mask(self.g, e, |f| self.color(f))
    }

    fn greedy(&mut self, e: usize) -> bool {
        match smallest(self.avail(e)) {
            Some(c) => {
                self.own.insert(e, c);
                true
            }
            None => false,
        }
    }
}

/// Internal edges, BFS distance from the leader and BFS parent edges.
struct Shape {
    edges: Vec<usize>,
    dist: HashMap<usize, usize>,
    parent: HashMap<usize, usize>,
}

fn shape(g: &SimpleGraph, leader: &[usize], root: usize) -> Shape {
    let mut dist = HashMap::from([(root, 0)]);
    let mut parent = HashMap::new();
    let mut edges = Vec::new();
    let mut queue = VecDeque::from([root]);
    while let Some(u) = queue.pop_front() {
        for &(w, e) in g.adj_of(u) {
            let (w, e) = (w as usize, e as usize);
            if leader[w] != root {
                continue;
            }
            if u < w {
                edges.push(e);
            }
            if !dist.contains_key(&w) {
                dist.insert(w, dist[&u] + 1);
                parent.insert(w, e);
                queue.push_back(w);
            }
        }
    }
    edges.sort_unstable();
    Shape { edges, dist, parent }
}

fn edge_degree(g: &SimpleGraph, e: usize) -> usize {
    let (a, b) = g.ends_of(e);
    g.degree_of(a) + g.degree_of(b) - 2
}

/// Line-graph distances within `edges` from the given sources.
fn line_dist(g: &SimpleGraph, edges: &[usize], sources: &[usize]) -> HashMap<usize, usize> {
    let inside: std::collections::HashSet<usize> = edges.iter().copied().collect();
    let mut dist: HashMap<usize, usize> = sources.iter().map(|&s| (s, 0)).collect();
    let mut queue: VecDeque<usize> = sources.iter().copied().collect();
    while let Some(e) = queue.pop_front() {
        let (a, b) = g.ends_of(e);
        for &(_, f) in g.adj_of(a).iter().chain(g.adj_of(b)) {
            let f = f as usize;
            if inside.contains(&f) && !dist.contains_key(&f) {
                dist.insert(f, dist[&e] + 1);
                queue.push_back(f);
            }
        }
    }
    dist
}

/// Greedy in descending distance, ties by ascending id.
fn greedy_far_first(loc: &mut Local, edges: &[usize], dist: &HashMap<usize, usize>) -> bool {
    let mut order: Vec<usize> = edges.iter().copied().filter(|e| dist.contains_key(e)).collect();
    order.sort_by_key(|&e| (std::cmp::Reverse(dist[&e]), e));
    order.into_iter().all(|e| loc.greedy(e))
}

fn low_degree(loc: &mut Local, s: &Shape) -> bool {
    let g = loc.g;
    let Some(&e0) = s.edges.iter().find(|&&e| edge_degree(g, e) <= 2) else { return false };
    greedy_far_first(loc, &s.edges, &line_dist(g, &s.edges, &[e0]))
}

fn even_cycle(loc: &mut Local, s: &Shape) -> bool {
    let g = loc.g;
    let tree: std::collections::HashSet<usize> = s.parent.values().copied().collect();
    let Some(&uv) = s.edges.iter().find(|e| !tree.contains(e)) else { return false };
    let (u, v) = g.ends_of(uv);
    let climb = |x: usize| {
        let mut path = vec![x];
        let mut x = x;
        while let Some(&e) = s.parent.get(&x) {
            x = g.other(e, x);
            path.push(x);
        }
        path
    };
    let (pu, pv) = (climb(u), climb(v));
    let on_pv: std::collections::HashSet<usize> = pv.iter().copied().collect();
    let lca = *pu.iter().find(|x| on_pv.contains(x)).unwrap();
    let mut cycle = Vec::new();
    for &x in pu.iter().take_while(|&&x| x != lca) {
        cycle.push(s.parent[&x]);
    }
    let down: Vec<usize> = pv.iter().take_while(|&&x| x != lca).map(|x| s.parent[x]).collect();
    cycle.extend(down.into_iter().rev());
    cycle.push(uv);
    if cycle.len() % 2 == 1 {
        return false;
    }
    let rest: Vec<usize> = s.edges.iter().copied().filter(|e| !cycle.contains(e)).collect();
    let dist = line_dist(g, &s.edges, &cycle);
    if !greedy_far_first(loc, &rest, &dist) {
        return false;
    }
    two_list_cycle(loc, &cycle)
}

/// Colors an even cycle from lists of size at least 2.
fn two_list_cycle(loc: &mut Local, cycle: &[usize]) -> bool {
    let k = cycle.len();
    let lists: Vec<u8> = cycle.iter().map(|&e| loc.avail(e)).collect();
    if lists.iter().any(|l| l.count_ones() < 2) {
        return false;
    }
    if lists.iter().all(|&l| l == lists[0]) {
        let a = smallest(lists[0]).unwrap();
        let b = smallest(lists[0] & !(1 << (a - 1))).unwrap();
        for (j, &e) in cycle.iter().enumerate() {
            loc.own.insert(e, if j % 2 == 0 { a } else { b });
        }
        return true;
    }
    let j = (0..k).find(|&j| lists[j] & !lists[(j + 1) % k] != 0).unwrap();
    let mut c = smallest(lists[j] & !lists[(j + 1) % k]).unwrap();
    loc.own.insert(cycle[j], c);
    for step in 1..k {
        let i = (j + k - step) % k;
        match smallest(lists[i] & !(1 << (c - 1))) {
            Some(x) => c = x,
            None => return false,
        }
        loc.own.insert(cycle[i], c);
    }
    true
}

fn tree_case(loc: &mut Local, s: &Shape, leader: usize) -> Option<bool> {
    let g = loc.g;
    let layer = |e: usize| {
        let (a, b) = g.ends_of(e);
        s.dist[&a].min(s.dist[&b])
    };
    let mut order = s.edges.clone();
    order.sort_by_key(|&e| (std::cmp::Reverse(layer(e)), e));
    let mut failed = None;
    for (i, &e) in order.iter().enumerate() {
        if !loc.greedy(e) {
            if i + 1 != order.len() || layer(e) != 0 {
                return None;
            }
            failed = Some(e);
        }
    }
    let Some(f) = failed else { return Some(false) };
    let head = |e: usize| {
        let (a, b) = g.ends_of(e);
        match (s.dist.get(&a), s.dist.get(&b)) {
            (Some(&da), Some(&db)) if db < da => b,
            (Some(_), _) => a,
            _ => b,
        }
    };
    let tail = |e: usize| g.other(e, head(e));
    let friendly = |loc: &Local, e: usize| {
        let t = tail(e);
        let h = head(e);
        let up = s.parent.get(&h).copied();
        let kids: Vec<u32> = g.adj_of(t).iter().map(|&(_, c)| c as usize).filter(|&c| c != e).map(|c| loc.color(c)).collect();
        g.adj_of(h)
            .iter()
            .map(|&(_, x)| x as usize)
            .filter(|&x| x != e && Some(x) != up)
            .any(|x| {
                let c = loc.color(x);
                c != 0 && kids.contains(&c)
            })
    };
    let e = *s.edges.iter().find(|&&e| e != f && friendly(loc, e))?;
    let mut path = vec![e];
    let mut v = head(e);
    while v != leader {
        let pe = s.parent[&v];
        path.push(pe);
        if pe == f {
            break;
        }
        v = g.other(pe, v);
    }
    if *path.last().unwrap() != f {
        path.push(f);
    }
    for &x in &path {
        loc.own.insert(x, 0);
    }
    path.iter().rev().all(|&x| loc.greedy(x)).then_some(true)
}

fn backtrack(loc: &mut Local, edges: &[usize], budget: &mut usize) -> bool {
    fn go(loc: &mut Local, edges: &[usize], i: usize, budget: &mut usize) -> bool {
        if i == edges.len() {
            return true;
        }
        let mut mask = loc.avail(edges[i]);
        while let Some(c) = smallest(mask) {
            if *budget == 0 {
                return false;
            }
            *budget -= 1;
            loc.own.insert(edges[i], c);
            if go(loc, edges, i + 1, budget) {
                return true;
            }
            mask &= !(1 << (c - 1));
        }
        loc.own.insert(edges[i], 0);
        false
    }
    for &e in edges {
        loc.own.insert(e, 0);
    }
    go(loc, edges, 0, budget)
}

fn extend_idx(g: &SimpleGraph, leader: &[usize], root: usize, base: &[u32]) -> Result<(Vec<(usize, u32)>, ExtendCase, bool)> {
    let s = shape(g, leader, root);
    let mut loc = Local { g, base, own: HashMap::new() };
    if s.edges.is_empty() {
        return Ok((Vec::new(), ExtendCase::NoEdges, false));
    }
    let is_tree = s.edges.len() + 1 == s.dist.len();
    let (case, ok) = if s.edges.iter().any(|&e| edge_degree(g, e) <= 2) {
        (ExtendCase::LowEdgeDegree, low_degree(&mut loc, &s))
    } else if !is_tree {
        (ExtendCase::EvenCycle, even_cycle(&mut loc, &s))
    } else {
        match tree_case(&mut loc, &s, root) {
            Some(true) => (ExtendCase::TreeRepaired, true),
            Some(false) => (ExtendCase::Tree, true),
            None => (ExtendCase::Tree, false),
        }
    };
    let mut fallback = false;
    if !ok {
        fallback = true;
        FALLBACKS.fetch_add(1, Ordering::Relaxed);
        log::warn!("cluster of vertex {} needed the backtracking fallback ({case:?})", g.vertices()[root]);
        let mut order = s.edges.clone();
        order.sort_by_key(|&e| {
            let (a, b) = g.ends_of(e);
            (s.dist[&a].min(s.dist[&b]), e)
        });
        let mut budget = FALLBACK_BUDGET;
        if !backtrack(&mut loc, &order, &mut budget) {
            return Err(Error::internal(format!(
                "cluster of vertex {} admits no 3-edge-coloring extension",
                g.vertices()[root]
            )));
        }
    }
    let out = s.edges.iter().map(|&e| (e, loc.color(e))).collect();
    Ok((out, case, fallback))
}

/// Colors the internal edges of the cluster led by `leader` with `{1, 2, 3}`,
/// keeping the given coloring of the intercluster edges.
pub fn extend_cluster(g3: &SimpleGraph, c: &Clustering, psi: &EdgeColoring, leader: VertexId) -> Result<ClusterExtension> {
    let root = g3.vertex_index(leader).ok_or(Error::UnknownVertex(leader))?;
    if !c.clusters.contains_key(&leader) {
        return Err(Error::precondition(format!("vertex {leader} does not lead a cluster")));
    }
    let li = c.leader_index(g3);
    let base = base_colors(g3, psi)?;
    let (pairs, case, fallback) = extend_idx(g3, &li, root, &base)?;
    Ok(ClusterExtension {
        coloring: EdgeColoring::from_pairs(pairs.into_iter().map(|(e, col)| (g3.edge_ids()[e], col)))?,
        case,
        fallback,
    })
}

fn base_colors(g: &SimpleGraph, psi: &EdgeColoring) -> Result<Vec<u32>> {
    let mut base = vec![0u32; g.num_edges()];
    for (e, col) in psi.iter() {
        base[g.edge_index(e).ok_or(Error::UnknownEdge(e))?] = col;
    }
    Ok(base)
}

/// Proper 3-edge-coloring of a (3)-graph.
pub fn color_three_graph(g3: &SimpleGraph) -> Result<EdgeColoring> {
    color_three_graph_with_stats(g3).map(|(col, _)| col)
}

pub fn color_three_graph_with_stats(g3: &SimpleGraph) -> Result<(EdgeColoring, ThreeColorStats)> {
    let c = cluster(g3)?;
    let chosen = choose_cluster_edges(g3, &c)?;
    let (psi, inter) = color_intercluster(g3, &c, &chosen)?;
    let base = base_colors(g3, &psi)?;
    let li = c.leader_index(g3);
    let roots: Vec<usize> = c.clusters.keys().map(|&l| g3.vertex_index(l).unwrap()).collect();
    let parts: Vec<_> = roots.par_iter().map(|&r| extend_idx(g3, &li, r, &base)).collect::<Result<_>>()?;
    let mut colors = base;
    let mut stats = ThreeColorStats { clusters: roots.len(), expanding: chosen.len(), inter, ..Default::default() };
    for (pairs, case, fallback) in parts {
        for (e, col) in pairs {
            colors[e] = col;
        }
        *stats.cases.entry(case).or_default() += 1;
        stats.fallbacks += fallback as usize;
    }
    let coloring = EdgeColoring::from_pairs(g3.edge_ids().iter().zip(&colors).map(|(&e, &col)| (e, col)))?;
    Ok((coloring, stats))
}

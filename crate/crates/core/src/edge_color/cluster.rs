use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hso::solve_hso_exempt;
use crate::hypergraph::{EdgeId, MultiHypergraph, VertexId};

use super::extract::is_three_graph;
use super::graph::{EdgeColoring, SimpleGraph};

/// Spacing of cluster leaders and number of adoption rounds.
pub const MIS_DISTANCE: usize = 9;
/// Clusters must have at most this hop diameter.
pub const MAX_CLUSTER_DIAMETER: usize = 20;
/// Radius around each leader that must lie inside its cluster.
pub const CORE_RADIUS: usize = 4;
/// Minimum number of intercluster edges of an expanding cluster.
pub const EXPANDING_DEGREE: usize = 9;

/// Partition of a (3)-graph into connected clusters of bounded diameter.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Clustering {
    /// Leader of every vertex, aligned with the graph's vertex order.
    pub leader: Vec<VertexId>,
    pub clusters: BTreeMap<VertexId, Vec<VertexId>>,
    pub intra: Vec<EdgeId>,
    pub inter: Vec<EdgeId>,
}

impl Clustering {
    /// Leader index of every vertex index.
    pub(crate) fn leader_index(&self, g: &SimpleGraph) -> Vec<usize> {
        self.leader.iter().map(|&l| g.vertex_index(l).unwrap()).collect()
    }

    /// Whether the cluster of `leader` induces a tree.
    pub fn is_tree(&self, g: &SimpleGraph, leader: VertexId) -> bool {
        self.tree_leaders(g).contains(&leader)
    }

    /// Leaders of the clusters that induce trees.
    pub fn tree_leaders(&self, g: &SimpleGraph) -> BTreeSet<VertexId> {
        let mut intra: BTreeMap<VertexId, usize> = BTreeMap::new();
        for &e in &self.intra {
            *intra.entry(self.leader[g.ends_of(g.edge_index(e).unwrap()).0]).or_default() += 1;
        }
        self.clusters
            .iter()
            .filter(|(l, vs)| intra.get(l).copied().unwrap_or(0) + 1 == vs.len())
            .map(|(&l, _)| l)
            .collect()
    }
}

/// Vertex indices within `radius` hops of `src`.
fn hop_ball(g: &SimpleGraph, src: usize, radius: usize, dist: &mut [u32], touched: &mut Vec<usize>) {
    for &v in touched.iter() {
        dist[v] = u32::MAX;
    }
    touched.clear();
    dist[src] = 0;
    touched.push(src);
    let mut queue = VecDeque::from([src]);
    while let Some(u) = queue.pop_front() {
        if dist[u] as usize == radius {
            continue;
        }
        for &(w, _) in g.adj_of(u) {
            let w = w as usize;
            if dist[w] == u32::MAX {
                dist[w] = dist[u] + 1;
                touched.push(w);
                queue.push_back(w);
            }
        }
    }
}

/// Greedy maximal independent set of the distance-9 power graph by vertex
/// id, then nine synchronous rounds in which every unassigned vertex adopts
/// the leader of its smallest-id assigned neighbor.
pub fn cluster(g3: &SimpleGraph) -> Result<Clustering> {
    if !is_three_graph(g3) {
        return Err(Error::precondition("input is not a (3)-graph"));
    }
    let n = g3.num_vertices();
    let mut dist = vec![u32::MAX; n];
    let mut touched = Vec::new();
    let mut blocked = vec![false; n];
    let mut d: Vec<Option<usize>> = vec![None; n];
    for v in 0..n {
        if blocked[v] {
            continue;
        }
        d[v] = Some(v);
        hop_ball(g3, v, MIS_DISTANCE, &mut dist, &mut touched);
        for &u in &touched {
            blocked[u] = true;
        }
    }
    for _ in 0..MIS_DISTANCE {
        let snap = d.clone();
        for x in 0..n {
            if snap[x].is_some() {
                continue;
            }
            d[x] = g3
                .adj_of(x)
                .iter()
                .filter_map(|&(y, _)| snap[y as usize].map(|l| (y, l)))
                .min()
                .map(|(_, l)| l);
        }
    }
    let leader: Vec<usize> = d
        .into_iter()
        .enumerate()
        .map(|(v, l)| l.ok_or_else(|| Error::internal(format!("vertex {} left without a cluster", g3.vertices()[v]))))
        .collect::<Result<_>>()?;
    let mut clusters: BTreeMap<VertexId, Vec<VertexId>> = BTreeMap::new();
    for v in 0..n {
        clusters.entry(g3.vertices()[leader[v]]).or_default().push(g3.vertices()[v]);
    }
    let (mut intra, mut inter) = (Vec::new(), Vec::new());
    for (e, &id) in g3.edge_ids().iter().enumerate() {
        let (a, b) = g3.ends_of(e);
        if leader[a] == leader[b] {
            intra.push(id);
        } else {
            inter.push(id);
        }
    }
    let c = Clustering { leader: leader.iter().map(|&l| g3.vertices()[l]).collect(), clusters, intra, inter };
    check_clustering(g3, &c, &leader, &mut dist, &mut touched)?;
    Ok(c)
}

fn check_clustering(
    g: &SimpleGraph,
    c: &Clustering,
    leader: &[usize],
    dist: &mut [u32],
    touched: &mut Vec<usize>,
) -> Result<()> {
    for &l in c.clusters.keys() {
        let li = g.vertex_index(l).unwrap();
        hop_ball(g, li, CORE_RADIUS, dist, touched);
        if let Some(&v) = touched.iter().find(|&&v| leader[v] != li) {
            return Err(Error::internal(format!(
                "vertex {} within distance {CORE_RADIUS} of leader {l} belongs to another cluster",
                g.vertices()[v]
            )));
        }
        // eccentricity of the leader inside its own cluster
        let mut seen = BTreeMap::from([(li, 0usize)]);
        let mut queue = VecDeque::from([li]);
        while let Some(u) = queue.pop_front() {
            for &(w, _) in g.adj_of(u) {
                let w = w as usize;
                if leader[w] == li && !seen.contains_key(&w) {
                    seen.insert(w, seen[&u] + 1);
                    queue.push_back(w);
                }
            }
        }
        let size = c.clusters[&l].len();
        let ecc = seen.values().copied().max().unwrap_or(0);
        if seen.len() != size || 2 * ecc > MAX_CLUSTER_DIAMETER {
            return Err(Error::internal(format!(
                "cluster of {l} is disconnected or too wide (eccentricity {ecc})"
            )));
        }
    }
    // intercluster edges form disjoint paths of length at most 2
    let mut inter_deg = vec![0usize; g.num_vertices()];
    for &e in &c.inter {
        let (a, b) = g.ends_of(g.edge_index(e).unwrap());
        inter_deg[a] += 1;
        inter_deg[b] += 1;
    }
    for &e in &c.inter {
        let (a, b) = g.ends_of(g.edge_index(e).unwrap());
        if inter_deg[a] > 2 || inter_deg[b] > 2 || (inter_deg[a] == 2 && inter_deg[b] == 2) {
            return Err(Error::internal(format!("intercluster edge {e} lies on a path longer than 2")));
        }
    }
    Ok(())
}

/// Intercluster edges of every cluster in ascending id.
fn inter_by_cluster(g: &SimpleGraph, c: &Clustering) -> BTreeMap<VertexId, Vec<EdgeId>> {
    let mut out: BTreeMap<VertexId, Vec<EdgeId>> = BTreeMap::new();
    for &e in &c.inter {
        let (a, b) = g.ends_of(g.edge_index(e).unwrap());
        out.entry(c.leader[a]).or_default().push(e);
        out.entry(c.leader[b]).or_default().push(e);
    }
    out
}

/// Three outgoing intercluster edges for every expanding cluster, no edge
/// chosen twice. Each cluster is split into copies `3 * leader + j` that
/// take its intercluster edges round-robin by id; an orientation giving
/// every copy of degree at least 3 an outgoing edge yields the choice.
pub fn choose_cluster_edges(g3: &SimpleGraph, c: &Clustering) -> Result<BTreeMap<VertexId, [EdgeId; 3]>> {
    let by_cluster = inter_by_cluster(g3, c);
    if !by_cluster.values().any(|es| es.len() >= EXPANDING_DEGREE) {
        return Ok(BTreeMap::new());
    }
    if c.clusters.keys().next_back().is_some_and(|&l| l as u64 * 3 + 2 > u32::MAX as u64) {
        return Err(Error::precondition("vertex ids too large to split clusters"));
    }
    let mut copy_of: BTreeMap<(VertexId, EdgeId), VertexId> = BTreeMap::new();
    for (&l, es) in &by_cluster {
        for (k, &e) in es.iter().enumerate() {
            copy_of.insert((l, e), 3 * l + (k % 3) as u32);
        }
    }
    let mut copies: Vec<VertexId> = copy_of.values().copied().collect();
    copies.sort_unstable();
    copies.dedup();
    let edges: Vec<(EdgeId, Vec<VertexId>)> = c
        .inter
        .iter()
        .map(|&e| {
            let (a, b) = g3.ends_of(g3.edge_index(e).unwrap());
            (e, vec![copy_of[&(c.leader[a], e)], copy_of[&(c.leader[b], e)]])
        })
        .collect();
    let h = MultiHypergraph::new(copies.iter().copied(), edges)?;
    let demand: Vec<VertexId> = copies.iter().copied().filter(|&v| h.degree(v).unwrap() >= 3).collect();
    let o = solve_hso_exempt(&h, &demand)?;
    let mut first_out: BTreeMap<VertexId, EdgeId> = BTreeMap::new();
    for (e, v) in o.iter() {
        first_out.entry(v).or_insert(e);
    }
    let mut out = BTreeMap::new();
    for (&l, es) in &by_cluster {
        if es.len() < EXPANDING_DEGREE {
            continue;
        }
        let pick = |j: u32| {
            first_out
                .get(&(3 * l + j))
                .copied()
                .ok_or_else(|| Error::internal(format!("copy {j} of cluster {l} has no outgoing edge")))
        };
        out.insert(l, [pick(0)?, pick(1)?, pick(2)?]);
    }
    Ok(out)
}

/// Which branch of the triple coloring rule a tree cluster took.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum TripleCase {
    TwoLowHeads,
    OneLowHeadEarly,
    OneLowHeadLast,
    NoLowHead,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct InterStats {
    pub inter_edges: usize,
    pub triples: BTreeMap<String, usize>,
}

/// Available colors of edge index `e` as a bit mask over `{1, 2, 3}`.
pub(crate) fn avail_mask(g: &SimpleGraph, e: usize, color: impl Fn(usize) -> u32) -> u8 {
    let (a, b) = g.ends_of(e);
    let mut mask = 0b111u8;
    for &(_, f) in g.adj_of(a).iter().chain(g.adj_of(b)) {
        let f = f as usize;
        if f != e {
            let c = color(f);
            if c > 0 {
                mask &= !(1 << (c - 1));
            }
        }
    }
    mask
}

pub(crate) fn smallest(mask: u8) -> Option<u32> {
    (mask != 0).then(|| mask.trailing_zeros() + 1)
}

fn bit(c: u32) -> u8 {
    if c == 0 {
        0
    } else {
        1 << (c - 1)
    }
}

/// Three-coloring of the intercluster edges: a greedy coloring `φ`, then the
/// classes of `φ` in order, each edge taking the smallest available color
/// except the chosen edges of tree clusters, which follow the triple rule.
pub fn color_intercluster(
    g3: &SimpleGraph,
    c: &Clustering,
    chosen: &BTreeMap<VertexId, [EdgeId; 3]>,
) -> Result<(EdgeColoring, InterStats)> {
    let m = g3.num_edges();
    let is_inter: Vec<bool> = {
        let mut v = vec![false; m];
        for &e in &c.inter {
            v[g3.edge_index(e).unwrap()] = true;
        }
        v
    };
    let mut phi = vec![0u32; m];
    for e in (0..m).filter(|&e| is_inter[e]) {
        let mask = avail_mask(g3, e, |f| phi[f]);
        phi[e] = smallest(mask).ok_or_else(|| Error::internal("intercluster edges need more than 3 colors"))?;
    }
    // (cluster, position, case, index of the first partner) for chosen edges of tree clusters
    struct Role {
        j: usize,
        case: TripleCase,
        triple: [usize; 3],
        k: usize,
        l: usize,
    }
    let mut roles: BTreeMap<usize, Role> = BTreeMap::new();
    let mut stats = InterStats { inter_edges: c.inter.len(), ..InterStats::default() };
    let li = c.leader_index(g3);
    let trees = c.tree_leaders(g3);
    for (&l, es) in chosen {
        if !trees.contains(&l) {
            continue;
        }
        let lidx = g3.vertex_index(l).unwrap();
        let mut t: Vec<usize> = es.iter().map(|&e| g3.edge_index(e).unwrap()).collect();
        t.sort_by_key(|&e| (phi[e], g3.edge_ids()[e]));
        let low: Vec<bool> = t
            .iter()
            .map(|&e| {
                let (a, b) = g3.ends_of(e);
                let head = if li[a] == lidx { a } else { b };
                g3.degree_of(head) == 2
            })
            .collect();
        let lows: Vec<usize> = (0..3).filter(|&j| low[j]).collect();
        let (case, k, l2) = match lows.len() {
            2 | 3 => (TripleCase::TwoLowHeads, lows[0], lows[1]),
            1 if lows[0] < 2 => (TripleCase::OneLowHeadEarly, lows[0], 3),
            1 => (TripleCase::OneLowHeadLast, 2, 3),
            _ => (TripleCase::NoLowHead, 3, 3),
        };
        *stats.triples.entry(format!("{case:?}")).or_default() += 1;
        let triple = [t[0], t[1], t[2]];
        for j in 0..3 {
            roles.insert(t[j], Role { j, case, triple, k, l: l2 });
        }
    }
    let mut order: Vec<usize> = (0..m).filter(|&e| is_inter[e]).collect();
    order.sort_by_key(|&e| (phi[e], g3.edge_ids()[e]));
    let mut psi = vec![0u32; m];
    for e in order {
        let mask = avail_mask(g3, e, |f| psi[f]);
        let none = || Error::internal(format!("no available color for intercluster edge {}", g3.edge_ids()[e]));
        let color = match roles.get(&e) {
            None => smallest(mask),
            Some(r) => {
                let col = |j: usize| psi[r.triple[j]];
                match (r.case, r.j) {
                    (TripleCase::TwoLowHeads, j) if j == r.l => smallest(mask & !bit(col(r.k))),
                    (TripleCase::OneLowHeadEarly, 2) => {
                        let want = bit(col(r.k));
                        if mask & want != 0 {
                            smallest(want)
                        } else {
                            smallest(mask)
                        }
                    }
                    (TripleCase::OneLowHeadLast, 1) | (TripleCase::NoLowHead, 1) => smallest(mask & !bit(col(0))),
                    (TripleCase::OneLowHeadLast, 2) => smallest(mask & (bit(col(0)) | bit(col(1)))),
                    (TripleCase::NoLowHead, 2) => {
                        smallest(mask & !bit(col(0)) & !bit(col(1))).or_else(|| smallest(mask))
                    }
                    _ => smallest(mask),
                }
            }
        };
        psi[e] = color.ok_or_else(none)?;
    }
    let coloring = EdgeColoring::from_pairs((0..m).filter(|&e| is_inter[e]).map(|e| (g3.edge_ids()[e], psi[e])))?;
    Ok((coloring, stats))
}

//! Ground-truth checkers. Everything here is written from the definitions
//! and only uses the public accessors of the graph types, never the solvers.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::fmt;

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::edge_color::{EdgeColoring, SimpleGraph};
use crate::error::{Error, Result};
use crate::hall::{HallGraph, HallParams};
use crate::hso::{local_decide, Matching, Orientation, SplitColor, Splitting};
use crate::hypergraph::{ball, BipartiteView, EdgeId, MultiHypergraph, VertexId};

/// Largest vertex count [`hall_check_bruteforce`] accepts.
pub const BRUTEFORCE_LIMIT: usize = 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Subject {
    Vertex(VertexId),
    Edge(EdgeId),
    EdgePair(EdgeId, EdgeId),
    Cluster(VertexId),
    Global,
}

impl fmt::Display for Subject {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Subject::Vertex(v) => write!(f, "vertex {v}"),
            Subject::Edge(e) => write!(f, "edge {e}"),
            Subject::EdgePair(a, b) => write!(f, "edges {a},{b}"),
            Subject::Cluster(c) => write!(f, "cluster {c}"),
            Subject::Global => write!(f, "global"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Failure {
    pub subject: Subject,
    pub description: String,
}

/// Outcome of a verifier: how many items were looked at and what failed.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertReport {
    pub checked: usize,
    pub failures: Vec<Failure>,
    pub radius_used: Option<usize>,
}

impl CertReport {
    pub fn certified(&self) -> bool {
        self.failures.is_empty()
    }

    fn fail(&mut self, subject: Subject, description: impl Into<String>) {
        self.failures.push(Failure { subject, description: description.into() });
    }

    pub fn merge(&mut self, other: CertReport) {
        self.checked += other.checked;
        self.failures.extend(other.failures);
        self.radius_used = self.radius_used.max(other.radius_used);
    }
}

impl fmt::Display for CertReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.certified() {
            write!(f, "certified ({} checked)", self.checked)
        } else {
            write!(f, "{} failure(s) among {} checked", self.failures.len(), self.checked)?;
            for x in self.failures.iter().take(10) {
                write!(f, "\n  {}: {}", x.subject, x.description)?;
            }
            Ok(())
        }
    }
}

/// Which side of a bipartite graph a matching must cover.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
    Neither,
}

/// Maximum-cardinality matching by Hopcroft-Karp. Pairs are `(left id, right id)`.
pub fn max_matching(b: &BipartiteView) -> Matching {
    const FREE: usize = usize::MAX;
    let (nl, nr) = (b.left.len(), b.right.len());
    let mut ml = vec![FREE; nl];
    let mut mr = vec![FREE; nr];
    let mut layer = vec![usize::MAX; nl];
    loop {
        // BFS layering from free left nodes
        let mut queue = VecDeque::new();
        for l in 0..nl {
            if ml[l] == FREE {
                layer[l] = 0;
                queue.push_back(l);
            } else {
                layer[l] = usize::MAX;
            }
        }
        let mut found = false;
        while let Some(l) = queue.pop_front() {
            for &r in &b.left_adj[l] {
                let l2 = mr[r as usize];
                if l2 == FREE {
                    found = true;
                } else if layer[l2] == usize::MAX {
                    layer[l2] = layer[l] + 1;
                    queue.push_back(l2);
                }
            }
        }
        if !found {
            break;
        }
        // layered DFS, iterative
        let mut next = vec![0usize; nl];
        for root in 0..nl {
            if ml[root] != FREE {
                continue;
            }
            let mut stack = vec![root];
            while let Some(&l) = stack.last() {
                if next[l] == b.left_adj[l].len() {
                    layer[l] = usize::MAX;
                    stack.pop();
                    continue;
                }
                let r = b.left_adj[l][next[l]] as usize;
                next[l] += 1;
                let l2 = mr[r];
                if l2 == FREE {
                    // augment along the stack
                    let mut r = r;
                    while let Some(l) = stack.pop() {
                        let prev = ml[l];
                        ml[l] = r;
                        mr[r] = l;
                        r = prev;
                    }
                    break;
                }
                if layer[l2] == layer[l] + 1 {
                    stack.push(l2);
                }
            }
        }
    }
    Matching::new((0..nl).filter(|&l| ml[l] != FREE).map(|l| (b.left[l], b.right[ml[l]])))
}

/// Smallest vertex set (by the bitmask of vertex positions) with fewer
/// incident edges than members, or `None` if Hall's condition holds.
pub fn hall_check_bruteforce(g: &MultiHypergraph) -> Result<Option<Vec<VertexId>>> {
    let n = g.num_vertices();
    if n > BRUTEFORCE_LIMIT {
        return Err(Error::TooLarge { size: n, limit: BRUTEFORCE_LIMIT });
    }
    let full = (1usize << n) - 1;
    // inside[t] = number of edges whose members all lie in t
    let mut inside = vec![0u32; 1 << n];
    for (_, members) in g.edges() {
        let mut mask = 0usize;
        for v in members {
            mask |= 1 << g.vertex_index(v).ok_or(Error::UnknownVertex(v))?;
        }
        inside[mask] += 1;
    }
    for bit in 0..n {
        for t in 0..=full {
            if t & (1 << bit) != 0 {
                inside[t] += inside[t ^ (1 << bit)];
            }
        }
    }
    let m = g.num_edges();
    for s in 1..=full {
        let touching = m - inside[full ^ s] as usize;
        if touching < s.count_ones() as usize {
            let set = (0..n).filter(|i| s & (1 << i) != 0).map(|i| g.vertices()[i]).collect();
            return Ok(Some(set));
        }
    }
    Ok(None)
}

/// Every edge has exactly one owner among its members and every vertex owns
/// at least one edge.
pub fn verify_hso(g: &MultiHypergraph, o: &Orientation) -> CertReport {
    let mut rep = CertReport { checked: g.num_vertices() + g.num_edges(), ..CertReport::default() };
    let mut owns: HashMap<VertexId, usize> = HashMap::new();
    for (e, members) in g.edges() {
        match o.owner(e) {
            None => rep.fail(Subject::Edge(e), "no owner"),
            Some(v) if !members.contains(&v) => rep.fail(Subject::Edge(e), format!("owner {v} is not a member")),
            Some(v) => *owns.entry(v).or_default() += 1,
        }
    }
    for (e, _) in o.iter() {
        if !g.contains_edge(e) {
            rep.fail(Subject::Edge(e), "oriented edge not in graph");
        }
    }
    for &v in g.vertices() {
        if !owns.contains_key(&v) {
            rep.fail(Subject::Vertex(v), "no outgoing edge");
        }
    }
    rep
}

/// Pairs are edges of `b`, no node is used twice and the requested side is
/// covered.
pub fn verify_matching(b: &BipartiteView, m: &Matching, saturate: Side) -> CertReport {
    let mut rep = CertReport { checked: m.len(), ..CertReport::default() };
    let mut used_l = BTreeSet::new();
    let mut used_r = BTreeSet::new();
    for &(l, r) in &m.pairs {
        if !b.adjacent(l, r) {
            rep.fail(Subject::Global, format!("pair ({l}, {r}) is not an edge"));
        }
        if !used_l.insert(l) {
            rep.fail(Subject::Vertex(l), "left node matched twice");
        }
        if !used_r.insert(r) {
            rep.fail(Subject::Edge(r), "right node matched twice");
        }
    }
    match saturate {
        Side::Left => {
            rep.checked += b.left.len();
            for &l in &b.left {
                if !used_l.contains(&l) {
                    rep.fail(Subject::Vertex(l), "left node unmatched");
                }
            }
        }
        Side::Right => {
            rep.checked += b.right.len();
            for &r in &b.right {
                if !used_r.contains(&r) {
                    rep.fail(Subject::Edge(r), "right node unmatched");
                }
            }
        }
        Side::Neither => {}
    }
    rep
}

/// Every edge colored with a color in `1..=palette_bound`, and edges sharing
/// an endpoint colored differently. Each conflicting pair is reported once.
pub fn verify_coloring(g: &SimpleGraph, col: &EdgeColoring, palette_bound: Option<u32>) -> CertReport {
    let mut rep = CertReport { checked: g.num_edges(), ..CertReport::default() };
    for (e, _) in col.iter() {
        if g.endpoints(e).is_none() {
            rep.fail(Subject::Edge(e), "colored edge not in graph");
        }
    }
    let mut at: BTreeMap<VertexId, Vec<(u32, EdgeId)>> = BTreeMap::new();
    for (e, u, v) in g.edges() {
        let Some(c) = col.color(e) else {
            rep.fail(Subject::Edge(e), "uncolored");
            continue;
        };
        if c == 0 || palette_bound.is_some_and(|p| c > p) {
            rep.fail(Subject::Edge(e), format!("color {c} outside palette"));
        }
        at.entry(u).or_default().push((c, e));
        at.entry(v).or_default().push((c, e));
    }
    let mut seen = BTreeSet::new();
    for list in at.values_mut() {
        list.sort_unstable();
        for i in 0..list.len() {
            for j in i + 1..list.len() {
                if list[i].0 != list[j].0 {
                    break;
                }
                let pair = (list[i].1.min(list[j].1), list[i].1.max(list[j].1));
                if seen.insert(pair) {
                    rep.fail(Subject::EdgePair(pair.0, pair.1), format!("both colored {}", list[i].0));
                }
            }
        }
    }
    rep
}

/// `f` is a set of edges of `g` forming a graph of maximum degree 3 in which
/// no two degree-3 vertices are adjacent.
pub fn verify_three_graph(g: &SimpleGraph, f: &BTreeSet<EdgeId>) -> CertReport {
    let mut rep = CertReport { checked: f.len(), ..CertReport::default() };
    let mut deg: BTreeMap<VertexId, usize> = BTreeMap::new();
    let mut ends = Vec::new();
    for &e in f {
        match g.endpoints(e) {
            None => rep.fail(Subject::Edge(e), "not an edge of the graph"),
            Some((u, v)) => {
                *deg.entry(u).or_default() += 1;
                *deg.entry(v).or_default() += 1;
                ends.push((e, u, v));
            }
        }
    }
    for (&v, &d) in &deg {
        if d > 3 {
            rep.fail(Subject::Vertex(v), format!("degree {d} > 3"));
        }
    }
    for (e, u, v) in ends {
        if deg[&u] == 3 && deg[&v] == 3 {
            rep.fail(Subject::Edge(e), format!("joins degree-3 vertices {u} and {v}"));
        }
    }
    rep
}

/// Every right node has a color and every left node sees both colors.
pub fn verify_weak_split(b: &BipartiteView, s: &Splitting) -> CertReport {
    let mut rep = CertReport { checked: b.left.len() + b.right.len(), ..CertReport::default() };
    for &r in &b.right {
        if s.color(r).is_none() {
            rep.fail(Subject::Edge(r), "right node uncolored");
        }
    }
    for (i, &l) in b.left.iter().enumerate() {
        let colors: BTreeSet<SplitColor> =
            b.left_adj[i].iter().filter_map(|&j| s.color(b.right[j as usize])).collect();
        for want in [SplitColor::Red, SplitColor::Blue] {
            if !colors.contains(&want) {
                rep.fail(Subject::Vertex(l), format!("no {want:?} neighbor"));
            }
        }
    }
    rep
}

/// `h` lies in `root` with edges projected onto its vertex set, its witness
/// is a matching saturating every vertex of `h`, and with `radius` given,
/// every vertex of `h` is within that many hops of its center in `root`.
pub fn verify_hall_graph(root: &MultiHypergraph, h: &HallGraph, radius: Option<usize>) -> CertReport {
    let mut rep = CertReport { checked: h.vertices.len() + h.edges.len(), radius_used: radius, ..CertReport::default() };
    let subject = Subject::Cluster(h.center.unwrap_or(VertexId::MAX));
    let vs: BTreeSet<VertexId> = h.vertices.iter().copied().collect();
    for &v in &vs {
        if !root.contains_vertex(v) {
            rep.fail(Subject::Vertex(v), "not in root graph");
        }
    }
    let mut members: BTreeMap<EdgeId, Vec<VertexId>> = BTreeMap::new();
    for &e in &h.edges {
        match root.edge(e) {
            None => rep.fail(Subject::Edge(e), "not in root graph"),
            Some(m) => {
                let inner: Vec<VertexId> = m.into_iter().filter(|v| vs.contains(v)).collect();
                if inner.is_empty() {
                    rep.fail(Subject::Edge(e), "no member inside the Hall graph");
                }
                members.insert(e, inner);
            }
        }
    }
    let mut used_v = BTreeSet::new();
    let mut used_e = BTreeSet::new();
    for &(v, e) in &h.witness {
        if !members.get(&e).is_some_and(|m| m.contains(&v)) {
            rep.fail(Subject::Edge(e), format!("witness pair with {v} is not an incidence"));
        }
        if !used_v.insert(v) || !used_e.insert(e) {
            rep.fail(Subject::Edge(e), "witness is not a matching");
        }
    }
    for &v in &vs {
        if !used_v.contains(&v) {
            rep.fail(Subject::Vertex(v), "unsaturated by the witness");
        }
    }
    if let (Some(x), Some(c)) = (radius, h.center) {
        let within = bounded_bfs(root, c, x);
        for &v in &vs {
            if !within.contains_key(&v) {
                rep.fail(subject, format!("vertex {v} farther than {x} from center {c}"));
            }
        }
    }
    rep
}

fn bounded_bfs(g: &MultiHypergraph, src: VertexId, radius: usize) -> HashMap<VertexId, usize> {
    let mut dist = HashMap::from([(src, 0)]);
    let mut queue = VecDeque::from([src]);
    while let Some(u) = queue.pop_front() {
        let d = dist[&u];
        if d == radius {
            continue;
        }
        for e in g.incident_edges(u).unwrap_or_default() {
            for w in g.edge(e).unwrap_or_default() {
                dist.entry(w).or_insert_with(|| {
                    queue.push_back(w);
                    d + 1
                });
            }
        }
    }
    dist
}

/// Per-vertex algorithms whose output can be replayed on a ball.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LocalAlgorithm {
    HsoLocal,
}

/// Reruns the per-vertex computation of `alg` for sampled vertices on their
/// radius-`radius` ball alone and compares the owners of their incident
/// edges with `o`. Global parameters (`n`, degree, rank) are those of `g`.
pub fn locality_certify(
    g: &MultiHypergraph,
    alg: LocalAlgorithm,
    o: &Orientation,
    radius: usize,
    samples: usize,
    seed: u64,
) -> CertReport {
    let mut rep = CertReport { radius_used: Some(radius), ..CertReport::default() };
    let n = g.num_vertices();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut picks: Vec<usize> = sample(&mut rng, n, samples.min(n)).into_vec();
    picks.sort_unstable();
    let params = match alg {
        LocalAlgorithm::HsoLocal => match HallParams::of(g) {
            Ok(p) => p,
            Err(e) => {
                rep.fail(Subject::Global, e.to_string());
                return rep;
            }
        },
    };
    for i in picks {
        let v = g.vertices()[i];
        rep.checked += 1;
        let view = match ball(g, v, radius) {
            Ok(b) => b,
            Err(e) => {
                rep.fail(Subject::Vertex(v), e.to_string());
                continue;
            }
        };
        match local_decide(&view, v, &params) {
            Err(e) => rep.fail(Subject::Vertex(v), format!("replay failed: {e}")),
            Ok(owners) => {
                for (e, w) in owners {
                    if o.owner(e) != Some(w) {
                        rep.fail(Subject::Edge(e), format!("replay at {v} gives owner {w}, expected {:?}", o.owner(e)));
                    }
                }
            }
        }
    }
    rep
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{gen_fig1, gen_random_hypergraph};
    use crate::hso::solve_hso;
    use crate::hypergraph::bipartite_view;

    #[test]
    fn crowded_matching_and_violator() {
        let g = gen_fig1();
        assert_eq!(max_matching(&bipartite_view(&g)).len(), 3);
        assert_eq!(hall_check_bruteforce(&g).unwrap(), Some(g.vertices().to_vec()));
    }

    #[test]
    fn empty_inputs() {
        let b = BipartiteView::from_pairs([], [], []).unwrap();
        assert!(max_matching(&b).is_empty());
        assert_eq!(hall_check_bruteforce(&MultiHypergraph::empty()).unwrap(), None);
    }

    #[test]
    fn bruteforce_limit() {
        let g = MultiHypergraph::with_vertex_range(21, []).unwrap();
        assert!(matches!(hall_check_bruteforce(&g), Err(Error::TooLarge { .. })));
    }

    #[test]
    fn planted_orientation_fault() {
        let g = gen_random_hypergraph(30, 4, 2, 1).unwrap();
        let o = solve_hso(&g).unwrap();
        assert!(verify_hso(&g, &o).certified());
        let v = g.vertices()[7];
        let mut bad = o.clone();
        for (e, w) in o.iter() {
            if w == v {
                let other = g.edge(e).unwrap().into_iter().find(|&u| u != v).unwrap();
                bad.set(e, other);
            }
        }
        let rep = verify_hso(&g, &bad);
        assert_eq!(rep.failures.len(), 1);
        assert_eq!(rep.failures[0].subject, Subject::Vertex(v));
    }

    #[test]
    fn planted_coloring_fault() {
        let g = SimpleGraph::from_pairs(4, [(0, 1), (1, 2), (2, 3)]).unwrap();
        let good = EdgeColoring::from_pairs([(0, 1), (1, 2), (2, 1)]).unwrap();
        assert!(verify_coloring(&g, &good, Some(2)).certified());
        let bad = EdgeColoring::from_pairs([(0, 1), (1, 2), (2, 2)]).unwrap();
        let rep = verify_coloring(&g, &bad, Some(2));
        assert_eq!(rep.failures.len(), 1);
        assert_eq!(rep.failures[0].subject, Subject::EdgePair(1, 2));
        assert!(!verify_coloring(&g, &good, Some(1)).certified());
    }

    #[test]
    fn three_graph_check() {
        let g = SimpleGraph::from_pairs(6, [(0, 1), (0, 2), (0, 3), (1, 4), (1, 5)]).unwrap();
        assert!(verify_three_graph(&g, &[0, 1, 2].into()).certified());
        let rep = verify_three_graph(&g, &[0, 1, 2, 3, 4].into());
        assert_eq!(rep.failures.len(), 1);
        assert_eq!(rep.failures[0].subject, Subject::Edge(0));
    }
}

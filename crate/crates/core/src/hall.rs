//! Hall graphs: dense balls, Hall violators, violator peeling and the
//! carve-and-lift construction of a small Hall graph around every vertex.

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hypergraph::{EdgeId, MultiHypergraph, VertexId};

/// Global knowledge every vertex has about the root graph.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HallParams {
    pub n: usize,
    pub delta: usize,
    pub rank: usize,
}

impl HallParams {
    pub fn new(n: usize, delta: usize, rank: usize) -> Result<Self> {
        check_regime(n, delta, rank)?;
        Ok(HallParams { n, delta, rank })
    }

    pub fn of(g: &MultiHypergraph) -> Result<Self> {
        let p = g.profile();
        Self::new(g.num_vertices(), p.delta, p.rank)
    }

    pub fn radius_bound(&self) -> usize {
        radius_bound(self.n, self.delta, self.rank).expect("checked at construction")
    }
}

fn check_regime(n: usize, delta: usize, r: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::precondition("empty graph"));
    }
    if r < 2 {
        return Err(Error::precondition(format!("rank {r} < 2")));
    }
    if delta <= r {
        return Err(Error::precondition(format!("minimum degree {delta} does not exceed rank {r}")));
    }
    Ok(())
}

/// Smallest integer `x` with `((delta-1)/(r-1))^x >= n`, evaluated exactly.
pub fn radius_bound(n: usize, delta: usize, r: usize) -> Result<usize> {
    check_regime(n, delta, r)?;
    let num = BigUint::from(delta - 1);
    let den = BigUint::from(r - 1);
    let n = BigUint::from(n);
    let (mut lhs, mut rhs) = (BigUint::from(1u32), n);
    let mut x = 0;
    while lhs < rhs {
        lhs *= &num;
        rhs *= &den;
        x += 1;
    }
    Ok(x)
}

/// A vertex set with fewer incident edges than members.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violator {
    pub s: Vec<VertexId>,
    pub incident_count: usize,
}

/// A vertex set plus root edges, certified by a matching that saturates
/// every vertex. Edge ids always refer to the graph the construction started
/// from.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct HallGraph {
    pub center: Option<VertexId>,
    pub vertices: Vec<VertexId>,
    pub edges: Vec<EdgeId>,
    pub witness: Vec<(VertexId, EdgeId)>,
}

impl HallGraph {
    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn contains_vertex(&self, v: VertexId) -> bool {
        self.vertices.binary_search(&v).is_ok()
    }

    pub fn contains_edge(&self, e: EdgeId) -> bool {
        self.edges.binary_search(&e).is_ok()
    }

    /// Materializes the Hall graph with the member lists `root` gives its edges.
    pub fn to_hypergraph(&self, root: &MultiHypergraph) -> Result<MultiHypergraph> {
        let edges = self
            .edges
            .iter()
            .map(|&e| root.edge(e).map(|m| (e, m)).ok_or(Error::UnknownEdge(e)))
            .collect::<Result<Vec<_>>>()?;
        MultiHypergraph::new(self.vertices.iter().copied(), edges)
    }
}

/// Augmenting-path matching of vertex side into edge side. Vertices are
/// processed in ascending order; each search first takes the smallest free
/// unvisited edge at the current vertex and otherwise descends through matched
/// edges in ascending order. Returns the matched edge index per vertex index.
pub(crate) fn canonical_matching(g: &MultiHypergraph) -> Vec<Option<u32>> {
    let n = g.num_vertices();
    let m = g.num_edges();
    let mut match_v: Vec<Option<u32>> = vec![None; n];
    let mut match_e: Vec<Option<u32>> = vec![None; m];
    let mut stamp = vec![0usize; m];
    let mut stack: Vec<(usize, usize)> = Vec::new();
    let mut path: Vec<usize> = Vec::new();
    for root in 0..n {
        let cur = root + 1;
        stack.clear();
        path.clear();
        let push = |v: usize, stack: &mut Vec<(usize, usize)>, path: &mut Vec<usize>, stamp: &mut [usize]| {
            for &e in g.incident_of(v) {
                let e = e as usize;
                if stamp[e] != cur && match_e[e].is_none() {
                    stamp[e] = cur;
                    path.push(e);
                    stack.push((v, 0));
                    return true;
                }
            }
            stack.push((v, 0));
            false
        };
        let mut found = push(root, &mut stack, &mut path, &mut stamp);
        while !found {
            let Some(top) = stack.last_mut() else { break };
            let (v, pos) = *top;
            let inc = g.incident_of(v);
            if pos == inc.len() {
                stack.pop();
                path.pop();
                continue;
            }
            top.1 += 1;
            let e = inc[pos] as usize;
            if stamp[e] == cur {
                continue;
            }
            stamp[e] = cur;
            let w = match_e[e].expect("free edges were taken by the lookahead") as usize;
            path.push(e);
            found = push(w, &mut stack, &mut path, &mut stamp);
        }
        if found {
            for (&(v, _), &e) in stack.iter().zip(&path) {
                match_v[v] = Some(e as u32);
                match_e[e] = Some(v as u32);
            }
        }
    }
    match_v
}

fn violator_from(g: &MultiHypergraph, match_v: &[Option<u32>]) -> Option<Violator> {
    let start = match_v.iter().position(Option::is_none)?;
    let mut owner = vec![usize::MAX; g.num_edges()];
    for (v, e) in match_v.iter().enumerate() {
        if let Some(e) = e {
            owner[*e as usize] = v;
        }
    }
    let mut seen_v = vec![false; g.num_vertices()];
    let mut seen_e = vec![false; g.num_edges()];
    let mut stack = vec![start];
    seen_v[start] = true;
    let mut edges = 0;
    while let Some(v) = stack.pop() {
        for &e in g.incident_of(v) {
            let e = e as usize;
            if seen_e[e] {
                continue;
            }
            seen_e[e] = true;
            edges += 1;
            // a free edge reachable by an alternating path would augment
            let w = owner[e];
            debug_assert!(w != usize::MAX, "matching is maximum");
            if !seen_v[w] {
                seen_v[w] = true;
                stack.push(w);
            }
        }
    }
    let s: Vec<VertexId> =
        (0..g.num_vertices()).filter(|&v| seen_v[v]).map(|v| g.vertices()[v]).collect();
    Some(Violator { s, incident_count: edges })
}

/// Returns a Hall violator, or `None` when every vertex can be matched to a
/// distinct incident edge. The violator is the set of vertices reachable by
/// alternating paths from the smallest unmatched vertex.
pub fn find_violator(g: &MultiHypergraph) -> Option<Violator> {
    let match_v = canonical_matching(g);
    violator_from(g, &match_v)
}

/// Repeatedly removes a violator together with every edge meeting it. The
/// residue is returned with a saturating witness; it is empty when no
/// nonempty Hall subgraph survives.
pub fn peel_to_hall(g: &MultiHypergraph) -> HallGraph {
    let mut cur = g.clone();
    loop {
        let match_v = canonical_matching(&cur);
        let Some(viol) = violator_from(&cur, &match_v) else {
            let witness = match_v
                .iter()
                .enumerate()
                .map(|(v, e)| (cur.vertices()[v], cur.edge_ids()[e.unwrap() as usize]))
                .collect();
            return HallGraph {
                center: None,
                vertices: cur.vertices().to_vec(),
                edges: cur.edge_ids().to_vec(),
                witness,
            };
        };
        let s: Vec<usize> = viol.s.iter().map(|&v| cur.vertex_index(v).unwrap()).collect();
        let mut gone_e: Vec<usize> =
            s.iter().flat_map(|&v| cur.incident_of(v).iter().map(|&e| e as usize)).collect();
        gone_e.sort_unstable();
        gone_e.dedup();
        let kept_v: Vec<usize> =
            (0..cur.num_vertices()).filter(|v| s.binary_search(v).is_err()).collect();
        let kept_e: Vec<usize> =
            (0..cur.num_edges()).filter(|e| gone_e.binary_search(e).is_err()).collect();
        cur = cur.project(&kept_v, &kept_e);
    }
}

/// Reusable marks for carving residual graphs out of one host graph.
pub(crate) struct Scratch {
    gone_v: Vec<u32>,
    gone_e: Vec<u32>,
    seen: Vec<u32>,
    carve: u32,
    visit: u32,
}

impl Scratch {
    pub(crate) fn new(g: &MultiHypergraph) -> Self {
        Scratch {
            gone_v: vec![0; g.num_vertices()],
            gone_e: vec![0; g.num_edges()],
            seen: vec![0; g.num_vertices()],
            carve: 0,
            visit: 0,
        }
    }
}

/// The graph `G_i`: the host with some vertices and edges carved out and the
/// remaining edges implicitly restricted to the remaining vertices.
struct Residual<'a> {
    g: &'a MultiHypergraph,
    s: &'a mut Scratch,
}

impl<'a> Residual<'a> {
    fn new(g: &'a MultiHypergraph, s: &'a mut Scratch) -> Self {
        s.carve += 1;
        Residual { g, s }
    }

    fn live_edges(&self, v: usize) -> impl Iterator<Item = u32> + '_ {
        self.g.incident_of(v).iter().copied().filter(|&e| self.s.gone_e[e as usize] != self.s.carve)
    }

    fn live_members(&self, e: u32) -> impl Iterator<Item = u32> + '_ {
        self.g.members_of(e as usize).iter().copied().filter(|&v| self.s.gone_v[v as usize] != self.s.carve)
    }

    fn carve(&mut self, h: &HallGraph) {
        for &u in &h.vertices {
            self.s.gone_v[self.g.vertex_index(u).unwrap()] = self.s.carve;
        }
        for &e in &h.edges {
            self.s.gone_e[self.g.edge_index(e).unwrap()] = self.s.carve;
        }
    }

    /// Layer-by-layer BFS from `src` until the dense-ball condition holds,
    /// then the incident expansion of the qualifying ball.
    fn dense_ball(&mut self, src: usize, params: &HallParams) -> Result<MultiHypergraph> {
        let bound = params.radius_bound();
        let (num, den) = (params.delta - 1, params.rank - 1);
        self.s.visit += 1;
        let visit = self.s.visit;
        self.s.seen[src] = visit;
        let mut ball = vec![src as u32];
        let mut frontier = 0..1;
        let mut inner = 0;
        for x in 0..=bound {
            let inner_len = ball.len();
            for i in frontier.clone() {
                let u = ball[i] as usize;
                for &e in self.g.incident_of(u) {
                    if self.s.gone_e[e as usize] == self.s.carve {
                        continue;
                    }
                    for &w in self.g.members_of(e as usize) {
                        let w = w as usize;
                        if self.s.gone_v[w] != self.s.carve && self.s.seen[w] != visit {
                            self.s.seen[w] = visit;
                            ball.push(w as u32);
                        }
                    }
                }
            }
            if den * ball.len() <= num * inner_len {
                inner = inner_len;
                break;
            }
            if x == bound {
                return Err(Error::internal(format!(
                    "no dense ball within radius {bound} around vertex {}",
                    self.g.vertex_id(src)
                )));
            }
            frontier = inner_len..ball.len();
        }
        let mut edges: Vec<usize> = Vec::new();
        for &u in &ball[..inner] {
            let before = edges.len();
            edges.extend(self.live_edges(u as usize).map(|e| e as usize));
            if edges.len() - before != self.g.degree_of(u as usize) {
                return Err(Error::internal("carving changed the degree of a live vertex"));
            }
        }
        edges.sort_unstable();
        edges.dedup();
        let mut kept: Vec<usize> =
            edges.iter().flat_map(|&e| self.live_members(e as u32).map(|v| v as usize)).collect();
        kept.sort_unstable();
        kept.dedup();
        Ok(self.g.project(&kept, &edges))
    }
}

/// Dense ball around `v` in `g`, using the graph's own size, minimum degree
/// and rank as parameters.
pub fn dense_ball(g: &MultiHypergraph, v: VertexId) -> Result<MultiHypergraph> {
    dense_ball_with(g, v, &HallParams::of(g)?)
}

/// Dense ball around `v` with externally supplied parameters. The graph must
/// satisfy `delta(g) >= params.delta` and `rank(g) <= params.rank` near `v`.
pub fn dense_ball_with(g: &MultiHypergraph, v: VertexId, params: &HallParams) -> Result<MultiHypergraph> {
    let src = g.vertex_index(v).ok_or(Error::UnknownVertex(v))?;
    Residual::new(g, &mut Scratch::new(g)).dense_ball(src, params)
}

/// Hall graph containing `v`, using `g`'s own parameters.
pub fn local_hall_graph(g: &MultiHypergraph, v: VertexId) -> Result<HallGraph> {
    local_hall_graph_with(g, v, &HallParams::of(g)?)
}

/// Hall graph containing `v`. Only the radius `radius_bound + 1` ball around
/// `v` is inspected, so running this on any ball of at least that radius
/// around `v` gives the same result as running it on the whole graph.
pub fn local_hall_graph_with(g: &MultiHypergraph, v: VertexId, params: &HallParams) -> Result<HallGraph> {
    local_hall_graph_in(g, v, params, &mut Scratch::new(g))
}

pub(crate) fn local_hall_graph_in(
    g: &MultiHypergraph,
    v: VertexId,
    params: &HallParams,
    scratch: &mut Scratch,
) -> Result<HallGraph> {
    let src = g.vertex_index(v).ok_or(Error::UnknownVertex(v))?;
    let mut res = Residual::new(g, scratch);
    let mut out = HallGraph { center: Some(v), ..HallGraph::default() };
    loop {
        let dense = res.dense_ball(src, params)?;
        if dense.num_edges() < dense.num_vertices() {
            return Err(Error::internal(format!(
                "dense ball around {v} has {} edges on {} vertices",
                dense.num_edges(),
                dense.num_vertices()
            )));
        }
        let h = peel_to_hall(&dense);
        if h.is_empty() {
            return Err(Error::internal(format!("peeling a dense ball around {v} left nothing")));
        }
        out.vertices.extend_from_slice(&h.vertices);
        out.edges.extend_from_slice(&h.edges);
        out.witness.extend_from_slice(&h.witness);
        if h.contains_vertex(v) {
            break;
        }
        res.carve(&h);
    }
    out.vertices.sort_unstable();
    out.edges.sort_unstable();
    out.witness.sort_unstable();
    Ok(out)
}

//! Multihypergraphs with stable edge identities.
//!
//! A [`MultiHypergraph`] is immutable once built. It stores its incidence in
//! compressed form: edges keep sorted member lists and every vertex keeps the
//! ascending list of edges that contain it. Operations that change the graph
//! (balls, projections, removals) return new graphs and never renumber
//! [`EdgeId`]s, so an edge of any derived graph can be looked up in the graph
//! it came from by id alone.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type VertexId = u32;
pub type EdgeId = u32;

/// Unchecked vertex and edge lists, as read from a file.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawHypergraph {
    pub vertices: Vec<VertexId>,
    pub edges: Vec<(EdgeId, Vec<VertexId>)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Violation {
    DuplicateVertexId { vertex: VertexId },
    DuplicateEdgeId { edge: EdgeId },
    UnknownVertex { edge: EdgeId, vertex: VertexId },
    RepeatedVertex { edge: EdgeId, vertex: VertexId },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::DuplicateVertexId { vertex } => write!(f, "vertex {vertex} listed twice"),
            Violation::DuplicateEdgeId { edge } => write!(f, "edge id {edge} used twice"),
            Violation::UnknownVertex { edge, vertex } => {
                write!(f, "edge {edge} references unknown vertex {vertex}")
            }
            Violation::RepeatedVertex { edge, vertex } => {
                write!(f, "edge {edge} lists vertex {vertex} more than once")
            }
        }
    }
}

/// Checks the structural invariants of a multihypergraph. Violations are
/// returned as data; an empty list means the input is well formed.
pub fn validate(raw: &RawHypergraph) -> Vec<Violation> {
    let mut out = Vec::new();
    let mut vertices = HashSet::with_capacity(raw.vertices.len());
    for &v in &raw.vertices {
        if !vertices.insert(v) {
            out.push(Violation::DuplicateVertexId { vertex: v });
        }
    }
    let mut ids = HashSet::with_capacity(raw.edges.len());
    for (id, members) in &raw.edges {
        if !ids.insert(*id) {
            out.push(Violation::DuplicateEdgeId { edge: *id });
        }
        let mut seen = BTreeSet::new();
        for &v in members {
            if !vertices.contains(&v) {
                out.push(Violation::UnknownVertex { edge: *id, vertex: v });
            }
            if !seen.insert(v) {
                out.push(Violation::RepeatedVertex { edge: *id, vertex: v });
            }
        }
    }
    out
}

/// Minimum vertex degree and maximum edge rank.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeProfile {
    pub delta: usize,
    pub rank: usize,
}

#[derive(Clone, PartialEq, Eq)]
pub struct MultiHypergraph {
    vertices: Vec<VertexId>,
    edge_ids: Vec<EdgeId>,
    edge_start: Vec<usize>,
    // vertex indices; ascending index order is ascending id order
    members: Vec<u32>,
    inc_start: Vec<usize>,
    // edge indices, ascending
    incidence: Vec<u32>,
}

impl fmt::Debug for MultiHypergraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut m = f.debug_map();
        for e in 0..self.num_edges() {
            m.entry(&self.edge_ids[e], &self.edge_members(e).collect::<Vec<_>>());
        }
        m.finish()?;
        write!(f, " on vertices {:?}", self.vertices)
    }
}

impl MultiHypergraph {
    pub fn new(
        vertices: impl IntoIterator<Item = VertexId>,
        edges: impl IntoIterator<Item = (EdgeId, Vec<VertexId>)>,
    ) -> Result<Self> {
        Self::from_raw(RawHypergraph {
            vertices: vertices.into_iter().collect(),
            edges: edges.into_iter().collect(),
        })
    }

    /// Graph on vertices `0..n`.
    pub fn with_vertex_range(
        n: usize,
        edges: impl IntoIterator<Item = (EdgeId, Vec<VertexId>)>,
    ) -> Result<Self> {
        Self::new(0..n as VertexId, edges)
    }

    pub fn empty() -> Self {
        Self::from_sorted_parts(Vec::new(), Vec::new())
    }

    pub fn from_raw(raw: RawHypergraph) -> Result<Self> {
        let violations = validate(&raw);
        if let Some(v) = violations.first() {
            return Err(Error::InvalidGraph(format!(
                "{v} ({} violation(s))",
                violations.len()
            )));
        }
        let mut vertices = raw.vertices;
        vertices.sort_unstable();
        let mut edges: Vec<(EdgeId, Vec<u32>)> = raw
            .edges
            .into_iter()
            .map(|(id, members)| {
                let mut idx: Vec<u32> = members
                    .iter()
                    .map(|v| vertices.binary_search(v).unwrap() as u32)
                    .collect();
                idx.sort_unstable();
                (id, idx)
            })
            .collect();
        edges.sort_unstable_by_key(|(id, _)| *id);
        Ok(Self::from_sorted_parts(vertices, edges))
    }

    pub fn to_raw(&self) -> RawHypergraph {
        RawHypergraph {
            vertices: self.vertices.clone(),
            edges: (0..self.num_edges())
                .map(|e| (self.edge_ids[e], self.edge_members(e).collect()))
                .collect(),
        }
    }

    /// Builds from sorted vertex ids and id-sorted edges whose members are
    /// sorted indices into `vertices`.
    pub(crate) fn from_sorted_parts(vertices: Vec<VertexId>, edges: Vec<(EdgeId, Vec<u32>)>) -> Self {
        debug_assert!(vertices.windows(2).all(|w| w[0] < w[1]));
        debug_assert!(edges.windows(2).all(|w| w[0].0 < w[1].0));
        let n = vertices.len();
        let mut edge_ids = Vec::with_capacity(edges.len());
        let mut edge_start = Vec::with_capacity(edges.len() + 1);
        let mut members = Vec::new();
        let mut degree = vec![0usize; n];
        edge_start.push(0);
        for (id, m) in &edges {
            edge_ids.push(*id);
            for &v in m {
                degree[v as usize] += 1;
            }
            members.extend_from_slice(m);
            edge_start.push(members.len());
        }
        let mut inc_start = Vec::with_capacity(n + 1);
        inc_start.push(0);
        for d in &degree {
            inc_start.push(inc_start.last().unwrap() + d);
        }
        let mut fill = inc_start[..n].to_vec();
        let mut incidence = vec![0u32; members.len()];
        for e in 0..edge_ids.len() {
            for &v in &members[edge_start[e]..edge_start[e + 1]] {
                incidence[fill[v as usize]] = e as u32;
                fill[v as usize] += 1;
            }
        }
        MultiHypergraph { vertices, edge_ids, edge_start, members, inc_start, incidence }
    }

    /// Subgraph on the given vertex indices whose edges are the given edge
    /// indices projected onto the kept vertices. Projections that become empty
    /// are dropped. Both slices must be sorted ascending.
    pub(crate) fn project(&self, kept_vertices: &[usize], edge_indices: &[usize]) -> Self {
        let vertices: Vec<VertexId> = kept_vertices.iter().map(|&v| self.vertices[v]).collect();
        let mut edges = Vec::with_capacity(edge_indices.len());
        for &e in edge_indices {
            let m: Vec<u32> = self
                .members_of(e)
                .iter()
                .filter_map(|&v| kept_vertices.binary_search(&(v as usize)).ok().map(|i| i as u32))
                .collect();
            if !m.is_empty() {
                edges.push((self.edge_ids[e], m));
            }
        }
        Self::from_sorted_parts(vertices, edges)
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edge_ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty() && self.edge_ids.is_empty()
    }

    pub fn vertices(&self) -> &[VertexId] {
        &self.vertices
    }

    pub fn edge_ids(&self) -> &[EdgeId] {
        &self.edge_ids
    }

    pub fn vertex_index(&self, v: VertexId) -> Option<usize> {
        self.vertices.binary_search(&v).ok()
    }

    pub fn edge_index(&self, e: EdgeId) -> Option<usize> {
        self.edge_ids.binary_search(&e).ok()
    }

    pub fn contains_vertex(&self, v: VertexId) -> bool {
        self.vertex_index(v).is_some()
    }

    pub fn contains_edge(&self, e: EdgeId) -> bool {
        self.edge_index(e).is_some()
    }

    pub(crate) fn vertex_id(&self, idx: usize) -> VertexId {
        self.vertices[idx]
    }

    /// Member vertex indices of edge index `e`.
    pub(crate) fn members_of(&self, e: usize) -> &[u32] {
        &self.members[self.edge_start[e]..self.edge_start[e + 1]]
    }

    /// Edge indices incident to vertex index `v`, ascending.
    pub(crate) fn incident_of(&self, v: usize) -> &[u32] {
        &self.incidence[self.inc_start[v]..self.inc_start[v + 1]]
    }

    pub fn edge_members(&self, e: usize) -> impl Iterator<Item = VertexId> + '_ {
        self.members_of(e).iter().map(|&v| self.vertices[v as usize])
    }

    /// Sorted member list of the edge with id `e`.
    pub fn edge(&self, e: EdgeId) -> Option<Vec<VertexId>> {
        self.edge_index(e).map(|i| self.edge_members(i).collect())
    }

    /// Iterates `(id, members)` in ascending id order.
    pub fn edges(&self) -> impl Iterator<Item = (EdgeId, Vec<VertexId>)> + '_ {
        (0..self.num_edges()).map(|e| (self.edge_ids[e], self.edge_members(e).collect()))
    }

    pub fn incident_edges(&self, v: VertexId) -> Result<Vec<EdgeId>> {
        let i = self.vertex_index(v).ok_or(Error::UnknownVertex(v))?;
        Ok(self.incident_of(i).iter().map(|&e| self.edge_ids[e as usize]).collect())
    }

    pub fn degree(&self, v: VertexId) -> Option<usize> {
        self.vertex_index(v).map(|i| self.degree_of(i))
    }

    pub(crate) fn degree_of(&self, v: usize) -> usize {
        self.inc_start[v + 1] - self.inc_start[v]
    }

    pub fn rank(&self, e: EdgeId) -> Option<usize> {
        self.edge_index(e).map(|i| self.rank_of(i))
    }

    pub(crate) fn rank_of(&self, e: usize) -> usize {
        self.edge_start[e + 1] - self.edge_start[e]
    }

    pub fn profile(&self) -> DegreeProfile {
        DegreeProfile {
            delta: (0..self.num_vertices()).map(|v| self.degree_of(v)).min().unwrap_or(0),
            rank: (0..self.num_edges()).map(|e| self.rank_of(e)).max().unwrap_or(0),
        }
    }

    pub fn max_degree(&self) -> usize {
        (0..self.num_vertices()).map(|v| self.degree_of(v)).max().unwrap_or(0)
    }

    /// Vertex indices sharing an edge with vertex index `v`, excluding `v`.
    pub(crate) fn for_each_neighbor(&self, v: usize, mut f: impl FnMut(usize)) {
        for &e in self.incident_of(v) {
            for &w in self.members_of(e as usize) {
                if w as usize != v {
                    f(w as usize);
                }
            }
        }
    }

    /// BFS distances (share-a-hyperedge adjacency) from vertex index `src`,
    /// truncated at `radius`. Returns `(vertex index, distance)` in BFS order.
    pub(crate) fn bfs(&self, src: usize, radius: usize) -> Vec<(usize, usize)> {
        let mut seen: HashMap<usize, usize> = HashMap::new();
        let mut order = vec![(src, 0)];
        seen.insert(src, 0);
        let mut head = 0;
        while head < order.len() {
            let (u, d) = order[head];
            head += 1;
            if d == radius {
                continue;
            }
            self.for_each_neighbor(u, |w| {
                if let std::collections::hash_map::Entry::Vacant(slot) = seen.entry(w) {
                    slot.insert(d + 1);
                    order.push((w, d + 1));
                }
            });
        }
        order
    }

    /// Edge indices whose members all lie in the sorted vertex-index set.
    fn induced_edges(&self, kept: &[usize]) -> Vec<usize> {
        let mut edges: Vec<usize> = kept
            .iter()
            .flat_map(|&v| self.incident_of(v).iter().map(|&e| e as usize))
            .filter(|&e| {
                self.members_of(e).iter().all(|&w| kept.binary_search(&(w as usize)).is_ok())
            })
            .collect();
        edges.sort_unstable();
        edges.dedup();
        edges
    }

    fn indices_of(&self, s: &[VertexId]) -> Result<Vec<usize>> {
        let mut idx = s
            .iter()
            .map(|&v| self.vertex_index(v).ok_or(Error::UnknownVertex(v)))
            .collect::<Result<Vec<_>>>()?;
        idx.sort_unstable();
        idx.dedup();
        Ok(idx)
    }

    /// Induced subgraph on a vertex set: edges with all endpoints inside.
    pub fn induced(&self, s: &[VertexId]) -> Result<Self> {
        let kept = self.indices_of(s)?;
        let edges = self.induced_edges(&kept);
        Ok(self.project(&kept, &edges))
    }

    /// Vertex indices of each connected component, components ordered by
    /// their smallest vertex.
    pub fn components(&self) -> Vec<Vec<VertexId>> {
        let n = self.num_vertices();
        let mut comp = vec![usize::MAX; n];
        let mut out = Vec::new();
        for s in 0..n {
            if comp[s] != usize::MAX {
                continue;
            }
            let c = out.len();
            comp[s] = c;
            let mut stack = vec![s];
            let mut members = Vec::new();
            while let Some(u) = stack.pop() {
                members.push(self.vertices[u]);
                self.for_each_neighbor(u, |w| {
                    if comp[w] == usize::MAX {
                        comp[w] = c;
                        stack.push(w);
                    }
                });
            }
            members.sort_unstable();
            out.push(members);
        }
        out
    }
}

/// Node-induced subgraph on all vertices within hop distance `x` of `v`.
pub fn ball(g: &MultiHypergraph, v: VertexId, x: usize) -> Result<MultiHypergraph> {
    let src = g.vertex_index(v).ok_or(Error::UnknownVertex(v))?;
    let mut kept: Vec<usize> = g.bfs(src, x).into_iter().map(|(u, _)| u).collect();
    kept.sort_unstable();
    let edges = g.induced_edges(&kept);
    Ok(g.project(&kept, &edges))
}

/// All edges meeting `s`, on the union of their endpoints.
pub fn incident_expansion(g: &MultiHypergraph, s: &[VertexId]) -> Result<MultiHypergraph> {
    let seeds = g.indices_of(s)?;
    let mut edges: Vec<usize> = seeds
        .iter()
        .flat_map(|&v| g.incident_of(v).iter().map(|&e| e as usize))
        .collect();
    edges.sort_unstable();
    edges.dedup();
    let mut kept: Vec<usize> = edges
        .iter()
        .flat_map(|&e| g.members_of(e).iter().map(|&v| v as usize))
        .collect();
    kept.sort_unstable();
    kept.dedup();
    Ok(g.project(&kept, &edges))
}

/// Replaces every edge by its intersection with `v`, keeping its id. Edges
/// whose intersection is empty are dropped.
pub fn restrict_edges(
    edges: &BTreeMap<EdgeId, Vec<VertexId>>,
    v: &BTreeSet<VertexId>,
) -> BTreeMap<EdgeId, Vec<VertexId>> {
    edges
        .iter()
        .filter_map(|(&id, members)| {
            let kept: Vec<VertexId> = members.iter().copied().filter(|u| v.contains(u)).collect();
            (!kept.is_empty()).then_some((id, kept))
        })
        .collect()
}

/// Removes the vertices and edges of a subgraph `h` and projects every
/// remaining edge onto the remaining vertices.
pub fn remove_and_project(
    g: &MultiHypergraph,
    h_vertices: &[VertexId],
    h_edges: &[EdgeId],
) -> Result<MultiHypergraph> {
    let mut drop_v = HashSet::with_capacity(h_vertices.len());
    for &v in h_vertices {
        let i = g
            .vertex_index(v)
            .ok_or_else(|| Error::NotSubgraph(format!("vertex {v} not in host graph")))?;
        drop_v.insert(i);
    }
    let mut drop_e = HashSet::with_capacity(h_edges.len());
    for &e in h_edges {
        let i = g
            .edge_index(e)
            .ok_or_else(|| Error::NotSubgraph(format!("edge {e} not in host graph")))?;
        drop_e.insert(i);
    }
    let kept: Vec<usize> = (0..g.num_vertices()).filter(|v| !drop_v.contains(v)).collect();
    let edges: Vec<usize> = (0..g.num_edges()).filter(|e| !drop_e.contains(e)).collect();
    Ok(g.project(&kept, &edges))
}

/// Hop distance in the share-a-hyperedge adjacency; `None` if unreachable.
pub fn distance(g: &MultiHypergraph, u: VertexId, v: VertexId) -> Result<Option<usize>> {
    let s = g.vertex_index(u).ok_or(Error::UnknownVertex(u))?;
    let t = g.vertex_index(v).ok_or(Error::UnknownVertex(v))?;
    let mut dist = vec![usize::MAX; g.num_vertices()];
    let mut queue = VecDeque::from([s]);
    dist[s] = 0;
    while let Some(a) = queue.pop_front() {
        if a == t {
            return Ok(Some(dist[a]));
        }
        g.for_each_neighbor(a, |b| {
            if dist[b] == usize::MAX {
                dist[b] = dist[a] + 1;
                queue.push_back(b);
            }
        });
    }
    Ok(None)
}

/// A bipartite graph with a left side and a right side, both carrying their
/// own id spaces. For a hypergraph the left side is the vertex side and the
/// right side the hyperedge side.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BipartiteView {
    pub left: Vec<u32>,
    pub right: Vec<u32>,
    /// For each left node (by position), ascending positions of its right neighbors.
    pub left_adj: Vec<Vec<u32>>,
    /// For each right node (by position), ascending positions of its left neighbors.
    pub right_adj: Vec<Vec<u32>>,
}

impl BipartiteView {
    /// Builds a view from id lists and `(left id, right id)` incidences.
    pub fn from_pairs(
        left: impl IntoIterator<Item = u32>,
        right: impl IntoIterator<Item = u32>,
        pairs: impl IntoIterator<Item = (u32, u32)>,
    ) -> Result<Self> {
        let mut left: Vec<u32> = left.into_iter().collect();
        let mut right: Vec<u32> = right.into_iter().collect();
        left.sort_unstable();
        left.dedup();
        right.sort_unstable();
        right.dedup();
        let mut left_adj = vec![Vec::new(); left.len()];
        let mut right_adj = vec![Vec::new(); right.len()];
        for (l, r) in pairs {
            let li = left
                .binary_search(&l)
                .map_err(|_| Error::InvalidGraph(format!("unknown left node {l}")))?;
            let ri = right
                .binary_search(&r)
                .map_err(|_| Error::InvalidGraph(format!("unknown right node {r}")))?;
            left_adj[li].push(ri as u32);
            right_adj[ri].push(li as u32);
        }
        for a in left_adj.iter_mut().chain(right_adj.iter_mut()) {
            a.sort_unstable();
            let before = a.len();
            a.dedup();
            if a.len() != before {
                return Err(Error::InvalidGraph("repeated incidence".into()));
            }
        }
        Ok(BipartiteView { left, right, left_adj, right_adj })
    }

    pub fn from_hypergraph(g: &MultiHypergraph) -> Self {
        let left_adj = (0..g.num_vertices()).map(|v| g.incident_of(v).to_vec()).collect();
        let right_adj = (0..g.num_edges()).map(|e| g.members_of(e).to_vec()).collect();
        BipartiteView {
            left: g.vertices().to_vec(),
            right: g.edge_ids().to_vec(),
            left_adj,
            right_adj,
        }
    }

    /// Reads the right side as hyperedges over the left side. Right nodes
    /// without neighbors become no edge at all.
    pub fn to_hypergraph(&self) -> MultiHypergraph {
        let edges = self
            .right
            .iter()
            .zip(&self.right_adj)
            .filter(|(_, adj)| !adj.is_empty())
            .map(|(&id, adj)| (id, adj.clone()))
            .collect();
        MultiHypergraph::from_sorted_parts(self.left.clone(), edges)
    }

    pub fn left_degree(&self, i: usize) -> usize {
        self.left_adj[i].len()
    }

    pub fn right_degree(&self, j: usize) -> usize {
        self.right_adj[j].len()
    }

    pub fn min_left_degree(&self) -> usize {
        self.left_adj.iter().map(Vec::len).min().unwrap_or(0)
    }

    pub fn max_right_degree(&self) -> usize {
        self.right_adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn num_incidences(&self) -> usize {
        self.left_adj.iter().map(Vec::len).sum()
    }

    pub fn left_index(&self, id: u32) -> Option<usize> {
        self.left.binary_search(&id).ok()
    }

    pub fn right_index(&self, id: u32) -> Option<usize> {
        self.right.binary_search(&id).ok()
    }

    pub fn adjacent(&self, left_id: u32, right_id: u32) -> bool {
        match (self.left_index(left_id), self.right_index(right_id)) {
            (Some(l), Some(r)) => self.left_adj[l].binary_search(&(r as u32)).is_ok(),
            _ => false,
        }
    }
}

pub fn bipartite_view(g: &MultiHypergraph) -> BipartiteView {
    BipartiteView::from_hypergraph(g)
}

use std::collections::{BTreeSet, HashSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hypergraph::{EdgeId, VertexId};

/// Undirected simple graph with stable edge ids.
#[derive(Clone, PartialEq, Eq)]
pub struct SimpleGraph {
    vertices: Vec<VertexId>,
    edge_ids: Vec<EdgeId>,
    // vertex indices, smaller first
    ends: Vec<(u32, u32)>,
    adj_start: Vec<usize>,
    // (neighbor index, edge index), ascending by edge index
    adj: Vec<(u32, u32)>,
}

impl std::fmt::Debug for SimpleGraph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SimpleGraph")
            .field("vertices", &self.vertices.len())
            .field("edges", &self.edges().collect::<Vec<_>>())
            .finish()
    }
}

impl SimpleGraph {
    pub fn new(
        vertices: impl IntoIterator<Item = VertexId>,
        edges: impl IntoIterator<Item = (EdgeId, VertexId, VertexId)>,
    ) -> Result<Self> {
        let mut vertices: Vec<VertexId> = vertices.into_iter().collect();
        vertices.sort_unstable();
        if let Some(w) = vertices.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::InvalidGraph(format!("vertex {} listed twice", w[0])));
        }
        let mut list = Vec::new();
        let mut pairs = HashSet::new();
        for (id, u, v) in edges {
            if u == v {
                return Err(Error::InvalidGraph(format!("edge {id} is a self-loop at {u}")));
            }
            let a = vertices.binary_search(&u).map_err(|_| Error::UnknownVertex(u))? as u32;
            let b = vertices.binary_search(&v).map_err(|_| Error::UnknownVertex(v))? as u32;
            let key = (a.min(b), a.max(b));
            if !pairs.insert(key) {
                return Err(Error::InvalidGraph(format!("edge {id} duplicates {{{u}, {v}}}")));
            }
            list.push((id, key));
        }
        list.sort_unstable();
        if let Some(w) = list.windows(2).find(|w| w[0].0 == w[1].0) {
            return Err(Error::InvalidGraph(format!("edge id {} used twice", w[0].0)));
        }
        Ok(Self::from_sorted(vertices, list))
    }

    pub fn with_vertex_range(
        n: usize,
        edges: impl IntoIterator<Item = (EdgeId, VertexId, VertexId)>,
    ) -> Result<Self> {
        Self::new(0..n as VertexId, edges)
    }

    /// Numbers edges `0..` in the given order.
    pub fn from_pairs(n: usize, pairs: impl IntoIterator<Item = (VertexId, VertexId)>) -> Result<Self> {
        Self::with_vertex_range(n, pairs.into_iter().enumerate().map(|(i, (u, v))| (i as EdgeId, u, v)))
    }

    fn from_sorted(vertices: Vec<VertexId>, list: Vec<(EdgeId, (u32, u32))>) -> Self {
        let n = vertices.len();
        let mut deg = vec![0usize; n];
        for (_, (a, b)) in &list {
            deg[*a as usize] += 1;
            deg[*b as usize] += 1;
        }
        let mut adj_start = vec![0; n + 1];
        for v in 0..n {
            adj_start[v + 1] = adj_start[v] + deg[v];
        }
        let mut fill = adj_start[..n].to_vec();
        let mut adj = vec![(0, 0); adj_start[n]];
        for (e, (_, (a, b))) in list.iter().enumerate() {
            adj[fill[*a as usize]] = (*b, e as u32);
            fill[*a as usize] += 1;
            adj[fill[*b as usize]] = (*a, e as u32);
            fill[*b as usize] += 1;
        }
        SimpleGraph {
            vertices,
            edge_ids: list.iter().map(|p| p.0).collect(),
            ends: list.iter().map(|p| p.1).collect(),
            adj_start,
            adj,
        }
    }

    /// Same vertex set, only the edges at the given indices.
    pub(crate) fn keep_edges(&self, keep: impl IntoIterator<Item = usize>) -> Self {
        let mut list: Vec<(EdgeId, (u32, u32))> =
            keep.into_iter().map(|e| (self.edge_ids[e], self.ends[e])).collect();
        list.sort_unstable();
        list.dedup();
        Self::from_sorted(self.vertices.clone(), list)
    }

    /// Same vertex set, only the edges whose ids are listed.
    pub fn edge_subgraph(&self, ids: &BTreeSet<EdgeId>) -> Self {
        self.keep_edges((0..self.num_edges()).filter(|&e| ids.contains(&self.edge_ids[e])))
    }

    /// Same vertex set without the listed edges.
    pub fn without_edges(&self, ids: &BTreeSet<EdgeId>) -> Self {
        self.keep_edges((0..self.num_edges()).filter(|&e| !ids.contains(&self.edge_ids[e])))
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edge_ids.len()
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

    /// Endpoint indices of edge index `e`, smaller first.
    pub(crate) fn ends_of(&self, e: usize) -> (usize, usize) {
        let (a, b) = self.ends[e];
        (a as usize, b as usize)
    }

    /// `(neighbor index, edge index)` pairs at vertex index `v`, by edge index.
    pub(crate) fn adj_of(&self, v: usize) -> &[(u32, u32)] {
        &self.adj[self.adj_start[v]..self.adj_start[v + 1]]
    }

    pub(crate) fn degree_of(&self, v: usize) -> usize {
        self.adj_start[v + 1] - self.adj_start[v]
    }

    pub fn endpoints(&self, e: EdgeId) -> Option<(VertexId, VertexId)> {
        self.edge_index(e).map(|i| {
            let (a, b) = self.ends_of(i);
            (self.vertices[a], self.vertices[b])
        })
    }

    pub fn degree(&self, v: VertexId) -> Option<usize> {
        self.vertex_index(v).map(|i| self.degree_of(i))
    }

    pub fn max_degree(&self) -> usize {
        (0..self.num_vertices()).map(|v| self.degree_of(v)).max().unwrap_or(0)
    }

    /// `(id, u, v)` triples in ascending id order, `u < v`.
    pub fn edges(&self) -> impl Iterator<Item = (EdgeId, VertexId, VertexId)> + '_ {
        (0..self.num_edges()).map(|e| {
            let (a, b) = self.ends_of(e);
            (self.edge_ids[e], self.vertices[a], self.vertices[b])
        })
    }

    /// Edge ids incident to `v` in ascending order.
    pub fn incident_edges(&self, v: VertexId) -> Result<Vec<EdgeId>> {
        let i = self.vertex_index(v).ok_or(Error::UnknownVertex(v))?;
        Ok(self.adj_of(i).iter().map(|&(_, e)| self.edge_ids[e as usize]).collect())
    }

    /// Vertex id of the endpoint of edge index `e` other than vertex index `v`.
    pub(crate) fn other(&self, e: usize, v: usize) -> usize {
        let (a, b) = self.ends_of(e);
        if a == v {
            b
        } else {
            a
        }
    }
}

/// Color of every edge; colors are positive.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct EdgeColoring {
    colors: Vec<(EdgeId, u32)>,
}

impl EdgeColoring {
    pub fn from_pairs(pairs: impl IntoIterator<Item = (EdgeId, u32)>) -> Result<Self> {
        let mut colors: Vec<_> = pairs.into_iter().collect();
        colors.sort_unstable();
        if let Some(w) = colors.windows(2).find(|w| w[0].0 == w[1].0) {
            return Err(Error::InvalidGraph(format!("edge {} colored twice", w[0].0)));
        }
        Ok(EdgeColoring { colors })
    }

    pub fn color(&self, e: EdgeId) -> Option<u32> {
        self.colors.binary_search_by_key(&e, |p| p.0).ok().map(|i| self.colors[i].1)
    }

    pub fn iter(&self) -> impl Iterator<Item = (EdgeId, u32)> + '_ {
        self.colors.iter().copied()
    }

    pub fn len(&self) -> usize {
        self.colors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.colors.is_empty()
    }

    /// Number of distinct colors used.
    pub fn num_colors(&self) -> usize {
        self.colors.iter().map(|c| c.1).collect::<BTreeSet<_>>().len()
    }

    pub fn max_color(&self) -> u32 {
        self.colors.iter().map(|c| c.1).max().unwrap_or(0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_edges() {
        assert!(SimpleGraph::from_pairs(2, [(0, 0)]).is_err());
        assert!(SimpleGraph::from_pairs(2, [(0, 1), (1, 0)]).is_err());
        assert!(SimpleGraph::from_pairs(2, [(0, 2)]).is_err());
    }

    #[test]
    fn adjacency_and_subgraphs() {
        let g = SimpleGraph::from_pairs(4, [(0, 1), (1, 2), (2, 3)]).unwrap();
        assert_eq!(g.max_degree(), 2);
        assert_eq!(g.incident_edges(1).unwrap(), vec![0, 1]);
        let h = g.without_edges(&[1].into());
        assert_eq!(h.max_degree(), 1);
        assert_eq!(h.edge_ids(), &[0, 2]);
        assert_eq!(g.endpoints(2), Some((2, 3)));
    }
}

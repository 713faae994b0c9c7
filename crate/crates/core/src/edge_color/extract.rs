use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::hso::saturating_matching;
use crate::hypergraph::{BipartiteView, EdgeId, VertexId};

use super::graph::SimpleGraph;

/// Greedy maximal matching of the subgraph induced by `s`, scanning edges in
/// ascending id.
pub fn greedy_maximal_matching(g: &SimpleGraph, s: &BTreeSet<VertexId>) -> Result<BTreeSet<EdgeId>> {
    let mut inside = vec![false; g.num_vertices()];
    for &v in s {
        inside[g.vertex_index(v).ok_or(Error::UnknownVertex(v))?] = true;
    }
    Ok(matching_on(g, &inside))
}

fn matching_on(g: &SimpleGraph, inside: &[bool]) -> BTreeSet<EdgeId> {
    let mut used = vec![false; g.num_vertices()];
    let mut out = BTreeSet::new();
    for e in 0..g.num_edges() {
        let (a, b) = g.ends_of(e);
        if inside[a] && inside[b] && !used[a] && !used[b] {
            used[a] = true;
            used[b] = true;
            out.insert(g.edge_ids()[e]);
        }
    }
    out
}

/// Edges whose removal brings every degree-`delta` vertex down by one: a
/// maximal matching among degree-`delta` vertices, plus a matching that
/// saturates the still-unmatched ones into the rest of the graph.
pub fn reduce_degree(g: &SimpleGraph, delta: usize) -> Result<BTreeSet<EdgeId>> {
    if delta == 0 || g.max_degree() > delta {
        return Err(Error::precondition(format!(
            "maximum degree {} must be at most delta = {delta} >= 1",
            g.max_degree()
        )));
    }
    let n = g.num_vertices();
    let top: Vec<bool> = (0..n).map(|v| g.degree_of(v) == delta).collect();
    let m_top = matching_on(g, &top);
    let mut deg: Vec<usize> = (0..n).map(|v| g.degree_of(v)).collect();
    for &e in &m_top {
        let (a, b) = g.ends_of(g.edge_index(e).unwrap());
        deg[a] -= 1;
        deg[b] -= 1;
    }
    let left: Vec<usize> = (0..n).filter(|&v| deg[v] == delta).collect();
    let mut out = m_top.clone();
    if left.is_empty() {
        return Ok(out);
    }
    let is_left: Vec<bool> = (0..n).map(|v| deg[v] == delta).collect();
    let mut pairs = Vec::new();
    for &l in &left {
        for &(w, e) in g.adj_of(l) {
            if m_top.contains(&g.edge_ids()[e as usize]) {
                continue;
            }
            if is_left[w as usize] {
                return Err(Error::internal("unmatched maximum-degree vertices are adjacent"));
            }
            pairs.push((g.vertices()[l], g.vertices()[w as usize]));
        }
    }
    let right = (0..n).filter(|&v| !is_left[v]).map(|v| g.vertices()[v]);
    let b = BipartiteView::from_pairs(left.iter().map(|&v| g.vertices()[v]), right, pairs)?;
    let m = saturating_matching(&b)?;
    if m.len() != left.len() {
        return Err(Error::internal("bipartite matching does not saturate the maximum-degree side"));
    }
    for &(l, r) in &m.pairs {
        let li = g.vertex_index(l).unwrap();
        let e = g
            .adj_of(li)
            .iter()
            .find(|&&(w, _)| g.vertices()[w as usize] == r)
            .map(|&(_, e)| e)
            .ok_or_else(|| Error::internal("matched pair is not an edge"))?;
        out.insert(g.edge_ids()[e as usize]);
    }
    Ok(out)
}

/// Maximum degree 3 and no two adjacent degree-3 vertices.
pub(crate) fn is_three_graph(g: &SimpleGraph) -> bool {
    (0..g.num_vertices()).all(|v| {
        let d = g.degree_of(v);
        d < 3 || (d == 3 && g.adj_of(v).iter().all(|&(w, _)| g.degree_of(w as usize) < 3))
    })
}

/// A (3)-graph `F` whose removal lowers the maximum degree to `delta - 2`.
pub fn extract_three_graph(g: &SimpleGraph, delta: usize) -> Result<BTreeSet<EdgeId>> {
    if delta < 3 || g.max_degree() > delta {
        return Err(Error::precondition(format!(
            "need delta >= 3 and maximum degree {} <= delta = {delta}",
            g.max_degree()
        )));
    }
    let m1 = reduce_degree(g, delta)?;
    let m2 = reduce_degree(&g.without_edges(&m1), delta - 1)?;
    let both: BTreeSet<EdgeId> = m1.union(&m2).copied().collect();
    let h = g.edge_subgraph(&both);
    let deg3: Vec<bool> = (0..h.num_vertices()).map(|v| h.degree_of(v) == 3).collect();
    if (0..h.num_vertices()).any(|v| h.degree_of(v) > 3) {
        return Err(Error::internal("two degree reductions gave a vertex more than three edges"));
    }
    let back = matching_on(&h, &deg3);
    let f: BTreeSet<EdgeId> = both.difference(&back).copied().collect();
    if !is_three_graph(&g.edge_subgraph(&f)) {
        return Err(Error::internal("extracted edges are not a (3)-graph"));
    }
    let rest = g.without_edges(&f).max_degree();
    if rest + 2 > delta {
        return Err(Error::internal(format!("residual maximum degree {rest} > {delta} - 2")));
    }
    Ok(f)
}

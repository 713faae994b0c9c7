//! Hypergraph sinkless orientation and the matching and splitting problems
//! that reduce to it.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hall::{canonical_matching, local_hall_graph_in, HallGraph, HallParams, Scratch};
use crate::hypergraph::{ball, BipartiteView, EdgeId, MultiHypergraph, VertexId};

/// Owner of every edge: the one incident vertex for which the edge is outgoing.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Orientation {
    owners: Vec<(EdgeId, VertexId)>,
}

impl Orientation {
    pub fn from_pairs(pairs: impl IntoIterator<Item = (EdgeId, VertexId)>) -> Result<Self> {
        let mut owners: Vec<_> = pairs.into_iter().collect();
        owners.sort_unstable();
        if let Some(w) = owners.windows(2).find(|w| w[0].0 == w[1].0) {
            return Err(Error::InvalidGraph(format!("edge {} oriented twice", w[0].0)));
        }
        Ok(Orientation { owners })
    }

    /// Builds from per-edge-index owners of `g`.
    fn from_indexed(g: &MultiHypergraph, owner: &[u32]) -> Self {
        let owners = owner
            .iter()
            .enumerate()
            .map(|(e, &v)| (g.edge_ids()[e], g.vertices()[v as usize]))
            .collect();
        Orientation { owners }
    }

    pub fn owner(&self, e: EdgeId) -> Option<VertexId> {
        self.owners.binary_search_by_key(&e, |p| p.0).ok().map(|i| self.owners[i].1)
    }

    pub fn len(&self) -> usize {
        self.owners.len()
    }

    pub fn is_empty(&self) -> bool {
        self.owners.is_empty()
    }

    /// `(edge, owner)` pairs in ascending edge order.
    pub fn iter(&self) -> impl Iterator<Item = (EdgeId, VertexId)> + '_ {
        self.owners.iter().copied()
    }

    pub fn set(&mut self, e: EdgeId, v: VertexId) {
        match self.owners.binary_search_by_key(&e, |p| p.0) {
            Ok(i) => self.owners[i].1 = v,
            Err(i) => self.owners.insert(i, (e, v)),
        }
    }
}

/// Left-right pairs of a bipartite matching; for hypergraphs, vertex-edge pairs.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Matching {
    pub pairs: Vec<(u32, u32)>,
}

impl Matching {
    pub fn new(pairs: impl IntoIterator<Item = (u32, u32)>) -> Self {
        let mut pairs: Vec<_> = pairs.into_iter().collect();
        pairs.sort_unstable();
        Matching { pairs }
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn partner_of_left(&self, l: u32) -> Option<u32> {
        self.pairs.binary_search_by_key(&l, |p| p.0).ok().map(|i| self.pairs[i].1)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SplitColor {
    Red,
    Blue,
}

/// Two-coloring of the right side of a bipartite graph.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Splitting {
    pub colors: Vec<(u32, SplitColor)>,
}

impl Splitting {
    pub fn color(&self, right: u32) -> Option<SplitColor> {
        self.colors.binary_search_by_key(&right, |p| p.0).ok().map(|i| self.colors[i].1)
    }
}

fn smallest_endpoint(g: &MultiHypergraph, e: usize) -> Result<u32> {
    g.members_of(e)
        .first()
        .copied()
        .ok_or_else(|| Error::InvalidGraph(format!("edge {} has no endpoint", g.edge_ids()[e])))
}

/// Orientation from the canonical saturating matching of a Hall graph:
/// matched edges point out of their partner, all others out of their
/// smallest endpoint.
pub fn canonical_hso(h: &MultiHypergraph) -> Result<Orientation> {
    Ok(Orientation::from_indexed(h, &canonical_owners(h)?))
}

fn canonical_owners(h: &MultiHypergraph) -> Result<Vec<u32>> {
    let m = canonical_matching(h);
    let mut owner: Vec<Option<u32>> = vec![None; h.num_edges()];
    for (v, e) in m.iter().enumerate() {
        let e = e.ok_or_else(|| {
            Error::NotSaturable(format!("vertex {} stays unmatched", h.vertices()[v]))
        })?;
        owner[e as usize] = Some(v as u32);
    }
    owner
        .iter()
        .enumerate()
        .map(|(e, o)| o.map_or_else(|| smallest_endpoint(h, e), Ok))
        .collect()
}

/// Rank-one instances: every edge has a single endpoint that must own it.
fn forced_owners(g: &MultiHypergraph) -> Result<Vec<u32>> {
    if let Some(v) = (0..g.num_vertices()).find(|&v| g.degree_of(v) == 0) {
        return Err(Error::precondition(format!("vertex {} has no incident edge", g.vertices()[v])));
    }
    (0..g.num_edges()).map(|e| smallest_endpoint(g, e)).collect()
}

fn is_forced(g: &MultiHypergraph) -> bool {
    g.num_edges() > 0 && g.profile().rank <= 1
}

/// Hall graphs of all vertices in ascending vertex order.
pub fn hall_graphs(g: &MultiHypergraph) -> Result<Vec<HallGraph>> {
    let params = HallParams::of(g)?;
    let mut scratch = Scratch::new(g);
    g.vertices().iter().map(|&v| local_hall_graph_in(g, v, &params, &mut scratch)).collect()
}

/// Sequential reference: sweeps the Hall graphs of all vertices in ascending
/// vertex order, each overwriting the orientation of its edges with its
/// canonical orientation. Edges in no Hall graph go to their smallest endpoint.
pub fn solve_hso(g: &MultiHypergraph) -> Result<Orientation> {
    if is_forced(g) {
        return Ok(Orientation::from_indexed(g, &forced_owners(g)?));
    }
    let hs = hall_graphs(g)?;
    let m = g.num_edges();
    let mut owner: Vec<Option<u32>> = vec![None; m];
    let mut writer = vec![usize::MAX; m];
    let mut last_hall = vec![usize::MAX; g.num_vertices()];
    for (i, h) in hs.iter().enumerate() {
        let o = canonical_hso(&h.to_hypergraph(g)?)?;
        for (e, v) in o.iter() {
            let ei = g.edge_index(e).unwrap();
            owner[ei] = Some(g.vertex_index(v).unwrap() as u32);
            writer[ei] = i;
        }
        for &v in &h.vertices {
            last_hall[g.vertex_index(v).unwrap()] = i;
        }
    }
    for v in 0..g.num_vertices() {
        let kept = g
            .incident_of(v)
            .iter()
            .any(|&e| owner[e as usize] == Some(v as u32) && writer[e as usize] == last_hall[v]);
        if !kept {
            return Err(Error::internal(format!(
                "vertex {} lost the outgoing edge of its last Hall graph",
                g.vertices()[v]
            )));
        }
    }
    let owner = owner
        .iter()
        .enumerate()
        .map(|(e, o)| o.map_or_else(|| smallest_endpoint(g, e), Ok))
        .collect::<Result<Vec<_>>>()?;
    Ok(Orientation::from_indexed(g, &owner))
}

/// Owners of every edge incident to `v`, computed from `view` alone. `view`
/// must contain the radius `2 * (radius_bound + 1)` ball around `v` for the
/// answer to agree with the sequential sweep on the full graph.
pub fn local_decide(
    view: &MultiHypergraph,
    v: VertexId,
    params: &HallParams,
) -> Result<Vec<(EdgeId, VertexId)>> {
    let x = params.radius_bound() + 1;
    let near = ball(view, v, x)?;
    let vi = view.vertex_index(v).ok_or(Error::UnknownVertex(v))?;
    let incident: Vec<u32> = view.incident_of(vi).to_vec();
    let mut decided: Vec<Option<VertexId>> = vec![None; incident.len()];
    let mut open = incident.len();
    let mut scratch = Scratch::new(view);
    for &u in near.vertices().iter().rev() {
        if open == 0 {
            break;
        }
        let h = local_hall_graph_in(view, u, params, &mut scratch)?;
        if !h.contains_vertex(v) {
            continue;
        }
        let mut o = None;
        for (slot, &e) in decided.iter_mut().zip(&incident) {
            let id = view.edge_ids()[e as usize];
            if slot.is_none() && h.contains_edge(id) {
                let o = match &o {
                    Some(o) => o,
                    None => o.insert(canonical_hso(&h.to_hypergraph(view)?)?),
                };
                *slot = o.owner(id);
                open -= 1;
            }
        }
    }
    incident
        .iter()
        .zip(decided)
        .map(|(&e, d)| {
            let e = e as usize;
            let owner = match d {
                Some(d) => d,
                None => view.vertices()[smallest_endpoint(view, e)? as usize],
            };
            Ok((view.edge_ids()[e], owner))
        })
        .collect()
}

/// Per-vertex simulation of [`solve_hso`]. Every vertex `u` computes its Hall
/// graph and that graph's canonical orientation from its own
/// `radius_bound + 1` ball; the smallest endpoint `v` of each edge then takes
/// the owner from the largest-id Hall graph in the same radius around `v`
/// containing both `v` and the edge. Everything `v` uses therefore lies in its
/// `2 * (radius_bound + 1)` ball. The result equals the sequential sweep exactly.
pub fn solve_hso_local(g: &MultiHypergraph) -> Result<Orientation> {
    if is_forced(g) {
        return solve_hso(g);
    }
    let params = HallParams::of(g)?;
    let x = params.radius_bound() + 1;
    let halls: Vec<(HallGraph, Orientation)> = (0..g.num_vertices())
        .into_par_iter()
        .map(|u| {
            let id = g.vertices()[u];
            let view = ball(g, id, x)?;
            let h = local_hall_graph_in(&view, id, &params, &mut Scratch::new(&view))?;
            let o = if h.is_empty() { Orientation::default() } else { canonical_hso(&h.to_hypergraph(&view)?)? };
            Ok((h, o))
        })
        .collect::<Result<_>>()?;
    let responsible: Vec<usize> = (0..g.num_vertices())
        .filter(|&v| g.incident_of(v).iter().any(|&e| g.members_of(e as usize)[0] as usize == v))
        .collect();
    let parts: Vec<Vec<(EdgeId, VertexId)>> = responsible
        .par_iter()
        .map(|&v| {
            let id = g.vertices()[v];
            let mut near: Vec<usize> = g.bfs(v, x).into_iter().map(|(u, _)| u).collect();
            near.sort_unstable_by(|a, b| b.cmp(a));
            let own = g.incident_of(v).iter().map(|&e| e as usize).filter(|&e| g.members_of(e)[0] as usize == v);
            own.map(|e| {
                let eid = g.edge_ids()[e];
                let owner = near
                    .iter()
                    .map(|&u| &halls[u])
                    .find(|(h, _)| h.contains_vertex(id) && h.contains_edge(eid))
                    .map_or(Some(id), |(_, o)| o.owner(eid));
                owner.map(|w| (eid, w)).ok_or_else(|| Error::internal(format!("Hall graph lost edge {eid}")))
            })
            .collect()
        })
        .collect::<Result<_>>()?;
    Orientation::from_pairs(parts.into_iter().flatten())
}

/// Orientation in which every vertex of `demand` has an outgoing edge. Edges
/// are restricted to the demand side and solved there; edges without a
/// demand endpoint go to their smallest endpoint.
pub fn solve_hso_exempt(g: &MultiHypergraph, demand: &[VertexId]) -> Result<Orientation> {
    let rank = g.profile().rank;
    let mut keep = Vec::with_capacity(demand.len());
    for &v in demand {
        let i = g.vertex_index(v).ok_or(Error::UnknownVertex(v))?;
        if g.degree_of(i) <= rank {
            return Err(Error::precondition(format!(
                "demand vertex {v} has degree {} <= rank {rank}",
                g.degree_of(i)
            )));
        }
        keep.push(i);
    }
    keep.sort_unstable();
    keep.dedup();
    let all: Vec<usize> = (0..g.num_edges()).collect();
    let inner = g.project(&keep, &all);
    let solved = if inner.num_vertices() == 0 { Orientation::default() } else { solve_hso(&inner)? };
    let pairs = (0..g.num_edges())
        .map(|e| {
            let id = g.edge_ids()[e];
            match solved.owner(id) {
                Some(v) => Ok((id, v)),
                None => Ok((id, g.vertices()[smallest_endpoint(g, e)? as usize])),
            }
        })
        .collect::<Result<Vec<_>>>()?;
    Orientation::from_pairs(pairs)
}

/// Every vertex takes its smallest outgoing edge.
pub fn hso_to_matching(g: &MultiHypergraph, o: &Orientation) -> Result<Matching> {
    let mut pick: Vec<Option<EdgeId>> = vec![None; g.num_vertices()];
    for (e, v) in o.iter() {
        let ei = g.edge_index(e).ok_or(Error::UnknownEdge(e))?;
        let vi = g.vertex_index(v).ok_or(Error::UnknownVertex(v))?;
        if g.members_of(ei).binary_search(&(vi as u32)).is_err() {
            return Err(Error::precondition(format!("edge {e} points out of non-member {v}")));
        }
        if pick[vi].is_none_or(|p| e < p) {
            pick[vi] = Some(e);
        }
    }
    let pairs = pick
        .iter()
        .enumerate()
        .map(|(v, e)| {
            e.map(|e| (g.vertices()[v], e)).ok_or_else(|| {
                Error::precondition(format!("vertex {} has no outgoing edge", g.vertices()[v]))
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Matching::new(pairs))
}

/// Matched edges point out of their partner; every other edge out of its
/// smallest endpoint. The matching must saturate all vertices.
pub fn matching_to_hso(g: &MultiHypergraph, m: &Matching) -> Result<Orientation> {
    let mut owner: Vec<Option<u32>> = vec![None; g.num_edges()];
    let mut seen = vec![false; g.num_vertices()];
    for &(v, e) in &m.pairs {
        let vi = g.vertex_index(v).ok_or(Error::UnknownVertex(v))?;
        let ei = g.edge_index(e).ok_or(Error::UnknownEdge(e))?;
        if g.members_of(ei).binary_search(&(vi as u32)).is_err() {
            return Err(Error::precondition(format!("vertex {v} is not in edge {e}")));
        }
        if seen[vi] || owner[ei].is_some() {
            return Err(Error::precondition(format!("pair ({v}, {e}) reuses a matched node")));
        }
        seen[vi] = true;
        owner[ei] = Some(vi as u32);
    }
    if let Some(v) = seen.iter().position(|s| !s) {
        return Err(Error::precondition(format!("vertex {} is unmatched", g.vertices()[v])));
    }
    let owner = owner
        .iter()
        .enumerate()
        .map(|(e, o)| o.map_or_else(|| smallest_endpoint(g, e), Ok))
        .collect::<Result<Vec<_>>>()?;
    Ok(Orientation::from_indexed(g, &owner))
}

/// Hypergraph whose vertices are the left nodes and whose edges are the
/// right nodes of positive degree.
fn right_as_edges(b: &BipartiteView) -> MultiHypergraph {
    b.to_hypergraph()
}

/// Matching saturating the left side when the minimum left degree exceeds
/// the maximum right degree.
pub fn saturating_matching(b: &BipartiteView) -> Result<Matching> {
    let (delta, r) = (b.min_left_degree(), b.max_right_degree());
    if b.left.is_empty() {
        return Ok(Matching::default());
    }
    if delta <= r {
        return Err(Error::precondition(format!("minimum left degree {delta} <= maximum right degree {r}")));
    }
    let g = right_as_edges(b);
    let o = solve_hso(&g)?;
    hso_to_matching(&g, &o)
}

/// Colors the right side so that every left node sees both colors. Each
/// left node `v` is split into copies `2v` (first half of its neighbors by
/// id) and `2v + 1` (the rest); the copies' smallest outgoing edges are
/// colored red and blue respectively, all other right nodes red.
pub fn weak_splitting(b: &BipartiteView) -> Result<Splitting> {
    let (delta, r) = (b.min_left_degree(), b.max_right_degree());
    if delta < 2 * (r + 1) {
        return Err(Error::precondition(format!("minimum left degree {delta} < 2 * ({r} + 1)")));
    }
    if b.left.last().is_some_and(|&l| l >= u32::MAX / 2) {
        return Err(Error::precondition("left ids too large to split"));
    }
    let mut pairs = Vec::with_capacity(b.num_incidences());
    for (i, adj) in b.left_adj.iter().enumerate() {
        let half = adj.len().div_ceil(2);
        for (k, &j) in adj.iter().enumerate() {
            let copy = 2 * b.left[i] + u32::from(k >= half);
            pairs.push((copy, b.right[j as usize]));
        }
    }
    let copies = b.left.iter().flat_map(|&l| [2 * l, 2 * l + 1]);
    let split = BipartiteView::from_pairs(copies, b.right.iter().copied(), pairs)?;
    let g = right_as_edges(&split);
    let m = hso_to_matching(&g, &solve_hso(&g)?)?;
    let mut colors: Vec<(u32, SplitColor)> = b.right.iter().map(|&r| (r, SplitColor::Red)).collect();
    for &(copy, right) in &m.pairs {
        if copy % 2 == 1 {
            let j = b.right_index(right).unwrap();
            colors[j].1 = SplitColor::Blue;
        }
    }
    Ok(Splitting { colors })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypergraph::bipartite_view;

    fn k4() -> MultiHypergraph {
        let mut edges = Vec::new();
        for a in 0..4 {
            for b in a + 1..4 {
                edges.push((edges.len() as EdgeId, vec![a, b]));
            }
        }
        MultiHypergraph::with_vertex_range(4, edges).unwrap()
    }

    fn has_outgoing(g: &MultiHypergraph, o: &Orientation) -> bool {
        g.vertices()
            .iter()
            .all(|&v| g.incident_edges(v).unwrap().iter().any(|&e| o.owner(e) == Some(v)))
    }

    #[test]
    fn canonical_examples() {
        let one = MultiHypergraph::new([5], [(9, vec![5])]).unwrap();
        assert_eq!(canonical_hso(&one).unwrap().owner(9), Some(5));

        let par = MultiHypergraph::new([1, 2], [(1, vec![1, 2]), (2, vec![1, 2])]).unwrap();
        let o = canonical_hso(&par).unwrap();
        assert_eq!((o.owner(1), o.owner(2)), (Some(1), Some(2)));

        let o = canonical_hso(&k4()).unwrap();
        assert!(has_outgoing(&k4(), &o));
    }

    #[test]
    fn sweep_and_local_agree_on_k4() {
        let g = k4();
        let a = solve_hso(&g).unwrap();
        let b = solve_hso_local(&g).unwrap();
        assert_eq!(a, b);
        assert!(has_outgoing(&g, &a));
    }

    #[test]
    fn rank_one_is_forced() {
        let g = MultiHypergraph::with_vertex_range(2, [(0, vec![0]), (1, vec![1]), (2, vec![1])]).unwrap();
        let o = solve_hso(&g).unwrap();
        assert_eq!(o.iter().collect::<Vec<_>>(), vec![(0, 0), (1, 1), (2, 1)]);
        let bare = MultiHypergraph::with_vertex_range(2, [(0, vec![0])]).unwrap();
        assert!(solve_hso(&bare).is_err());
    }

    #[test]
    fn precondition_rejected() {
        let tri =
            MultiHypergraph::with_vertex_range(3, [(0, vec![0, 1]), (1, vec![1, 2]), (2, vec![0, 2])]).unwrap();
        assert!(matches!(solve_hso(&tri), Err(Error::Precondition(_))));
    }

    #[test]
    fn matching_conversions() {
        let disjoint = MultiHypergraph::with_vertex_range(3, (0..3).map(|i| (i, vec![i]))).unwrap();
        let m = Matching::new((0..3).map(|i| (i, i)));
        let o = matching_to_hso(&disjoint, &m).unwrap();
        assert_eq!(hso_to_matching(&disjoint, &o).unwrap(), m);

        let g = MultiHypergraph::with_vertex_range(2, [(3, vec![0, 1]), (7, vec![0, 1]), (8, vec![0, 1])]).unwrap();
        let o = Orientation::from_pairs([(3, 0), (7, 0), (8, 1)]).unwrap();
        assert_eq!(hso_to_matching(&g, &o).unwrap().partner_of_left(0), Some(3));
    }

    #[test]
    fn exempt_cases() {
        let g = k4();
        let o = solve_hso_exempt(&g, &[]).unwrap();
        assert_eq!(o.len(), 6);
        let all = solve_hso_exempt(&g, &[0, 1, 2, 3]).unwrap();
        assert!(has_outgoing(&g, &all));
        let path = MultiHypergraph::with_vertex_range(3, [(0, vec![0, 1]), (1, vec![1, 2])]).unwrap();
        assert!(solve_hso_exempt(&path, &[1]).is_err());
    }

    #[test]
    fn saturating_and_splitting_small() {
        let b = BipartiteView::from_pairs([0], [0, 1], [(0, 0), (0, 1)]).unwrap();
        let m = saturating_matching(&b).unwrap();
        assert_eq!(m.len(), 1);

        let b = BipartiteView::from_pairs([0], 0..4, (0..4).map(|j| (0, j))).unwrap();
        let s = weak_splitting(&b).unwrap();
        let colors: std::collections::BTreeSet<_> = s.colors.iter().map(|c| c.1).collect();
        assert_eq!(colors.len(), 2);

        let crowded = MultiHypergraph::with_vertex_range(4, (0..3).map(|e| (e, vec![0, 1, 2, 3]))).unwrap();
        assert!(saturating_matching(&bipartite_view(&crowded)).is_err());
    }
}

use std::collections::BTreeSet;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hypergraph::EdgeId;

use super::cluster::smallest;
use super::extend::{color_three_graph_with_stats, ThreeColorStats};
use super::extract::extract_three_graph;
use super::graph::{EdgeColoring, SimpleGraph};

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct HalfStats {
    pub max_degree: usize,
    pub rounds: Vec<ThreeColorStats>,
    pub colors: usize,
}

/// Proper coloring of a graph with maximum degree at most 2, colors
/// `offset + 1..=offset + 3`, greedy by edge id.
fn color_low(g: &SimpleGraph, offset: u32, out: &mut Vec<(EdgeId, u32)>) -> Result<()> {
    let mut col = vec![0u32; g.num_edges()];
    for e in 0..g.num_edges() {
        let mask = super::cluster::avail_mask(g, e, |f| col[f]);
        col[e] = smallest(mask).ok_or_else(|| Error::internal("degree-2 residue needs a fourth color"))?;
        out.push((g.edge_ids()[e], offset + col[e]));
    }
    Ok(())
}

/// Proper edge coloring with at most `⌊3Δ/2⌋` colors.
pub fn edge_color_3half(g: &SimpleGraph) -> Result<EdgeColoring> {
    edge_color_3half_with_stats(g).map(|(c, _)| c)
}

pub fn edge_color_3half_with_stats(g: &SimpleGraph) -> Result<(EdgeColoring, HalfStats)> {
    let delta = g.max_degree();
    let mut stats = HalfStats { max_degree: delta, ..Default::default() };
    let mut out = Vec::with_capacity(g.num_edges());
    if delta <= 2 {
        color_low(g, 0, &mut out)?;
    } else {
        let k = (delta - 1) / 2;
        let mut cur = g.clone();
        let mut d = delta;
        for i in 0..k {
            let f = extract_three_graph(&cur, d)?;
            let (col, st) = color_three_graph_with_stats(&cur.edge_subgraph(&f))?;
            out.extend(col.iter().map(|(e, c)| (e, 3 * i as u32 + c)));
            stats.rounds.push(st);
            cur = cur.without_edges(&f);
            d -= 2;
        }
        color_low(&cur, 3 * k as u32, &mut out)?;
    }
    let col = EdgeColoring::from_pairs(out)?;
    stats.colors = col.num_colors();
    Ok((col, stats))
}

/// Splits the edges into two sets along Euler circuits of the graph plus a
/// dummy vertex joined to every odd-degree vertex, alternating along each
/// circuit. The two side-degrees of every vertex differ by at most 2.
pub fn euler_split(g: &SimpleGraph) -> (BTreeSet<EdgeId>, BTreeSet<EdgeId>) {
    let n = g.num_vertices();
    let m = g.num_edges();
    let mut ends: Vec<(usize, usize)> = (0..m).map(|e| g.ends_of(e)).collect();
    for v in (0..n).filter(|&v| g.degree_of(v) % 2 == 1) {
        ends.push((v, n));
    }
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n + 1];
    for (e, &(a, b)) in ends.iter().enumerate() {
        adj[a].push(e);
        adj[b].push(e);
    }
    let mut used = vec![false; ends.len()];
    let mut ptr = vec![0usize; n + 1];
    let (mut red, mut blue) = (BTreeSet::new(), BTreeSet::new());
    let starts = std::iter::once(n).chain(0..n);
    for s in starts {
        // iterative Hierholzer; circuit edges come out in reverse walk order
        let mut stack: Vec<(usize, Option<usize>)> = vec![(s, None)];
        let mut circuit = Vec::new();
        while let Some(&(v, via)) = stack.last() {
            while ptr[v] < adj[v].len() && used[adj[v][ptr[v]]] {
                ptr[v] += 1;
            }
            if ptr[v] == adj[v].len() {
                stack.pop();
                if let Some(e) = via {
                    circuit.push(e);
                }
            } else {
                let e = adj[v][ptr[v]];
                used[e] = true;
                let (a, b) = ends[e];
                stack.push((if a == v { b } else { a }, Some(e)));
            }
        }
        for (i, e) in circuit.into_iter().enumerate() {
            if e < m {
                let id = g.edge_ids()[e];
                if i % 2 == 0 {
                    red.insert(id);
                } else {
                    blue.insert(id);
                }
            }
        }
    }
    (red, blue)
}

/// Largest difference between the two side-degrees over all vertices.
pub fn split_discrepancy(g: &SimpleGraph, red: &BTreeSet<EdgeId>) -> usize {
    let mut diff = vec![0i64; g.num_vertices()];
    for e in 0..g.num_edges() {
        let (a, b) = g.ends_of(e);
        let s = if red.contains(&g.edge_ids()[e]) { 1 } else { -1 };
        diff[a] += s;
        diff[b] += s;
    }
    diff.into_iter().map(|d| d.unsigned_abs() as usize).max().unwrap_or(0)
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct EpsStats {
    pub eps: f64,
    pub h: usize,
    /// Maximum degrees of the parts after each splitting round.
    pub part_degrees: Vec<Vec<usize>>,
    pub max_discrepancy: usize,
    pub colors: usize,
}

/// Number of halving rounds for `eps` at maximum degree `delta`.
pub fn split_rounds(eps: f64, delta: usize) -> usize {
    let x = eps * delta as f64 / 15.0;
    if x <= 1.0 {
        0
    } else {
        x.log2().ceil() as usize
    }
}

/// Proper edge coloring with at most `(3/2 + eps)Δ` colors: repeated Euler
/// halving, then the `⌊3Δ/2⌋` coloring of every part on disjoint palettes.
pub fn edge_color_3half_eps(g: &SimpleGraph, eps: f64) -> Result<EdgeColoring> {
    edge_color_3half_eps_with_stats(g, eps).map(|(c, _)| c)
}

pub fn edge_color_3half_eps_with_stats(g: &SimpleGraph, eps: f64) -> Result<(EdgeColoring, EpsStats)> {
    let delta = g.max_degree();
    if !eps.is_finite() || delta == 0 || eps * delta as f64 <= 1.0 {
        return Err(Error::precondition(format!("need eps > 1/Δ, got eps = {eps} at Δ = {delta}")));
    }
    let h = split_rounds(eps, delta);
    let mut stats = EpsStats { eps, h, ..Default::default() };
    let mut parts = vec![g.clone()];
    for _ in 0..h {
        let mut next = Vec::with_capacity(2 * parts.len());
        for p in &parts {
            let (red, blue) = euler_split(p);
            stats.max_discrepancy = stats.max_discrepancy.max(split_discrepancy(p, &red));
            for side in [red, blue] {
                let q = p.edge_subgraph(&side);
                if 2 * q.max_degree() > p.max_degree() + 2 {
                    return Err(Error::internal(format!(
                        "split part has degree {} from parent degree {}",
                        q.max_degree(),
                        p.max_degree()
                    )));
                }
                next.push(q);
            }
        }
        stats.part_degrees.push(next.iter().map(|q| q.max_degree()).collect());
        parts = next;
    }
    let colored: Vec<EdgeColoring> = parts.par_iter().map(edge_color_3half).collect::<Result<_>>()?;
    let mut offset = 0;
    let mut out = Vec::with_capacity(g.num_edges());
    for col in colored {
        out.extend(col.iter().map(|(e, c)| (e, offset + c)));
        offset += col.max_color();
    }
    let col = EdgeColoring::from_pairs(out)?;
    stats.colors = col.num_colors();
    Ok((col, stats))
}

//! Line-oriented text records and their JSON mirror.
//!
//! ```text
//! # hypergraph: header, optional vertex list, one record per edge
//! h <n> <m>
//! v <id> <id> ...
//! e <edge-id> <v> <v> ...
//! # simple graph
//! g <n> <m>
//! e <edge-id> <u> <v>
//! # solutions
//! o <edge-id> <vertex-id>
//! m <vertex-id> <edge-id>
//! s <edge-id> red|blue
//! c <edge-id> <color>
//! ```
//!
//! Without a `v` record the vertices are `0..n`. Streams may be
//! concatenated, so a graph followed by a solution is one document.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::edge_color::{EdgeColoring, SimpleGraph};
use crate::error::{Error, Result};
use crate::hso::{Matching, Orientation, SplitColor, Splitting};
use crate::hypergraph::{EdgeId, MultiHypergraph, RawHypergraph, VertexId};

/// Everything a stream can carry; each part at most once.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Document {
    pub hypergraph: Option<MultiHypergraph>,
    pub graph: Option<SimpleGraph>,
    pub orientation: Option<Orientation>,
    pub matching: Option<Matching>,
    pub splitting: Option<Splitting>,
    pub coloring: Option<EdgeColoring>,
}

impl Document {
    pub fn from_hypergraph(g: MultiHypergraph) -> Self {
        Document { hypergraph: Some(g), ..Document::default() }
    }

    pub fn from_graph(g: SimpleGraph) -> Self {
        Document { graph: Some(g), ..Document::default() }
    }

    /// Parts of `other` fill in or replace parts of `self`.
    pub fn absorb(&mut self, other: Document) {
        macro_rules! take {
            ($($f:ident),*) => { $( if other.$f.is_some() { self.$f = other.$f; } )* };
        }
        take!(hypergraph, graph, orientation, matching, splitting, coloring);
    }

    pub fn hypergraph(&self) -> Result<&MultiHypergraph> {
        self.hypergraph.as_ref().ok_or_else(|| Error::precondition("input has no hypergraph"))
    }

    pub fn graph(&self) -> Result<&SimpleGraph> {
        self.graph.as_ref().ok_or_else(|| Error::precondition("input has no simple graph"))
    }
}

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse { line, message: message.into() }
}

fn num<T: std::str::FromStr>(line: usize, tok: Option<&str>, what: &str) -> Result<T> {
    let tok = tok.ok_or_else(|| parse_err(line, format!("missing {what}")))?;
    tok.parse().map_err(|_| parse_err(line, format!("bad {what} `{tok}`")))
}

enum Open {
    Hyper { line: usize, n: usize, m: usize, vertices: Option<Vec<VertexId>>, edges: Vec<(EdgeId, Vec<VertexId>)> },
    Simple { line: usize, n: usize, m: usize, vertices: Option<Vec<VertexId>>, edges: Vec<(EdgeId, VertexId, VertexId)> },
}

#[derive(Default)]
struct Builder {
    doc: Document,
    open: Option<Open>,
    orientation: Vec<(EdgeId, VertexId)>,
    matching: Vec<(VertexId, EdgeId)>,
    splitting: Vec<(EdgeId, SplitColor)>,
    coloring: Vec<(EdgeId, u32)>,
    seen: [bool; 4],
}

impl Builder {
    fn close(&mut self) -> Result<()> {
        match self.open.take() {
            None => Ok(()),
            Some(Open::Hyper { line, n, m, vertices, edges }) => {
                if edges.len() != m {
                    return Err(parse_err(line, format!("header announces {m} edges, found {}", edges.len())));
                }
                let vertices = vertices.unwrap_or_else(|| (0..n as VertexId).collect());
                if vertices.len() != n {
                    return Err(parse_err(line, format!("header announces {n} vertices, found {}", vertices.len())));
                }
                if self.doc.hypergraph.is_some() {
                    return Err(parse_err(line, "second hypergraph in one stream"));
                }
                self.doc.hypergraph = Some(MultiHypergraph::from_raw(RawHypergraph { vertices, edges })?);
                Ok(())
            }
            Some(Open::Simple { line, n, m, vertices, edges }) => {
                if edges.len() != m {
                    return Err(parse_err(line, format!("header announces {m} edges, found {}", edges.len())));
                }
                let vertices = vertices.unwrap_or_else(|| (0..n as VertexId).collect());
                if vertices.len() != n {
                    return Err(parse_err(line, format!("header announces {n} vertices, found {}", vertices.len())));
                }
                if self.doc.graph.is_some() {
                    return Err(parse_err(line, "second graph in one stream"));
                }
                self.doc.graph = Some(SimpleGraph::new(vertices, edges)?);
                Ok(())
            }
        }
    }

    fn record(&mut self, ln: usize, text: &str) -> Result<()> {
        let mut toks = text.split_whitespace();
        let Some(kind) = toks.next() else { return Ok(()) };
        match kind {
            "h" | "g" => {
                self.close()?;
                let n = num(ln, toks.next(), "vertex count")?;
                let m = num(ln, toks.next(), "edge count")?;
                self.open = Some(if kind == "h" {
                    Open::Hyper { line: ln, n, m, vertices: None, edges: Vec::new() }
                } else {
                    Open::Simple { line: ln, n, m, vertices: None, edges: Vec::new() }
                });
                return Ok(());
            }
            "v" => {
                let ids = toks.map(|t| num(ln, Some(t), "vertex id")).collect::<Result<Vec<VertexId>>>()?;
                match &mut self.open {
                    Some(Open::Hyper { vertices, .. }) | Some(Open::Simple { vertices, .. }) => {
                        vertices.get_or_insert_with(Vec::new).extend(ids)
                    }
                    _ => return Err(parse_err(ln, "vertex record outside a graph")),
                }
                return Ok(());
            }
            "e" => {
                let id: EdgeId = num(ln, toks.next(), "edge id")?;
                let members = toks.map(|t| num(ln, Some(t), "vertex id")).collect::<Result<Vec<VertexId>>>()?;
                match &mut self.open {
                    Some(Open::Hyper { edges, .. }) => edges.push((id, members)),
                    Some(Open::Simple { edges, .. }) => {
                        let [u, v] = members[..] else {
                            return Err(parse_err(ln, "simple edge needs exactly two endpoints"));
                        };
                        edges.push((id, u, v));
                    }
                    _ => return Err(parse_err(ln, "edge record outside a graph")),
                }
                return Ok(());
            }
            "o" => {
                self.seen[0] = true;
                self.orientation.push((num(ln, toks.next(), "edge id")?, num(ln, toks.next(), "vertex id")?));
            }
            "m" => {
                self.seen[1] = true;
                self.matching.push((num(ln, toks.next(), "vertex id")?, num(ln, toks.next(), "edge id")?));
            }
            "s" => {
                self.seen[2] = true;
                let e = num(ln, toks.next(), "edge id")?;
                let c = match toks.next() {
                    Some("red") => SplitColor::Red,
                    Some("blue") => SplitColor::Blue,
                    other => return Err(parse_err(ln, format!("bad split color {other:?}"))),
                };
                self.splitting.push((e, c));
            }
            "c" => {
                self.seen[3] = true;
                self.coloring.push((num(ln, toks.next(), "edge id")?, num(ln, toks.next(), "color")?));
            }
            other => return Err(parse_err(ln, format!("unknown record `{other}`"))),
        }
        if toks.next().is_some() {
            return Err(parse_err(ln, "trailing tokens"));
        }
        self.close()
    }

    fn finish(mut self) -> Result<Document> {
        self.close()?;
        let mut doc = self.doc;
        if self.seen[0] {
            doc.orientation = Some(Orientation::from_pairs(self.orientation)?);
        }
        if self.seen[1] {
            doc.matching = Some(Matching::new(self.matching));
        }
        if self.seen[2] {
            let mut colors = self.splitting;
            colors.sort_unstable();
            if let Some(w) = colors.windows(2).find(|w| w[0].0 == w[1].0) {
                return Err(Error::InvalidGraph(format!("edge {} split twice", w[0].0)));
            }
            doc.splitting = Some(Splitting { colors });
        }
        if self.seen[3] {
            doc.coloring = Some(EdgeColoring::from_pairs(self.coloring)?);
        }
        Ok(doc)
    }
}

pub fn parse_text(input: &str) -> Result<Document> {
    let mut b = Builder::default();
    for (i, line) in input.lines().enumerate() {
        let text = line.split('#').next().unwrap_or("");
        b.record(i + 1, text)?;
    }
    b.finish()
}

fn is_range(vertices: &[VertexId]) -> bool {
    vertices.iter().enumerate().all(|(i, &v)| v as usize == i)
}

fn write_vertices(out: &mut String, vertices: &[VertexId]) {
    if !is_range(vertices) {
        out.push('v');
        for v in vertices {
            let _ = write!(out, " {v}");
        }
        out.push('\n');
    }
}

pub fn hypergraph_to_text(g: &MultiHypergraph) -> String {
    let mut out = format!("h {} {}\n", g.num_vertices(), g.num_edges());
    write_vertices(&mut out, g.vertices());
    for (id, members) in g.edges() {
        let _ = write!(out, "e {id}");
        for v in members {
            let _ = write!(out, " {v}");
        }
        out.push('\n');
    }
    out
}

pub fn graph_to_text(g: &SimpleGraph) -> String {
    let mut out = format!("g {} {}\n", g.num_vertices(), g.num_edges());
    write_vertices(&mut out, g.vertices());
    for (id, u, v) in g.edges() {
        let _ = writeln!(out, "e {id} {u} {v}");
    }
    out
}

pub fn to_text(doc: &Document) -> String {
    let mut out = String::new();
    if let Some(g) = &doc.hypergraph {
        out += &hypergraph_to_text(g);
    }
    if let Some(g) = &doc.graph {
        out += &graph_to_text(g);
    }
    if let Some(o) = &doc.orientation {
        for (e, v) in o.iter() {
            let _ = writeln!(out, "o {e} {v}");
        }
    }
    if let Some(m) = &doc.matching {
        for &(v, e) in &m.pairs {
            let _ = writeln!(out, "m {v} {e}");
        }
    }
    if let Some(s) = &doc.splitting {
        for &(e, c) in &s.colors {
            let c = match c {
                SplitColor::Red => "red",
                SplitColor::Blue => "blue",
            };
            let _ = writeln!(out, "s {e} {c}");
        }
    }
    if let Some(c) = &doc.coloring {
        for (e, k) in c.iter() {
            let _ = writeln!(out, "c {e} {k}");
        }
    }
    out
}

#[derive(Serialize, Deserialize)]
struct HyperEdgeJson {
    id: EdgeId,
    members: Vec<VertexId>,
}

#[derive(Serialize, Deserialize)]
struct HyperJson {
    n: usize,
    m: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    vertices: Option<Vec<VertexId>>,
    edges: Vec<HyperEdgeJson>,
}

#[derive(Serialize, Deserialize)]
struct SimpleEdgeJson {
    id: EdgeId,
    u: VertexId,
    v: VertexId,
}

#[derive(Serialize, Deserialize)]
struct GraphJson {
    n: usize,
    m: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    vertices: Option<Vec<VertexId>>,
    edges: Vec<SimpleEdgeJson>,
}

#[derive(Serialize, Deserialize, Default)]
struct DocJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    hypergraph: Option<HyperJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    graph: Option<GraphJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    orientation: Option<Orientation>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    matching: Option<Matching>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    splitting: Option<Splitting>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    coloring: Option<EdgeColoring>,
}

fn check_counts(n: usize, m: usize, vertices: &Option<Vec<VertexId>>, edges: usize) -> Result<Vec<VertexId>> {
    if edges != m {
        return Err(Error::InvalidGraph(format!("m = {m} but {edges} edges listed")));
    }
    let vertices = vertices.clone().unwrap_or_else(|| (0..n as VertexId).collect());
    if vertices.len() != n {
        return Err(Error::InvalidGraph(format!("n = {n} but {} vertices listed", vertices.len())));
    }
    Ok(vertices)
}

pub fn to_json(doc: &Document) -> String {
    let vlist = |v: &[VertexId]| (!is_range(v)).then(|| v.to_vec());
    let j = DocJson {
        hypergraph: doc.hypergraph.as_ref().map(|g| HyperJson {
            n: g.num_vertices(),
            m: g.num_edges(),
            vertices: vlist(g.vertices()),
            edges: g.edges().map(|(id, members)| HyperEdgeJson { id, members }).collect(),
        }),
        graph: doc.graph.as_ref().map(|g| GraphJson {
            n: g.num_vertices(),
            m: g.num_edges(),
            vertices: vlist(g.vertices()),
            edges: g.edges().map(|(id, u, v)| SimpleEdgeJson { id, u, v }).collect(),
        }),
        orientation: doc.orientation.clone(),
        matching: doc.matching.clone(),
        splitting: doc.splitting.clone(),
        coloring: doc.coloring.clone(),
    };
    serde_json::to_string(&j).expect("document serializes") + "\n"
}

pub fn parse_json(input: &str) -> Result<Document> {
    let mut doc = Document::default();
    for j in serde_json::Deserializer::from_str(input).into_iter::<DocJson>() {
        let j = j?;
        let mut part = Document::default();
        if let Some(h) = j.hypergraph {
            let vertices = check_counts(h.n, h.m, &h.vertices, h.edges.len())?;
            let edges = h.edges.into_iter().map(|e| (e.id, e.members)).collect();
            part.hypergraph = Some(MultiHypergraph::from_raw(RawHypergraph { vertices, edges })?);
        }
        if let Some(g) = j.graph {
            let vertices = check_counts(g.n, g.m, &g.vertices, g.edges.len())?;
            part.graph = Some(SimpleGraph::new(vertices, g.edges.into_iter().map(|e| (e.id, e.u, e.v)))?);
        }
        part.orientation = j.orientation;
        part.matching = j.matching;
        part.splitting = j.splitting;
        part.coloring = j.coloring;
        doc.absorb(part);
    }
    Ok(doc)
}

/// Text or JSON, told apart by the first non-blank character.
pub fn parse_document(input: &str) -> Result<Document> {
    if input.trim_start().starts_with('{') {
        parse_json(input)
    } else {
        parse_text(input)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str = "# two triangles\nh 4 3\ne 0 0 1 2\ne 1 1 2 3\ne 5 0 3\no 0 0\no 1 3\no 5 0\n";

    #[test]
    fn text_round_trip() {
        let doc = parse_text(SAMPLE).unwrap();
        assert_eq!(doc.hypergraph.as_ref().unwrap().num_edges(), 3);
        assert_eq!(doc.orientation.as_ref().unwrap().owner(1), Some(3));
        let out = to_text(&doc);
        assert_eq!(out, SAMPLE.split_once('\n').unwrap().1);
        assert_eq!(to_text(&parse_text(&out).unwrap()), out);
    }

    #[test]
    fn json_round_trip() {
        let doc = parse_text(SAMPLE).unwrap();
        let j = to_json(&doc);
        assert_eq!(parse_json(&j).unwrap(), doc);
        assert_eq!(parse_document(&j).unwrap(), doc);
    }

    #[test]
    fn explicit_vertex_list() {
        let text = "h 3 1\nv 2 5 9\ne 4 2 9\n";
        let doc = parse_text(text).unwrap();
        assert_eq!(doc.hypergraph.as_ref().unwrap().vertices(), &[2, 5, 9]);
        assert_eq!(to_text(&doc), text);
    }

    #[test]
    fn simple_graph_and_coloring() {
        let text = "g 3 2\ne 0 0 1\ne 1 1 2\nc 0 1\nc 1 2\n";
        let doc = parse_text(text).unwrap();
        assert_eq!(doc.coloring.as_ref().unwrap().color(1), Some(2));
        assert_eq!(to_text(&doc), text);
    }

    #[test]
    fn errors_carry_lines() {
        assert!(matches!(parse_text("h 2 1\ne 0 0 x\n"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(parse_text("h 2 2\ne 0 0 1\n"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(parse_text("q 1\n"), Err(Error::Parse { line: 1, .. })));
        assert!(parse_text("h 2 1\ne 0 0 7\n").is_err());
    }
}

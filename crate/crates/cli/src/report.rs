use std::collections::BTreeMap;
use std::time::Instant;

use hallkit::{CertReport, MultiHypergraph, SimpleGraph};
use serde::Serialize;
use serde_json::Value;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Default, Serialize)]
pub struct Instance {
    pub kind: &'static str,
    pub vertices: usize,
    pub edges: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub min_degree: Option<usize>,
    pub max_degree: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rank: Option<usize>,
}

impl Instance {
    pub fn hyper(g: &MultiHypergraph) -> Self {
        let p = g.profile();
        Instance {
            kind: "hypergraph",
            vertices: g.num_vertices(),
            edges: g.num_edges(),
            min_degree: Some(p.delta),
            max_degree: g.max_degree(),
            rank: Some(p.rank),
        }
    }

    pub fn simple(g: &SimpleGraph) -> Self {
        Instance {
            kind: "graph",
            vertices: g.num_vertices(),
            edges: g.num_edges(),
            min_degree: None,
            max_degree: g.max_degree(),
            rank: None,
        }
    }
}

/// Run report. Everything except `timings_ms` is a function of the inputs
/// and seeds.
#[derive(Debug, Serialize)]
pub struct Report {
    pub schema_version: u32,
    pub command: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub instance: Option<Instance>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub radius_bound: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub radius_used: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub palette: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub palette_bound: Option<u32>,
    pub certificates: BTreeMap<String, CertReport>,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub details: BTreeMap<String, Value>,
    pub timings_ms: BTreeMap<String, f64>,
    pub ok: bool,
}

impl Report {
    pub fn new(command: &'static str) -> Self {
        Report {
            schema_version: SCHEMA_VERSION,
            command,
            instance: None,
            radius_bound: None,
            radius_used: None,
            palette: None,
            palette_bound: None,
            certificates: BTreeMap::new(),
            details: BTreeMap::new(),
            timings_ms: BTreeMap::new(),
            ok: true,
        }
    }

    pub fn certify(&mut self, name: &str, rep: CertReport) {
        self.ok &= rep.certified();
        self.certificates.insert(name.to_string(), rep);
    }

    pub fn detail(&mut self, name: &str, value: impl Serialize) {
        self.details.insert(name.to_string(), serde_json::to_value(value).expect("report values serialize"));
    }

    pub fn time<T>(&mut self, name: &str, f: impl FnOnce() -> T) -> T {
        let t = Instant::now();
        let out = f();
        self.timings_ms.insert(name.to_string(), t.elapsed().as_secs_f64() * 1e3);
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn summary(&self) -> String {
        let mut s = format!("{}: {}", self.command, if self.ok { "ok" } else { "FAILED" });
        if let Some(i) = &self.instance {
            s += &format!(", {} vertices, {} edges, max degree {}", i.vertices, i.edges, i.max_degree);
        }
        if let Some(p) = self.palette {
            s += &format!(", {p} colors");
        }
        if let (Some(u), Some(b)) = (self.radius_used, self.radius_bound) {
            s += &format!(", radius {u} (bound {b})");
        }
        for (name, rep) in &self.certificates {
            s += &format!("\n  {name}: {rep}");
        }
        for (name, ms) in &self.timings_ms {
            s += &format!("\n  {name}: {ms:.1} ms");
        }
        s
    }
}

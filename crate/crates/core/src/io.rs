//! JSON graph documents and OFF/OBJ mesh export.
//!
//! A document looks like
//!
//! ```json
//! {
//!   "format_version": 1,
//!   "vertices": ["1", "2", "3"],
//!   "edges": [[0, 1], [1, 2], [0, 2]],
//!   "values": {"f": ["13/1", "15/2", 3]},
//!   "coordinates": [[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]]
//! }
//! ```
//!
//! `vertices` is a count or a list of labels. Values may be `"p/q"`
//! strings, decimal strings or JSON numbers; floats convert exactly.

use std::collections::{BTreeMap, HashSet};
use std::fmt::Write as _;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{SimplicialGraph, Vertex};
use crate::levelset::{orient_triangles, LevelSurfaceGraph};
use crate::rational::{self, Rational, VertexFunction};
use crate::topology::{self, Verdict};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Clone, Debug)]
pub struct GraphDocument {
    pub graph: SimplicialGraph,
    pub functions: BTreeMap<String, VertexFunction>,
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum RawVertices {
    Count(usize),
    Labels(Vec<String>),
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum RawValue {
    Text(String),
    Number(serde_json::Number),
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDocument {
    format_version: u32,
    vertices: RawVertices,
    edges: Vec<[u64; 2]>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    values: BTreeMap<String, Vec<RawValue>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    coordinates: Option<Vec<Vec<f64>>>,
}

impl GraphDocument {
    pub fn new(graph: SimplicialGraph) -> Self {
        GraphDocument { graph, functions: BTreeMap::new() }
    }

    pub fn with_function(mut self, name: impl Into<String>, f: VertexFunction) -> Self {
        self.functions.insert(name.into(), f);
        self
    }

    /// Looks up a named function.
    pub fn function(&self, name: &str) -> Result<&VertexFunction> {
        self.functions.get(name).ok_or_else(|| {
            let known: Vec<&str> = self.functions.keys().map(String::as_str).collect();
            Error::document("values", format!("no function named '{name}' (have: {})", known.join(", ")))
        })
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        std::fs::read_to_string(path)?.parse()
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_json() + "\n")?;
        Ok(())
    }

    /// Pretty JSON with sorted keys and rationals as `"p/q"`.
    pub fn to_json(&self) -> String {
        let g = &self.graph;
        let raw = RawDocument {
            format_version: FORMAT_VERSION,
            vertices: match g.labels() {
                Some(l) => RawVertices::Labels(l.to_vec()),
                None => RawVertices::Count(g.vertex_count()),
            },
            edges: g.edges().map(|(a, b)| [u64::from(a), u64::from(b)]).collect(),
            values: self
                .functions
                .iter()
                .map(|(k, f)| (k.clone(), f.values().iter().map(|q| RawValue::Text(rational::format(q))).collect()))
                .collect(),
            coordinates: g.coords().map(<[Vec<f64>]>::to_vec),
        };
        // Round-trip through Value so object keys come out sorted.
        let value = serde_json::to_value(&raw).expect("documents serialize");
        serde_json::to_string_pretty(&value).expect("values serialize")
    }
}

impl FromStr for GraphDocument {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let raw: RawDocument = serde_json::from_str(text)?;
        if raw.format_version != FORMAT_VERSION {
            return Err(Error::document(
                "format_version",
                format!("unsupported version {}, expected {FORMAT_VERSION}", raw.format_version),
            ));
        }
        let (n, labels) = match raw.vertices {
            RawVertices::Count(n) => (n, None),
            RawVertices::Labels(l) => (l.len(), Some(l)),
        };
        let mut seen = HashSet::new();
        let mut edges = Vec::with_capacity(raw.edges.len());
        for (i, [a, b]) in raw.edges.iter().copied().enumerate() {
            let field = format!("edges[{i}]");
            if a >= n as u64 || b >= n as u64 {
                return Err(Error::document(field, format!("vertex id out of range 0..{n}")));
            }
            if a == b {
                return Err(Error::document(field, "self-loop"));
            }
            if !seen.insert((a.min(b), a.max(b))) {
                return Err(Error::document(field, format!("duplicate edge ({a}, {b})")));
            }
            edges.push((a as Vertex, b as Vertex));
        }
        let mut graph = SimplicialGraph::from_edges(n, edges)?;
        if let Some(labels) = labels {
            graph = graph.with_labels(labels);
        }
        if let Some(coords) = raw.coordinates {
            if coords.len() != n {
                return Err(Error::document("coordinates", format!("{} points for {n} vertices", coords.len())));
            }
            graph = graph.with_coords(coords);
        }
        let mut functions = BTreeMap::new();
        for (name, values) in raw.values {
            if values.len() != n {
                return Err(Error::document(
                    format!("values.{name}"),
                    format!("{} values for {n} vertices", values.len()),
                ));
            }
            let parsed = values
                .iter()
                .enumerate()
                .map(|(i, v)| parse_value(v).map_err(|m| Error::document(format!("values.{name}[{i}]"), m)))
                .collect::<Result<Vec<_>>>()?;
            functions.insert(name, VertexFunction::new(parsed));
        }
        Ok(GraphDocument { graph, functions })
    }
}

fn parse_value(v: &RawValue) -> std::result::Result<Rational, String> {
    match v {
        RawValue::Text(s) => rational::parse(s).map_err(|e| e.to_string()),
        RawValue::Number(n) => {
            if let Some(i) = n.as_i64() {
                Ok(Rational::from_integer(i.into()))
            } else if let Some(u) = n.as_u64() {
                Ok(Rational::from_integer(u.into()))
            } else {
                n.as_f64().and_then(rational::from_f64).ok_or_else(|| format!("not a finite number: {n}"))
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MeshFormat {
    Off,
    Obj,
}

impl FromStr for MeshFormat {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "off" => Ok(MeshFormat::Off),
            "obj" => Ok(MeshFormat::Obj),
            _ => Err(Error::InvalidParameters(format!("unknown mesh format '{s}'"))),
        }
    }
}

/// Mesh text plus whether the triangle orientation is coherent.
#[derive(Clone, Debug, PartialEq)]
pub struct Mesh {
    pub text: String,
    pub vertices: usize,
    pub faces: usize,
    pub segments: usize,
    pub orientable: bool,
}

pub fn export_mesh(s: &LevelSurfaceGraph, format: MeshFormat, budget: u64) -> Result<Mesh> {
    export_graph_mesh(&s.graph, format, budget)
}

/// Triangles when `g` is 2-dimensional (it must verify as a 2-graph),
/// otherwise its edges as line segments. Points are padded or cut to three
/// coordinates.
pub fn export_graph_mesh(g: &SimplicialGraph, format: MeshFormat, budget: u64) -> Result<Mesh> {
    let n = g.vertex_count();
    let coords: Vec<Vec<f64>> = if n == 0 { Vec::new() } else { g.coords().ok_or(Error::MissingCoordinates)?.to_vec() };
    let (triangles, orientable) = if g.dimension().is_some_and(|d| d >= 2) {
        if topology::is_dgraph(g, 2, budget).verdict != Verdict::Yes {
            return Err(Error::NotASurface);
        }
        let mesh = orient_triangles(g);
        (mesh.triangles, mesh.orientable)
    } else {
        (Vec::new(), true)
    };
    let segments: Vec<(Vertex, Vertex)> = if triangles.is_empty() { g.edges().collect() } else { Vec::new() };
    let point = |p: &Vec<f64>| {
        let c = |i: usize| p.get(i).copied().unwrap_or(0.0);
        format!("{} {} {}", c(0), c(1), c(2))
    };
    let mut text = String::new();
    match format {
        MeshFormat::Off => {
            let faces = triangles.len() + segments.len();
            let _ = writeln!(text, "OFF\n{n} {faces} 0");
            for p in &coords {
                let _ = writeln!(text, "{}", point(p));
            }
            for [a, b, c] in &triangles {
                let _ = writeln!(text, "3 {a} {b} {c}");
            }
            for (a, b) in &segments {
                let _ = writeln!(text, "2 {a} {b}");
            }
        }
        MeshFormat::Obj => {
            for p in &coords {
                let _ = writeln!(text, "v {}", point(p));
            }
            for [a, b, c] in &triangles {
                let _ = writeln!(text, "f {} {} {}", a + 1, b + 1, c + 1);
            }
            for (a, b) in &segments {
                let _ = writeln!(text, "l {} {}", a + 1, b + 1);
            }
        }
    }
    Ok(Mesh { text, vertices: n, faces: triangles.len(), segments: segments.len(), orientable })
}

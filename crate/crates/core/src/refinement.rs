//! Barycentric refinement, the dimension coloring, and extension of vertex
//! functions to graphs whose vertices are simplices.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::graph::{Simplex, SimplicialGraph, Vertex};
use crate::par;
use crate::rational::{self, VertexFunction};

/// A graph whose vertices are simplices of a parent graph.
pub trait SimplexGraph {
    fn graph(&self) -> &SimplicialGraph;
    fn parent(&self) -> &SimplicialGraph;
    /// Parent simplex of every vertex.
    fn origin(&self) -> &[Simplex];
}

/// The barycentric refinement `G1` of a graph `G`.
#[derive(Clone, Debug)]
pub struct RefinedGraph {
    pub graph: SimplicialGraph,
    pub parent: SimplicialGraph,
    pub origin: Vec<Simplex>,
}

impl SimplexGraph for RefinedGraph {
    fn graph(&self) -> &SimplicialGraph {
        &self.graph
    }
    fn parent(&self) -> &SimplicialGraph {
        &self.parent
    }
    fn origin(&self) -> &[Simplex] {
        &self.origin
    }
}

/// One vertex per simplex of `g`, joined when one simplex strictly contains
/// the other. Centroids become coordinates when `g` has coordinates.
pub fn barycentric(g: &SimplicialGraph) -> RefinedGraph {
    let origin: Vec<Simplex> = g.cliques().iter().cloned().collect();
    let graph = containment_graph(g, &origin);
    RefinedGraph { graph, parent: g.clone(), origin }
}

/// Graph on a set of simplices of `parent` with strict-containment edges,
/// labelled by the parent labels and placed at centroids.
pub(crate) fn containment_graph(parent: &SimplicialGraph, simplices: &[Simplex]) -> SimplicialGraph {
    let index: HashMap<&Simplex, Vertex> = simplices.iter().enumerate().map(|(i, s)| (s, i as Vertex)).collect();
    // Each simplex links to its faces present in the set; the reverse links
    // are added when assembling the adjacency lists.
    let down: Vec<Vec<Vertex>> = par::map_slice(simplices, |s| {
        if s.len() == 1 {
            return Vec::new();
        }
        s.proper_faces().filter_map(|f| index.get(&f).copied()).collect()
    });
    let mut adj: Vec<Vec<Vertex>> = vec![Vec::new(); simplices.len()];
    for (i, faces) in down.iter().enumerate() {
        for &f in faces {
            adj[i].push(f);
            adj[f as usize].push(i as Vertex);
        }
    }
    for l in &mut adj {
        l.sort_unstable();
    }
    let mut graph = SimplicialGraph::from_adjacency(adj);
    graph = graph.with_labels(simplices.iter().map(|s| simplex_label(parent, s)).collect());
    if let Some(coords) = parent.coords() {
        graph = graph.with_coords(simplices.iter().map(|s| centroid(coords, s)).collect());
    }
    graph
}

pub fn simplex_label(parent: &SimplicialGraph, s: &Simplex) -> String {
    let parts: Vec<String> = s.vertices().iter().map(|&v| parent.label(v)).collect();
    format!("({})", parts.join(","))
}

fn centroid(coords: &[Vec<f64>], s: &Simplex) -> Vec<f64> {
    let dim = coords.first().map_or(0, Vec::len);
    let mut c = vec![0.0; dim];
    for &v in s.vertices() {
        for (a, b) in c.iter_mut().zip(&coords[v as usize]) {
            *a += b;
        }
    }
    let k = s.len() as f64;
    c.iter_mut().for_each(|a| *a /= k);
    c
}

/// Colors every vertex by the dimension of its parent simplex. Adjacent
/// vertices are strictly nested simplices, so the coloring is proper.
pub fn dimension_coloring<G: SimplexGraph + ?Sized>(r: &G) -> Vec<usize> {
    r.origin().iter().map(Simplex::dim).collect()
}

/// Number of distinct colors and whether every edge joins two colors.
pub fn coloring_summary(g: &SimplicialGraph, colors: &[usize]) -> (usize, bool) {
    let mut used: Vec<usize> = colors.to_vec();
    used.sort_unstable();
    used.dedup();
    let proper = g.edges().all(|(a, b)| colors[a as usize] != colors[b as usize]);
    (used.len(), proper)
}

/// Extends a parent function to a simplex graph: the value at a vertex is
/// the exact mean of `f` over its parent simplex.
pub fn extend_function<G: SimplexGraph + ?Sized>(f: &VertexFunction, r: &G) -> Result<VertexFunction> {
    extend_over(f, r.origin())
}

pub fn extend_over(f: &VertexFunction, origin: &[Simplex]) -> Result<VertexFunction> {
    origin
        .iter()
        .map(|s| {
            let vals = s.vertices().iter().map(|&v| f.get(v)).collect::<Result<Vec<_>>>()?;
            rational::mean(vals).ok_or(Error::MissingValue(0))
        })
        .collect::<Result<Vec<_>>>()
        .map(VertexFunction::new)
}

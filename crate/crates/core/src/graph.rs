//! Finite simple graphs together with their clique (Whitney) complexes.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, OnceLock};

use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::par;

pub type Vertex = u32;

/// A complete subgraph, stored as a strictly increasing vertex tuple.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Simplex(SmallVec<[Vertex; 5]>);

impl Simplex {
    /// Sorts and deduplicates; panics on an empty vertex list.
    pub fn new(verts: impl IntoIterator<Item = Vertex>) -> Self {
        let mut v: SmallVec<[Vertex; 5]> = verts.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        assert!(!v.is_empty(), "a simplex needs at least one vertex");
        Simplex(v)
    }

    pub(crate) fn from_sorted(v: SmallVec<[Vertex; 5]>) -> Self {
        debug_assert!(!v.is_empty() && v.windows(2).all(|w| w[0] < w[1]));
        Simplex(v)
    }

    pub fn vertex(v: Vertex) -> Self {
        Simplex(smallvec::smallvec![v])
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn dim(&self) -> usize {
        self.0.len() - 1
    }

    pub fn contains(&self, v: Vertex) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    pub fn is_face_of(&self, other: &Simplex) -> bool {
        self.len() <= other.len() && self.0.iter().all(|&v| other.contains(v))
    }

    /// All nonempty proper faces, by ascending bitmask over the vertex tuple.
    pub fn proper_faces(&self) -> impl Iterator<Item = Simplex> + '_ {
        let n = self.0.len();
        let full = (1u32 << n) - 1;
        (1..full).map(move |mask| Simplex((0..n).filter(|i| mask & (1 << i) != 0).map(|i| self.0[i]).collect()))
    }

    pub fn without(&self, v: Vertex) -> Option<Simplex> {
        let rest: SmallVec<[Vertex; 5]> = self.0.iter().copied().filter(|&u| u != v).collect();
        (!rest.is_empty()).then_some(Simplex(rest))
    }
}

impl fmt::Debug for Simplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl serde::Serialize for Simplex {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.0.iter())
    }
}

impl fmt::Display for Simplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, ")")
    }
}

/// The simplices of a graph grouped by dimension, each group in
/// lexicographic order.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CliqueComplex {
    by_dim: Vec<Vec<Simplex>>,
}

impl CliqueComplex {
    pub fn dim(&self) -> Option<usize> {
        self.by_dim.len().checked_sub(1)
    }

    pub fn of_dim(&self, k: usize) -> &[Simplex] {
        self.by_dim.get(k).map_or(&[], Vec::as_slice)
    }

    pub fn f_vector(&self) -> Vec<usize> {
        self.by_dim.iter().map(Vec::len).collect()
    }

    pub fn total(&self) -> usize {
        self.by_dim.iter().map(Vec::len).sum()
    }

    /// All simplices, dimension by dimension.
    pub fn iter(&self) -> impl Iterator<Item = &Simplex> {
        self.by_dim.iter().flatten()
    }

    pub fn euler_characteristic(&self) -> i64 {
        euler_from_f_vector(&self.f_vector())
    }

    /// Position of every simplex in [`CliqueComplex::iter`] order.
    pub fn index(&self) -> HashMap<&Simplex, usize> {
        self.iter().enumerate().map(|(i, s)| (s, i)).collect()
    }
}

pub fn euler_from_f_vector(f: &[usize]) -> i64 {
    f.iter().enumerate().map(|(k, &n)| if k % 2 == 0 { n as i64 } else { -(n as i64) }).sum()
}

struct Inner {
    adj: Vec<Vec<Vertex>>,
    labels: Option<Vec<String>>,
    coords: Option<Vec<Vec<f64>>>,
    cliques: OnceLock<CliqueComplex>,
}

/// A finite simple graph. Cheap to clone; immutable after construction.
#[derive(Clone)]
pub struct SimplicialGraph {
    inner: Arc<Inner>,
}

impl fmt::Debug for SimplicialGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SimplicialGraph")
            .field("vertices", &self.vertex_count())
            .field("edges", &self.edge_count())
            .finish()
    }
}

impl PartialEq for SimplicialGraph {
    fn eq(&self, other: &Self) -> bool {
        self.inner.adj == other.inner.adj
    }
}

impl Eq for SimplicialGraph {}

impl SimplicialGraph {
    pub fn empty() -> Self {
        Self::from_adjacency(Vec::new())
    }

    /// Graph on `0..n` from an edge list. Duplicate edges collapse.
    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (Vertex, Vertex)>) -> Result<Self> {
        let mut adj = vec![Vec::new(); n];
        for (a, b) in edges {
            if a as usize >= n {
                return Err(Error::VertexOutOfRange(a));
            }
            if b as usize >= n {
                return Err(Error::VertexOutOfRange(b));
            }
            if a == b {
                return Err(Error::SelfLoop(a));
            }
            adj[a as usize].push(b);
            adj[b as usize].push(a);
        }
        for list in &mut adj {
            list.sort_unstable();
            list.dedup();
        }
        Ok(Self::from_adjacency(adj))
    }

    /// Caller guarantees sorted, symmetric, loop-free neighbor lists.
    pub(crate) fn from_adjacency(adj: Vec<Vec<Vertex>>) -> Self {
        debug_assert!(adj.iter().enumerate().all(|(v, l)| {
            l.windows(2).all(|w| w[0] < w[1])
                && l.iter().all(|&u| u as usize != v && adj[u as usize].binary_search(&(v as Vertex)).is_ok())
        }));
        SimplicialGraph { inner: Arc::new(Inner { adj, labels: None, coords: None, cliques: OnceLock::new() }) }
    }

    fn rebuild(self, f: impl FnOnce(&mut Inner)) -> Self {
        let mut inner = match Arc::try_unwrap(self.inner) {
            Ok(inner) => inner,
            Err(shared) => Inner {
                adj: shared.adj.clone(),
                labels: shared.labels.clone(),
                coords: shared.coords.clone(),
                cliques: shared.cliques.clone(),
            },
        };
        f(&mut inner);
        SimplicialGraph { inner: Arc::new(inner) }
    }

    pub fn with_labels(self, labels: Vec<String>) -> Self {
        assert_eq!(labels.len(), self.vertex_count(), "one label per vertex");
        self.rebuild(|i| i.labels = Some(labels))
    }

    pub fn with_coords(self, coords: Vec<Vec<f64>>) -> Self {
        assert_eq!(coords.len(), self.vertex_count(), "one point per vertex");
        self.rebuild(|i| i.coords = Some(coords))
    }

    pub fn without_coords(self) -> Self {
        self.rebuild(|i| i.coords = None)
    }

    pub fn vertex_count(&self) -> usize {
        self.inner.adj.len()
    }

    pub fn is_empty(&self) -> bool {
        self.inner.adj.is_empty()
    }

    pub fn vertices(&self) -> impl Iterator<Item = Vertex> {
        0..self.vertex_count() as Vertex
    }

    pub fn edge_count(&self) -> usize {
        self.inner.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    /// Edges `(a, b)` with `a < b`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (Vertex, Vertex)> + '_ {
        self.inner.adj.iter().enumerate().flat_map(|(a, list)| {
            let a = a as Vertex;
            list.iter().copied().filter(move |&b| b > a).map(move |b| (a, b))
        })
    }

    pub fn neighbors(&self, v: Vertex) -> &[Vertex] {
        &self.inner.adj[v as usize]
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.inner.adj[v as usize].len()
    }

    pub fn is_adjacent(&self, a: Vertex, b: Vertex) -> bool {
        self.inner.adj[a as usize].binary_search(&b).is_ok()
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.inner.labels.as_deref()
    }

    pub fn label(&self, v: Vertex) -> String {
        match &self.inner.labels {
            Some(l) => l[v as usize].clone(),
            None => v.to_string(),
        }
    }

    pub fn coords(&self) -> Option<&[Vec<f64>]> {
        self.inner.coords.as_deref()
    }

    pub fn check_vertex(&self, v: Vertex) -> Result<()> {
        if (v as usize) < self.vertex_count() {
            Ok(())
        } else {
            Err(Error::VertexOutOfRange(v))
        }
    }

    /// The full clique complex, enumerated once and cached.
    pub fn cliques(&self) -> &CliqueComplex {
        self.inner.cliques.get_or_init(|| enumerate_cliques(&self.inner.adj, None))
    }

    /// Clique complex truncated at `max_dim`; `None` means every dimension.
    /// Uses the cache when the full complex has already been built.
    pub fn clique_complex(&self, max_dim: Option<usize>) -> CliqueComplex {
        match (max_dim, self.inner.cliques.get()) {
            (None, _) => self.cliques().clone(),
            (Some(k), Some(full)) => CliqueComplex { by_dim: full.by_dim.iter().take(k + 1).cloned().collect() },
            (Some(k), None) => enumerate_cliques(&self.inner.adj, Some(k)),
        }
    }

    pub fn f_vector(&self) -> Vec<usize> {
        self.cliques().f_vector()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.cliques().euler_characteristic()
    }

    /// Largest clique dimension; `None` for the empty graph.
    pub fn dimension(&self) -> Option<usize> {
        self.cliques().dim()
    }

    /// Induced subgraph on `verts` (any order, no duplicates). Vertex `i` of
    /// the result corresponds to `verts[i]`.
    pub fn induced(&self, verts: &[Vertex]) -> Subgraph {
        let mut local: HashMap<Vertex, Vertex> = HashMap::with_capacity(verts.len());
        for (i, &v) in verts.iter().enumerate() {
            local.insert(v, i as Vertex);
        }
        let adj = verts
            .iter()
            .map(|&v| {
                let mut l: Vec<Vertex> = self.neighbors(v).iter().filter_map(|u| local.get(u).copied()).collect();
                l.sort_unstable();
                l
            })
            .collect();
        let mut graph = SimplicialGraph::from_adjacency(adj);
        if let Some(labels) = self.labels() {
            graph = graph.with_labels(verts.iter().map(|&v| labels[v as usize].clone()).collect());
        }
        if let Some(coords) = self.coords() {
            graph = graph.with_coords(verts.iter().map(|&v| coords[v as usize].clone()).collect());
        }
        Subgraph { graph, parent_ids: verts.to_vec() }
    }

    /// Induced subgraph without labels or coordinates.
    pub(crate) fn induced_plain(&self, verts: &[Vertex]) -> SimplicialGraph {
        let mut local: HashMap<Vertex, Vertex> = HashMap::with_capacity(verts.len());
        for (i, &v) in verts.iter().enumerate() {
            local.insert(v, i as Vertex);
        }
        let adj = verts
            .iter()
            .map(|&v| {
                let mut l: Vec<Vertex> = self.neighbors(v).iter().filter_map(|u| local.get(u).copied()).collect();
                l.sort_unstable();
                l
            })
            .collect();
        SimplicialGraph::from_adjacency(adj)
    }

    /// The unit sphere `S(x)`: the graph induced on the neighbors of `x`.
    pub fn unit_sphere(&self, x: Vertex) -> Subgraph {
        self.induced(self.neighbors(x))
    }

    /// The unit ball `B(x)`: `x` together with its neighbors, `x` first.
    pub fn unit_ball(&self, x: Vertex) -> Subgraph {
        let mut verts = Vec::with_capacity(self.degree(x) + 1);
        verts.push(x);
        verts.extend_from_slice(self.neighbors(x));
        self.induced(&verts)
    }

    /// Removes one vertex.
    pub fn without_vertex(&self, x: Vertex) -> Subgraph {
        let rest: Vec<Vertex> = self.vertices().filter(|&v| v != x).collect();
        self.induced(&rest)
    }

    /// Disjoint union plus every edge between the two vertex sets. Vertices
    /// of `b` are shifted by `a.vertex_count()`.
    pub fn join(a: &SimplicialGraph, b: &SimplicialGraph) -> SimplicialGraph {
        Self::combine(a, b, true)
    }

    pub fn disjoint_union(a: &SimplicialGraph, b: &SimplicialGraph) -> SimplicialGraph {
        Self::combine(a, b, false)
    }

    fn combine(a: &SimplicialGraph, b: &SimplicialGraph, connect: bool) -> SimplicialGraph {
        let na = a.vertex_count() as Vertex;
        let nb = b.vertex_count() as Vertex;
        let mut adj = Vec::with_capacity((na + nb) as usize);
        for v in a.vertices() {
            let mut l = a.neighbors(v).to_vec();
            if connect {
                l.extend(na..na + nb);
            }
            adj.push(l);
        }
        for v in b.vertices() {
            let mut l: Vec<Vertex> = if connect { (0..na).collect() } else { Vec::new() };
            l.extend(b.neighbors(v).iter().map(|&u| u + na));
            adj.push(l);
        }
        let mut g = SimplicialGraph::from_adjacency(adj);
        if a.labels().is_some() || b.labels().is_some() {
            let labels = a.vertices().map(|v| a.label(v)).chain(b.vertices().map(|v| b.label(v)));
            g = g.with_labels(labels.collect());
        }
        g
    }

    /// Whether every pair of vertices in `verts` is adjacent.
    pub fn is_clique(&self, verts: &[Vertex]) -> bool {
        verts.iter().enumerate().all(|(i, &a)| verts[i + 1..].iter().all(|&b| self.is_adjacent(a, b)))
    }
}

/// An induced subgraph with the map back to the parent's vertex ids.
#[derive(Clone, Debug)]
pub struct Subgraph {
    pub graph: SimplicialGraph,
    pub parent_ids: Vec<Vertex>,
}

/// Incremental extension: each clique grows only by common neighbors larger
/// than its last vertex, so every clique is produced exactly once.
fn enumerate_cliques(adj: &[Vec<Vertex>], max_dim: Option<usize>) -> CliqueComplex {
    let max_len = max_dim.map_or(usize::MAX, |d| d + 1);
    let per_root: Vec<Vec<Simplex>> = par::map_range(adj.len(), |root| {
        let mut out = Vec::new();
        let root = root as Vertex;
        let candidates: Vec<Vertex> = adj[root as usize].iter().copied().filter(|&u| u > root).collect();
        let mut current: SmallVec<[Vertex; 5]> = smallvec::smallvec![root];
        extend(adj, &mut current, &candidates, max_len, &mut out);
        out
    });
    let mut by_dim: Vec<Vec<Simplex>> = Vec::new();
    for s in per_root.into_iter().flatten() {
        let k = s.dim();
        if by_dim.len() <= k {
            by_dim.resize_with(k + 1, Vec::new);
        }
        by_dim[k].push(s);
    }
    for group in &mut by_dim {
        group.sort_unstable();
    }
    CliqueComplex { by_dim }
}

fn extend(
    adj: &[Vec<Vertex>],
    current: &mut SmallVec<[Vertex; 5]>,
    candidates: &[Vertex],
    max_len: usize,
    out: &mut Vec<Simplex>,
) {
    out.push(Simplex::from_sorted(current.clone()));
    if current.len() >= max_len {
        return;
    }
    for (i, &v) in candidates.iter().enumerate() {
        let next: Vec<Vertex> =
            candidates[i + 1..].iter().copied().filter(|u| adj[v as usize].binary_search(u).is_ok()).collect();
        current.push(v);
        extend(adj, current, &next, max_len, out);
        current.pop();
    }
}

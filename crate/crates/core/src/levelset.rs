//! Level hypersurfaces `{f = c}` and simultaneous loci `{F = c}`.
//!
//! The vertices of `{f = c}` are the simplices of the parent graph on which
//! `f - c` takes both signs; two of them are adjacent when one contains the
//! other. The simultaneous locus of `k` functions keeps the simplices of
//! dimension at least `k` on which every `f_i - c_i` takes both signs.

use std::collections::HashMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{Simplex, SimplicialGraph, Vertex};
use crate::rational::{self, Rational, VertexFunction};
use crate::refinement::{containment_graph, SimplexGraph};
use crate::topology::{self, Verdict};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LocusKind {
    Single,
    Simultaneous(usize),
}

#[derive(Clone, Debug)]
pub struct LevelSurfaceGraph {
    pub graph: SimplicialGraph,
    pub parent: SimplicialGraph,
    pub origin: Vec<Simplex>,
    pub level: Vec<Rational>,
    pub kind: LocusKind,
    /// The constraint functions on the parent's vertices.
    pub functions: Vec<VertexFunction>,
}

impl SimplexGraph for LevelSurfaceGraph {
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

impl LevelSurfaceGraph {
    pub fn is_empty(&self) -> bool {
        self.graph.is_empty()
    }

    /// Sorted component sizes; for a 1-graph these are the cycle lengths.
    pub fn component_sizes(&self) -> Vec<usize> {
        let mut sizes: Vec<usize> = topology::components(&self.graph).iter().map(Vec::len).collect();
        sizes.sort_unstable();
        sizes
    }
}

/// Whether `f - c` takes both signs on `s`.
pub fn changes_sign(f: &VertexFunction, c: &Rational, s: &Simplex) -> bool {
    let mut below = false;
    let mut above = false;
    for &v in s.vertices() {
        match f.value(v).cmp(c) {
            std::cmp::Ordering::Less => below = true,
            std::cmp::Ordering::Greater => above = true,
            std::cmp::Ordering::Equal => {}
        }
    }
    below && above
}

fn check_level(g: &SimplicialGraph, f: &VertexFunction, c: &Rational) -> Result<()> {
    if f.len() < g.vertex_count() {
        return Err(Error::MissingValue(f.len() as Vertex));
    }
    match f.values()[..g.vertex_count()].iter().position(|v| v == c) {
        Some(v) => Err(Error::LevelHitsVertex { vertex: v as Vertex, level: c.clone() }),
        None => Ok(()),
    }
}

/// The level surface `{f = c}`; `c` must not be a value of `f`.
pub fn level_surface(g: &SimplicialGraph, f: &VertexFunction, c: &Rational) -> Result<LevelSurfaceGraph> {
    check_level(g, f, c)?;
    let origin: Vec<Simplex> = g.cliques().iter().filter(|s| s.len() >= 2 && changes_sign(f, c, s)).cloned().collect();
    Ok(assemble(g, origin, vec![c.clone()], LocusKind::Single, vec![f.clone()]))
}

/// The simultaneous locus of `k = fs.len()` constraints.
pub fn simultaneous_locus(g: &SimplicialGraph, fs: &[VertexFunction], cs: &[Rational]) -> Result<LevelSurfaceGraph> {
    assert_eq!(fs.len(), cs.len(), "one level per function");
    let k = fs.len();
    let dim = g.dimension().unwrap_or(0);
    if k == 0 || k > dim {
        return Err(Error::DimensionExceeded { constraints: k, dim });
    }
    for (f, c) in fs.iter().zip(cs) {
        check_level(g, f, c)?;
    }
    let origin: Vec<Simplex> = g
        .cliques()
        .iter()
        .filter(|s| s.dim() >= k && fs.iter().zip(cs).all(|(f, c)| changes_sign(f, c, s)))
        .cloned()
        .collect();
    let kind = if k == 1 { LocusKind::Single } else { LocusKind::Simultaneous(k) };
    Ok(assemble(g, origin, cs.to_vec(), kind, fs.to_vec()))
}

fn assemble(
    g: &SimplicialGraph,
    origin: Vec<Simplex>,
    level: Vec<Rational>,
    kind: LocusKind,
    functions: Vec<VertexFunction>,
) -> LevelSurfaceGraph {
    let graph = containment_graph(&g.clone().without_coords(), &origin);
    let mut s = LevelSurfaceGraph { graph, parent: g.clone(), origin, level, kind, functions };
    if let Ok(coords) = interpolate_coordinates(&s) {
        s.graph = s.graph.clone().with_coords(coords);
    }
    s
}

/// Embedding of a locus vertex: the crossing point on an edge, or the
/// centroid of the crossing points of the sign-changing edges of a larger
/// simplex (over all constraints).
pub fn interpolate_coordinates(s: &LevelSurfaceGraph) -> Result<Vec<Vec<f64>>> {
    let coords = s.parent.coords().ok_or(Error::MissingCoordinates)?;
    let dim = coords.first().map_or(0, Vec::len);
    let mut cache: HashMap<(Vertex, Vertex, usize), Vec<f64>> = HashMap::new();
    let mut out = Vec::with_capacity(s.origin.len());
    for simplex in &s.origin {
        let verts = simplex.vertices();
        let mut sum = vec![0.0; dim];
        let mut count = 0usize;
        for (i, (f, c)) in s.functions.iter().zip(&s.level).enumerate() {
            for (ai, &a) in verts.iter().enumerate() {
                for &b in &verts[ai + 1..] {
                    let fa = f.value(a);
                    let fb = f.value(b);
                    if (fa < c) == (fb < c) {
                        continue;
                    }
                    let p = cache.entry((a, b, i)).or_insert_with(|| {
                        let t = rational::to_f64(&((c - fa) / (fb - fa)));
                        coords[a as usize].iter().zip(&coords[b as usize]).map(|(x, y)| x + t * (y - x)).collect()
                    });
                    sum.iter_mut().zip(p.iter()).for_each(|(s, x)| *s += x);
                    count += 1;
                }
            }
        }
        if count > 0 {
            sum.iter_mut().for_each(|x| *x /= count as f64);
        }
        out.push(sum);
    }
    Ok(out)
}

/// Triangles of a 2-dimensional locus with a best-effort coherent
/// orientation.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SurfaceMesh {
    pub triangles: Vec<[Vertex; 3]>,
    pub orientable: bool,
}

/// All 3-cliques of a locus that verifies as a 2-graph, oriented
/// consistently across shared edges when possible.
pub fn surface_triangles(s: &LevelSurfaceGraph, budget: u64) -> Result<SurfaceMesh> {
    if topology::is_dgraph(&s.graph, 2, budget).verdict != Verdict::Yes {
        return Err(Error::NotASurface);
    }
    Ok(orient_triangles(&s.graph))
}

pub(crate) fn orient_triangles(g: &SimplicialGraph) -> SurfaceMesh {
    let mut tris: Vec<[Vertex; 3]> = g
        .cliques()
        .of_dim(2)
        .iter()
        .map(|t| {
            let v = t.vertices();
            [v[0], v[1], v[2]]
        })
        .collect();
    let mut by_edge: HashMap<(Vertex, Vertex), Vec<usize>> = HashMap::new();
    for (i, t) in tris.iter().enumerate() {
        for (a, b) in [(t[0], t[1]), (t[1], t[2]), (t[0], t[2])] {
            by_edge.entry((a.min(b), a.max(b))).or_default().push(i);
        }
    }
    let has_directed = |t: &[Vertex; 3], a: Vertex, b: Vertex| (0..3).any(|i| t[i] == a && t[(i + 1) % 3] == b);
    let mut oriented = vec![false; tris.len()];
    let mut component = vec![usize::MAX; tris.len()];
    let mut orientable = true;
    let mut n_components = 0;
    for start in 0..tris.len() {
        if oriented[start] {
            continue;
        }
        oriented[start] = true;
        component[start] = n_components;
        let mut stack = vec![start];
        while let Some(i) = stack.pop() {
            let t = tris[i];
            for k in 0..3 {
                let (a, b) = (t[k], t[(k + 1) % 3]);
                for &j in &by_edge[&(a.min(b), a.max(b))] {
                    if j == i {
                        continue;
                    }
                    if !oriented[j] {
                        if has_directed(&tris[j], a, b) {
                            tris[j].swap(1, 2);
                        }
                        oriented[j] = true;
                        component[j] = n_components;
                        stack.push(j);
                    } else if has_directed(&tris[j], a, b) {
                        orientable = false;
                    }
                }
            }
        }
        n_components += 1;
    }
    // Point closed components outward when coordinates allow it.
    if let Some(coords) = g.coords().filter(|c| c.first().is_some_and(|p| p.len() == 3)) {
        let mut volume = vec![0.0; n_components];
        for (i, t) in tris.iter().enumerate() {
            let [a, b, c] = t.map(|v| &coords[v as usize]);
            volume[component[i]] += a[0] * (b[1] * c[2] - b[2] * c[1]) - a[1] * (b[0] * c[2] - b[2] * c[0])
                + a[2] * (b[0] * c[1] - b[1] * c[0]);
        }
        for (i, t) in tris.iter_mut().enumerate() {
            if volume[component[i]] < 0.0 {
                t.swap(1, 2);
            }
        }
    }
    SurfaceMesh { triangles: tris, orientable }
}

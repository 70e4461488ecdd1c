//! Standard graphs: cycles, wheels, cross-polytopes, the icosahedron, Kuhn
//! grids and random 2-spheres.

use std::collections::BTreeSet;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::{SimplicialGraph, Vertex};

/// A named catalog entry, as accepted by the command line (`cycle:12`,
/// `wheel:7`, `cross-polytope:3`, `icosahedron`, `kuhn:4x4:periodic`,
/// `random-sphere:SEED:REFINEMENTS`, `octahedron`, `octahedron-polar`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CatalogGraph {
    Cycle(usize),
    Wheel(usize),
    CrossPolytope(usize),
    Icosahedron,
    KuhnGrid { shape: Vec<usize>, periodic: bool },
    RandomSphere { seed: u64, refinements: usize },
    OctahedronMirrored,
    OctahedronPolar,
}

impl CatalogGraph {
    pub fn build(&self) -> Result<SimplicialGraph> {
        match self {
            CatalogGraph::Cycle(n) => cycle(*n),
            CatalogGraph::Wheel(n) => wheel(*n),
            CatalogGraph::CrossPolytope(d) => cross_polytope(*d),
            CatalogGraph::Icosahedron => Ok(icosahedron()),
            CatalogGraph::KuhnGrid { shape, periodic } => kuhn_grid(shape, *periodic),
            CatalogGraph::RandomSphere { seed, refinements } => Ok(random_sphere(*seed, *refinements)),
            CatalogGraph::OctahedronMirrored => Ok(octahedron_mirrored()),
            CatalogGraph::OctahedronPolar => Ok(octahedron_polar()),
        }
    }
}

impl FromStr for CatalogGraph {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        let bad = || Error::InvalidParameters(format!("unknown catalog graph {s:?}"));
        let num = |i: usize| -> Result<usize> { parts.get(i).and_then(|p| p.parse().ok()).ok_or_else(bad) };
        Ok(match parts[0] {
            "cycle" => CatalogGraph::Cycle(num(1)?),
            "wheel" => CatalogGraph::Wheel(num(1)?),
            "cross-polytope" => CatalogGraph::CrossPolytope(num(1)?),
            "icosahedron" => CatalogGraph::Icosahedron,
            "octahedron" => CatalogGraph::OctahedronMirrored,
            "octahedron-polar" => CatalogGraph::OctahedronPolar,
            "kuhn" => {
                let shape = parts
                    .get(1)
                    .ok_or_else(bad)?
                    .split('x')
                    .map(|p| p.parse().map_err(|_| bad()))
                    .collect::<Result<Vec<usize>>>()?;
                let periodic = match parts.get(2) {
                    None => false,
                    Some(&"periodic") => true,
                    Some(_) => return Err(bad()),
                };
                CatalogGraph::KuhnGrid { shape, periodic }
            }
            "random-sphere" => CatalogGraph::RandomSphere { seed: num(1)? as u64, refinements: num(2)? },
            _ => return Err(bad()),
        })
    }
}

pub fn cycle(n: usize) -> Result<SimplicialGraph> {
    if n < 4 {
        return Err(Error::InvalidParameters(format!("cycle needs n >= 4, got {n}")));
    }
    let g = cycle_unchecked(n);
    let coords = (0..n)
        .map(|i| {
            let t = std::f64::consts::TAU * i as f64 / n as f64;
            vec![t.cos(), t.sin(), 0.0]
        })
        .collect();
    Ok(g.with_coords(coords))
}

/// Any cycle length, including the triangle; used for counterexamples.
pub(crate) fn cycle_unchecked(n: usize) -> SimplicialGraph {
    let n32 = n as Vertex;
    SimplicialGraph::from_edges(n, (0..n32).map(|i| (i, (i + 1) % n32))).expect("valid cycle")
}

/// Wheel with `n` vertices in total: hub `0` and rim cycle `1..n`.
pub fn wheel(n: usize) -> Result<SimplicialGraph> {
    if n < 5 {
        return Err(Error::InvalidParameters(format!("wheel needs n >= 5, got {n}")));
    }
    let rim = (n - 1) as Vertex;
    let edges = (1..=rim).flat_map(|i| [(0, i), (i, i % rim + 1)]);
    let g = SimplicialGraph::from_edges(n, edges)?;
    let mut coords = vec![vec![0.0, 0.0, 0.0]];
    for i in 0..rim {
        let t = std::f64::consts::TAU * i as f64 / rim as f64;
        coords.push(vec![t.cos(), t.sin(), 0.0]);
    }
    Ok(g.with_coords(coords))
}

/// The `d`-dimensional cross-polytope: `2(d + 1)` vertices, vertex `i`
/// opposite to `i ^ 1`. `d = 2` is the octahedron, `d = 3` the 16-cell.
pub fn cross_polytope(d: usize) -> Result<SimplicialGraph> {
    let n = 2 * (d + 1);
    if n > 64 {
        return Err(Error::InvalidParameters(format!("cross-polytope dimension {d} too large")));
    }
    let n32 = n as Vertex;
    let edges = (0..n32).flat_map(|a| ((a + 1)..n32).filter(move |&b| b != a ^ 1).map(move |b| (a, b)));
    let g = SimplicialGraph::from_edges(n, edges)?;
    let coords = (0..n)
        .map(|i| {
            let mut p = vec![0.0; d + 1];
            p[i / 2] = if i % 2 == 0 { 1.0 } else { -1.0 };
            p
        })
        .collect();
    Ok(g.with_coords(coords))
}

/// Octahedron labelled `1..6` with antipodal pairs `(1,6), (2,5), (3,4)`.
pub fn octahedron_mirrored() -> SimplicialGraph {
    let anti = |v: Vertex| 5 - v;
    let edges = (0..6).flat_map(|a| ((a + 1)..6).filter(move |&b| b != anti(a)).map(move |b| (a, b)));
    let coords = vec![
        vec![1.0, 0.0, 0.0],
        vec![0.0, 1.0, 0.0],
        vec![0.0, 0.0, 1.0],
        vec![0.0, 0.0, -1.0],
        vec![0.0, -1.0, 0.0],
        vec![-1.0, 0.0, 0.0],
    ];
    SimplicialGraph::from_edges(6, edges)
        .expect("valid octahedron")
        .with_labels((1..=6).map(|i| i.to_string()).collect())
        .with_coords(coords)
}

/// Octahedron labelled `1..6` with equator `1-2-3-4`, north pole `5` and
/// south pole `6`.
pub fn octahedron_polar() -> SimplicialGraph {
    let anti = |v: Vertex| match v {
        0 => 2,
        1 => 3,
        2 => 0,
        3 => 1,
        4 => 5,
        _ => 4,
    };
    let edges = (0..6).flat_map(move |a| ((a + 1)..6).filter(move |&b| b != anti(a)).map(move |b| (a, b)));
    let coords = vec![
        vec![1.0, 0.0, 0.0],
        vec![0.0, 1.0, 0.0],
        vec![-1.0, 0.0, 0.0],
        vec![0.0, -1.0, 0.0],
        vec![0.0, 0.0, 1.0],
        vec![0.0, 0.0, -1.0],
    ];
    SimplicialGraph::from_edges(6, edges)
        .expect("valid octahedron")
        .with_labels((1..=6).map(|i| i.to_string()).collect())
        .with_coords(coords)
}

/// Icosahedron: vertex 0 on top, upper ring 1..=5, lower ring 6..=10,
/// vertex 11 at the bottom.
pub fn icosahedron() -> SimplicialGraph {
    let mut edges = Vec::with_capacity(30);
    for i in 0..5 {
        let u = 1 + i;
        let u_next = 1 + (i + 1) % 5;
        let l = 6 + i;
        let l_next = 6 + (i + 1) % 5;
        let l_prev = 6 + (i + 4) % 5;
        edges.extend([(0, u), (u, u_next), (l, l_next), (l, 11), (u, l), (u, l_prev)]);
    }
    let mut coords = vec![vec![0.0, 0.0, 1.0]];
    let z = 1.0 / 5f64.sqrt();
    let r = 2.0 * z;
    for ring in 0..2 {
        for i in 0..5 {
            let t = std::f64::consts::TAU * (i as f64 + 0.5 * ring as f64) / 5.0;
            let h = if ring == 0 { z } else { -z };
            coords.push(vec![r * t.cos(), r * t.sin(), h]);
        }
    }
    coords.push(vec![0.0, 0.0, -1.0]);
    SimplicialGraph::from_edges(12, edges).expect("valid icosahedron").with_coords(coords)
}

/// Freudenthal/Kuhn staircase triangulation of a grid with `shape[i]`
/// points along axis `i`. Two grid points are adjacent when their
/// difference is a nonzero 0/1 vector or its negative. With `periodic`
/// every axis wraps around (and needs at least 4 points).
pub fn kuhn_grid(shape: &[usize], periodic: bool) -> Result<SimplicialGraph> {
    let d = shape.len();
    if d == 0 || d > 8 {
        return Err(Error::InvalidParameters(format!("grid dimension {d} out of range 1..=8")));
    }
    if shape.iter().any(|&s| s == 0) {
        return Err(Error::InvalidParameters("grid axis with no points".into()));
    }
    if periodic && shape.iter().any(|&s| s < 4) {
        return Err(Error::InvalidParameters("periodic grid axes need at least 4 points".into()));
    }
    let n: usize = shape.iter().product();
    let strides: Vec<usize> = (0..d).map(|i| shape[..i].iter().product()).collect();
    let point = |mut id: usize| -> Vec<usize> {
        shape
            .iter()
            .map(|&s| {
                let c = id % s;
                id /= s;
                c
            })
            .collect()
    };
    let mut edges = Vec::new();
    for v in 0..n {
        let p = point(v);
        'subsets: for mask in 1u32..(1 << d) {
            let mut w = 0usize;
            for axis in 0..d {
                let mut c = p[axis];
                if mask & (1 << axis) != 0 {
                    c += 1;
                    if c == shape[axis] {
                        if periodic {
                            c = 0;
                        } else {
                            continue 'subsets;
                        }
                    }
                }
                w += c * strides[axis];
            }
            edges.push((v as Vertex, w as Vertex));
        }
    }
    let g = SimplicialGraph::from_edges(n, edges)?;
    let coords = (0..n).map(|v| point(v).into_iter().map(|c| c as f64).collect()).collect();
    Ok(g.with_coords(coords))
}

/// Grid point of a Kuhn grid vertex.
pub fn kuhn_point(shape: &[usize], mut id: usize) -> Vec<usize> {
    shape
        .iter()
        .map(|&s| {
            let c = id % s;
            id /= s;
            c
        })
        .collect()
}

/// Icosahedron followed by `refinements` random edge subdivisions. Each
/// subdivision replaces an edge `(a, b)` by a new vertex joined to `a`, `b`
/// and their two common neighbors.
pub fn random_sphere(seed: u64, refinements: usize) -> SimplicialGraph {
    let base = icosahedron();
    let mut adj: Vec<BTreeSet<Vertex>> = base.vertices().map(|v| base.neighbors(v).iter().copied().collect()).collect();
    let mut coords: Vec<Vec<f64>> = base.coords().expect("icosahedron has coordinates").to_vec();
    let mut edges: Vec<(Vertex, Vertex)> = base.edges().collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..refinements {
        let idx = rng.gen_range(0..edges.len());
        let (a, b) = edges.swap_remove(idx);
        let common: Vec<Vertex> = adj[a as usize].intersection(&adj[b as usize]).copied().collect();
        debug_assert_eq!(common.len(), 2, "edge subdivision needs a 2-graph");
        let w = adj.len() as Vertex;
        adj[a as usize].remove(&b);
        adj[b as usize].remove(&a);
        let mut nbrs = BTreeSet::new();
        for &u in [a, b].iter().chain(common.iter()) {
            adj[u as usize].insert(w);
            nbrs.insert(u);
            edges.push((u.min(w), u.max(w)));
        }
        adj.push(nbrs);
        let mid: Vec<f64> = coords[a as usize].iter().zip(&coords[b as usize]).map(|(x, y)| 0.5 * (x + y)).collect();
        let norm = mid.iter().map(|x| x * x).sum::<f64>().sqrt();
        coords.push(mid.iter().map(|x| x / norm).collect());
    }
    let adj = adj.into_iter().map(|s| s.into_iter().collect()).collect();
    SimplicialGraph::from_adjacency(adj).with_coords(coords)
}

/// The 0-sphere: two isolated vertices.
pub fn zero_sphere() -> SimplicialGraph {
    SimplicialGraph::from_edges(2, []).expect("two points")
}

/// Join with the 0-sphere.
pub fn suspension(g: &SimplicialGraph) -> SimplicialGraph {
    SimplicialGraph::join(&zero_sphere(), g)
}

pub fn complete(n: usize) -> SimplicialGraph {
    let n32 = n as Vertex;
    SimplicialGraph::from_edges(n, (0..n32).flat_map(|a| ((a + 1)..n32).map(move |b| (a, b))))
        .expect("valid complete graph")
}

pub fn path(n: usize) -> SimplicialGraph {
    let n32 = n as Vertex;
    SimplicialGraph::from_edges(n, (1..n32).map(|i| (i - 1, i))).expect("valid path")
}

/// `K_{1,k}` with center 0.
pub fn star(k: usize) -> SimplicialGraph {
    SimplicialGraph::from_edges(k + 1, (1..=k as Vertex).map(|i| (0, i))).expect("valid star")
}

pub fn point() -> SimplicialGraph {
    SimplicialGraph::from_edges(1, []).expect("one point")
}

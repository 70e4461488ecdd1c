//! Poincaré-Hopf indices, curvature and central surfaces.
//!
//! For a locally injective function `f`, the index at `x` is
//! `i_f(x) = 1 - χ(S⁻(x))` where `S⁻(x)` is the part of the unit sphere on
//! which `f` is smaller than `f(x)`. The symmetric index averages `f` and
//! `-f`. Its expectation over random orderings is the curvature
//! `K(x) = 1 - S0/2 + S1/3 - ...` built from the clique counts of `S(x)`.

use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{SimplicialGraph, Vertex};
use crate::levelset::{self, LevelSurfaceGraph};
use crate::par;
use crate::rational::{self, Rational, VertexFunction};
use crate::topology::{self, Verdict, DEFAULT_BUDGET};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Classification {
    LocalMin,
    LocalMax,
    Saddle,
    Regular,
    Unclassified,
}

#[derive(Clone, Debug)]
pub struct IndexReport {
    pub vertex: Vertex,
    /// `{y in S(x) : f(y) < f(x)}` with ids local to the unit sphere.
    pub s_minus: SimplicialGraph,
    pub index: i64,
    pub symmetric: Rational,
    pub classification: Classification,
}

/// Fails on the first edge along which `f` is constant.
pub fn check_locally_injective(g: &SimplicialGraph, f: &VertexFunction) -> Result<()> {
    if f.len() < g.vertex_count() {
        return Err(Error::MissingValue(f.len() as Vertex));
    }
    match g.edges().find(|&(a, b)| f.value(a) == f.value(b)) {
        Some((a, b)) => Err(Error::NotLocallyInjective(a, b)),
        None => Ok(()),
    }
}

/// Dimension of `g` at `x`, read off the unit sphere.
fn local_dimension(sphere: &SimplicialGraph) -> i64 {
    sphere.dimension().map_or(0, |d| d as i64 + 1)
}

pub fn ph_index(g: &SimplicialGraph, f: &VertexFunction, x: Vertex) -> Result<IndexReport> {
    ph_index_with_budget(g, f, x, DEFAULT_BUDGET)
}

pub fn ph_index_with_budget(g: &SimplicialGraph, f: &VertexFunction, x: Vertex, budget: u64) -> Result<IndexReport> {
    g.check_vertex(x)?;
    let fx = f.get(x)?;
    let sphere = g.unit_sphere(x);
    let mut below = Vec::new();
    let mut above = Vec::new();
    for (local, &y) in sphere.parent_ids.iter().enumerate() {
        let fy = f.get(y)?;
        match fy.cmp(fx) {
            std::cmp::Ordering::Less => below.push(local as Vertex),
            std::cmp::Ordering::Greater => above.push(local as Vertex),
            std::cmp::Ordering::Equal => return Err(Error::NotLocallyInjective(x.min(y), x.max(y))),
        }
    }
    let s_minus = sphere.graph.induced_plain(&below);
    let s_plus = sphere.graph.induced_plain(&above);
    let index = 1 - s_minus.euler_characteristic();
    let index_neg = 1 - s_plus.euler_characteristic();
    let symmetric = Rational::new((index + index_neg).into(), 2.into());
    let d = local_dimension(&sphere.graph);
    let classification = if below.is_empty() {
        Classification::LocalMin
    } else if above.is_empty() {
        // S⁻ is the whole unit sphere, which is a (d-1)-sphere in a d-graph.
        Classification::LocalMax
    } else if d == 2 && index < 0 {
        Classification::Saddle
    } else {
        match topology::is_contractible(&s_minus, budget).verdict {
            Verdict::Yes => Classification::Regular,
            _ => Classification::Unclassified,
        }
    };
    Ok(IndexReport { vertex: x, s_minus, index, symmetric, classification })
}

/// Plain index sum and Euler characteristic.
pub fn ph_sum_check(g: &SimplicialGraph, f: &VertexFunction) -> Result<(i64, i64)> {
    check_locally_injective(g, f)?;
    let indices = par::map_range(g.vertex_count(), |x| index_only(g, f, x as Vertex));
    Ok((indices.iter().map(|p| p.0).sum(), g.euler_characteristic()))
}

/// Sum of symmetric indices and Euler characteristic.
pub fn symmetric_sum_check(g: &SimplicialGraph, f: &VertexFunction) -> Result<(Rational, i64)> {
    check_locally_injective(g, f)?;
    let indices = par::map_range(g.vertex_count(), |x| index_only(g, f, x as Vertex));
    let twice: i64 = indices.iter().map(|p| p.0 + p.1).sum();
    Ok((Rational::new(twice.into(), 2.into()), g.euler_characteristic()))
}

/// `(i_f(x), i_{-f}(x))` without building a report.
fn index_only(g: &SimplicialGraph, f: &VertexFunction, x: Vertex) -> (i64, i64) {
    let fx = f.value(x);
    let (below, above): (Vec<Vertex>, Vec<Vertex>) = g.neighbors(x).iter().partition(|&&y| f.value(y) < fx);
    (1 - g.induced_plain(&below).euler_characteristic(), 1 - g.induced_plain(&above).euler_characteristic())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CurvatureVector {
    #[serde(serialize_with = "serialize_rationals")]
    pub values: Vec<Rational>,
    #[serde(serialize_with = "serialize_rational")]
    pub total: Rational,
}

fn serialize_rationals<S: serde::Serializer>(v: &[Rational], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(rational::format))
}

fn serialize_rational<S: serde::Serializer>(v: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&rational::format(v))
}

/// Exact curvature at every vertex. A clique of size `m` through `x`
/// contributes one `(m-2)`-simplex to `S(x)`.
pub fn curvature(g: &SimplicialGraph) -> CurvatureVector {
    let n = g.vertex_count();
    let max_len = g.cliques().dim().map_or(1, |d| d + 1);
    let mut counts = vec![vec![0i64; max_len.saturating_sub(1)]; n];
    for s in g.cliques().iter().filter(|s| s.len() >= 2) {
        for &v in s.vertices() {
            counts[v as usize][s.len() - 2] += 1;
        }
    }
    let values: Vec<Rational> = counts.iter().map(|c| curvature_from_counts(c)).collect();
    let total = values.iter().fold(Rational::zero(), |a, b| a + b);
    CurvatureVector { values, total }
}

/// `1 + Σ_k (-1)^(k+1) S_k / (k+2)` from the f-vector of a unit sphere.
pub fn curvature_from_counts(sphere_f: &[i64]) -> Rational {
    let mut k_x = Rational::one();
    for (k, &s) in sphere_f.iter().enumerate() {
        let term = Rational::new(s.into(), (k as i64 + 2).into());
        if k % 2 == 0 {
            k_x -= term;
        } else {
            k_x += term;
        }
    }
    k_x
}

/// `B_f(x)`: the level surface `{f = f(x)}` inside the unit sphere.
pub fn central_surface(g: &SimplicialGraph, f: &VertexFunction, x: Vertex) -> Result<LevelSurfaceGraph> {
    g.check_vertex(x)?;
    let sphere = g.unit_sphere(x);
    let restricted =
        VertexFunction::new(sphere.parent_ids.iter().map(|&y| f.get(y).cloned()).collect::<Result<Vec<_>>>()?);
    let fx = f.get(x)?;
    levelset::level_surface(&sphere.graph, &restricted, fx).map_err(|e| match e {
        Error::LevelHitsVertex { vertex, .. } => {
            let y = sphere.parent_ids[vertex as usize];
            Error::NotLocallyInjective(x.min(y), x.max(y))
        }
        other => other,
    })
}

/// Symmetric index from the central surface: `1 - χ(B)/2` for even local
/// dimension and `-χ(B)/2` for odd.
pub fn symmetric_index_from_central(g: &SimplicialGraph, f: &VertexFunction, x: Vertex) -> Result<Rational> {
    let b = central_surface(g, f, x)?;
    let half_chi = Rational::new(b.graph.euler_characteristic().into(), 2.into());
    let d = local_dimension(&b.parent);
    Ok(if d % 2 == 0 { Rational::one() - half_chi } else { -half_chi })
}

/// Per-vertex data checkable without recognizing sphere products.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MorseScreen {
    pub vertex: Vertex,
    pub index: i64,
    pub central_euler: i64,
    pub central_components: usize,
    /// Whether `B_f(x)` verifies as a `(d-2)`-graph.
    pub central_verdict: Verdict,
}

pub fn morse_screen(g: &SimplicialGraph, f: &VertexFunction, budget: u64) -> Result<Vec<MorseScreen>> {
    check_locally_injective(g, f)?;
    par::map_range(g.vertex_count(), |x| {
        let x = x as Vertex;
        let b = central_surface(g, f, x)?;
        let d = local_dimension(&b.parent);
        Ok(MorseScreen {
            vertex: x,
            index: index_only(g, f, x).0,
            central_euler: b.graph.euler_characteristic(),
            central_components: topology::components(&b.graph).len(),
            central_verdict: topology::is_dgraph(&b.graph, d - 2, budget).verdict,
        })
    })
    .into_iter()
    .collect()
}

/// Clique complex of `S(x)` as bitmasks over the sphere's local ids, each
/// with weight `(-1)^dim`. Only for spheres with at most 64 vertices.
struct SphereMasks {
    n: usize,
    cliques: Vec<(u64, i64)>,
}

impl SphereMasks {
    fn new(g: &SimplicialGraph, x: Vertex) -> Option<Self> {
        let sphere = g.unit_sphere(x).graph;
        let n = sphere.vertex_count();
        if n > 64 {
            return None;
        }
        let cliques = sphere
            .cliques()
            .iter()
            .map(|s| {
                let mask = s.vertices().iter().fold(0u64, |m, &v| m | (1 << v));
                (mask, if s.dim() % 2 == 0 { 1 } else { -1 })
            })
            .collect();
        Some(SphereMasks { n, cliques })
    }

    fn euler(&self, set: u64) -> i64 {
        self.cliques.iter().filter(|c| c.0 & !set == 0).map(|c| c.1).sum()
    }

    /// `2 j` when `set` is the part of the sphere below the center.
    fn twice_symmetric(&self, below: u64) -> i64 {
        let all = if self.n == 64 { u64::MAX } else { (1u64 << self.n) - 1 };
        2 - self.euler(below) - self.euler(all & !below)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Expectation {
    pub samples: usize,
    #[serde(serialize_with = "serialize_rational")]
    pub mean: Rational,
    pub estimate: f64,
    pub standard_error: f64,
}

const CHUNK: usize = 1024;

/// Monte Carlo mean of `j_f(x)` over uniformly random orderings of the
/// closed ball. The center's rank is uniform and the set below it is a
/// uniform subset of that size, which is the same distribution. Samples
/// are drawn in fixed chunks, each with its own ChaCha stream, so the
/// result does not depend on the thread count.
pub fn index_expectation(g: &SimplicialGraph, x: Vertex, samples: usize, seed: u64) -> Result<Expectation> {
    g.check_vertex(x)?;
    let masks = SphereMasks::new(g, x)
        .ok_or_else(|| Error::InvalidParameters(format!("unit sphere of vertex {x} has more than 64 vertices")))?;
    let chunks = samples.div_ceil(CHUNK);
    let partial = par::map_range(chunks, |c| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(c as u64);
        let count = CHUNK.min(samples - c * CHUNK);
        let mut order: Vec<u32> = (0..masks.n as u32).collect();
        let (mut sum, mut sum_sq) = (0i64, 0i64);
        for _ in 0..count {
            let rank = rng.gen_range(0..=masks.n);
            order.shuffle(&mut rng);
            let below = order[..rank].iter().fold(0u64, |m, &v| m | (1 << v));
            let t = masks.twice_symmetric(below);
            sum += t;
            sum_sq += t * t;
        }
        (sum, sum_sq)
    });
    let (sum, sum_sq) = partial.iter().fold((0i64, 0i64), |a, b| (a.0 + b.0, a.1 + b.1));
    let n = samples.max(1) as f64;
    let mean = Rational::new(sum.into(), (2 * samples.max(1) as i64).into());
    let m2 = sum as f64 / n;
    let var2 = if samples > 1 { ((sum_sq as f64 - n * m2 * m2) / (n - 1.0)).max(0.0) } else { 0.0 };
    Ok(Expectation { samples, estimate: rational::to_f64(&mean), mean, standard_error: (var2 / n).sqrt() / 2.0 })
}

/// Exact average of `j_f(x)` over all orderings of the closed ball, summed
/// over subsets of the sphere: a set of size `r` is the lower part with
/// probability `1 / ((n+1) C(n,r))`. Limited to spheres with at most 24
/// vertices.
pub fn exact_index_average(g: &SimplicialGraph, x: Vertex) -> Result<Rational> {
    g.check_vertex(x)?;
    let masks = SphereMasks::new(g, x)
        .filter(|m| m.n <= 24)
        .ok_or_else(|| Error::InvalidParameters(format!("unit sphere of vertex {x} is too large")))?;
    let n = masks.n;
    let mut by_size = vec![0i64; n + 1];
    for set in 0u64..(1u64 << n) {
        by_size[set.count_ones() as usize] += masks.twice_symmetric(set);
    }
    let mut total = Rational::zero();
    let mut binom: i64 = 1;
    for (r, &s) in by_size.iter().enumerate() {
        total += Rational::new(s.into(), binom.into());
        binom = binom * (n - r) as i64 / (r as i64 + 1);
    }
    Ok(total / Rational::from_integer(((n as i64 + 1) * 2).into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::rational::{int, ratio};

    fn wheel_with_rim(rim: &[i64]) -> (SimplicialGraph, VertexFunction) {
        let g = catalog::wheel(rim.len() + 1).unwrap();
        let mut vals = vec![0];
        vals.extend_from_slice(rim);
        (g, VertexFunction::from_ints(&vals))
    }

    #[test]
    fn local_minimum_has_index_one() {
        let (g, f) = wheel_with_rim(&[1, 2, 3, 4, 5, 6]);
        let r = ph_index(&g, &f, 0).unwrap();
        assert_eq!(r.index, 1);
        assert_eq!(r.classification, Classification::LocalMin);
        assert!(r.s_minus.is_empty());
    }

    #[test]
    fn standard_and_monkey_saddles() {
        let (g, f) = wheel_with_rim(&[1, 2, -1, -2, 3, -3]);
        let r = ph_index(&g, &f, 0).unwrap();
        assert_eq!((r.index, r.classification), (-1, Classification::Saddle));
        assert_eq!(r.symmetric, int(-1));
        assert_eq!(symmetric_index_from_central(&g, &f, 0).unwrap(), int(-1));
        assert_eq!(central_surface(&g, &f, 0).unwrap().graph.vertex_count(), 4);

        let (g, f) = wheel_with_rim(&[1, -1, 2, -2, 3, -3]);
        let r = ph_index(&g, &f, 0).unwrap();
        assert_eq!((r.index, r.classification), (-2, Classification::Saddle));
    }

    #[test]
    fn maximum_and_regular_point() {
        let (g, f) = wheel_with_rim(&[-1, -2, -3, -4, -5, -6]);
        let r = ph_index(&g, &f, 0).unwrap();
        assert_eq!((r.index, r.classification), (1, Classification::LocalMax));
        assert_eq!(symmetric_index_from_central(&g, &f, 0).unwrap(), int(1));
        let (g, f) = wheel_with_rim(&[1, 2, 3, -4, -5, -6]);
        let r = ph_index(&g, &f, 0).unwrap();
        assert_eq!((r.index, r.classification), (0, Classification::Regular));
    }

    #[test]
    fn index_sums_match_euler_characteristic() {
        let oct = catalog::cross_polytope(2).unwrap();
        let f = VertexFunction::from_ints(&[3, 1, 4, 6, 5, 9]);
        assert_eq!(ph_sum_check(&oct, &f).unwrap(), (2, 2));
        let c16 = catalog::cross_polytope(3).unwrap();
        let f = VertexFunction::from_ints(&[8, 2, 7, 1, 6, 3, 5, 4]);
        assert_eq!(ph_sum_check(&c16, &f).unwrap(), (0, 0));
        assert_eq!(symmetric_sum_check(&c16, &f).unwrap(), (int(0), 0));
    }

    #[test]
    fn constant_edge_is_rejected() {
        let g = catalog::cycle(8).unwrap();
        let f = VertexFunction::from_ints(&[1, 2, 3, 4, 5, 6, 7, 7]);
        assert!(matches!(ph_sum_check(&g, &f), Err(Error::NotLocallyInjective(6, 7))));
        assert!(matches!(ph_index(&g, &f, 7), Err(Error::NotLocallyInjective(6, 7))));
    }

    #[test]
    fn curvature_values() {
        let k = curvature(&catalog::icosahedron());
        assert!(k.values.iter().all(|v| *v == ratio(1, 6)));
        assert_eq!(k.total, int(2));
        let k = curvature(&catalog::cross_polytope(3).unwrap());
        assert!(k.values.iter().all(Zero::is_zero));
        assert_eq!(curvature(&catalog::point()).values, vec![int(1)]);
    }

    #[test]
    fn exact_average_is_curvature() {
        let g = catalog::icosahedron();
        assert_eq!(exact_index_average(&g, 0).unwrap(), ratio(1, 6));
        let g = catalog::cross_polytope(3).unwrap();
        assert_eq!(exact_index_average(&g, 0).unwrap(), int(0));
    }

    #[test]
    fn sampling_is_deterministic_and_close() {
        let g = catalog::icosahedron();
        let a = index_expectation(&g, 3, 5000, 7).unwrap();
        let b = index_expectation(&g, 3, 5000, 7).unwrap();
        assert_eq!(a, b);
        assert!((a.estimate - 1.0 / 6.0).abs() <= 4.0 * a.standard_error);
    }

    #[test]
    fn central_surfaces_in_a_three_sphere_are_circles() {
        let g = catalog::cross_polytope(3).unwrap();
        let f = VertexFunction::from_ints(&[8, 2, 7, 1, 6, 3, 5, 4]);
        for s in morse_screen(&g, &f, DEFAULT_BUDGET).unwrap() {
            assert_eq!(s.central_verdict, Verdict::Yes);
        }
    }
}

//! Graph Laplacian, a cyclic Jacobi eigensolver, and nodal analysis of
//! eigenvectors.

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{SimplicialGraph, Vertex};
use crate::levelset::{self, LevelSurfaceGraph};
use crate::rational::{Rational, VertexFunction};
use crate::sard;
use crate::topology::{self, VerificationReport};

pub const DEFAULT_TOL: f64 = 1e-12;
pub const DEFAULT_ZERO_TOL: f64 = 1e-9;
pub const MAX_SWEEPS: usize = 100;
/// Half-width of the uniform noise added when perturbation is enabled.
pub const PERTURBATION: f64 = 1e-6;

/// `D - A` with integer entries.
pub fn laplacian(g: &SimplicialGraph) -> Vec<Vec<i64>> {
    let n = g.vertex_count();
    let mut l = vec![vec![0i64; n]; n];
    for v in g.vertices() {
        l[v as usize][v as usize] = g.degree(v) as i64;
        for &u in g.neighbors(v) {
            l[v as usize][u as usize] = -1;
        }
    }
    l
}

#[derive(Clone, Debug, Serialize)]
pub struct Spectrum {
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    /// `eigenvectors[i]` belongs to `eigenvalues[i]`; orthonormal.
    pub eigenvectors: Vec<Vec<f64>>,
    /// `‖L v - λ v‖` per pair, against the input matrix.
    pub residuals: Vec<f64>,
    pub sweeps: usize,
}

impl Spectrum {
    /// Relative distance of `v` from the eigenspace of `lambda` (all
    /// computed eigenvalues within `1e-6` of it).
    pub fn eigenspace_residual(&self, lambda: f64, v: &[f64]) -> f64 {
        let norm = dot(v, v).sqrt();
        if norm == 0.0 {
            return 0.0;
        }
        let mut rest = v.to_vec();
        for (mu, w) in self.eigenvalues.iter().zip(&self.eigenvectors) {
            if (mu - lambda).abs() < 1e-6 {
                let c = dot(v, w);
                rest.iter_mut().zip(w).for_each(|(r, x)| *r -= c * x);
            }
        }
        dot(&rest, &rest).sqrt() / norm
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn spectrum(g: &SimplicialGraph, tol: f64) -> Result<Spectrum> {
    let l: Vec<Vec<f64>> = laplacian(g).into_iter().map(|row| row.into_iter().map(|x| x as f64).collect()).collect();
    eigendecompose(&l, tol)
}

/// Cyclic Jacobi rotations in row order. Stops once the off-diagonal
/// Frobenius norm falls below `tol * max(1, ‖A‖_F)`.
pub fn eigendecompose(a: &[Vec<f64>], tol: f64) -> Result<Spectrum> {
    let n = a.len();
    assert!(a.iter().all(|r| r.len() == n), "matrix must be square");
    let mut m: Vec<Vec<f64>> = a.to_vec();
    let mut v: Vec<Vec<f64>> = (0..n).map(|i| (0..n).map(|j| f64::from(u8::from(i == j))).collect()).collect();
    let scale = a.iter().flatten().map(|x| x * x).sum::<f64>().sqrt().max(1.0);
    let off = |m: &Vec<Vec<f64>>| -> f64 {
        let mut s = 0.0;
        for (i, row) in m.iter().enumerate() {
            for (j, x) in row.iter().enumerate() {
                if i != j {
                    s += x * x;
                }
            }
        }
        s.sqrt()
    };
    let mut sweeps = 0;
    loop {
        let o = off(&m);
        if o < tol * scale {
            break;
        }
        if sweeps == MAX_SWEEPS {
            return Err(Error::ConvergenceFailure { sweeps, off_norm: o });
        }
        sweeps += 1;
        for p in 0..n {
            for q in p + 1..n {
                let apq = m[p][q];
                if apq == 0.0 {
                    continue;
                }
                let theta = (m[q][q] - m[p][p]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for row in m.iter_mut() {
                    let (x, y) = (row[p], row[q]);
                    row[p] = c * x - s * y;
                    row[q] = s * x + c * y;
                }
                for k in 0..n {
                    let (x, y) = (m[p][k], m[q][k]);
                    m[p][k] = c * x - s * y;
                    m[q][k] = s * x + c * y;
                }
                m[p][q] = 0.0;
                m[q][p] = 0.0;
                for row in v.iter_mut() {
                    let (x, y) = (row[p], row[q]);
                    row[p] = c * x - s * y;
                    row[q] = s * x + c * y;
                }
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m[i][i].total_cmp(&m[j][j]).then(i.cmp(&j)));
    let eigenvalues: Vec<f64> = order.iter().map(|&i| m[i][i]).collect();
    let eigenvectors: Vec<Vec<f64>> = order
        .iter()
        .map(|&i| {
            let mut col: Vec<f64> = v.iter().map(|row| row[i]).collect();
            // Fix the sign: the entry of largest magnitude is positive.
            let pivot =
                col.iter().enumerate().fold(0, |best, (k, x)| if x.abs() > col[best].abs() + 1e-12 { k } else { best });
            if col.get(pivot).is_some_and(|&x| x < 0.0) {
                col.iter_mut().for_each(|x| *x = -*x);
            }
            col
        })
        .collect();
    let residuals = eigenvalues
        .iter()
        .zip(&eigenvectors)
        .map(|(lambda, x)| a.iter().zip(x).map(|(row, xi)| (dot(row, x) - lambda * xi).powi(2)).sum::<f64>().sqrt())
        .collect();
    Ok(Spectrum { eigenvalues, eigenvectors, residuals, sweeps })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NodalOptions {
    pub zero_tol: f64,
    /// Seed for the uniform noise in `[-1e-6, 1e-6]`; `None` disables it.
    pub perturbation_seed: Option<u64>,
}

impl Default for NodalOptions {
    fn default() -> Self {
        NodalOptions { zero_tol: DEFAULT_ZERO_TOL, perturbation_seed: None }
    }
}

#[derive(Clone, Debug)]
pub struct NodalReport {
    pub k: usize,
    pub eigenvalue: f64,
    /// The vector analysed, after any perturbation.
    pub vector: Vec<f64>,
    pub positive_components: usize,
    pub negative_components: usize,
    /// Vertices with `|f| <= zero_tol` before perturbation.
    pub zero_vertices: Vec<Vertex>,
    pub perturbation_seed: Option<u64>,
    pub nodal_surface: LevelSurfaceGraph,
    /// Crossing edges over the smaller count of one-signed top simplices;
    /// `None` when one side has no top simplex.
    pub cheeger: Option<Rational>,
    pub crossing_edges: usize,
}

/// Nodal analysis of eigenvector `k` (1-indexed, so `k = 1` is constant).
pub fn nodal_report(g: &SimplicialGraph, k: usize, opts: &NodalOptions) -> Result<NodalReport> {
    let sp = spectrum(g, DEFAULT_TOL)?;
    nodal_report_with(g, &sp, k, opts)
}

pub fn nodal_report_with(g: &SimplicialGraph, sp: &Spectrum, k: usize, opts: &NodalOptions) -> Result<NodalReport> {
    if k < 2 || k > sp.eigenvalues.len() {
        return Err(Error::InvalidParameters(format!("eigenvector index {k} outside 2..={}", sp.eigenvalues.len())));
    }
    nodal_report_for_vector(g, &sp.eigenvectors[k - 1], k, sp.eigenvalues[k - 1], opts)
}

/// Nodal analysis of an arbitrary vector, e.g. a chosen element of a
/// degenerate eigenspace.
pub fn nodal_report_for_vector(
    g: &SimplicialGraph,
    f: &[f64],
    k: usize,
    eigenvalue: f64,
    opts: &NodalOptions,
) -> Result<NodalReport> {
    assert_eq!(f.len(), g.vertex_count(), "one value per vertex");
    let zero_vertices: Vec<Vertex> =
        (0..f.len()).filter(|&v| f[v].abs() <= opts.zero_tol).map(|v| v as Vertex).collect();
    let mut vector = f.to_vec();
    match opts.perturbation_seed {
        Some(seed) => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            vector.iter_mut().for_each(|x| *x += rng.gen_range(-PERTURBATION..=PERTURBATION));
        }
        None => {
            if let Some(&v) = zero_vertices.first() {
                return Err(Error::ZeroOnVertex(v));
            }
        }
    }
    let exact = VertexFunction::from_f64_exact(&vector)?;
    if let Some(v) = exact.attains(&Rational::zero()) {
        return Err(Error::ZeroOnVertex(v));
    }
    let positive: Vec<Vertex> = (0..vector.len()).filter(|&v| vector[v] > opts.zero_tol).map(|v| v as Vertex).collect();
    let negative: Vec<Vertex> =
        (0..vector.len()).filter(|&v| vector[v] < -opts.zero_tol).map(|v| v as Vertex).collect();
    let positive_components = topology::components(&g.induced_plain(&positive)).len();
    let negative_components = topology::components(&g.induced_plain(&negative)).len();
    let nodal_surface = levelset::level_surface(g, &exact, &Rational::zero())?;
    let crossing_edges = g.edges().filter(|&(a, b)| (vector[a as usize] > 0.0) != (vector[b as usize] > 0.0)).count();
    let (mut pos_top, mut neg_top) = (0usize, 0usize);
    if let Some(d) = g.dimension() {
        for s in g.cliques().of_dim(d) {
            if s.vertices().iter().all(|&v| vector[v as usize] > 0.0) {
                pos_top += 1;
            } else if s.vertices().iter().all(|&v| vector[v as usize] < 0.0) {
                neg_top += 1;
            }
        }
    }
    let smaller = pos_top.min(neg_top);
    let cheeger = (smaller > 0).then(|| Rational::new((crossing_edges as i64).into(), (smaller as i64).into()));
    Ok(NodalReport {
        k,
        eigenvalue,
        vector,
        positive_components,
        negative_components,
        zero_vertices,
        perturbation_seed: opts.perturbation_seed,
        nodal_surface,
        cheeger,
        crossing_edges,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PrincipleEntry {
    pub vertex: Vertex,
    pub eigenvalue: f64,
    pub value: f64,
}

/// For every dominating vertex and every eigenvalue strictly between 0 and
/// `n`, the absolute eigenvector entry at that vertex.
pub fn eigenfunction_principle_check(g: &SimplicialGraph, sp: &Spectrum) -> Vec<PrincipleEntry> {
    let n = g.vertex_count();
    let hubs: Vec<Vertex> = g.vertices().filter(|&v| g.degree(v) + 1 == n).collect();
    let mut out = Vec::new();
    for &v in &hubs {
        for (lambda, x) in sp.eigenvalues.iter().zip(&sp.eigenvectors) {
            if *lambda > 1e-9 && *lambda < n as f64 - 1e-9 {
                out.push(PrincipleEntry { vertex: v, eigenvalue: *lambda, value: x[v as usize].abs() });
            }
        }
    }
    out
}

#[derive(Clone, Debug)]
pub struct DoubleNodal {
    /// Set when the pipeline rejected the data.
    pub error: Option<String>,
    pub components: usize,
    pub verification: Option<VerificationReport>,
}

#[derive(Clone, Debug)]
pub struct GroundState {
    pub report: NodalReport,
    pub spectral_gap: f64,
    pub sphere: VerificationReport,
    pub double_nodal: Option<DoubleNodal>,
}

/// Nodal surface of the Fiedler vector with a `(d-1)`-sphere verdict and,
/// for `d = 3`, the double nodal surface `{f2 = 0, f3 = 0}`.
pub fn ground_state_surface(g: &SimplicialGraph, opts: &NodalOptions, budget: u64) -> Result<GroundState> {
    let d = g.dimension().unwrap_or(0) as i64;
    let sp = spectrum(g, DEFAULT_TOL)?;
    let report = nodal_report_with(g, &sp, 2, opts)?;
    let sphere = topology::is_sphere(&report.nodal_surface.graph, d - 1, budget);
    let double_nodal = (d == 3 && sp.eigenvalues.len() >= 3).then(|| {
        let f3 = nodal_report_with(g, &sp, 3, opts).map(|r| r.vector);
        let run = f3.and_then(|f3| {
            let fs = [VertexFunction::from_f64_exact(&report.vector)?, VertexFunction::from_f64_exact(&f3)?];
            sard::sard_pipeline(g, &fs, &[Rational::zero(), Rational::zero()], budget)
        });
        match run {
            Ok(trace) => {
                let last = trace.stages.last().expect("two stages");
                DoubleNodal {
                    error: None,
                    components: topology::components(&last.surface.graph).len(),
                    verification: Some(last.verification.clone()),
                }
            }
            Err(e) => DoubleNodal { error: Some(e.to_string()), components: 0, verification: None },
        }
    });
    Ok(GroundState { spectral_gap: sp.eigenvalues.get(1).copied().unwrap_or(0.0), report, sphere, double_nodal })
}

//! Triangulating algebraic sets `{p_1 = 0, ..., p_k = 0}` by running the
//! Sard pipeline on a Kuhn grid.

use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};

use crate::catalog;
use crate::error::{Error, Result};
use crate::graph::SimplicialGraph;
use crate::poly::Polynomial;
use crate::rational::{self, Rational, VertexFunction};
use crate::sard::{self, SardTrace};

/// An axis-aligned box given by one `[lo, hi]` interval per coordinate.
#[derive(Clone, Debug, PartialEq)]
pub struct Domain {
    pub bounds: Vec<(Rational, Rational)>,
}

impl Domain {
    pub fn cube(lo: Rational, hi: Rational, dim: usize) -> Self {
        Domain { bounds: vec![(lo, hi); dim] }
    }

    pub fn dim(&self) -> usize {
        self.bounds.len()
    }
}

/// Accepts `lo,hi;lo,hi;...`, with `^d` to repeat the list `d` times
/// (`-2,2^3` is the cube `[-2,2]^3`).
impl FromStr for Domain {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidParameters(format!("bad domain '{s}', expected lo,hi;lo,hi or lo,hi^d"));
        let (body, power) = match s.split_once('^') {
            Some((b, p)) => (b, p.trim().parse::<usize>().map_err(|_| bad())?),
            None => (s, 1),
        };
        let mut bounds = Vec::new();
        for part in body.split(';') {
            let (lo, hi) = part.split_once(',').ok_or_else(bad)?;
            let lo = rational::parse(lo.trim()).map_err(|_| bad())?;
            let hi = rational::parse(hi.trim()).map_err(|_| bad())?;
            if lo >= hi {
                return Err(bad());
            }
            bounds.push((lo, hi));
        }
        let bounds: Vec<_> = (0..power).flat_map(|_| bounds.iter().cloned()).collect();
        if bounds.is_empty() {
            return Err(bad());
        }
        Ok(Domain { bounds })
    }
}

impl fmt::Display for Domain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> =
            self.bounds.iter().map(|(a, b)| format!("{},{}", rational::format(a), rational::format(b))).collect();
        f.write_str(&parts.join(";"))
    }
}

#[derive(Clone, Debug)]
pub struct VarietyOptions {
    pub step: Rational,
    pub periodic: bool,
    /// Move a level off 0 by multiples of `2^-64` when 0 is an excluded value.
    pub perturb: bool,
    pub budget: u64,
}

#[derive(Clone, Debug)]
pub struct Variety {
    pub grid: SimplicialGraph,
    pub trace: SardTrace,
    /// The level actually used at each stage.
    pub levels: Vec<Rational>,
    /// Final-stage vertex positions in domain coordinates.
    pub coordinates: Vec<Vec<f64>>,
}

impl Variety {
    pub fn graph(&self) -> &SimplicialGraph {
        self.trace.final_graph()
    }

    pub fn perturbed(&self) -> bool {
        self.levels.iter().any(|c| !c.is_zero())
    }
}

pub fn epsilon() -> Rational {
    Rational::new(1.into(), num_bigint::BigInt::one() << 64)
}

/// Builds the grid, samples each polynomial exactly at the grid points and
/// cuts in order with level 0 (or the smallest positive multiple of `2^-64`
/// avoiding the stage's excluded values when `perturb` is set).
pub fn triangulate_variety(polys: &[Polynomial], domain: &Domain, opts: &VarietyOptions) -> Result<Variety> {
    let d = domain.dim();
    if polys.is_empty() || polys.len() > d {
        return Err(Error::DimensionExceeded { constraints: polys.len(), dim: d });
    }
    if let Some(p) = polys.iter().find(|p| p.arity() > d) {
        return Err(Error::InvalidParameters(format!(
            "polynomial '{p}' uses {} variables but the domain has {d}",
            p.arity()
        )));
    }
    if opts.step <= Rational::zero() {
        return Err(Error::InvalidParameters("step must be positive".into()));
    }
    let mut shape = Vec::with_capacity(d);
    for (lo, hi) in &domain.bounds {
        let cells = (hi - lo) / &opts.step;
        if !cells.is_integer() {
            return Err(Error::InvalidParameters(format!(
                "step {} does not divide [{}, {}]",
                rational::format(&opts.step),
                rational::format(lo),
                rational::format(hi)
            )));
        }
        let cells =
            usize::try_from(cells.to_integer()).map_err(|_| Error::InvalidParameters("too many grid cells".into()))?;
        shape.push(if opts.periodic { cells } else { cells + 1 });
    }
    let grid = catalog::kuhn_grid(&shape, opts.periodic)?;
    let points: Vec<Vec<Rational>> = (0..grid.vertex_count())
        .map(|id| {
            catalog::kuhn_point(&shape, id)
                .iter()
                .zip(&domain.bounds)
                .map(|(&i, (lo, _))| lo + &opts.step * Rational::from_integer(i.into()))
                .collect()
        })
        .collect();
    let coords: Vec<Vec<f64>> = points.iter().map(|p| p.iter().map(rational::to_f64).collect()).collect();
    let grid = grid.with_coords(coords);
    let fs: Vec<VertexFunction> =
        polys.iter().map(|p| VertexFunction::new(points.iter().map(|x| p.eval(x)).collect())).collect();
    let mut levels = Vec::new();
    let trace = sard::sard_pipeline_with(
        &grid,
        &fs,
        |_, excluded| {
            let mut c = Rational::zero();
            if opts.perturb {
                let eps = epsilon();
                while excluded.binary_search(&c).is_ok() {
                    c += &eps;
                }
            }
            levels.push(c.clone());
            c
        },
        opts.budget,
    )?;
    let coordinates = trace.final_graph().coords().map(<[Vec<f64>]>::to_vec).unwrap_or_default();
    Ok(Variety { grid, trace, levels, coordinates })
}

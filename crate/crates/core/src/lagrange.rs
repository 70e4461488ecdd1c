//! Sign gradients over GF(2), the maximal-rank regularity check, Lagrange
//! candidates on surfaces, and the strong-injectivity surrogate.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_traits::One;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{Simplex, SimplicialGraph, Vertex};
use crate::levelset::changes_sign;
use crate::par;
use crate::rational::{Rational, VertexFunction};

/// `bits[i]` is set iff `f(y_i) > f(root)`, for the non-root vertices
/// `y_i` of the simplex in ascending order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SignGradient {
    pub root: Vertex,
    pub simplex: Simplex,
    pub bits: Vec<bool>,
}

impl SignGradient {
    pub fn new(f: &VertexFunction, simplex: &Simplex, root: Vertex) -> Result<Self> {
        check_no_tie(f, simplex)?;
        let fr = f.get(root)?;
        let bits = simplex
            .vertices()
            .iter()
            .filter(|&&y| y != root)
            .map(|&y| match f.get(y)?.cmp(fr) {
                Ordering::Greater => Ok(true),
                Ordering::Less => Ok(false),
                Ordering::Equal => Err(Error::TieOnSimplex(simplex.clone())),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(SignGradient { root, simplex: simplex.clone(), bits })
    }

    pub fn as_mask(&self) -> u64 {
        bits_to_mask(&self.bits)
    }
}

fn check_no_tie(f: &VertexFunction, s: &Simplex) -> Result<()> {
    let vals = s.vertices().iter().map(|&v| f.get(v)).collect::<Result<Vec<_>>>()?;
    if vals.iter().enumerate().any(|(i, a)| vals[i + 1..].contains(a)) {
        return Err(Error::TieOnSimplex(s.clone()));
    }
    Ok(())
}

fn bits_to_mask(bits: &[bool]) -> u64 {
    bits.iter().enumerate().fold(0, |m, (i, &b)| m | (u64::from(b) << i))
}

fn top_simplices(g: &SimplicialGraph) -> &[Simplex] {
    g.dimension().map_or(&[], |d| g.cliques().of_dim(d))
}

/// One gradient per top-dimensional simplex containing `x`.
pub fn gradients_at(g: &SimplicialGraph, f: &VertexFunction, x: Vertex) -> Result<Vec<SignGradient>> {
    g.check_vertex(x)?;
    top_simplices(g).iter().filter(|s| s.contains(x)).map(|s| SignGradient::new(f, s, x)).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RankViolation {
    pub simplex: Simplex,
    pub root: Vertex,
    /// Indices of constraint functions whose vectors sum to zero.
    pub dependent: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RankReport {
    pub ok: bool,
    /// Top-dimensional simplices on which every constraint changes sign.
    pub simplices_checked: usize,
    pub violation: Option<RankViolation>,
}

/// GF(2) elimination. Returns the index set of the first vector that
/// reduces to zero, expressed as a combination of the input vectors.
pub fn gf2_dependency(vectors: &[u64]) -> Option<Vec<usize>> {
    // pivots[b] holds a reduced row with leading bit b and the set of
    // inputs it was built from.
    let mut pivots: [Option<(u64, u64)>; 64] = [None; 64];
    for (i, &v) in vectors.iter().enumerate() {
        let (mut row, mut combo) = (v, 1u64 << i);
        while row != 0 {
            let lead = 63 - row.leading_zeros() as usize;
            match pivots[lead] {
                Some((p, pc)) => {
                    row ^= p;
                    combo ^= pc;
                }
                None => {
                    pivots[lead] = Some((row, combo));
                    break;
                }
            }
        }
        if row == 0 {
            return Some((0..vectors.len()).filter(|&j| combo >> j & 1 == 1).collect());
        }
    }
    None
}

pub fn gf2_rank(vectors: &[u64]) -> usize {
    let mut basis: Vec<u64> = Vec::new();
    for &v in vectors {
        let mut row = v;
        for &b in &basis {
            row = row.min(row ^ b);
        }
        if row != 0 {
            basis.push(row);
            basis.sort_unstable_by(|a, b| b.cmp(a));
        }
    }
    basis.len()
}

/// Level-relative sign vector: bit `i` is set iff `f - c` has a different
/// sign at the `i`-th non-root vertex than at the root.
fn level_vector(f: &VertexFunction, c: &Rational, simplex: &Simplex, root: Vertex) -> u64 {
    let root_above = f.value(root) > c;
    simplex
        .vertices()
        .iter()
        .filter(|&&y| y != root)
        .enumerate()
        .fold(0, |m, (i, &y)| m | (u64::from((f.value(y) > c) != root_above) << i))
}

/// Maximal-rank check for the locus `{F = c}`: on every top-dimensional
/// simplex where all constraints change sign, and for every root in it,
/// the `k` level-relative sign vectors must be independent over GF(2).
pub fn max_rank_check(g: &SimplicialGraph, fs: &[VertexFunction], cs: &[Rational]) -> Result<RankReport> {
    assert_eq!(fs.len(), cs.len(), "one level per function");
    for (f, c) in fs.iter().zip(cs) {
        if f.len() < g.vertex_count() {
            return Err(Error::MissingValue(f.len() as Vertex));
        }
        if let Some(v) = f.attains(c) {
            return Err(Error::LevelHitsVertex { vertex: v, level: c.clone() });
        }
    }
    let tops = top_simplices(g);
    let checked = par::map_slice(tops, |s| -> Result<Option<Option<RankViolation>>> {
        for f in fs {
            check_no_tie(f, s)?;
        }
        if !fs.iter().zip(cs).all(|(f, c)| changes_sign(f, c, s)) {
            return Ok(None);
        }
        for &root in s.vertices() {
            let vectors: Vec<u64> = fs.iter().zip(cs).map(|(f, c)| level_vector(f, c, s, root)).collect();
            if let Some(dependent) = gf2_dependency(&vectors) {
                return Ok(Some(Some(RankViolation { simplex: s.clone(), root, dependent })));
            }
        }
        Ok(Some(None))
    });
    let mut simplices_checked = 0;
    let mut violation = None;
    for r in checked {
        if let Some(v) = r? {
            simplices_checked += 1;
            if violation.is_none() {
                violation = v;
            }
        }
    }
    Ok(RankReport { ok: violation.is_none(), simplices_checked, violation })
}

/// Triangles on which the root-relative gradients of `f` and `h` coincide
/// for some root, together with triangles where either function has a tie.
pub fn lagrange_candidates(g: &SimplicialGraph, f: &VertexFunction, h: &VertexFunction) -> Vec<Simplex> {
    let triangles = g.cliques().of_dim(2);
    let flags = par::map_slice(triangles, |t| {
        t.vertices().iter().any(|&root| match (SignGradient::new(f, t, root), SignGradient::new(h, t, root)) {
            (Ok(a), Ok(b)) => a.bits == b.bits,
            _ => true,
        })
    });
    triangles.iter().zip(flags).filter_map(|(t, hit)| hit.then(|| t.clone())).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum InjectivityScope {
    Global,
    PerSimplex,
}

/// Outcome of the operational stand-in for rational independence.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SurrogateReport {
    pub scope: InjectivityScope,
    /// Always true: this is not a proof of rational independence.
    pub surrogate: bool,
    pub passed: bool,
    pub failure: Option<String>,
}

/// Subset-sum checks are skipped for simplices carrying more values.
const SUBSET_SUM_MAX: usize = 16;

/// Global scope: all values of all functions pairwise distinct. Per-simplex
/// scope: on every simplex of `g`, the values of all functions are pairwise
/// distinct and all their subset sums (denominators cleared) differ.
pub fn strong_injectivity_check(
    g: &SimplicialGraph,
    fs: &[VertexFunction],
    scope: InjectivityScope,
) -> SurrogateReport {
    let failure = match scope {
        InjectivityScope::Global => {
            let mut all: Vec<&Rational> = fs.iter().flat_map(|f| f.values()).collect();
            all.sort();
            all.windows(2).find(|w| w[0] == w[1]).map(|w| format!("value {} repeats", crate::rational::format(w[0])))
        }
        InjectivityScope::PerSimplex => {
            let simplices: Vec<&Simplex> = g.cliques().iter().filter(|s| s.len() >= 2).collect();
            let results = par::map_slice(&simplices, |s| simplex_failure(fs, s));
            results.into_iter().flatten().next()
        }
    };
    SurrogateReport { scope, surrogate: true, passed: failure.is_none(), failure }
}

fn simplex_failure(fs: &[VertexFunction], s: &Simplex) -> Option<String> {
    let vals: Vec<&Rational> = fs.iter().flat_map(|f| s.vertices().iter().map(move |&v| f.value(v))).collect();
    let mut sorted = vals.clone();
    sorted.sort();
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return Some(format!("repeated value on simplex {s}"));
    }
    if vals.len() > SUBSET_SUM_MAX {
        return None;
    }
    let lcm = vals.iter().fold(BigInt::one(), |l, q| num_integer::Integer::lcm(&l, q.denom()));
    let ints: Vec<BigInt> = vals.iter().map(|q| q.numer() * (&lcm / q.denom())).collect();
    let mut sums: Vec<BigInt> = (0u32..1 << ints.len())
        .map(|mask| ints.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, x)| x).sum())
        .collect();
    sums.sort();
    sums.windows(2).any(|w| w[0] == w[1]).then(|| format!("two subset sums agree on simplex {s}"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::rational::half;

    fn tetrahedron() -> SimplicialGraph {
        catalog::complete(4)
    }

    #[test]
    fn increasing_triangle_has_gradient_one_one() {
        let g = catalog::complete(3);
        let f = VertexFunction::from_ints(&[0, 1, 2]);
        let grads = gradients_at(&g, &f, 0).unwrap();
        assert_eq!(grads.len(), 1);
        assert_eq!(grads[0].bits, vec![true, true]);
        let neg = gradients_at(&g, &f.negated(), 0).unwrap();
        assert_eq!(neg[0].bits, vec![false, false]);
    }

    #[test]
    fn tie_is_reported() {
        let g = catalog::complete(3);
        let f = VertexFunction::from_ints(&[0, 1, 1]);
        assert!(matches!(gradients_at(&g, &f, 0), Err(Error::TieOnSimplex(_))));
    }

    #[test]
    fn gf2_triple_sums_to_zero() {
        // <1,0,1>, <1,1,0>, <0,1,1> as masks with bit i for coordinate i.
        let v = [0b101, 0b011, 0b110];
        assert_eq!(gf2_dependency(&v), Some(vec![0, 1, 2]));
        assert_eq!(gf2_rank(&v), 2);
        assert_eq!(gf2_dependency(&[0b01, 0b10]), None);
        assert_eq!(gf2_dependency(&[0b11, 0b11]), Some(vec![0, 1]));
    }

    #[test]
    fn triple_violation_on_a_tetrahedron() {
        // Root 0 below each level; the other vertices sit above or below so
        // the level-relative vectors are <1,0,1>, <1,1,0> and <0,1,1>.
        let g = tetrahedron();
        let f = VertexFunction::from_ints(&[0, 2, -1, 3]);
        let h = VertexFunction::from_ints(&[0, 2, 3, -1]);
        let k = VertexFunction::from_ints(&[0, -1, 2, 3]);
        let c = vec![half(), half(), half()];
        let r = max_rank_check(&g, &[f, h, k], &c).unwrap();
        let v = r.violation.unwrap();
        assert_eq!(v.dependent, vec![0, 1, 2]);
    }

    #[test]
    fn identical_constraints_violate() {
        let g = catalog::cross_polytope(3).unwrap();
        let f = VertexFunction::from_ints(&[5, -2, 7, 1, -4, 3, 0, 6]);
        let r = max_rank_check(&g, &[f.clone(), f], &[half(), half()]).unwrap();
        assert!(!r.ok);
        assert_eq!(r.violation.unwrap().dependent, vec![0, 1]);
    }

    #[test]
    fn single_constraint_passes() {
        let g = catalog::cross_polytope(3).unwrap();
        let f = VertexFunction::from_ints(&[5, -2, 7, 1, -4, 3, 0, 6]);
        let r = max_rank_check(&g, &[f], &[half()]).unwrap();
        assert!(r.ok);
        assert!(r.simplices_checked > 0);
    }

    #[test]
    fn rank_ignores_the_root() {
        let f = VertexFunction::from_ints(&[0, 2, -1, 3]);
        let h = VertexFunction::from_ints(&[0, -1, 3, 2]);
        let s = Simplex::new([0, 1, 2, 3]);
        let ranks: Vec<usize> =
            (0..4).map(|r| gf2_rank(&[level_vector(&f, &half(), &s, r), level_vector(&h, &half(), &s, r)])).collect();
        assert!(ranks.windows(2).all(|w| w[0] == w[1]));
    }

    #[test]
    fn lagrange_candidates_extremes() {
        let g = catalog::cross_polytope(2).unwrap();
        let f = VertexFunction::from_ints(&[3, 1, 4, 6, 5, 9]);
        assert_eq!(lagrange_candidates(&g, &f, &f).len(), 8);
        assert!(lagrange_candidates(&g, &f, &f.negated()).is_empty());
    }

    #[test]
    fn surrogate_checks() {
        let g = catalog::complete(3);
        let constant = VertexFunction::from_ints(&[4, 4, 4]);
        assert!(!strong_injectivity_check(&g, &[constant], InjectivityScope::Global).passed);
        let tie = VertexFunction::from_ints(&[1, 2, 2]);
        assert!(!strong_injectivity_check(&g, &[tie], InjectivityScope::PerSimplex).passed);
        // 1 + 4 = 2 + 3 on the one triangle carrying all four values.
        let dependent = VertexFunction::from_ints(&[1, 4, 2, 3]);
        let k4 = catalog::complete(4);
        let report = strong_injectivity_check(&k4, &[dependent], InjectivityScope::PerSimplex);
        assert!(!report.passed && report.surrogate);
        let powers = VertexFunction::from_ints(&[1, 2, 4, 8]);
        assert!(strong_injectivity_check(&k4, &[powers], InjectivityScope::PerSimplex).passed);
    }
}

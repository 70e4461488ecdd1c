//! Exact rational scalars and vertex functions.
//!
//! Every combinatorial pipeline (level sets, Sard stages, indices) runs on
//! arbitrary-precision rationals so that comparisons against a level `c` are
//! exact. Floats enter only through [`VertexFunction::from_f64_exact`], which
//! keeps the full binary fraction of each value.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::graph::Vertex;

pub type Rational = BigRational;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Exact binary-fraction value of a finite float.
pub fn from_f64(x: f64) -> Option<Rational> {
    Rational::from_float(x)
}

pub fn to_f64(q: &Rational) -> f64 {
    q.to_f64().unwrap_or_else(|| {
        // Ratios of huge integers overflow the direct conversion.
        let n = q.numer().to_f64().unwrap_or(f64::NAN);
        let d = q.denom().to_f64().unwrap_or(f64::NAN);
        n / d
    })
}

/// Parses `"p/q"`, `"n"`, or a decimal such as `"8.5"` or `"-0.125"` exactly.
pub fn parse(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::InvalidParameters(format!("not a rational number: {s:?}"));
    if let Some((p, q)) = s.split_once('/') {
        let p = BigInt::from_str(p.trim()).map_err(|_| bad())?;
        let q = BigInt::from_str(q.trim()).map_err(|_| bad())?;
        if q.is_zero() {
            return Err(bad());
        }
        return Ok(Rational::new(p, q));
    }
    if let Some((whole, frac)) = s.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let negative = whole.trim_start().starts_with('-');
        let w = if whole.is_empty() || whole == "-" || whole == "+" {
            BigInt::zero()
        } else {
            BigInt::from_str(whole).map_err(|_| bad())?
        };
        let f = BigInt::from_str(frac).map_err(|_| bad())?;
        let scale = num_traits::pow(BigInt::from(10), frac.len());
        let mag = Rational::new(w.abs() * &scale + f, scale);
        return Ok(if negative { -mag } else { mag });
    }
    BigInt::from_str(s).map(Rational::from_integer).map_err(|_| bad())
}

/// Canonical `"p/q"` text; integers print with denominator 1.
pub fn format(q: &Rational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

pub fn mean<'a>(values: impl IntoIterator<Item = &'a Rational>) -> Option<Rational> {
    let mut sum = Rational::zero();
    let mut count = 0i64;
    for v in values {
        sum += v;
        count += 1;
    }
    (count > 0).then(|| sum / int(count))
}

/// A function on the vertex set of a graph with exact rational values.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct VertexFunction {
    values: Vec<Rational>,
}

impl VertexFunction {
    pub fn new(values: Vec<Rational>) -> Self {
        Self { values }
    }

    pub fn from_ints(values: &[i64]) -> Self {
        Self::new(values.iter().map(|&v| int(v)).collect())
    }

    pub fn from_f64_exact(values: &[f64]) -> Result<Self> {
        values
            .iter()
            .map(|&x| from_f64(x).ok_or_else(|| Error::InvalidParameters(format!("non-finite value {x}"))))
            .collect::<Result<Vec<_>>>()
            .map(Self::new)
    }

    /// `n` distinct rationals `p/q` with `|p| <= 1000`, `1 <= q <= 12`,
    /// drawn from a ChaCha8 stream.
    pub fn random_injective(n: usize, seed: u64) -> Self {
        use rand::{Rng, SeedableRng};
        assert!(n <= 50_000, "value pool too small for {n} vertices");
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let mut seen = std::collections::HashSet::with_capacity(n);
        let mut values = Vec::with_capacity(n);
        while values.len() < n {
            let q = ratio(rng.gen_range(-1000..=1000), rng.gen_range(1..=12));
            if seen.insert(q.clone()) {
                values.push(q);
            }
        }
        Self::new(values)
    }

    pub fn constant(n: usize, c: Rational) -> Self {
        Self::new(vec![c; n])
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    pub fn into_values(self) -> Vec<Rational> {
        self.values
    }

    pub fn get(&self, v: Vertex) -> Result<&Rational> {
        self.values.get(v as usize).ok_or(Error::MissingValue(v))
    }

    pub fn value(&self, v: Vertex) -> &Rational {
        &self.values[v as usize]
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.values.iter().map(to_f64).collect()
    }

    pub fn min(&self) -> Option<&Rational> {
        self.values.iter().min()
    }

    pub fn max(&self) -> Option<&Rational> {
        self.values.iter().max()
    }

    /// `a * f + b`, exactly.
    pub fn affine(&self, a: &Rational, b: &Rational) -> Self {
        Self::new(self.values.iter().map(|v| a * v + b).collect())
    }

    pub fn negated(&self) -> Self {
        Self::new(self.values.iter().map(|v| -v).collect())
    }

    pub fn is_constant(&self) -> bool {
        self.values.windows(2).all(|w| w[0] == w[1])
    }

    /// First vertex where the function attains `c`.
    pub fn attains(&self, c: &Rational) -> Option<Vertex> {
        self.values.iter().position(|v| v == c).map(|i| i as Vertex)
    }

    /// Sorted distinct values.
    pub fn range(&self) -> Vec<Rational> {
        let mut r = self.values.clone();
        r.sort();
        r.dedup();
        r
    }

    /// A level strictly between consecutive distinct values: the midpoint of
    /// the `gap`-th gap of the sorted range.
    pub fn gap_midpoint(&self, gap: usize) -> Option<Rational> {
        let r = self.range();
        let lo = r.get(gap)?;
        let hi = r.get(gap + 1)?;
        Some((lo + hi) / int(2))
    }

    pub fn sign_relative(&self, v: Vertex, c: &Rational) -> std::cmp::Ordering {
        self.values[v as usize].cmp(c)
    }
}

impl From<Vec<Rational>> for VertexFunction {
    fn from(values: Vec<Rational>) -> Self {
        Self::new(values)
    }
}

impl fmt::Display for VertexFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, v) in self.values.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, ")")
    }
}

pub fn half() -> Rational {
    Rational::new(BigInt::one(), BigInt::from(2))
}

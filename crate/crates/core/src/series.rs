//! Exact enumeration of weighted quadrant walks and the kernel functional
//! equation
//!
//! ```text
//! K(x,y,t) Q(x,y,t) = xy + K(x,0,t) Q(x,0,t) + K(0,y,t) Q(0,y,t) + t d(-1,-1) Q(0,0,t)
//! ```
//!
//! checked coefficient by coefficient in rational arithmetic.

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::Serialize;
use serde_json::{Map, Value};

use crate::error::{Error, Result};
use crate::model::{format_rational, WalkModel};

/// Exponent triple `(i, j, k)` of `x^i y^j t^k`.
pub type Monomial = (usize, usize, usize);

/// The walk generating series `Q(x,y,t) = Σ q(i,j,k) x^i y^j t^k` up to `t^N`.
///
/// Only nonzero coefficients are stored.
#[derive(Clone, Debug, PartialEq)]
pub struct TruncatedSeries {
    order: usize,
    terms: BTreeMap<Monomial, BigRational>,
}

impl TruncatedSeries {
    /// The truncation order `N`.
    pub fn order(&self) -> usize {
        self.order
    }

    /// `q(i,j,k)`; zero outside the stored support and beyond the order.
    pub fn coeff(&self, i: usize, j: usize, k: usize) -> BigRational {
        self.terms
            .get(&(i, j, k))
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    /// Nonzero coefficients in lexicographic `(i, j, k)` order.
    pub fn iter(&self) -> impl Iterator<Item = (Monomial, &BigRational)> {
        self.terms.iter().map(|(m, c)| (*m, c))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// The same series truncated at `t^m`, `m ≤ N`.
    pub fn restrict(&self, m: usize) -> TruncatedSeries {
        TruncatedSeries {
            order: m.min(self.order),
            terms: self
                .terms
                .iter()
                .filter(|((_, _, k), _)| *k <= m)
                .map(|(mono, c)| (*mono, c.clone()))
                .collect(),
        }
    }

    /// Total weight of walks of length `k`, `Σ_{i,j} q(i,j,k)`.
    pub fn length_total(&self, k: usize) -> BigRational {
        self.terms
            .iter()
            .filter(|((_, _, kk), _)| *kk == k)
            .map(|(_, c)| c.clone())
            .sum()
    }

    /// JSON object `"i,j,k" → "p/q"` over the nonzero coefficients.
    pub fn to_json(&self) -> Value {
        let mut map = Map::new();
        for ((i, j, k), c) in &self.terms {
            map.insert(format!("{i},{j},{k}"), Value::String(format_rational(c)));
        }
        Value::Object(map)
    }

    /// Replaces a coefficient. Used to build deliberately wrong series.
    pub fn with_coeff(mut self, mono: Monomial, value: BigRational) -> Self {
        if value.is_zero() {
            self.terms.remove(&mono);
        } else {
            self.terms.insert(mono, value);
        }
        self
    }
}

fn exact_grid(m: &WalkModel) -> Result<([[BigRational; 3]; 3], BigRational)> {
    let ex = m.exact_weights().ok_or(Error::NonRationalWeights)?;
    let mut grid: [[BigRational; 3]; 3] = Default::default();
    for i in -1..=1i8 {
        for j in -1..=1i8 {
            grid[(i + 1) as usize][(j + 1) as usize] = ex.d(i, j).clone();
        }
    }
    Ok((grid, ex.t().clone()))
}

/// Coefficients `q(i,j,k)`, `k ≤ n`, by the layer recursion
/// `q(i,j,k+1) = Σ d(a,b) q(i-a, j-b, k)` over all steps including `(0,0)`,
/// with both positions kept in the quadrant.
pub fn walk_series(m: &WalkModel, n: usize) -> Result<TruncatedSeries> {
    let (grid, _) = exact_grid(m)?;
    let steps: Vec<(i64, i64, &BigRational)> = (0..3)
        .flat_map(|a| (0..3).map(move |b| (a, b)))
        .filter(|&(a, b)| !grid[a][b].is_zero())
        .map(|(a, b)| (a as i64 - 1, b as i64 - 1, &grid[a][b]))
        .collect();

    let mut terms = BTreeMap::new();
    let mut layer: BTreeMap<(usize, usize), BigRational> = BTreeMap::new();
    layer.insert((0, 0), BigRational::from_integer(1.into()));
    for k in 0..=n {
        for (&(i, j), c) in &layer {
            terms.insert((i, j, k), c.clone());
        }
        if k == n {
            break;
        }
        let mut next: BTreeMap<(usize, usize), BigRational> = BTreeMap::new();
        for (&(i, j), c) in &layer {
            for &(a, b, d) in &steps {
                let (ni, nj) = (i as i64 + a, j as i64 + b);
                if ni < 0 || nj < 0 {
                    continue;
                }
                let slot = next
                    .entry((ni as usize, nj as usize))
                    .or_insert_with(BigRational::zero);
                *slot += c * d;
            }
        }
        next.retain(|_, c| !c.is_zero());
        layer = next;
    }
    Ok(TruncatedSeries { order: n, terms })
}

/// Outcome of checking the functional equation to order `N`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ResidualReport {
    pub order: usize,
    /// Largest absolute coefficient of the residual polynomial.
    #[serde(serialize_with = "ser_rational")]
    pub residual_max: BigRational,
    /// Number of nonzero residual coefficients.
    pub nonzero_terms: usize,
    /// Lowest nonzero monomial `(i, j, k)`, if any.
    pub first_nonzero: Option<Monomial>,
}

impl ResidualReport {
    pub fn is_exact(&self) -> bool {
        self.residual_max.is_zero()
    }
}

fn ser_rational<S: serde::Serializer>(r: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&format_rational(r))
}

type Poly = BTreeMap<Monomial, BigRational>;

fn add_term(p: &mut Poly, mono: Monomial, c: BigRational) {
    if c.is_zero() {
        return;
    }
    let slot = p.entry(mono).or_insert_with(BigRational::zero);
    *slot += c;
    if slot.is_zero() {
        p.remove(&mono);
    }
}

/// `K(x,y,t) = xy - t Σ d(a,b) x^(a+1) y^(b+1)` as a sparse polynomial.
fn kernel_poly(grid: &[[BigRational; 3]; 3]) -> Poly {
    let mut k = Poly::new();
    add_term(&mut k, (1, 1, 0), BigRational::from_integer(1.into()));
    for (a, row) in grid.iter().enumerate() {
        for (b, d) in row.iter().enumerate() {
            add_term(&mut k, (a, b, 1), -d.clone());
        }
    }
    k
}

/// `f · g` with every term beyond `t^n` dropped.
fn mul_truncated(f: &Poly, g: &Poly, n: usize) -> Poly {
    let mut out = Poly::new();
    for (&(i1, j1, k1), c1) in f {
        for (&(i2, j2, k2), c2) in g {
            if k1 + k2 <= n {
                add_term(&mut out, (i1 + i2, j1 + j2, k1 + k2), c1 * c2);
            }
        }
    }
    out
}

/// Residual of the functional equation for the kernel of `m` and the
/// supplied series, as an exact polynomial truncated at the series order.
pub fn functional_equation_residual(m: &WalkModel, q: &TruncatedSeries) -> Result<ResidualReport> {
    let (grid, _) = exact_grid(m)?;
    let n = q.order;
    let kernel = kernel_poly(&grid);
    let series: Poly = q.terms.clone();
    let at_y0: Poly = series
        .iter()
        .filter(|((_, j, _), _)| *j == 0)
        .map(|(m, c)| (*m, c.clone()))
        .collect();
    let at_x0: Poly = series
        .iter()
        .filter(|((i, _, _), _)| *i == 0)
        .map(|(m, c)| (*m, c.clone()))
        .collect();
    let at_00: Poly = at_y0
        .iter()
        .filter(|((i, _, _), _)| *i == 0)
        .map(|(m, c)| (*m, c.clone()))
        .collect();
    let k_y0: Poly = kernel
        .iter()
        .filter(|((_, j, _), _)| *j == 0)
        .map(|(m, c)| (*m, c.clone()))
        .collect();
    let k_x0: Poly = kernel
        .iter()
        .filter(|((i, _, _), _)| *i == 0)
        .map(|(m, c)| (*m, c.clone()))
        .collect();

    let mut residual = mul_truncated(&kernel, &series, n);
    add_term(&mut residual, (1, 1, 0), -BigRational::from_integer(1.into()));
    for (mono, c) in mul_truncated(&k_y0, &at_y0, n) {
        add_term(&mut residual, mono, -c);
    }
    for (mono, c) in mul_truncated(&k_x0, &at_x0, n) {
        add_term(&mut residual, mono, -c);
    }
    // t d(-1,-1) Q(0,0,t) = -K(0,0,t) Q(0,0,t)
    let d_sw = &grid[0][0];
    for ((i, j, k), c) in at_00 {
        if k < n {
            add_term(&mut residual, (i, j, k + 1), -(d_sw * c));
        }
    }

    let residual_max = residual
        .values()
        .map(|c| c.abs())
        .max()
        .unwrap_or_else(BigRational::zero);
    let first_nonzero = residual
        .keys()
        .min_by_key(|(i, j, k)| (*k, *i, *j))
        .copied();
    Ok(ResidualReport {
        order: n,
        residual_max,
        nonzero_terms: residual.len(),
        first_nonzero,
    })
}

/// Enumerates the series of `m` to order `n` and checks the functional
/// equation on it.
pub fn verify_functional_equation(m: &WalkModel, n: usize) -> Result<ResidualReport> {
    let q = walk_series(m, n)?;
    functional_equation_residual(m, &q)
}

//! Weighted small-step walk models.
//!
//! A model is a 3×3 grid of nonnegative weights `d(i,j)`, `i,j ∈ {-1,0,1}`,
//! together with the series variable `t ∈ (0,1)`. Models are normalized on
//! construction so that the weights sum to one; the surplus is folded into
//! `t`, which leaves `t·S(x,y)` (and hence the kernel) unchanged.
//!
//! Weights are held exactly as rationals whenever the input is rational. A
//! double-precision view is always available.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde_json::Value;

use crate::error::{Error, Result};

/// The eight nonzero directions in the order used throughout the crate.
pub const DIRECTIONS: [(i8, i8); 8] = [
    (-1, 1),
    (0, 1),
    (1, 1),
    (-1, 0),
    (1, 0),
    (-1, -1),
    (0, -1),
    (1, -1),
];

#[inline]
fn idx(i: i8, j: i8) -> (usize, usize) {
    debug_assert!((-1..=1).contains(&i) && (-1..=1).contains(&j));
    ((i + 1) as usize, (j + 1) as usize)
}

/// Exact rational data of a model built from rational input.
#[derive(Clone, Debug, PartialEq)]
pub struct ExactWeights {
    weights: [[BigRational; 3]; 3],
    t: BigRational,
    raw_sum: BigRational,
}

impl ExactWeights {
    pub fn d(&self, i: i8, j: i8) -> &BigRational {
        let (a, b) = idx(i, j);
        &self.weights[a][b]
    }

    pub fn t(&self) -> &BigRational {
        &self.t
    }

    pub fn raw_sum(&self) -> &BigRational {
        &self.raw_sum
    }
}

/// A normalized weighted walk model.
///
/// Equality compares the normalized weights and `t`; the pre-normalization
/// sum is metadata and does not take part.
#[derive(Clone, Debug)]
pub struct WalkModel {
    weights: [[f64; 3]; 3],
    t: f64,
    raw_sum: f64,
    exact: Option<ExactWeights>,
}

impl PartialEq for WalkModel {
    fn eq(&self, other: &Self) -> bool {
        match (&self.exact, &other.exact) {
            (Some(a), Some(b)) => a.weights == b.weights && a.t == b.t,
            _ => self.weights == other.weights && self.t == other.t,
        }
    }
}

/// Support of the weights, excluding the stay-put direction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct StepSet {
    bits: u8,
}

impl StepSet {
    pub fn from_steps(steps: &[(i8, i8)]) -> Self {
        let mut bits = 0u8;
        for &s in steps {
            if let Some(k) = DIRECTIONS.iter().position(|&d| d == s) {
                bits |= 1 << k;
            }
        }
        StepSet { bits }
    }

    /// Builds a step set from a bit mask over [`DIRECTIONS`].
    pub fn from_mask(mask: u8) -> Self {
        StepSet { bits: mask }
    }

    pub fn mask(&self) -> u8 {
        self.bits
    }

    pub fn contains(&self, step: (i8, i8)) -> bool {
        DIRECTIONS
            .iter()
            .position(|&d| d == step)
            .map(|k| self.bits & (1 << k) != 0)
            .unwrap_or(false)
    }

    pub fn is_empty(&self) -> bool {
        self.bits == 0
    }

    pub fn len(&self) -> usize {
        self.bits.count_ones() as usize
    }

    pub fn iter(&self) -> impl Iterator<Item = (i8, i8)> + '_ {
        DIRECTIONS
            .iter()
            .enumerate()
            .filter(move |(k, _)| self.bits & (1 << k) != 0)
            .map(|(_, &d)| d)
    }
}

impl fmt::Display for StepSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.iter().map(|(i, j)| format!("({i},{j})")).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

/// Parses a rational from `"p/q"`, a decimal string (`"0.25"`, `"1e-3"`) or
/// an integer string.
pub fn parse_rational(text: &str) -> Result<BigRational> {
    let s = text.trim();
    let bad = || Error::MalformedModel(format!("cannot parse number {text:?}"));
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| bad())?;
        let q: BigInt = q.trim().parse().map_err(|_| bad())?;
        if q.is_zero() {
            return Err(bad());
        }
        return Ok(BigRational::new(p, q));
    }
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(pos) => {
            let e: i32 = s[pos + 1..].parse().map_err(|_| bad())?;
            (&s[..pos], e)
        }
        None => (s, 0),
    };
    let (neg, mantissa) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let digits = format!("{int_part}{frac_part}");
    let mut num: BigInt = if digits.is_empty() {
        BigInt::zero()
    } else {
        digits.parse().map_err(|_| bad())?
    };
    if neg {
        num = -num;
    }
    let scale = exponent - frac_part.len() as i32;
    let ten = BigInt::from(10u32);
    let value = if scale >= 0 {
        BigRational::from_integer(num * num_traits::pow(ten, scale as usize))
    } else {
        BigRational::new(num, num_traits::pow(ten, (-scale) as usize))
    };
    Ok(value)
}

/// Formats a rational as `"p/q"`, or `"p"` for integers.
pub fn format_rational(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub(crate) fn rat_to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

fn value_to_rational(v: &Value) -> Result<BigRational> {
    match v {
        Value::Number(n) => parse_rational(&n.to_string()),
        Value::String(s) => parse_rational(s),
        other => Err(Error::MalformedModel(format!(
            "expected a number or a \"p/q\" string, found {other}"
        ))),
    }
}

impl WalkModel {
    /// Builds a model from exact weights given as `((i, j), d)` pairs.
    /// Missing directions have weight zero.
    pub fn exact(weights: &[((i8, i8), BigRational)], t: BigRational) -> Result<Self> {
        let mut grid: [[BigRational; 3]; 3] = Default::default();
        for ((i, j), w) in weights {
            let (a, b) = idx(*i, *j);
            grid[a][b] = w.clone();
        }
        Self::from_exact_grid(grid, t)
    }

    /// Builds a model from double-precision weights. Exact operations are
    /// unavailable on the result.
    pub fn approx(weights: &[((i8, i8), f64)], t: f64) -> Result<Self> {
        let mut grid = [[0.0; 3]; 3];
        for &((i, j), w) in weights {
            let (a, b) = idx(i, j);
            grid[a][b] = w;
        }
        Self::from_f64_grid(grid, t)
    }

    /// Equal weights on `steps` (no stay-put weight).
    pub fn equal_weights(steps: &[(i8, i8)], t: BigRational) -> Result<Self> {
        let n = steps.len().max(1);
        let w = BigRational::new(BigInt::one(), BigInt::from(n));
        let pairs: Vec<_> = steps.iter().map(|&s| (s, w.clone())).collect();
        Self::exact(&pairs, t)
    }

    /// Exact grid indexed `[i+1][j+1]`.
    fn from_exact_grid(grid: [[BigRational; 3]; 3], t: BigRational) -> Result<Self> {
        for i in -1..=1i8 {
            for j in -1..=1i8 {
                let (a, b) = idx(i, j);
                if grid[a][b].is_negative() {
                    return Err(Error::NegativeWeight {
                        i,
                        j,
                        value: format_rational(&grid[a][b]),
                    });
                }
            }
        }
        let nonzero_step = DIRECTIONS.iter().any(|&(i, j)| {
            let (a, b) = idx(i, j);
            !grid[a][b].is_zero()
        });
        if !nonzero_step {
            return Err(Error::EmptyModel);
        }
        let sum: BigRational = grid.iter().flatten().cloned().sum();
        let mut weights = grid;
        let mut t = t;
        if !sum.is_one() {
            for w in weights.iter_mut().flatten() {
                *w = &*w / &sum;
            }
            t = &t * &sum;
        }
        if !(t.is_positive() && t < BigRational::one()) {
            return Err(Error::TOutOfRange(format_rational(&t)));
        }
        let mut approx = [[0.0; 3]; 3];
        for (a, row) in weights.iter().enumerate() {
            for (b, w) in row.iter().enumerate() {
                approx[a][b] = rat_to_f64(w);
            }
        }
        Ok(WalkModel {
            weights: approx,
            t: rat_to_f64(&t),
            raw_sum: rat_to_f64(&sum),
            exact: Some(ExactWeights {
                weights,
                t,
                raw_sum: sum,
            }),
        })
    }

    fn from_f64_grid(grid: [[f64; 3]; 3], t: f64) -> Result<Self> {
        for i in -1..=1i8 {
            for j in -1..=1i8 {
                let (a, b) = idx(i, j);
                let w = grid[a][b];
                if !w.is_finite() || w < 0.0 {
                    return Err(Error::NegativeWeight {
                        i,
                        j,
                        value: w.to_string(),
                    });
                }
            }
        }
        if DIRECTIONS.iter().all(|&(i, j)| {
            let (a, b) = idx(i, j);
            grid[a][b] == 0.0
        }) {
            return Err(Error::EmptyModel);
        }
        let sum: f64 = grid.iter().flatten().sum();
        let mut weights = grid;
        let mut t = t;
        if sum != 1.0 {
            for w in weights.iter_mut().flatten() {
                *w /= sum;
            }
            t *= sum;
        }
        if !(t > 0.0 && t < 1.0) {
            return Err(Error::TOutOfRange(t.to_string()));
        }
        Ok(WalkModel {
            weights,
            t,
            raw_sum: sum,
            exact: None,
        })
    }

    /// Double-precision weight `d(i,j)`.
    pub fn d(&self, i: i8, j: i8) -> f64 {
        let (a, b) = idx(i, j);
        self.weights[a][b]
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    /// Sum of the weights before normalization.
    pub fn raw_sum(&self) -> f64 {
        self.raw_sum
    }

    /// Exact weights, when the model was built from rational input.
    pub fn exact_weights(&self) -> Option<&ExactWeights> {
        self.exact.as_ref()
    }

    pub fn is_exact(&self) -> bool {
        self.exact.is_some()
    }

    /// Same weights with a different `t`. The new `t` is taken as already
    /// normalized.
    pub fn with_t(&self, t: f64) -> Result<Self> {
        if !(t > 0.0 && t < 1.0) {
            return Err(Error::TOutOfRange(t.to_string()));
        }
        let mut m = self.clone();
        m.t = t;
        if let Some(ex) = m.exact.as_mut() {
            match BigRational::from_float(t) {
                Some(r) => ex.t = r,
                None => m.exact = None,
            }
        }
        Ok(m)
    }

    /// Same weights with an exact `t`.
    pub fn with_exact_t(&self, t: BigRational) -> Result<Self> {
        match &self.exact {
            Some(ex) => Self::from_exact_grid(ex.weights.clone(), t),
            None => Self::from_f64_grid(self.weights, rat_to_f64(&t)),
        }
    }

    /// Model with weights `d'(i,j) = d(sx·i, sy·j)`, `sx, sy ∈ {1,-1}`.
    pub fn reflected(&self, sx: i8, sy: i8) -> Self {
        self.remap(|i, j| (sx * i, sy * j))
    }

    /// Model with weights `d'(i,j) = d(j,i)`.
    pub fn transposed(&self) -> Self {
        self.remap(|i, j| (j, i))
    }

    fn remap(&self, src: impl Fn(i8, i8) -> (i8, i8)) -> Self {
        let mut out = self.clone();
        for i in -1..=1i8 {
            for j in -1..=1i8 {
                let (a, b) = idx(i, j);
                let (si, sj) = src(i, j);
                out.weights[a][b] = self.d(si, sj);
                if let (Some(dst), Some(ex)) = (out.exact.as_mut(), self.exact.as_ref()) {
                    dst.weights[a][b] = ex.d(si, sj).clone();
                }
            }
        }
        out
    }

    /// Serializes the model in the input document layout.
    pub fn to_json(&self) -> Value {
        let rows: Vec<Value> = [1i8, 0, -1]
            .iter()
            .map(|&j| {
                Value::Array(
                    [-1i8, 0, 1]
                        .iter()
                        .map(|&i| match &self.exact {
                            Some(ex) => Value::String(format_rational(ex.d(i, j))),
                            None => serde_json::json!(self.d(i, j)),
                        })
                        .collect(),
                )
            })
            .collect();
        let t = match &self.exact {
            Some(ex) => Value::String(format_rational(&ex.t)),
            None => serde_json::json!(self.t),
        };
        serde_json::json!({ "weights": rows, "t": t })
    }
}

/// Parses a model document.
///
/// Layout: `{"weights": [[d(-1,1), d(0,1), d(1,1)], [d(-1,0), d(0,0), d(1,0)],
/// [d(-1,-1), d(0,-1), d(1,-1)]], "t": ...}`, top row `j = 1`. Entries are JSON
/// numbers, decimal strings or `"p/q"` strings and are read exactly. Unknown
/// top-level fields are ignored.
pub fn parse_model(text: &str) -> Result<WalkModel> {
    let doc: Value =
        serde_json::from_str(text).map_err(|e| Error::MalformedModel(e.to_string()))?;
    model_from_value(&doc)
}

pub fn model_from_value(doc: &Value) -> Result<WalkModel> {
    let obj = doc
        .as_object()
        .ok_or_else(|| Error::MalformedModel("top level must be an object".into()))?;
    let rows = obj
        .get("weights")
        .and_then(Value::as_array)
        .ok_or_else(|| Error::MalformedModel("missing \"weights\" array".into()))?;
    if rows.len() != 3 {
        return Err(Error::MalformedModel("\"weights\" must have 3 rows".into()));
    }
    let mut grid: [[BigRational; 3]; 3] = Default::default();
    for (r, row) in rows.iter().enumerate() {
        let row = row
            .as_array()
            .filter(|row| row.len() == 3)
            .ok_or_else(|| Error::MalformedModel(format!("row {r} must have 3 entries")))?;
        let j = 1 - r as i8;
        for (c, entry) in row.iter().enumerate() {
            let i = c as i8 - 1;
            let (a, b) = idx(i, j);
            grid[a][b] = value_to_rational(entry)?;
        }
    }
    let t = obj
        .get("t")
        .ok_or_else(|| Error::MalformedModel("missing \"t\"".into()))
        .and_then(value_to_rational)?;
    WalkModel::from_exact_grid(grid, t)
}

/// Exact support of the weights, excluding `(0,0)`.
pub fn step_set(m: &WalkModel) -> StepSet {
    let steps: Vec<(i8, i8)> = DIRECTIONS
        .iter()
        .copied()
        .filter(|&(i, j)| match m.exact_weights() {
            Some(ex) => !ex.d(i, j).is_zero(),
            None => m.d(i, j) != 0.0,
        })
        .collect();
    StepSet::from_steps(&steps)
}

//! Elliptic integrals `∫ dx/√D` between roots of a real quartic.

use std::f64::consts::FRAC_PI_2;
use std::sync::OnceLock;

use num_complex::Complex64;
use serde::Serialize;

use crate::classify::{quartic_roots, DEFAULT_MERGE_TOL};
use crate::error::{Error, Result};
use crate::kernel::QuarticForm;

/// Sign convention for the integrand.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum IntegralKind {
    /// `1/√|D|` on an interval where `D < 0`.
    AbsSqrt,
    /// `1/√D` on an interval where `D > 0`.
    Sqrt,
}

const GL_ORDER: usize = 24;
const TARGET: f64 = 1e-13;
const MAX_DEPTH: u32 = 30;

/// Nodes and weights of the `n`-point Gauss–Legendre rule on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

fn rule() -> &'static (Vec<f64>, Vec<f64>) {
    static RULE: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    RULE.get_or_init(|| gauss_legendre(GL_ORDER))
}

fn gl(f: &impl Fn(f64) -> f64, a: f64, b: f64) -> f64 {
    let (nodes, weights) = rule();
    let (mid, half) = ((a + b) / 2.0, (b - a) / 2.0);
    nodes
        .iter()
        .zip(weights)
        .map(|(x, w)| w * f(mid + half * x))
        .sum::<f64>()
        * half
}

fn adaptive(f: &impl Fn(f64) -> f64, a: f64, b: f64, whole: f64, tol: f64, depth: u32) -> f64 {
    let m = (a + b) / 2.0;
    let left = gl(f, a, m);
    let right = gl(f, m, b);
    let split = left + right;
    if depth >= MAX_DEPTH || (split - whole).abs() <= tol.max(4.0 * f64::EPSILON * split.abs()) {
        return split;
    }
    adaptive(f, a, m, left, tol, depth + 1) + adaptive(f, m, b, right, tol, depth + 1)
}

/// Adaptive Gauss–Legendre quadrature of a smooth function.
pub fn integrate(f: impl Fn(f64) -> f64, a: f64, b: f64) -> f64 {
    let whole = gl(&f, a, b);
    let tol = TARGET * whole.abs().max(1.0);
    adaptive(&f, a, b, whole, tol, 0)
}

/// The quartic in factored form `c ∏ (x - r)` around a pair of real roots.
struct Factored {
    lead: f64,
    lo: f64,
    hi: f64,
    others: Vec<Complex64>,
}

fn factor_around(d: &QuarticForm, lo: f64, hi: f64) -> Result<Factored> {
    let roots = quartic_roots(d, DEFAULT_MERGE_TOL)?;
    let mut finite: Vec<Complex64> = Vec::new();
    for r in &roots {
        if let Some(z) = r.point.to_affine() {
            for _ in 0..r.multiplicity {
                finite.push(z);
            }
        }
    }
    let take_nearest = |pool: &mut Vec<Complex64>, x: f64| -> Result<f64> {
        let (idx, dist) = pool
            .iter()
            .enumerate()
            .map(|(i, z)| (i, (z - x).norm()))
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .ok_or(Error::NonRootEndpoints(x))?;
        if dist > 1e-9 * x.abs().max(1.0) {
            return Err(Error::NonRootEndpoints(x));
        }
        Ok(pool.remove(idx).re)
    };
    let lo_r = take_nearest(&mut finite, lo)?;
    let hi_r = take_nearest(&mut finite, hi)?;
    let deg = d.coeffs.iter().rposition(|c| c.norm() != 0.0).unwrap_or(0);
    Ok(Factored {
        lead: d.coeffs[deg].re,
        lo: lo_r,
        hi: hi_r,
        others: finite,
    })
}

impl Factored {
    fn check_sign(&self, d: &QuarticForm, kind: IntegralKind) -> Result<()> {
        let inside = self
            .others
            .iter()
            .any(|z| z.im.abs() <= 1e-12 * z.norm().max(1.0) && z.re > self.lo && z.re < self.hi);
        let mid = d.eval_real((self.lo + self.hi) / 2.0);
        let ok = match kind {
            IntegralKind::AbsSqrt => mid < 0.0,
            IntegralKind::Sqrt => mid > 0.0,
        };
        if inside || !ok {
            Err(Error::SignMismatch {
                lo: self.lo,
                hi: self.hi,
            })
        } else {
            Ok(())
        }
    }

    /// `dx/√|D|` after `x = lo + (hi - lo) sin²θ`, as a function of `θ`.
    fn integrand(&self) -> impl Fn(f64) -> f64 + '_ {
        let len = self.hi - self.lo;
        move |th: f64| {
            let s = th.sin();
            let x = self.lo + len * s * s;
            let prod: f64 = self.others.iter().map(|r| (x - r).norm()).product();
            2.0 / (self.lead.abs() * prod).sqrt()
        }
    }
}

/// `∫_lo^hi dx/√|D|` or `∫_lo^hi dx/√D` between consecutive real roots.
pub fn period_integral(d: &QuarticForm, lo: f64, hi: f64, kind: IntegralKind) -> Result<f64> {
    if !(lo < hi) {
        return Err(Error::SignMismatch { lo, hi });
    }
    let f = factor_around(d, lo, hi)?;
    f.check_sign(d, kind)?;
    Ok(integrate(f.integrand(), 0.0, FRAC_PI_2))
}

/// `∫_lo^x dx/√D` for `x` between the consecutive roots `lo < hi`.
pub fn partial_integral(d: &QuarticForm, lo: f64, hi: f64, x: f64, kind: IntegralKind) -> Result<f64> {
    if !(lo < hi) {
        return Err(Error::SignMismatch { lo, hi });
    }
    let f = factor_around(d, lo, hi)?;
    f.check_sign(d, kind)?;
    let frac = ((x - f.lo) / (f.hi - f.lo)).clamp(0.0, 1.0);
    let th = frac.sqrt().asin();
    Ok(integrate(f.integrand(), 0.0, th))
}

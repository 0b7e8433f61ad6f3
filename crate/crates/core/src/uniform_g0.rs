//! Rational parametrization of genus-zero kernel curves.
//!
//! A genus-zero model is first reduced to the family whose singular point is
//! `([0:1],[0:1])`. There the discriminant is `x²(α2 + α3 x + α4 x²)` and
//!
//! ```text
//! x(s) = 4α2 / (R (s + 1/s) - 2α3),       R  = √(α3² - 4α2α4)
//! y(s) = 4β2 / (Rβ (s/λ + λ/s) - 2β3),    Rβ = √(β3² - 4β2β4)
//! ```
//!
//! parametrizes the curve, with `ι1`, `ι2`, `σ` pulled back to `s ↦ 1/s`,
//! `s ↦ q/s` and `s ↦ qs` where `q = λ²`.

use std::f64::consts::PI;
use std::fmt::Write as _;

use num_complex::Complex64;
use serde::Serialize;

use crate::classify::{degeneracy_of, half_plane_witness, G0Family};
use crate::error::{Error, Result};
use crate::kernel::{discriminant, kernel_residual, Axis, CurvePoint, ProjPoint};
use crate::model::{step_set, WalkModel};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GenusZeroUniformization {
    /// Multiplier of `σ`, the representative with `|q| > 1`.
    pub q: f64,
    pub lambda: Complex64,
    /// Discriminant coefficients of the reduced model.
    pub alpha: [f64; 5],
    pub beta: [f64; 5],
    pub family: G0Family,
    /// The values used for `√(α3² - 4α2α4)` and `√(β3² - 4β2β4)`.
    pub sqrt_alpha: Complex64,
    pub sqrt_beta: Complex64,
}

fn g0_family(m: &WalkModel) -> Result<G0Family> {
    let steps = step_set(m);
    let deg = degeneracy_of(&steps);
    if deg.is_degenerate() {
        return Err(Error::DegenerateModel(deg));
    }
    half_plane_witness(&steps)
        .and_then(G0Family::from_normal)
        .ok_or(Error::WrongGenus {
            expected: 0,
            found: 1,
        })
}

/// `{q, 1/q}` with `|q| > 1` first, from the closed formula in the weights
/// `d(0,0)`, `d(1,-1)`, `d(-1,1)` of the reduced model.
pub fn q_candidates(m: &WalkModel) -> Result<(f64, f64)> {
    let family = g0_family(m)?;
    let r = family.reduce(m);
    let t = r.t();
    let a = 1.0 - r.d(0, 0) * t;
    let s = (a * a - 4.0 * r.d(1, -1) * r.d(-1, 1) * t * t).sqrt();
    let q1 = (-a - s) / (-a + s);
    let q2 = (-a + s) / (-a - s);
    Ok(if q1.abs() >= q2.abs() { (q1, q2) } else { (q2, q1) })
}

fn quad(a: Complex64, b: Complex64) -> Option<ProjPoint> {
    ProjPoint::new(a, b)
}

impl GenusZeroUniformization {
    /// `φ` on the reduced curve.
    fn phi_reduced(&self, s: &ProjPoint) -> CurvePoint {
        let (s0, s1) = (s.c0(), s.c1());
        let (a2, a3) = (self.alpha[2], self.alpha[3]);
        let (b2, b3) = (self.beta[2], self.beta[3]);
        let l = self.lambda;
        let x = quad(
            s0 * s1 * (4.0 * a2),
            self.sqrt_alpha * (s0 * s0 + s1 * s1) - s0 * s1 * (2.0 * a3),
        );
        let y = quad(
            l * s0 * s1 * (4.0 * b2),
            self.sqrt_beta * (s0 * s0 + l * l * s1 * s1) - l * s0 * s1 * (2.0 * b3),
        );
        CurvePoint::new(
            x.unwrap_or_else(ProjPoint::zero),
            y.unwrap_or_else(ProjPoint::zero),
        )
    }

    /// `φ([s0:s1])` on the original curve.
    pub fn phi(&self, s: &ProjPoint) -> CurvePoint {
        let (sx, sy) = self.family.swaps();
        self.phi_reduced(s).swapped(sx, sy)
    }

    pub fn phi_affine(&self, s: Complex64) -> CurvePoint {
        self.phi(&ProjPoint::affine(s))
    }

    /// The singular point `φ(0) = φ(∞)`.
    pub fn omega(&self) -> CurvePoint {
        self.family.omega()
    }
}

/// Builds the parametrization. The sign and inversion ambiguity in `λ` is
/// resolved by testing the four candidates `±√q`, `±1/√q` on the curve and
/// keeping one with `|λ| > 1`.
pub fn uniformize_genus0(m: &WalkModel) -> Result<GenusZeroUniformization> {
    let family = g0_family(m)?;
    let reduced = family.reduce(m);
    let (q_big, _) = q_candidates(m)?;
    let alpha_c = discriminant(&reduced, Axis::X).coeffs;
    let beta_c = discriminant(&reduced, Axis::Y).coeffs;
    let alpha = alpha_c.map(|c| c.re);
    let beta = beta_c.map(|c| c.re);
    let sqrt_alpha = Complex64::new(alpha[3] * alpha[3] - 4.0 * alpha[2] * alpha[4], 0.0).sqrt();
    let sqrt_beta = Complex64::new(beta[3] * beta[3] - 4.0 * beta[2] * beta[4], 0.0).sqrt();
    let root = Complex64::new(q_big, 0.0).sqrt();
    let candidates = [root, -root, root.inv(), -root.inv()];
    let probes = [
        Complex64::new(0.7, 0.3),
        Complex64::new(1.9, -0.4),
        Complex64::new(-0.4, 1.1),
        Complex64::new(-2.3, -0.8),
    ];
    let mut scored: Vec<(f64, GenusZeroUniformization)> = candidates
        .iter()
        .map(|&lambda| {
            let u = GenusZeroUniformization {
                q: (lambda * lambda).re,
                lambda,
                alpha,
                beta,
                family,
                sqrt_alpha,
                sqrt_beta,
            };
            let worst = probes
                .iter()
                .map(|&s| kernel_residual(m, &u.phi_affine(s)))
                .fold(0.0, f64::max);
            (worst, u)
        })
        .collect();
    scored.sort_by(|a, b| a.0.total_cmp(&b.0));
    let best = scored[0].0;
    if !(best <= 1e-9) {
        return Err(Error::InternalInconsistency(format!(
            "no choice of lambda puts the parametrization on the curve (residual {best:.3e})"
        )));
    }
    let accept = (best * 1e3).max(1e-11);
    let chosen = scored
        .into_iter()
        .filter(|(r, _)| *r <= accept)
        .map(|(_, u)| u)
        .max_by(|a, b| a.lambda.norm().total_cmp(&b.lambda.norm()))
        .expect("at least the best candidate");
    Ok(chosen)
}

/// Points `s = r·e^{iθ}` on an `n_radii × n_angles` polar grid, radii
/// log-spaced in `[1/10, 10]`.
pub fn polar_grid(n_radii: usize, n_angles: usize) -> Vec<Complex64> {
    let mut out = Vec::with_capacity(n_radii * n_angles);
    for i in 0..n_radii {
        let e = if n_radii == 1 {
            0.0
        } else {
            -1.0 + 2.0 * i as f64 / (n_radii - 1) as f64
        };
        let r = 10f64.powf(e);
        for j in 0..n_angles {
            let th = 2.0 * PI * j as f64 / n_angles as f64;
            out.push(Complex64::from_polar(r, th));
        }
    }
    out
}

fn affine_cols(p: &ProjPoint) -> String {
    match p.to_affine() {
        Some(z) => format!("{:.17e},{:.17e}", z.re, z.im),
        None => "inf,inf".to_string(),
    }
}

/// `s_re,s_im,x_re,x_im,y_re,y_im` rows for the given parameters.
pub fn sample_csv(u: &GenusZeroUniformization, grid: &[Complex64]) -> String {
    let mut out = String::from("s_re,s_im,x_re,x_im,y_re,y_im\n");
    for &s in grid {
        let p = u.phi_affine(s);
        let _ = writeln!(
            out,
            "{:.17e},{:.17e},{},{}",
            s.re,
            s.im,
            affine_cols(&p.x),
            affine_cols(&p.y)
        );
    }
    out
}

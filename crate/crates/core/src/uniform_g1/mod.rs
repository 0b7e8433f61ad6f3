//! Elliptic uniformization of genus-one kernel curves.
//!
//! With `D(x) = Δ1([x:1])` and the branch points labeled so that `D < 0` on
//! `(a3, a4)` and `D > 0` on `(a4, a1)`, the periods are
//!
//! ```text
//! ω1 = i ∫_{a3}^{a4} dx/√|D|,   ω2 = ∫_{a4}^{a1} dx/√D,   ω3 = ∫_{a4}^{X(b4)} dx/√D,
//! ```
//!
//! and `Λ(w) = (x(w), y(w))` with `x(w) = a4 + D'(a4)/(℘(w) - D''(a4)/6)` and
//! `z = 2A(x)y + B(x) = D'(a4)℘'(w) / (2(℘(w) - D''(a4)/6)²)`. When `a4` is
//! the point at infinity the same construction runs in the chart `1/x`,
//! where it only involves `α2` and `α3`.
//!
//! The integrals are computed after a rotation of the real projective line
//! that keeps all four branch points finite, which leaves `dx/√D` invariant.

mod quadrature;
mod weierstrass;

use std::f64::consts::PI;
use std::fmt::Write as _;

use num_complex::Complex64;
use serde::Serialize;

pub use quadrature::{gauss_legendre, integrate, partial_integral, period_integral, IntegralKind};
pub use weierstrass::{weierstrass, Lattice};

use crate::classify::branch_points;
use crate::error::{Error, Result};
use crate::involutions::{double_root, fiber_roots, Direction, Iota, KernelCurve};
use crate::kernel::{discriminant, Axis, CurvePoint, ProjPoint, QuarticForm};
use crate::model::WalkModel;

/// Chordal distance under which two candidate images count as equal when
/// the shift period is selected.
const SHIFT_MATCH_TOL: f64 = 1e-6;

/// The local data of the `Λ` formula: a root `e` of the quartic in the chart
/// used, `D'(e)` and `D''(e)/6`.
#[derive(Clone, Copy, Debug, PartialEq)]
struct LambdaRow {
    /// Work in the chart `1/x`, where `e = 0`, `D'(e) = α3`, `D''(e)/6 = α2/3`.
    flipped: bool,
    e: f64,
    d1: f64,
    c: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct GenusOneUniformization {
    pub omega1: Complex64,
    pub omega2: f64,
    pub omega3: f64,
    pub g2: Complex64,
    pub g3: Complex64,
    /// `D(x) = Σ c_i x^i`.
    pub d: [f64; 5],
    /// `[a1, a2, a3, a4]`.
    pub branch_a: [ProjPoint; 4],
    /// `[b1, b2, b3, b4]`.
    pub branch_b: [ProjPoint; 4],
    pub a4_at_infinity: bool,
    /// Every value of the shift period that was tried.
    pub omega3_candidates: Vec<f64>,
    #[serde(skip)]
    lattice: Lattice,
    #[serde(skip)]
    row: LambdaRow,
    #[serde(skip)]
    curve: KernelCurve,
}

/// Pullback of a binary quartic along `[x0:x1] = [m00 u0 + m01 u1 : m10 u0 + m11 u1]`.
fn pullback(f: &QuarticForm, m: [[f64; 2]; 2]) -> QuarticForm {
    // powers of the two linear forms, as coefficient lists in u0
    let lin0 = [m[0][1], m[0][0]];
    let lin1 = [m[1][1], m[1][0]];
    let mul = |a: &[f64], b: &[f64]| -> Vec<f64> {
        let mut out = vec![0.0; a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                out[i + j] += x * y;
            }
        }
        out
    };
    let mut out = [0.0; 5];
    for (i, c) in f.coeffs.iter().enumerate() {
        let mut term = vec![c.re];
        for _ in 0..i {
            term = mul(&term, &lin0);
        }
        for _ in i..4 {
            term = mul(&term, &lin1);
        }
        for (k, v) in term.iter().enumerate() {
            out[k] += v;
        }
    }
    QuarticForm::from_real(out)
}

fn angle(p: &ProjPoint) -> f64 {
    2.0 * p.c0().re.atan2(p.c1().re)
}

/// The rotation `x = R(u)` of the real projective line by `phi` in angle,
/// together with helpers to map points to `u`.
struct Rotation {
    phi: f64,
}

impl Rotation {
    fn matrix(&self) -> [[f64; 2]; 2] {
        let (s, c) = (self.phi / 2.0).sin_cos();
        [[c, s], [-s, c]]
    }

    /// Affine `u` of a real point `x`; finite for every `x` except `R(∞)`.
    fn to_u(&self, x: &ProjPoint) -> f64 {
        let th = (angle(x) - self.phi + PI).rem_euclid(2.0 * PI) - PI;
        (th / 2.0).tan()
    }
}

impl GenusOneUniformization {
    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    pub fn curve(&self) -> &KernelCurve {
        &self.curve
    }

    /// `Λ(w)`. At lattice points the limit point above `a4` is returned.
    pub fn lambda_map(&self, w: Complex64) -> CurvePoint {
        match self.lattice.weierstrass(w) {
            Ok((p, dp)) => self.point_from(p, dp),
            Err(_) => self.base_point(),
        }
    }

    fn base_point(&self) -> CurvePoint {
        let x = self.branch_a[3];
        let [a, b, c] = self.curve.fiber_quadratic(Iota::One, &x);
        let v1 = (-b, a * 2.0);
        let v2 = (c * 2.0, -b);
        let (u0, u1) = if v1.0.norm().max(v1.1.norm()) >= v2.0.norm().max(v2.1.norm()) {
            v1
        } else {
            v2
        };
        CurvePoint::new(x, ProjPoint::new(u0, u1).unwrap_or_else(ProjPoint::zero))
    }

    fn point_from(&self, wp: Complex64, dwp: Complex64) -> CurvePoint {
        let LambdaRow { flipped, e, d1, c } = self.row;
        let p = wp - c;
        let one = Complex64::new(1.0, 0.0);
        let (u0, u1, zh) = if p.norm() <= 1.0 {
            (p * e + d1, p, dwp * d1 / 2.0)
        } else {
            (e + d1 / p, one, dwp * d1 / (p * p * 2.0))
        };
        let (x0, x1) = if flipped { (u1, u0) } else { (u0, u1) };
        let dec = self.curve.decomposition();
        let ev = |q: &crate::kernel::BinaryQuadratic<f64>| {
            x1 * x1 * q.c[0] + x0 * x1 * q.c[1] + x0 * x0 * q.c[2]
        };
        let (ah, bh, ch) = (ev(&dec.a_poly), ev(&dec.b_poly), ev(&dec.c_poly));
        let v1 = (zh - bh, ah * 2.0);
        let v2 = (-ch * 2.0, bh + zh);
        let (y0, y1) = if v1.0.norm().max(v1.1.norm()) >= v2.0.norm().max(v2.1.norm()) {
            v1
        } else {
            v2
        };
        let x = ProjPoint::new(x0, x1).unwrap_or_else(|| self.branch_a[3]);
        match ProjPoint::new(y0, y1) {
            Some(y) => CurvePoint::new(x, y),
            None => self.base_point(),
        }
    }

    /// The invariants of the quartic computed algebraically from the
    /// expansion at `a4`; they agree with the lattice invariants when the
    /// periods are right.
    pub fn algebraic_invariants(&self) -> (f64, f64) {
        let LambdaRow { flipped, e, .. } = self.row;
        let coeffs = if flipped {
            let mut r = self.d;
            r.reverse();
            r
        } else {
            self.d
        };
        // Taylor coefficients of the local quartic at e
        let deriv = |k: usize| -> f64 {
            (k..5)
                .map(|i| {
                    let fall: f64 = ((i - k + 1)..=i).map(|v| v as f64).product();
                    coeffs[i] * fall * e.powi((i - k) as i32)
                })
                .sum()
        };
        let (d1, d2, d3, d4) = (deriv(1), deriv(2), deriv(3), deriv(4));
        let g2 = d2 * d2 / 3.0 - 2.0 / 3.0 * d1 * d3;
        let g3 = -(d2 * d2 * d2 / 27.0 - d1 * d2 * d3 / 9.0 + d1 * d1 * d4 / 6.0);
        (g2, g3)
    }
}

/// The two roots in `x` of `K̄(x, y) = 0` for fixed `y`.
pub fn x_partners(m: &WalkModel, y: &ProjPoint) -> Result<(ProjPoint, ProjPoint)> {
    let curve = KernelCurve::new(m)?;
    fiber_roots(curve.fiber_quadratic(Iota::Two, y))
}

/// Periods, invariants and the map `Λ` for a genus-one model.
pub fn uniformize_genus1(m: &WalkModel) -> Result<GenusOneUniformization> {
    let curve = KernelCurve::new(m)?;
    if curve.genus() != 1 {
        return Err(Error::WrongGenus {
            expected: 1,
            found: 0,
        });
    }
    let bd = branch_points(m)?;
    let [a1, a2, a3, a4] = bd.a;
    let dform = discriminant(m, Axis::X);
    let d = dform.coeffs.map(|c| c.re);

    // send u = ∞ to the middle of the arc from a2 up to a3
    let (t2, t3) = (angle(&a2), angle(&a3));
    let gap = (t3 - t2).rem_euclid(2.0 * PI);
    let rot = Rotation {
        phi: t2 + gap / 2.0 - PI,
    };
    let du = pullback(&dform, rot.matrix());
    let (u1, u3, u4) = (rot.to_u(&a1), rot.to_u(&a3), rot.to_u(&a4));

    let omega1 = Complex64::new(0.0, period_integral(&du, u3, u4, IntegralKind::AbsSqrt)?);
    let omega2 = period_integral(&du, u4, u1, IntegralKind::Sqrt)?;
    let lattice = Lattice::new(omega1, Complex64::new(omega2, 0.0))?;

    let a4_at_infinity = a4.is_infinity(0.0);
    let row = if a4_at_infinity {
        LambdaRow {
            flipped: true,
            e: 0.0,
            d1: d[3],
            c: d[2] / 3.0,
        }
    } else {
        let e = a4.to_affine().expect("finite").re;
        let (_, d1, d2) = dform.derivatives(Complex64::new(e, 0.0));
        LambdaRow {
            flipped: false,
            e,
            d1: d1.re,
            c: d2.re / 6.0,
        }
    };

    let mut u = GenusOneUniformization {
        omega1,
        omega2,
        omega3: f64::NAN,
        g2: lattice.g2,
        g3: lattice.g3,
        d,
        branch_a: bd.a,
        branch_b: bd.b,
        a4_at_infinity,
        omega3_candidates: Vec::new(),
        lattice,
        row,
        curve,
    };

    // the fixed points of ι2 above the oval (a4, a1) sit at ω3/2 and
    // (ω2 + ω3)/2; the integral from a4 reaches them at ω3 or ω2 - ω3
    let mut candidates: Vec<f64> = Vec::new();
    for b in [bd.b[3], bd.b[0], bd.b[1], bd.b[2]] {
        let x = double_root(u.curve.fiber_quadratic(Iota::Two, &b))?;
        if x.max_imag_ratio() > 1e-7 {
            continue;
        }
        let xr = ProjPoint::from_real(x.c0().re, x.c1().re).expect("real point");
        let ux = rot.to_u(&xr);
        if !(ux > u4 && ux < u1) {
            continue;
        }
        let c = partial_integral(&du, u4, u1, ux, IntegralKind::Sqrt)?;
        for v in [c, omega2 - c] {
            if !candidates.iter().any(|w| (w - v).abs() <= 1e-12 * omega2) {
                candidates.push(v);
            }
        }
    }
    u.omega3_candidates = candidates.clone();
    let w0 = Complex64::new(0.2137 * omega2, 0.3129 * omega1.im);
    let p0 = u.lambda_map(w0);
    let target = u.curve.sigma(&p0, Direction::Forward)?;
    let chosen = candidates
        .iter()
        .copied()
        .filter(|&v| v > 0.0 && v < omega2)
        .map(|v| (u.lambda_map(w0 + v).distance(&target), v))
        .filter(|(dist, _)| *dist <= SHIFT_MATCH_TOL)
        .min_by(|a, b| a.0.total_cmp(&b.0));
    match chosen {
        Some((_, v)) => {
            u.omega3 = v;
            Ok(u)
        }
        None => Err(Error::Omega3OutOfRange { candidates }),
    }
}

pub fn lambda_map(u: &GenusOneUniformization, w: Complex64) -> CurvePoint {
    u.lambda_map(w)
}

/// Centers of an `n × m` grid of cells in the fundamental parallelogram
/// spanned by `ω2` and `ω1`.
pub fn parallelogram_grid(u: &GenusOneUniformization, n: usize, m: usize) -> Vec<Complex64> {
    let mut out = Vec::with_capacity(n * m);
    for i in 0..n {
        for j in 0..m {
            let a = (i as f64 + 0.5) / n as f64;
            let b = (j as f64 + 0.5) / m as f64;
            out.push(u.omega1 * b + a * u.omega2);
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

/// `w_re,w_im,x_re,x_im,y_re,y_im` rows of `Λ` over the given points.
pub fn sample_csv(u: &GenusOneUniformization, grid: &[Complex64]) -> String {
    let mut out = String::from("w_re,w_im,x_re,x_im,y_re,y_im\n");
    for &w in grid {
        let p = u.lambda_map(w);
        let _ = writeln!(
            out,
            "{:.17e},{:.17e},{},{}",
            w.re,
            w.im,
            affine_cols(&p.x),
            affine_cols(&p.y)
        );
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use num_rational::BigRational;

    fn simple() -> WalkModel {
        WalkModel::equal_weights(
            &[(1, 0), (-1, 0), (0, 1), (0, -1)],
            BigRational::new(BigInt::from(1), BigInt::from(4)),
        )
        .unwrap()
    }

    #[test]
    fn simple_walk_periods() {
        let u = uniformize_genus1(&simple()).unwrap();
        assert!(u.omega1.re == 0.0 && u.omega1.im > 0.0);
        assert!(u.omega2 > 0.0);
        assert!((u.omega3 / u.omega2 - 0.5).abs() < 1e-10);
        let (g2, g3) = u.algebraic_invariants();
        assert!((u.g2.re - g2).abs() < 1e-9 * g2.abs().max(1.0), "{:?} {g2}", u.g2);
        assert!((u.g3.re - g3).abs() < 1e-9 * g3.abs().max(1.0), "{:?} {g3}", u.g3);
    }

    #[test]
    fn lambda_is_on_curve_and_periodic() {
        let u = uniformize_genus1(&simple()).unwrap();
        for w in [Complex64::new(0.3, 0.7), Complex64::new(-1.1, 0.2)] {
            let p = u.lambda_map(w);
            assert!(u.curve().residual(&p) < 1e-10);
            assert!(u.lambda_map(w + u.omega1).distance(&p) < 1e-9);
            assert!(u.lambda_map(w + u.omega2).distance(&p) < 1e-9);
            let s = u.curve().sigma(&p, Direction::Forward).unwrap();
            assert!(u.lambda_map(w + u.omega3).distance(&s) < 1e-9);
            let i1 = u.curve().iota(Iota::One, &p).unwrap();
            assert!(u.lambda_map(-w).distance(&i1) < 1e-9);
        }
    }

    #[test]
    fn genus_zero_is_rejected() {
        let m = WalkModel::equal_weights(
            &[(-1, 1), (1, -1), (1, 1)],
            BigRational::new(BigInt::from(1), BigInt::from(4)),
        )
        .unwrap();
        assert!(matches!(
            uniformize_genus1(&m),
            Err(Error::WrongGenus { expected: 1, found: 0 })
        ));
    }
}

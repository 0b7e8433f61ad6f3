//! The vertical and horizontal switches `ι1`, `ι2` of the kernel curve and
//! the map `σ = ι2 ∘ ι1`.

use std::fmt::Write as _;

use num_complex::Complex64;
use serde::Serialize;

use crate::classify::{
    degeneracy_of, half_plane_witness, quartic_roots, G0Family, DEFAULT_MERGE_TOL,
};
use crate::error::{Error, Result};
use crate::kernel::{
    decompose, discriminant, residual_with, Axis, CurvePoint, KernelDecomposition, ProjPoint,
};
use crate::model::{step_set, WalkModel};
use crate::{uniform_g0, uniform_g1};

/// Relative residual above which a point is rejected as off the curve.
pub const ON_CURVE_TOL: f64 = 1e-7;

/// Default chordal threshold for an orbit to count as closed.
pub const DEFAULT_RETURN_TOL: f64 = 1e-8;

/// Below this relative size the product form of the Vieta swap is abandoned.
const PRODUCT_FORM_FLOOR: f64 = 1e-3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Iota {
    /// `ι1`: keeps `x`, swaps the two `y` over it.
    One,
    /// `ι2`: keeps `y`, swaps the two `x` over it.
    Two,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Direction {
    /// `ι2 ∘ ι1`.
    Forward,
    /// `ι1 ∘ ι2`.
    Inverse,
}

/// A nondegenerate model together with the data needed to apply the
/// switches repeatedly.
#[derive(Clone, Debug)]
pub struct KernelCurve {
    model: WalkModel,
    dec: KernelDecomposition<f64>,
    omega: Option<CurvePoint>,
}

impl KernelCurve {
    pub fn new(m: &WalkModel) -> Result<Self> {
        let steps = step_set(m);
        let deg = degeneracy_of(&steps);
        if deg.is_degenerate() {
            return Err(Error::DegenerateModel(deg));
        }
        let omega = half_plane_witness(&steps)
            .and_then(G0Family::from_normal)
            .map(|f| f.omega());
        Ok(KernelCurve {
            model: m.clone(),
            dec: decompose(m),
            omega,
        })
    }

    pub fn model(&self) -> &WalkModel {
        &self.model
    }

    pub fn decomposition(&self) -> &KernelDecomposition<f64> {
        &self.dec
    }

    /// The singular point, present exactly in genus zero.
    pub fn omega(&self) -> Option<CurvePoint> {
        self.omega
    }

    pub fn genus(&self) -> u8 {
        if self.omega.is_some() {
            0
        } else {
            1
        }
    }

    pub fn residual(&self, p: &CurvePoint) -> f64 {
        residual_with(&self.model, &self.dec, p)
    }

    fn check_on_curve(&self, p: &CurvePoint) -> Result<()> {
        let residual = self.residual(p);
        if residual.is_finite() && residual <= ON_CURVE_TOL {
            Ok(())
        } else {
            Err(Error::OffCurveInput { residual })
        }
    }

    fn is_omega(&self, p: &CurvePoint) -> bool {
        self.omega.is_some_and(|o| o.distance(p) <= 1e-12)
    }

    /// Coefficients `(Ā, B̄, C̄)` of the quadratic in the other coordinate
    /// over a fixed `x` (`Iota::One`) or fixed `y` (`Iota::Two`).
    pub fn fiber_quadratic(&self, k: Iota, fixed: &ProjPoint) -> [Complex64; 3] {
        let abc = match k {
            Iota::One => &self.dec.abc_x,
            Iota::Two => &self.dec.abc_y,
        };
        [abc[0].eval(fixed), abc[1].eval(fixed), abc[2].eval(fixed)]
    }

    /// The two points of the curve above `x`.
    pub fn points_over_x(&self, x: ProjPoint) -> Result<[CurvePoint; 2]> {
        let (y1, y2) = fiber_roots(self.fiber_quadratic(Iota::One, &x))?;
        Ok([CurvePoint::new(x, y1), CurvePoint::new(x, y2)])
    }

    /// The two points of the curve above `y`.
    pub fn points_over_y(&self, y: ProjPoint) -> Result<[CurvePoint; 2]> {
        let (x1, x2) = fiber_roots(self.fiber_quadratic(Iota::Two, &y))?;
        Ok([CurvePoint::new(x1, y), CurvePoint::new(x2, y)])
    }

    /// Applies `ι1` or `ι2` to an on-curve point.
    pub fn iota(&self, k: Iota, p: &CurvePoint) -> Result<CurvePoint> {
        self.check_on_curve(p)?;
        Ok(self.iota_unchecked(k, p))
    }

    fn iota_unchecked(&self, k: Iota, p: &CurvePoint) -> CurvePoint {
        if self.is_omega(p) {
            return *p;
        }
        match k {
            Iota::One => {
                let q = self.fiber_quadratic(Iota::One, &p.x);
                CurvePoint::new(p.x, vieta_partner(q, &p.y))
            }
            Iota::Two => {
                let q = self.fiber_quadratic(Iota::Two, &p.y);
                CurvePoint::new(vieta_partner(q, &p.x), p.y)
            }
        }
    }

    pub fn sigma(&self, p: &CurvePoint, dir: Direction) -> Result<CurvePoint> {
        self.check_on_curve(p)?;
        Ok(self.sigma_unchecked(p, dir))
    }

    fn sigma_unchecked(&self, p: &CurvePoint, dir: Direction) -> CurvePoint {
        match dir {
            Direction::Forward => {
                self.iota_unchecked(Iota::Two, &self.iota_unchecked(Iota::One, p))
            }
            Direction::Inverse => {
                self.iota_unchecked(Iota::One, &self.iota_unchecked(Iota::Two, p))
            }
        }
    }

    /// `p, σ(p), …, σ^steps(p)`.
    pub fn orbit(&self, start: &CurvePoint, steps: usize) -> Result<Vec<CurvePoint>> {
        self.check_on_curve(start)?;
        let mut out = Vec::with_capacity(steps + 1);
        out.push(*start);
        let mut p = *start;
        for _ in 0..steps {
            p = self.sigma_unchecked(&p, Direction::Forward);
            out.push(p);
        }
        Ok(out)
    }

    /// Points fixed by `ι_k`: one above each root of the corresponding
    /// discriminant, with the other coordinate at the double root of the
    /// fiber. In genus zero the singular point comes first.
    pub fn fixed_points(&self, k: Iota) -> Result<Vec<CurvePoint>> {
        let axis = match k {
            Iota::One => Axis::X,
            Iota::Two => Axis::Y,
        };
        let roots = quartic_roots(&discriminant(&self.model, axis), DEFAULT_MERGE_TOL)?;
        let mut out = Vec::new();
        if let Some(o) = self.omega {
            out.push(o);
        }
        for r in roots {
            if r.multiplicity >= 2 && self.omega.is_some() {
                continue;
            }
            let other = double_root(self.fiber_quadratic(k, &r.point))?;
            out.push(match k {
                Iota::One => CurvePoint::new(r.point, other),
                Iota::Two => CurvePoint::new(other, r.point),
            });
        }
        Ok(out)
    }
}

/// Roots of `a u0² + b u0 u1 + c u1²` given `[a, b, c]`, as `[u0:u1]`.
pub fn fiber_roots(abc: [Complex64; 3]) -> Result<(ProjPoint, ProjPoint)> {
    let [a, b, c] = abc;
    if a.norm() == 0.0 && b.norm() == 0.0 && c.norm() == 0.0 {
        return Err(Error::IdenticallyZeroSlice);
    }
    let s = (b * b - a * c * 4.0).sqrt();
    let q = if (b + s).norm() >= (b - s).norm() {
        (b + s) * -0.5
    } else {
        (b - s) * -0.5
    };
    let r1 = ProjPoint::new(q, a);
    let r2 = ProjPoint::new(c, q);
    match (r1, r2) {
        (Some(r1), Some(r2)) => Ok((r1, r2)),
        (Some(r), None) | (None, Some(r)) => Ok((r, r)),
        (None, None) => Err(Error::IdenticallyZeroSlice),
    }
}

/// The root of a quadratic with vanishing discriminant, `[-b : 2a]` or
/// `[2c : -b]`, without the square root that would halve the precision.
pub(crate) fn double_root(abc: [Complex64; 3]) -> Result<ProjPoint> {
    let [a, b, c] = abc;
    let v1 = (-b, a * 2.0);
    let v2 = (c * 2.0, -b);
    let n1 = v1.0.norm().max(v1.1.norm());
    let n2 = v2.0.norm().max(v2.1.norm());
    let (u0, u1) = if n1 >= n2 { v1 } else { v2 };
    ProjPoint::new(u0, u1).ok_or(Error::IndeterminatePoint)
}

/// The second root of `a Y0² + b Y0Y1 + c Y1²` given the first one.
fn vieta_partner(abc: [Complex64; 3], y: &ProjPoint) -> ProjPoint {
    let [a, b, c] = abc;
    let (y0, y1) = (y.c0(), y.c1());
    let scale = a.norm().max(b.norm()).max(c.norm());
    let prod = (c * y1, a * y0);
    let prod_size = prod.0.norm().max(prod.1.norm());
    if prod_size >= PRODUCT_FORM_FLOOR * scale {
        if let Some(p) = ProjPoint::new(prod.0, prod.1) {
            return p;
        }
    }
    let s1 = (-b * y1 - a * y0, a * y1);
    let s2 = (c * y0, -b * y0 - c * y1);
    let n1 = s1.0.norm().max(s1.1.norm());
    let n2 = s2.0.norm().max(s2.1.norm());
    let (u0, u1) = if n1 >= n2 { s1 } else { s2 };
    ProjPoint::new(u0, u1).unwrap_or(*y)
}

pub fn iota(m: &WalkModel, k: Iota, p: &CurvePoint) -> Result<CurvePoint> {
    KernelCurve::new(m)?.iota(k, p)
}

pub fn sigma(m: &WalkModel, p: &CurvePoint, dir: Direction) -> Result<CurvePoint> {
    KernelCurve::new(m)?.sigma(p, dir)
}

pub fn fixed_points(m: &WalkModel, k: Iota) -> Result<Vec<CurvePoint>> {
    KernelCurve::new(m)?.fixed_points(k)
}

/// Result of an order search.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum SigmaOrder {
    Finite(u32),
    /// No return found with period at most the given bound.
    Unbounded(u32),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum OrderMethod {
    Iteration,
    GenusZeroMultiplier,
    GenusOnePeriodRatio,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OrbitReport {
    pub order: SigmaOrder,
    pub method: OrderMethod,
    /// What plain iteration found, when it was run.
    pub iteration: Option<SigmaOrder>,
    /// `q` in genus zero.
    pub multiplier: Option<f64>,
    /// `ω3/ω2` in genus one.
    pub period_ratio: Option<f64>,
    pub warnings: Vec<String>,
}

/// Searches for the order of `σ` up to `n_max`.
///
/// Iteration looks for the first `n ≤ n_max` with `σ^n(start)` within `tol`
/// of `start`. In genus zero the multiplier `q` decides instead (no finite
/// order unless `|q| = 1`); in genus one the ratio `ω3/ω2` is tested for a
/// rational approximation with denominator at most `n_max`. When iteration
/// and the analytic method disagree the analytic verdict is kept and the
/// disagreement is recorded in `warnings`.
pub fn sigma_order(
    m: &WalkModel,
    start: &CurvePoint,
    n_max: u32,
    tol: f64,
) -> Result<OrbitReport> {
    let curve = KernelCurve::new(m)?;
    curve.check_on_curve(start)?;
    if curve.omega.is_some_and(|o| o.distance(start) <= 1e-9) {
        return Err(Error::StartIsSingular);
    }
    if n_max == 0 {
        return Ok(OrbitReport {
            order: SigmaOrder::Unbounded(0),
            method: OrderMethod::Iteration,
            iteration: None,
            multiplier: None,
            period_ratio: None,
            warnings: Vec::new(),
        });
    }
    let mut p = *start;
    let mut iteration = SigmaOrder::Unbounded(n_max);
    for n in 1..=n_max {
        p = curve.sigma_unchecked(&p, Direction::Forward);
        if p.distance(start) <= tol {
            iteration = SigmaOrder::Finite(n);
            break;
        }
    }
    let mut report = OrbitReport {
        order: iteration,
        method: OrderMethod::Iteration,
        iteration: Some(iteration),
        multiplier: None,
        period_ratio: None,
        warnings: Vec::new(),
    };
    if curve.genus() == 0 {
        let q = uniform_g0::uniformize_genus0(m)?.q;
        report.multiplier = Some(q);
        if (q.abs() - 1.0).abs() > tol {
            report.order = SigmaOrder::Unbounded(n_max);
            report.method = OrderMethod::GenusZeroMultiplier;
        }
    } else {
        let u = uniform_g1::uniformize_genus1(m)?;
        let ratio = u.omega3 / u.omega2;
        report.period_ratio = Some(ratio);
        report.method = OrderMethod::GenusOnePeriodRatio;
        report.order = match rational_approximation(ratio, n_max, tol) {
            Some((_, den)) => SigmaOrder::Finite(den),
            None => SigmaOrder::Unbounded(n_max),
        };
    }
    if report.order != iteration {
        report.warnings.push(format!(
            "iteration found {iteration:?} but {:?} gives {:?}",
            report.method, report.order
        ));
    }
    Ok(report)
}

/// Best rational approximation `p/q` of `x` with `q ≤ max_den` lying within
/// `tol`, found by walking the convergents of the continued fraction.
pub fn rational_approximation(x: f64, max_den: u32, tol: f64) -> Option<(i64, u32)> {
    let (mut h0, mut h1) = (0i64, 1i64);
    let (mut k0, mut k1) = (1i64, 0i64);
    let mut r = x;
    for _ in 0..64 {
        let a = r.floor();
        if a.abs() > 1e15 {
            return None;
        }
        let ai = a as i64;
        let (h2, k2) = (ai * h1 + h0, ai * k1 + k0);
        if k2 > max_den as i64 {
            return None;
        }
        if (x - h2 as f64 / k2 as f64).abs() <= tol {
            return Some((h2, k2 as u32));
        }
        (h0, h1, k0, k1) = (h1, h2, k1, k2);
        let frac = r - a;
        if frac == 0.0 {
            return None;
        }
        r = 1.0 / frac;
    }
    None
}

fn csv_coord(p: &ProjPoint) -> String {
    match p.to_affine() {
        Some(z) => format!("{:.17e},{:.17e}", z.re, z.im),
        None => "inf,inf".to_string(),
    }
}

/// One row per point: `x_re,x_im,y_re,y_im` in the affine chart, with `inf`
/// for points at infinity.
pub fn points_csv(points: &[CurvePoint]) -> String {
    let mut out = String::from("x_re,x_im,y_re,y_im\n");
    for p in points {
        let _ = writeln!(out, "{},{}", csv_coord(&p.x), csv_coord(&p.y));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use num_rational::BigRational;

    fn model(steps: &[(i8, i8)]) -> WalkModel {
        WalkModel::equal_weights(steps, BigRational::new(BigInt::from(1), BigInt::from(4)))
            .unwrap()
    }

    #[test]
    fn simple_walk_switch_is_reciprocal() {
        let m = model(&[(1, 0), (-1, 0), (0, 1), (0, -1)]);
        let r = 3f64.sqrt();
        let p = CurvePoint::new(ProjPoint::real(1.0), ProjPoint::real(7.0 + 4.0 * r));
        let q = iota(&m, Iota::One, &p).unwrap();
        assert!(q.distance(&CurvePoint::new(ProjPoint::real(1.0), ProjPoint::real(7.0 - 4.0 * r))) < 1e-12);
        let s = sigma(&m, &p, Direction::Forward).unwrap();
        assert!(s.distance(&q) < 1e-12);
    }

    #[test]
    fn omega_is_fixed() {
        let m = model(&[(-1, 1), (1, -1), (1, 1)]);
        let c = KernelCurve::new(&m).unwrap();
        let o = c.omega().unwrap();
        assert_eq!(c.iota(Iota::One, &o).unwrap(), o);
        assert_eq!(c.sigma(&o, Direction::Forward).unwrap(), o);
        let fp = c.fixed_points(Iota::One).unwrap();
        assert_eq!(fp.len(), 3);
        for p in &fp {
            assert!(c.iota(Iota::One, p).unwrap().distance(p) < 1e-9);
        }
    }

    #[test]
    fn continued_fractions() {
        assert_eq!(rational_approximation(0.5, 10, 1e-12), Some((1, 2)));
        assert_eq!(rational_approximation(2.0 / 7.0, 10, 1e-12), Some((2, 7)));
        assert_eq!(rational_approximation(2f64.sqrt() - 1.0, 100, 1e-8), None);
        assert_eq!(rational_approximation(1.0 / 3.0, 2, 1e-12), None);
    }

    #[test]
    fn off_curve_is_rejected() {
        let m = model(&[(1, 0), (-1, 0), (0, 1), (0, -1)]);
        let p = CurvePoint::new(ProjPoint::real(1.0), ProjPoint::real(1.0));
        assert!(matches!(
            iota(&m, Iota::One, &p),
            Err(Error::OffCurveInput { .. })
        ));
    }
}

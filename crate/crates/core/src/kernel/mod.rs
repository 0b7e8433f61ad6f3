//! The kernel polynomial and its bihomogeneous form.
//!
//! With `S(x,y) = Σ d(i,j) x^i y^j` the kernel is `K(x,y,t) = xy(1 - t S)`.
//! Its closure in P¹×P¹ is cut out by
//!
//! ```text
//! K̄(x0,x1,y0,y1) = x0 x1 y0 y1 - t Σ d(i-1,j-1) x0^i x1^(2-i) y0^j y1^(2-j)
//!                = C̄1(x) y1² + B̄1(x) y0 y1 + Ā1(x) y0²
//!                = C̄2(y) x1² + B̄2(y) x0 x1 + Ā2(y) x0².
//! ```
//!
//! The discriminants `Δ1 = B̄1² - 4Ā1C̄1` and `Δ2 = B̄2² - 4Ā2C̄2` are binary
//! quartics; their coefficient lists are coded directly below and
//! cross-checked against the products in the tests.

mod forms;
mod point;

use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};

pub use forms::{BinaryQuadratic, QuarticForm};
pub use point::{CurvePoint, ProjPoint};

use crate::error::{Error, Result};
use crate::model::WalkModel;

/// Which factor of P¹×P¹ a discriminant lives on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Axis {
    /// `Δ1`, a form in `[x0:x1]`.
    X,
    /// `Δ2`, a form in `[y0:y1]`.
    Y,
}

/// The component polynomials of the kernel.
#[derive(Clone, Debug, PartialEq)]
pub struct KernelDecomposition<T> {
    /// `t·x·A_j(x)` for `j = -1, 0, 1`, as quadratics in `x`.
    pub x_rows: [BinaryQuadratic<T>; 3],
    /// `t·y·B_i(y)` for `i = -1, 0, 1`, as quadratics in `y`.
    pub y_cols: [BinaryQuadratic<T>; 3],
    /// `(Ā1, B̄1, C̄1)`: coefficients of `y0²`, `y0 y1`, `y1²` in `K̄`.
    pub abc_x: [BinaryQuadratic<T>; 3],
    /// `(Ā2, B̄2, C̄2)`: coefficients of `x0²`, `x0 x1`, `x1²` in `K̄`.
    pub abc_y: [BinaryQuadratic<T>; 3],
    /// `A(x) = t(d(-1,1) + d(0,1)x + d(1,1)x²)`.
    pub a_poly: BinaryQuadratic<T>,
    /// `B(x) = t(d(-1,0) - x/t + d(0,0)x + d(1,0)x²)`.
    pub b_poly: BinaryQuadratic<T>,
    /// `C(x) = t(d(-1,-1) + d(0,-1)x + d(1,-1)x²)`, so that
    /// `K = -(A y² + B y + C)`.
    pub c_poly: BinaryQuadratic<T>,
}

trait Field:
    Clone
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
}
impl<T> Field for T where
    T: Clone
        + Zero
        + One
        + Add<Output = T>
        + Sub<Output = T>
        + Mul<Output = T>
        + Neg<Output = T>
{
}

fn decompose_with<T: Field>(d: impl Fn(i8, i8) -> T, t: T) -> KernelDecomposition<T> {
    let row = |j: i8| {
        BinaryQuadratic::new(
            t.clone() * d(-1, j),
            t.clone() * d(0, j),
            t.clone() * d(1, j),
        )
    };
    let col = |i: i8| {
        BinaryQuadratic::new(
            t.clone() * d(i, -1),
            t.clone() * d(i, 0),
            t.clone() * d(i, 1),
        )
    };
    let x_rows = [row(-1), row(0), row(1)];
    let y_cols = [col(-1), col(0), col(1)];
    let middle = |q: &BinaryQuadratic<T>| {
        let mut m = q.neg();
        m.c[1] = m.c[1].clone() + T::one();
        m
    };
    let abc_x = [x_rows[2].neg(), middle(&x_rows[1]), x_rows[0].neg()];
    let abc_y = [y_cols[2].neg(), middle(&y_cols[1]), y_cols[0].neg()];
    let mut b_poly = x_rows[1].clone();
    b_poly.c[1] = b_poly.c[1].clone() - T::one();
    KernelDecomposition {
        a_poly: x_rows[2].clone(),
        b_poly,
        c_poly: x_rows[0].clone(),
        x_rows,
        y_cols,
        abc_x,
        abc_y,
    }
}

/// Coefficients `(α0..α4)` of `Δ1` and `(β0..β4)` of `Δ2`, written out term
/// by term.
fn discriminant_lists<T: Field>(d: impl Fn(i8, i8) -> T, t: T) -> ([T; 5], [T; 5]) {
    let two = T::one() + T::one();
    let four = two.clone() + two.clone();
    let t2 = t.clone() * t.clone();
    let c2 = |v: T| t2.clone() * v;
    let c4 = |v: T| four.clone() * t2.clone() * v;
    let c1 = |v: T| two.clone() * t.clone() * v;

    let alpha = [
        c2(d(-1, 0) * d(-1, 0)) - c4(d(-1, 1) * d(-1, -1)),
        two.clone() * c2(d(-1, 0) * d(0, 0)) - c1(d(-1, 0))
            - c4(d(-1, 1) * d(0, -1))
            - c4(d(0, 1) * d(-1, -1)),
        c2(d(0, 0) * d(0, 0)) - c1(d(0, 0)) + T::one() + two.clone() * c2(d(-1, 0) * d(1, 0))
            - c4(d(-1, 1) * d(1, -1))
            - c4(d(0, 1) * d(0, -1))
            - c4(d(1, 1) * d(-1, -1)),
        -c1(d(1, 0)) + two.clone() * c2(d(0, 0) * d(1, 0))
            - c4(d(1, 1) * d(0, -1))
            - c4(d(0, 1) * d(1, -1)),
        c2(d(1, 0) * d(1, 0)) - c4(d(1, 1) * d(1, -1)),
    ];
    let beta = [
        c2(d(0, -1) * d(0, -1)) - c4(d(1, -1) * d(-1, -1)),
        two.clone() * c2(d(0, -1) * d(0, 0)) - c1(d(0, -1))
            - c4(d(1, -1) * d(-1, 0))
            - c4(d(1, 0) * d(-1, -1)),
        c2(d(0, 0) * d(0, 0)) - c1(d(0, 0)) + T::one() + two.clone() * c2(d(0, -1) * d(0, 1))
            - c4(d(1, -1) * d(-1, 1))
            - c4(d(1, 0) * d(-1, 0))
            - c4(d(1, 1) * d(-1, -1)),
        -c1(d(0, 1)) + two.clone() * c2(d(0, 0) * d(0, 1))
            - c4(d(1, 1) * d(-1, 0))
            - c4(d(1, 0) * d(-1, 1)),
        c2(d(0, 1) * d(0, 1)) - c4(d(1, 1) * d(-1, 1)),
    ];
    (alpha, beta)
}

/// Double-precision decomposition of the kernel.
pub fn decompose(m: &WalkModel) -> KernelDecomposition<f64> {
    match decompose_exact(m) {
        Ok(ex) => KernelDecomposition {
            x_rows: ex.x_rows.clone().map(|q| q.to_f64()),
            y_cols: ex.y_cols.clone().map(|q| q.to_f64()),
            abc_x: ex.abc_x.clone().map(|q| q.to_f64()),
            abc_y: ex.abc_y.clone().map(|q| q.to_f64()),
            a_poly: ex.a_poly.to_f64(),
            b_poly: ex.b_poly.to_f64(),
            c_poly: ex.c_poly.to_f64(),
        },
        Err(_) => decompose_with(|i, j| m.d(i, j), m.t()),
    }
}

/// Exact decomposition; requires rational weights.
pub fn decompose_exact(m: &WalkModel) -> Result<KernelDecomposition<BigRational>> {
    let ex = m.exact_weights().ok_or(Error::NonRationalWeights)?;
    Ok(decompose_with(|i, j| ex.d(i, j).clone(), ex.t().clone()))
}

/// `Δ1` (axis X) or `Δ2` (axis Y). Computed exactly first when the model is
/// rational, so that structurally zero coefficients are exactly zero.
pub fn discriminant(m: &WalkModel, axis: Axis) -> QuarticForm {
    match discriminant_exact(m, axis) {
        Ok(q) => q.to_complex(),
        Err(_) => {
            let (a, b) = discriminant_lists(|i, j| m.d(i, j), m.t());
            let list = match axis {
                Axis::X => a,
                Axis::Y => b,
            };
            QuarticForm::from_real(list)
        }
    }
}

pub fn discriminant_exact(m: &WalkModel, axis: Axis) -> Result<QuarticForm<BigRational>> {
    let ex = m.exact_weights().ok_or(Error::NonRationalWeights)?;
    let (a, b) = discriminant_lists(|i, j| ex.d(i, j).clone(), ex.t().clone());
    Ok(QuarticForm {
        coeffs: match axis {
            Axis::X => a,
            Axis::Y => b,
        },
    })
}

/// `K̄` at the normalized representative of `p`.
pub fn kernel_eval(m: &WalkModel, p: &CurvePoint) -> Complex64 {
    eval_with(&decompose(m), p)
}

pub(crate) fn eval_with(dec: &KernelDecomposition<f64>, p: &CurvePoint) -> Complex64 {
    let [a1, b1, c1] = &dec.abc_x;
    let (y0, y1) = (p.y.c0(), p.y.c1());
    c1.eval(&p.x) * y1 * y1 + b1.eval(&p.x) * y0 * y1 + a1.eval(&p.x) * y0 * y0
}

/// `|K̄(p)|` divided by the sum of the moduli of its monomials.
pub fn kernel_residual(m: &WalkModel, p: &CurvePoint) -> f64 {
    residual_with(m, &decompose(m), p)
}

pub(crate) fn residual_with(
    m: &WalkModel,
    dec: &KernelDecomposition<f64>,
    p: &CurvePoint,
) -> f64 {
    let value = eval_with(dec, p).norm();
    let xs = [p.x.c0().norm(), p.x.c1().norm()];
    let ys = [p.y.c0().norm(), p.y.c1().norm()];
    let mut scale = xs[0] * xs[1] * ys[0] * ys[1];
    for i in 0..3 {
        for j in 0..3 {
            let w = m.d(i as i8 - 1, j as i8 - 1);
            scale += m.t()
                * w
                * xs[0].powi(i)
                * xs[1].powi(2 - i)
                * ys[0].powi(j)
                * ys[1].powi(2 - j);
        }
    }
    if scale == 0.0 {
        value
    } else {
        value / scale
    }
}

/// `(∂/∂x0, ∂/∂x1, ∂/∂y0, ∂/∂y1)` of `K̄` at the normalized representative.
pub fn kernel_gradient(m: &WalkModel, p: &CurvePoint) -> [Complex64; 4] {
    let dec = decompose(m);
    let (x0, x1) = (p.x.c0(), p.x.c1());
    let (y0, y1) = (p.y.c0(), p.y.c1());
    let [a1, b1, c1] = &dec.abc_x;
    let d_dx0 = |q: &BinaryQuadratic<f64>| x1 * q.c[1] + x0 * (2.0 * q.c[2]);
    let d_dx1 = |q: &BinaryQuadratic<f64>| x1 * (2.0 * q.c[0]) + x0 * q.c[1];
    let (av, bv, cv) = (a1.eval(&p.x), b1.eval(&p.x), c1.eval(&p.x));
    [
        d_dx0(c1) * y1 * y1 + d_dx0(b1) * y0 * y1 + d_dx0(a1) * y0 * y0,
        d_dx1(c1) * y1 * y1 + d_dx1(b1) * y0 * y1 + d_dx1(a1) * y0 * y0,
        bv * y1 + av * y0 * 2.0,
        cv * y1 * 2.0 + bv * y0,
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::WalkModel;

    fn r(p: i64, q: i64) -> BigRational {
        BigRational::new(p.into(), q.into())
    }

    fn simple_walk() -> WalkModel {
        WalkModel::equal_weights(&[(1, 0), (-1, 0), (0, 1), (0, -1)], r(1, 4)).unwrap()
    }

    fn g0_model() -> WalkModel {
        WalkModel::equal_weights(&[(-1, 1), (1, -1), (1, 1)], r(1, 4)).unwrap()
    }

    #[test]
    fn kernel_at_one_one_is_one_minus_t() {
        for m in [simple_walk(), g0_model()] {
            let v = kernel_eval(&m, &CurvePoint::affine(1.0.into(), 1.0.into()));
            assert!((v - Complex64::new(1.0 - m.t(), 0.0)).norm() < 1e-15);
        }
    }

    #[test]
    fn simple_walk_root_over_x_equals_one() {
        // K(1, y, 1/4) = (-y² + 14y - 1)/16
        let y = 7.0 + 4.0 * 3f64.sqrt();
        let v = kernel_eval(&simple_walk(), &CurvePoint::affine(1.0.into(), y.into()));
        assert!(v.norm() < 1e-14, "{v}");
    }

    #[test]
    fn corner_monomial_at_infinity() {
        let m = WalkModel::exact(&[((1, 1), r(1, 1))], r(1, 3)).unwrap();
        let p = CurvePoint::new(ProjPoint::infinity(), ProjPoint::infinity());
        let v = kernel_eval(&m, &p);
        assert!((v - Complex64::new(-1.0 / 3.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn simple_walk_decomposition() {
        let dec = decompose_exact(&simple_walk()).unwrap();
        let t = r(1, 4);
        let quarter_t = &t * r(1, 4);
        let [a1, b1, c1] = &dec.abc_x;
        assert_eq!(a1.c, [r(0, 1), -quarter_t.clone(), r(0, 1)]);
        assert_eq!(c1.c, [r(0, 1), -quarter_t.clone(), r(0, 1)]);
        assert_eq!(b1.c, [-quarter_t.clone(), r(1, 1), -quarter_t.clone()]);
    }

    #[test]
    fn single_corner_decomposition() {
        let m = WalkModel::exact(&[((1, 1), r(1, 1))], r(1, 2)).unwrap();
        let dec = decompose_exact(&m).unwrap();
        let [a1, b1, c1] = &dec.abc_x;
        assert_eq!(a1.c, [r(0, 1), r(0, 1), r(-1, 2)]);
        assert_eq!(b1.c, [r(0, 1), r(1, 1), r(0, 1)]);
        assert!(c1.c.iter().all(|v| v.is_zero()));
    }

    #[test]
    fn a_poly_at_zero() {
        let m = WalkModel::exact(
            &[((-1, 1), r(1, 5)), ((0, 1), r(2, 5)), ((1, -1), r(2, 5))],
            r(1, 3),
        )
        .unwrap();
        let dec = decompose_exact(&m).unwrap();
        assert_eq!(dec.a_poly.c[0], r(1, 3) * r(1, 5));
    }

    #[test]
    fn simple_walk_discriminant() {
        let d = discriminant_exact(&simple_walk(), Axis::X).unwrap();
        assert_eq!(
            d.coeffs,
            [r(1, 256), r(-1, 8), r(127, 128), r(-1, 8), r(1, 256)]
        );
    }

    #[test]
    fn g0_discriminant() {
        let d = discriminant_exact(&g0_model(), Axis::X).unwrap();
        assert_eq!(d.coeffs, [r(0, 1), r(0, 1), r(35, 36), r(0, 1), r(-1, 36)]);
        let e = discriminant_exact(&g0_model(), Axis::Y).unwrap();
        assert_eq!(d, e);
    }

    #[test]
    fn discriminant_matches_product_formula() {
        let m = WalkModel::exact(
            &[
                ((-1, 1), r(1, 9)),
                ((0, 1), r(2, 9)),
                ((1, 1), r(1, 18)),
                ((-1, 0), r(1, 9)),
                ((0, 0), r(1, 18)),
                ((1, 0), r(1, 9)),
                ((-1, -1), r(1, 9)),
                ((0, -1), r(1, 6)),
                ((1, -1), r(1, 9)),
            ],
            r(2, 7),
        )
        .unwrap();
        let dec = decompose_exact(&m).unwrap();
        for (axis, [a, b, c]) in [(Axis::X, &dec.abc_x), (Axis::Y, &dec.abc_y)] {
            let prod = b.mul(b).sub(&a.mul(c).scale(r(4, 1)));
            assert_eq!(prod, discriminant_exact(&m, axis).unwrap());
        }
    }

    #[test]
    fn residual_is_relative() {
        let m = simple_walk();
        let p = CurvePoint::affine(2.0.into(), 3.0.into());
        let res = kernel_residual(&m, &p);
        assert!(res > 0.1 && res <= 1.0);
    }
}

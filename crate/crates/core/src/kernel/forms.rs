//! Binary forms of degree two and four.
//!
//! Coefficients are indexed by the power of the first variable:
//! `Σ c[i] u0^i u1^(n-i)`. Dehomogenizing at `u1 = 1` gives the ordinary
//! polynomial `Σ c[i] x^i`.

use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::Zero;

use super::point::ProjPoint;
use crate::model::rat_to_f64;

/// `c[0] u1² + c[1] u0 u1 + c[2] u0²`.
#[derive(Clone, Debug, PartialEq)]
pub struct BinaryQuadratic<T> {
    pub c: [T; 3],
}

impl<T> BinaryQuadratic<T>
where
    T: Clone + Zero + Add<Output = T> + Sub<Output = T> + Mul<Output = T> + Neg<Output = T>,
{
    pub fn new(c0: T, c1: T, c2: T) -> Self {
        BinaryQuadratic { c: [c0, c1, c2] }
    }

    /// Product of two quadratic forms.
    pub fn mul(&self, other: &Self) -> QuarticForm<T> {
        let mut out: [T; 5] = std::array::from_fn(|_| T::zero());
        for (i, a) in self.c.iter().enumerate() {
            for (j, b) in other.c.iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        QuarticForm { coeffs: out }
    }

    pub fn scale(&self, k: T) -> Self {
        BinaryQuadratic {
            c: self.c.clone().map(|v| v * k.clone()),
        }
    }

    pub fn neg(&self) -> Self {
        BinaryQuadratic {
            c: self.c.clone().map(|v| -v),
        }
    }
}

impl BinaryQuadratic<f64> {
    pub fn eval(&self, p: &ProjPoint) -> Complex64 {
        let (u0, u1) = (p.c0(), p.c1());
        u1 * u1 * self.c[0] + u0 * u1 * self.c[1] + u0 * u0 * self.c[2]
    }

    pub fn eval_affine(&self, x: Complex64) -> Complex64 {
        (x * self.c[2] + self.c[1]) * x + self.c[0]
    }
}

impl BinaryQuadratic<BigRational> {
    pub fn to_f64(&self) -> BinaryQuadratic<f64> {
        BinaryQuadratic {
            c: self.c.clone().map(|v| rat_to_f64(&v)),
        }
    }
}

/// `Σ coeffs[i] u0^i u1^(4-i)` on P¹.
#[derive(Clone, Debug, PartialEq)]
pub struct QuarticForm<T = Complex64> {
    pub coeffs: [T; 5],
}

impl<T: Clone + Sub<Output = T> + Mul<Output = T>> QuarticForm<T> {
    pub fn sub(&self, other: &Self) -> Self {
        QuarticForm {
            coeffs: std::array::from_fn(|i| self.coeffs[i].clone() - other.coeffs[i].clone()),
        }
    }

    pub fn scale(&self, k: T) -> Self {
        QuarticForm {
            coeffs: self.coeffs.clone().map(|v| v * k.clone()),
        }
    }
}

impl QuarticForm<BigRational> {
    pub fn to_complex(&self) -> QuarticForm {
        QuarticForm {
            coeffs: self
                .coeffs
                .clone()
                .map(|v| Complex64::new(rat_to_f64(&v), 0.0)),
        }
    }
}

impl QuarticForm<f64> {
    pub fn to_complex(&self) -> QuarticForm {
        QuarticForm {
            coeffs: self.coeffs.map(|v| Complex64::new(v, 0.0)),
        }
    }
}

impl QuarticForm {
    pub fn from_real(coeffs: [f64; 5]) -> Self {
        QuarticForm {
            coeffs: coeffs.map(|v| Complex64::new(v, 0.0)),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.norm() == 0.0)
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn eval(&self, p: &ProjPoint) -> Complex64 {
        let (u0, u1) = (p.c0(), p.c1());
        let mut acc = Complex64::zero();
        for (i, c) in self.coeffs.iter().enumerate() {
            acc += c * u0.powu(i as u32) * u1.powu(4 - i as u32);
        }
        acc
    }

    /// `D(x) = Σ c_i x^i`.
    pub fn eval_affine(&self, x: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::zero(), |acc, c| acc * x + c)
    }

    /// Real part of `D(x)` for real `x`; the coefficients are assumed real.
    pub fn eval_real(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c.re)
    }

    /// `(D(x), D'(x), D''(x))` at an affine point.
    pub fn derivatives(&self, x: Complex64) -> (Complex64, Complex64, Complex64) {
        let c = &self.coeffs;
        let d0 = self.eval_affine(x);
        let d1 = c[1] + x * (c[2] * 2.0 + x * (c[3] * 3.0 + x * (c[4] * 4.0)));
        let d2 = c[2] * 2.0 + x * (c[3] * 6.0 + x * (c[4] * 12.0));
        (d0, d1, d2)
    }

    /// Whether all coefficients are real within `tol` relative to the largest.
    pub fn is_real(&self, tol: f64) -> bool {
        let m = self.max_abs();
        self.coeffs.iter().all(|c| c.im.abs() <= tol * m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn product_of_linear_factors() {
        // (u0 - u1)(u0 + u1) squared = u0^4 - 2 u0^2 u1^2 + u1^4
        let q = BinaryQuadratic::new(-1.0, 0.0, 1.0);
        let p = q.mul(&q);
        assert_eq!(p.coeffs, [1.0, 0.0, -2.0, 0.0, 1.0]);
    }

    #[test]
    fn evaluation_agrees_between_charts() {
        let f = QuarticForm::from_real([1.0, -2.0, 3.0, 0.5, -0.25]);
        let x = Complex64::new(0.3, -1.2);
        let proj = f.eval(&ProjPoint::affine(x));
        // the normalized representative is [x:1] scaled by 1/x here (|x| > 1)
        let scale = (Complex64::new(1.0, 0.0) / x).powu(4);
        assert!((proj - f.eval_affine(x) * scale).norm() < 1e-14);
        let (_, d1, d2) = f.derivatives(x);
        let h = 1e-5;
        let hc = Complex64::new(h, 0.0);
        let fd1 = (f.eval_affine(x + hc) - f.eval_affine(x - hc)) / (2.0 * h);
        let fd2 = (f.eval_affine(x + hc) - 2.0 * f.eval_affine(x) + f.eval_affine(x - hc)) / (h * h);
        assert!((d1 - fd1).norm() < 1e-8);
        assert!((d2 - fd2).norm() < 1e-4);
    }
}

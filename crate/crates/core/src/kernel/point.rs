//! Points of P¹ and P¹×P¹ in normalized homogeneous coordinates.

use num_complex::Complex64;
use serde::ser::SerializeTuple;
use serde::{Serialize, Serializer};

/// A point `[c0 : c1]` of the complex projective line.
///
/// The representative is normalized so that the coordinate of larger modulus
/// equals one; ties go to `c0`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ProjPoint {
    c0: Complex64,
    c1: Complex64,
}

impl ProjPoint {
    /// Returns `None` when both coordinates vanish or one is not finite.
    pub fn new(c0: Complex64, c1: Complex64) -> Option<Self> {
        if !(c0.is_finite() && c1.is_finite()) {
            return None;
        }
        let (n0, n1) = (c0.norm(), c1.norm());
        if n0 == 0.0 && n1 == 0.0 {
            return None;
        }
        if n0 >= n1 {
            Some(ProjPoint {
                c0: Complex64::new(1.0, 0.0),
                c1: c1 / c0,
            })
        } else {
            Some(ProjPoint {
                c0: c0 / c1,
                c1: Complex64::new(1.0, 0.0),
            })
        }
    }

    pub fn from_real(c0: f64, c1: f64) -> Option<Self> {
        Self::new(Complex64::new(c0, 0.0), Complex64::new(c1, 0.0))
    }

    /// `[x : 1]`; non-finite `x` maps to `[1 : 0]`.
    pub fn affine(x: Complex64) -> Self {
        Self::new(x, Complex64::new(1.0, 0.0)).unwrap_or_else(Self::infinity)
    }

    pub fn real(x: f64) -> Self {
        Self::affine(Complex64::new(x, 0.0))
    }

    pub fn infinity() -> Self {
        ProjPoint {
            c0: Complex64::new(1.0, 0.0),
            c1: Complex64::new(0.0, 0.0),
        }
    }

    pub fn zero() -> Self {
        ProjPoint {
            c0: Complex64::new(0.0, 0.0),
            c1: Complex64::new(1.0, 0.0),
        }
    }

    pub fn c0(&self) -> Complex64 {
        self.c0
    }

    pub fn c1(&self) -> Complex64 {
        self.c1
    }

    /// The affine coordinate `c0/c1`, `None` at infinity.
    pub fn to_affine(&self) -> Option<Complex64> {
        if self.c1.norm() == 0.0 {
            None
        } else {
            Some(self.c0 / self.c1)
        }
    }

    /// Chordal distance, in `[0, 1]`.
    pub fn chordal(&self, other: &ProjPoint) -> f64 {
        let num = (self.c0 * other.c1 - self.c1 * other.c0).norm();
        let den = (self.c0.norm_sqr() + self.c1.norm_sqr()).sqrt()
            * (other.c0.norm_sqr() + other.c1.norm_sqr()).sqrt();
        num / den
    }

    pub fn is_infinity(&self, tol: f64) -> bool {
        self.chordal(&Self::infinity()) <= tol
    }

    /// `[re0, im0, re1, im1]`.
    pub fn to_array(&self) -> [f64; 4] {
        [self.c0.re, self.c0.im, self.c1.re, self.c1.im]
    }

    pub fn from_array(a: [f64; 4]) -> Option<Self> {
        Self::new(Complex64::new(a[0], a[1]), Complex64::new(a[2], a[3]))
    }

    pub fn max_imag_ratio(&self) -> f64 {
        match self.to_affine() {
            Some(z) => z.im.abs() / z.norm().max(1.0),
            None => 0.0,
        }
    }
}

impl Serialize for ProjPoint {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let a = self.to_array();
        let mut tup = serializer.serialize_tuple(4)?;
        for v in a {
            tup.serialize_element(&v)?;
        }
        tup.end()
    }
}

/// A point `([x0:x1],[y0:y1])` of P¹×P¹.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CurvePoint {
    pub x: ProjPoint,
    pub y: ProjPoint,
}

impl CurvePoint {
    pub fn new(x: ProjPoint, y: ProjPoint) -> Self {
        CurvePoint { x, y }
    }

    pub fn affine(x: Complex64, y: Complex64) -> Self {
        CurvePoint {
            x: ProjPoint::affine(x),
            y: ProjPoint::affine(y),
        }
    }

    /// Maximum of the two chordal distances.
    pub fn distance(&self, other: &CurvePoint) -> f64 {
        self.x.chordal(&other.x).max(self.y.chordal(&other.y))
    }

    /// Swaps the coordinates of the chosen factors, realizing
    /// `x ↦ 1/x` and/or `y ↦ 1/y`.
    pub fn swapped(&self, swap_x: bool, swap_y: bool) -> Self {
        let flip = |p: ProjPoint, s: bool| {
            if s {
                ProjPoint::new(p.c1, p.c0).expect("normalized point")
            } else {
                p
            }
        };
        CurvePoint {
            x: flip(self.x, swap_x),
            y: flip(self.y, swap_y),
        }
    }

    /// Exchanges the two factors.
    pub fn transposed(&self) -> Self {
        CurvePoint {
            x: self.y,
            y: self.x,
        }
    }
}

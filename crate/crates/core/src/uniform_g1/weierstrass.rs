//! The Weierstrass function of a period lattice, evaluated through its
//! q-expansion after reducing the period ratio to the fundamental domain.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// The lattice `Z ω1 + Z ω2` with its invariants `g2 = 60 G4`, `g3 = 140 G6`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Lattice {
    pub omega1: Complex64,
    pub omega2: Complex64,
    pub g2: Complex64,
    pub g3: Complex64,
    /// Reduced basis `(a, aτ)` with `τ` in the fundamental domain.
    #[serde(skip)]
    a: Complex64,
    #[serde(skip)]
    tau: Complex64,
}

fn complex_expm1(z: Complex64) -> Complex64 {
    let ea = z.re.exp();
    let half = (z.im / 2.0).sin();
    Complex64::new(
        z.re.exp_m1() * z.im.cos() - 2.0 * half * half,
        ea * z.im.sin(),
    )
}

/// Σ σ_k(n) qⁿ until the terms stop contributing.
fn divisor_series(q: Complex64, k: i32) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    let mut qn = q;
    for n in 1..200u32 {
        let mut sigma = 0.0;
        for d in 1..=n {
            if n % d == 0 {
                sigma += (d as f64).powi(k);
            }
        }
        let term = qn * sigma;
        acc += term;
        if term.norm() < 1e-18 * acc.norm().max(1.0) {
            break;
        }
        qn *= q;
    }
    acc
}

impl Lattice {
    pub fn new(omega1: Complex64, omega2: Complex64) -> Result<Self> {
        let ratio = omega1 / omega2;
        if !ratio.is_finite() || ratio.im.abs() <= 1e-12 * ratio.norm() {
            return Err(Error::DegenerateLattice);
        }
        let (mut e1, mut e2) = if ratio.im > 0.0 {
            (omega2, omega1)
        } else {
            (omega2, -omega1)
        };
        for _ in 0..1000 {
            let tau = e2 / e1;
            let k = tau.re.round();
            e2 -= e1 * k;
            let tau = e2 / e1;
            if tau.norm_sqr() < 1.0 - 1e-15 {
                (e1, e2) = (e2, -e1);
            } else {
                break;
            }
        }
        let tau = e2 / e1;
        let mut l = Lattice {
            omega1,
            omega2,
            g2: Complex64::new(0.0, 0.0),
            g3: Complex64::new(0.0, 0.0),
            a: e1,
            tau,
        };
        let q = (2.0 * PI * I * tau).exp();
        let g4 = (1.0 + 240.0 * divisor_series(q, 3)) * (PI.powi(4) / 45.0) / e1.powu(4);
        let g6 = (1.0 - 504.0 * divisor_series(q, 5)) * (2.0 * PI.powi(6) / 945.0) / e1.powu(6);
        l.g2 = g4 * 60.0;
        l.g3 = g6 * 140.0;
        Ok(l)
    }

    /// `τ` of the reduced basis, `Im τ > 0`, `|Re τ| ≤ 1/2`, `|τ| ≥ 1`.
    pub fn tau(&self) -> Complex64 {
        self.tau
    }

    /// Representative of `w / a` in the parallelogram centered at zero.
    fn reduce(&self, w: Complex64) -> Complex64 {
        let mut z = w / self.a;
        let n2 = (z.im / self.tau.im).round();
        z -= self.tau * n2;
        let n1 = z.re.round();
        z -= n1;
        z
    }

    /// `(℘(w), ℘'(w))`.
    pub fn weierstrass(&self, w: Complex64) -> Result<(Complex64, Complex64)> {
        let z = self.reduce(w);
        if z.norm() <= 1e-14 {
            return Err(Error::Pole);
        }
        let q = (2.0 * PI * I * self.tau).exp();
        let u = (2.0 * PI * I * z).exp();
        let one_minus_u = -complex_expm1(2.0 * PI * I * z);
        let one = Complex64::new(1.0, 0.0);

        let mut p = u / (one_minus_u * one_minus_u);
        let mut dp = u * (one + u) / (one_minus_u * one_minus_u * one_minus_u);
        let mut qn = one;
        let mut constant = Complex64::new(0.0, 0.0);
        for _ in 1..200 {
            qn *= q;
            let v = qn * u;
            let wv = qn / u;
            let (ov, ow, oq) = (one - v, one - wv, one - qn);
            let tp = v / (ov * ov) + wv / (ow * ow);
            let tdp = v * (one + v) / (ov * ov * ov) - wv * (one + wv) / (ow * ow * ow);
            let tc = qn / (oq * oq);
            p += tp;
            dp += tdp;
            constant += tc;
            let size = tp.norm() + tdp.norm() + tc.norm();
            if size < 1e-18 * (p.norm() + dp.norm()).max(1.0) {
                break;
            }
        }
        let c2 = (2.0 * PI * I) * (2.0 * PI * I);
        let c3 = c2 * (2.0 * PI * I);
        let wp = c2 * (p + 1.0 / 12.0 - constant * 2.0) / (self.a * self.a);
        let wpp = c3 * dp / (self.a * self.a * self.a);
        Ok((wp, wpp))
    }
}

/// `(℘(w), ℘'(w))` for `l`.
pub fn weierstrass(l: &Lattice, w: Complex64) -> Result<(Complex64, Complex64)> {
    l.weierstrass(w)
}

//! Projective roots of binary quartic (and quadratic) forms.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::kernel::{ProjPoint, QuarticForm};

/// Default chordal distance under which two roots are merged.
pub const DEFAULT_MERGE_TOL: f64 = 1e-7;

/// A root of a binary form with its multiplicity.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Root {
    pub point: ProjPoint,
    pub multiplicity: u8,
}

/// Roots of `Σ c_i u0^i u1^(4-i)` on P¹, with multiplicities summing to 4.
///
/// Vanishing top coefficients put a root at `[1:0]`, vanishing bottom ones a
/// root at `[0:1]`; both are detected by exact comparison with zero. The
/// remaining finite roots come from the eigenvalues of the companion matrix,
/// polished by two Newton steps. Roots closer than `tol` in chordal distance
/// are merged.
pub fn quartic_roots(f: &QuarticForm, tol: f64) -> Result<Vec<Root>> {
    let c = &f.coeffs;
    let nonzero: Vec<usize> = (0..5).filter(|&i| c[i].norm() != 0.0).collect();
    let (lo, hi) = match (nonzero.first(), nonzero.last()) {
        (Some(&lo), Some(&hi)) => (lo, hi),
        _ => return Err(Error::ZeroForm),
    };
    let mut raw: Vec<(ProjPoint, u8, bool)> = Vec::new();
    if hi < 4 {
        raw.push((ProjPoint::infinity(), (4 - hi) as u8, true));
    }
    if lo > 0 {
        raw.push((ProjPoint::zero(), lo as u8, true));
    }
    let poly: Vec<Complex64> = c[lo..=hi].to_vec();
    for z in polynomial_roots(&poly)? {
        raw.push((ProjPoint::affine(z), 1, false));
    }
    Ok(merge(raw, tol))
}

/// Roots of `Σ poly[i] x^i` with nonzero leading and constant coefficients.
fn polynomial_roots(poly: &[Complex64]) -> Result<Vec<Complex64>> {
    let n = poly.len() - 1;
    let roots = match n {
        0 => Vec::new(),
        1 => vec![-poly[0] / poly[1]],
        2 => {
            let (r1, r2) = quadratic_roots(poly[2], poly[1], poly[0]);
            vec![r1, r2]
        }
        _ => {
            let lead = poly[n];
            let mut comp = DMatrix::<Complex64>::zeros(n, n);
            for k in 0..n {
                comp[(0, k)] = -poly[n - 1 - k] / lead;
            }
            for k in 1..n {
                comp[(k, k - 1)] = Complex64::new(1.0, 0.0);
            }
            let eig = comp
                .schur()
                .eigenvalues()
                .ok_or_else(|| Error::InternalInconsistency("companion Schur failed".into()))?;
            eig.iter().map(|&z| polish(poly, z, 2)).collect()
        }
    };
    Ok(roots)
}

/// Roots of `a x² + b x + c` with `a, c ≠ 0`, avoiding cancellation.
fn quadratic_roots(a: Complex64, b: Complex64, c: Complex64) -> (Complex64, Complex64) {
    let sq = (b * b - a * c * 4.0).sqrt();
    let plus = b + sq;
    let minus = b - sq;
    let q = if plus.norm() >= minus.norm() { plus } else { minus } * -0.5;
    (q / a, c / q)
}

fn horner(poly: &[Complex64], x: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::new(0.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    for &c in poly.iter().rev() {
        dp = dp * x + p;
        p = p * x + c;
    }
    (p, dp)
}

fn polish(poly: &[Complex64], mut x: Complex64, steps: usize) -> Complex64 {
    for _ in 0..steps {
        let (p, dp) = horner(poly, x);
        if dp.norm() == 0.0 {
            break;
        }
        let next = x - p / dp;
        if !next.is_finite() || horner(poly, next).0.norm() > p.norm() {
            break;
        }
        x = next;
    }
    x
}

fn merge(raw: Vec<(ProjPoint, u8, bool)>, tol: f64) -> Vec<Root> {
    // (representative, multiplicity, pinned, accumulated affine sum / count)
    let mut clusters: Vec<(Vec<ProjPoint>, u8, Option<ProjPoint>)> = Vec::new();
    for (p, mult, pinned) in raw {
        match clusters
            .iter_mut()
            .find(|(members, _, _)| members.iter().any(|q| q.chordal(&p) <= tol))
        {
            Some((members, m, pin)) => {
                members.push(p);
                *m += mult;
                if pinned {
                    *pin = Some(p);
                }
            }
            None => clusters.push((vec![p], mult, pinned.then_some(p))),
        }
    }
    clusters
        .into_iter()
        .map(|(members, multiplicity, pin)| {
            let point = pin.unwrap_or_else(|| mean_point(&members));
            Root {
                point,
                multiplicity,
            }
        })
        .collect()
}

fn mean_point(members: &[ProjPoint]) -> ProjPoint {
    if members.len() == 1 {
        return members[0];
    }
    let first = members[0];
    // average in whichever chart the first member is normalized in
    let use_affine = first.c1().norm() >= first.c0().norm();
    let mut acc = Complex64::new(0.0, 0.0);
    for m in members {
        let v = if use_affine {
            m.c0() / m.c1()
        } else {
            m.c1() / m.c0()
        };
        acc += v;
    }
    acc /= members.len() as f64;
    if use_affine {
        ProjPoint::affine(acc)
    } else {
        ProjPoint::new(Complex64::new(1.0, 0.0), acc).expect("finite")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn expand(roots: &[Root]) -> Vec<ProjPoint> {
        roots
            .iter()
            .flat_map(|r| std::iter::repeat(r.point).take(r.multiplicity as usize))
            .collect()
    }

    fn find(roots: &[Root], x: ProjPoint) -> Option<Root> {
        roots.iter().copied().find(|r| r.point.chordal(&x) < 1e-12)
    }

    #[test]
    fn genus_zero_discriminant_roots() {
        let f = QuarticForm::from_real([0.0, 0.0, 35.0 / 36.0, 0.0, -1.0 / 36.0]);
        let roots = quartic_roots(&f, DEFAULT_MERGE_TOL).unwrap();
        assert_eq!(roots.len(), 3);
        assert_eq!(find(&roots, ProjPoint::zero()).unwrap().multiplicity, 2);
        let s = 35f64.sqrt();
        assert_eq!(find(&roots, ProjPoint::real(s)).unwrap().multiplicity, 1);
        assert_eq!(find(&roots, ProjPoint::real(-s)).unwrap().multiplicity, 1);
    }

    #[test]
    fn palindromic_simple_walk_roots() {
        let f = QuarticForm::from_real([1.0 / 256.0, -0.125, 127.0 / 128.0, -0.125, 1.0 / 256.0]);
        let roots = quartic_roots(&f, DEFAULT_MERGE_TOL).unwrap();
        assert_eq!(roots.len(), 4);
        let s3 = 3f64.sqrt();
        let s5 = 5f64.sqrt();
        for x in [9.0 - 4.0 * s5, 7.0 - 4.0 * s3, 7.0 + 4.0 * s3, 9.0 + 4.0 * s5] {
            let r = find(&roots, ProjPoint::real(x)).expect("root present");
            assert_eq!(r.multiplicity, 1);
        }
    }

    #[test]
    fn monomial_has_quadruple_root() {
        let f = QuarticForm::from_real([0.0, 0.0, 0.0, 0.0, 1.0]);
        let roots = quartic_roots(&f, DEFAULT_MERGE_TOL).unwrap();
        assert_eq!(roots.len(), 1);
        assert_eq!(roots[0].multiplicity, 4);
        assert!(roots[0].point.chordal(&ProjPoint::zero()) == 0.0);
        let g = QuarticForm::from_real([1.0, 0.0, 0.0, 0.0, 0.0]);
        let roots = quartic_roots(&g, DEFAULT_MERGE_TOL).unwrap();
        assert_eq!(roots[0].multiplicity, 4);
        assert!(roots[0].point.is_infinity(0.0));
    }

    #[test]
    fn zero_form_is_rejected() {
        let f = QuarticForm::from_real([0.0; 5]);
        assert!(matches!(quartic_roots(&f, 1e-7), Err(Error::ZeroForm)));
    }

    #[test]
    fn merges_numerical_double_roots() {
        // (x - 2)^2 (x^2 + 1)
        let f = QuarticForm::from_real([4.0, -4.0, 5.0, -4.0, 1.0]);
        let roots = quartic_roots(&f, DEFAULT_MERGE_TOL).unwrap();
        let total: u8 = roots.iter().map(|r| r.multiplicity).sum();
        assert_eq!(total, 4);
        assert_eq!(find_near(&roots, 2.0).multiplicity, 2);
        assert_eq!(expand(&roots).len(), 4);
    }

    fn find_near(roots: &[Root], x: f64) -> Root {
        *roots
            .iter()
            .min_by(|a, b| {
                a.point
                    .chordal(&ProjPoint::real(x))
                    .total_cmp(&b.point.chordal(&ProjPoint::real(x)))
            })
            .unwrap()
    }
}

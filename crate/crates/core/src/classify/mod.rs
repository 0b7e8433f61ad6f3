//! Degeneracy and genus of the kernel curve, its singular point, and the
//! branch points of the two projections.

mod roots;

use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;
use serde::{Serialize, Serializer};

pub use roots::{quartic_roots, Root, DEFAULT_MERGE_TOL};

use crate::error::{Error, Result};
use crate::kernel::{discriminant, Axis, CurvePoint, ProjPoint, QuarticForm};
use crate::model::{step_set, StepSet, WalkModel};

/// Tolerance on `|Im x| / max(1, |x|)` for a root to count as real.
pub const REALNESS_TOL: f64 = 1e-7;

/// Which diagonal carries the whole support in the third degenerate case.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Diagonal {
    /// Support inside `{(1,1), (-1,-1)}`.
    Diagonal,
    /// Support inside `{(-1,1), (1,-1)}`.
    Antidiagonal,
}

/// Degeneracy verdict on a model.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Degeneracy {
    NonDegenerate,
    /// No step with first coordinate `i`.
    Case1 { i: i8 },
    /// No step with second coordinate `j`.
    Case2 { j: i8 },
    Case3(Diagonal),
}

impl fmt::Display for Degeneracy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Degeneracy::NonDegenerate => write!(f, "NonDegenerate"),
            Degeneracy::Case1 { i } => write!(f, "Case1(i={i})"),
            Degeneracy::Case2 { j } => write!(f, "Case2(j={j})"),
            Degeneracy::Case3(Diagonal::Diagonal) => write!(f, "Case3(diagonal)"),
            Degeneracy::Case3(Diagonal::Antidiagonal) => write!(f, "Case3(antidiagonal)"),
        }
    }
}

impl Serialize for Degeneracy {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl Degeneracy {
    pub fn is_degenerate(&self) -> bool {
        !matches!(self, Degeneracy::NonDegenerate)
    }
}

/// The four families of genus-zero models, in their canonical order.
///
/// Each family is mapped onto the first one by inverting some of the
/// coordinates; [`G0Family::reduce`] builds the reflected model and
/// [`G0Family::swaps`] says which projective coordinates to exchange to carry
/// points of the reduced curve back to the original one.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum G0Family {
    /// `d(-1,-1) = d(-1,0) = d(0,-1) = 0`.
    First,
    /// `d(-1,1) = d(-1,0) = d(0,1) = 0`.
    Second,
    /// `d(1,1) = d(1,0) = d(0,1) = 0`.
    Third,
    /// `d(1,-1) = d(1,0) = d(0,-1) = 0`.
    Fourth,
}

impl G0Family {
    pub const ALL: [G0Family; 4] = [
        G0Family::First,
        G0Family::Second,
        G0Family::Third,
        G0Family::Fourth,
    ];

    /// Normal `n` with `n·s ≥ 0` for every step of the family.
    pub fn normal(&self) -> (i8, i8) {
        match self {
            G0Family::First => (1, 1),
            G0Family::Second => (1, -1),
            G0Family::Third => (-1, -1),
            G0Family::Fourth => (-1, 1),
        }
    }

    /// `(swap_x, swap_y)`.
    pub fn swaps(&self) -> (bool, bool) {
        let (nx, ny) = self.normal();
        (nx < 0, ny < 0)
    }

    /// 1-based index in the canonical order.
    pub fn index(&self) -> u8 {
        match self {
            G0Family::First => 1,
            G0Family::Second => 2,
            G0Family::Third => 3,
            G0Family::Fourth => 4,
        }
    }

    /// The model in the first family whose curve is the image of the
    /// original one under [`Self::swaps`].
    pub fn reduce(&self, m: &WalkModel) -> WalkModel {
        let (nx, ny) = self.normal();
        m.reflected(nx, ny)
    }

    /// The singular point of curves in this family.
    pub fn omega(&self) -> CurvePoint {
        let (sx, sy) = self.swaps();
        CurvePoint::new(ProjPoint::zero(), ProjPoint::zero()).swapped(sx, sy)
    }

    pub fn from_normal(n: (i8, i8)) -> Option<Self> {
        Self::ALL.into_iter().find(|f| f.normal() == n)
    }
}

/// Classification of a model.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ClassificationReport {
    pub degeneracy: Degeneracy,
    pub genus: Option<u8>,
    pub omega: Option<CurvePoint>,
    pub half_plane_witness: Option<(i8, i8)>,
    pub g0_family: Option<G0Family>,
}

/// How the branch points were labeled.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum BranchLabeling {
    /// `a1 = a2` is the double root; `a3`, `a4` come from the closed-form
    /// table of the first family.
    GenusZeroCanonical,
    /// Four simple real roots listed in the cyclic order of the real
    /// projective line starting after `1`; the quartic is positive on the
    /// arc `(a4, a1)` containing `1` and negative on `(a3, a4)`.
    GenusOneCyclic,
}

/// Branch points `a1..a4` of the x-projection and `b1..b4` of the
/// y-projection, with multiplicity expressed by repetition.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BranchData {
    pub a: [ProjPoint; 4],
    pub b: [ProjPoint; 4],
    pub labeling: BranchLabeling,
}

/// Degeneracy verdict from the support of the weights. Checks run in the
/// order: empty column, empty row, diagonal support; the first match is
/// returned.
pub fn is_degenerate(m: &WalkModel) -> Degeneracy {
    degeneracy_of(&step_set(m))
}

pub fn degeneracy_of(s: &StepSet) -> Degeneracy {
    for i in [1i8, -1] {
        if s.iter().all(|(a, _)| a != i) {
            return Degeneracy::Case1 { i };
        }
    }
    for j in [1i8, -1] {
        if s.iter().all(|(_, b)| b != j) {
            return Degeneracy::Case2 { j };
        }
    }
    if s.iter().all(|st| st == (1, 1) || st == (-1, -1)) {
        return Degeneracy::Case3(Diagonal::Diagonal);
    }
    if s.iter().all(|st| st == (-1, 1) || st == (1, -1)) {
        return Degeneracy::Case3(Diagonal::Antidiagonal);
    }
    Degeneracy::NonDegenerate
}

/// First normal among the eight candidates whose closed half-plane contains
/// every step. Diagonal normals are tried first, in family order.
pub fn half_plane_witness(s: &StepSet) -> Option<(i8, i8)> {
    const CANDIDATES: [(i8, i8); 8] = [
        (1, 1),
        (1, -1),
        (-1, -1),
        (-1, 1),
        (1, 0),
        (-1, 0),
        (0, 1),
        (0, -1),
    ];
    CANDIDATES.into_iter().find(|&(nx, ny)| {
        s.iter()
            .all(|(i, j)| (nx as i32) * (i as i32) + (ny as i32) * (j as i32) >= 0)
    })
}

/// Whether a quartic form has a root of multiplicity at least two.
pub fn has_double_root(f: &QuarticForm, tol: f64) -> Result<bool> {
    Ok(quartic_roots(f, tol)?.iter().any(|r| r.multiplicity >= 2))
}

/// Degeneracy, genus, singular point and half-plane witness.
///
/// For degenerate models only the verdict is filled in. The genus comes from
/// the exact half-plane test; the numeric double-root test on both
/// discriminants must agree with it, and in genus zero the double roots must
/// sit at the coordinates of the singular point.
pub fn genus_report(m: &WalkModel) -> Result<ClassificationReport> {
    let steps = step_set(m);
    let degeneracy = degeneracy_of(&steps);
    if degeneracy.is_degenerate() {
        return Ok(ClassificationReport {
            degeneracy,
            genus: None,
            omega: None,
            half_plane_witness: None,
            g0_family: None,
        });
    }
    let witness = half_plane_witness(&steps);
    let family = match witness {
        None => None,
        Some(n) => Some(G0Family::from_normal(n).ok_or_else(|| {
            Error::InternalInconsistency(format!(
                "nondegenerate model lies in the half-plane of the axis normal {n:?}"
            ))
        })?),
    };
    let genus = if family.is_some() { 0 } else { 1 };
    let omega = family.map(|f| f.omega());

    let d1 = quartic_roots(&discriminant(m, Axis::X), DEFAULT_MERGE_TOL)?;
    let d2 = quartic_roots(&discriminant(m, Axis::Y), DEFAULT_MERGE_TOL)?;
    for (roots, name, coord) in [
        (&d1, "x", omega.map(|o| o.x)),
        (&d2, "y", omega.map(|o| o.y)),
    ] {
        let doubles: Vec<&Root> = roots.iter().filter(|r| r.multiplicity >= 2).collect();
        match coord {
            None if !doubles.is_empty() => {
                return Err(Error::InternalInconsistency(format!(
                    "genus one by the half-plane test but the {name}-discriminant has a double root"
                )))
            }
            Some(c) if !doubles.iter().any(|r| r.point.chordal(&c) <= 1e-6) => {
                return Err(Error::InternalInconsistency(format!(
                    "genus zero by the half-plane test but the {name}-discriminant has no double root at the singular point"
                )))
            }
            _ => {}
        }
    }
    Ok(ClassificationReport {
        degeneracy,
        genus: Some(genus),
        omega,
        half_plane_witness: witness,
        g0_family: family,
    })
}

/// Roots `(a3, a4)` of `α2 + α3 x + α4 x²` for a first-family discriminant
/// `x²(α2 + α3 x + α4 x²)`, as `[2α2 : R - α3]` and `[-2α2 : R + α3]` with
/// `R` the principal square root of `α3² - 4α2α4`.
pub(crate) fn genus_zero_pair(alpha: &[Complex64; 5]) -> (ProjPoint, ProjPoint, Complex64) {
    let (a2, a3, a4) = (alpha[2], alpha[3], alpha[4]);
    let r = (a3 * a3 - a2 * a4 * 4.0).sqrt();
    let p3 = ProjPoint::new(a2 * 2.0, r - a3).unwrap_or_else(ProjPoint::infinity);
    let p4 = ProjPoint::new(-a2 * 2.0, r + a3).unwrap_or_else(ProjPoint::infinity);
    (p3, p4, r)
}

fn flip(p: ProjPoint, swap: bool) -> ProjPoint {
    if swap {
        ProjPoint::new(p.c1(), p.c0()).expect("normalized point")
    } else {
        p
    }
}

/// Branch points of both projections.
pub fn branch_points(m: &WalkModel) -> Result<BranchData> {
    let report = genus_report(m)?;
    if report.degeneracy.is_degenerate() {
        return Err(Error::DegenerateModel(report.degeneracy));
    }
    match report.g0_family {
        Some(family) => {
            let reduced = family.reduce(m);
            let (sx, sy) = family.swaps();
            let alpha = discriminant(&reduced, Axis::X).coeffs;
            let beta = discriminant(&reduced, Axis::Y).coeffs;
            let (a3, a4, _) = genus_zero_pair(&alpha);
            let (b3, b4, _) = genus_zero_pair(&beta);
            let omega = family.omega();
            Ok(BranchData {
                a: [omega.x, omega.x, flip(a3, sx), flip(a4, sx)],
                b: [omega.y, omega.y, flip(b3, sy), flip(b4, sy)],
                labeling: BranchLabeling::GenusZeroCanonical,
            })
        }
        None => Ok(BranchData {
            a: cyclic_labels(&discriminant(m, Axis::X))?,
            b: cyclic_labels(&discriminant(m, Axis::Y))?,
            labeling: BranchLabeling::GenusOneCyclic,
        }),
    }
}

/// Angle of a real point of P¹ on the circle, with `x = tan(θ/2)`.
fn angle(p: &ProjPoint) -> f64 {
    2.0 * p.c0().re.atan2(p.c1().re)
}

fn point_at_angle(theta: f64) -> ProjPoint {
    ProjPoint::from_real((theta / 2.0).sin(), (theta / 2.0).cos()).expect("unit vector")
}

/// Labels four simple real roots `[a1, a2, a3, a4]` in the order they are met
/// when moving up the real projective line from `1`.
fn cyclic_labels(f: &QuarticForm) -> Result<[ProjPoint; 4]> {
    let roots = quartic_roots(f, DEFAULT_MERGE_TOL)?;
    if roots.len() != 4 {
        return Err(Error::InternalInconsistency(
            "genus one discriminant has a multiple root".into(),
        ));
    }
    let max_imag = roots
        .iter()
        .map(|r| r.point.max_imag_ratio())
        .fold(0.0, f64::max);
    if max_imag > REALNESS_TOL {
        return Err(Error::NonRealBranchPoints { max_imag });
    }
    let start = PI / 2.0;
    let mut keyed: Vec<(f64, ProjPoint)> = roots
        .iter()
        .map(|r| {
            let p = ProjPoint::from_real(r.point.c0().re, r.point.c1().re).expect("real root");
            ((angle(&p) - start).rem_euclid(2.0 * PI), p)
        })
        .collect();
    keyed.sort_by(|a, b| a.0.total_cmp(&b.0));
    let sign_at = |k: f64| f.eval(&point_at_angle(k + start)).re;
    let pos = sign_at((keyed[3].0 + keyed[0].0 + 2.0 * PI) / 2.0);
    let neg = sign_at((keyed[2].0 + keyed[3].0) / 2.0);
    if !(pos > 0.0 && neg < 0.0) {
        return Err(Error::InternalInconsistency(
            "discriminant signs do not alternate around the branch points".into(),
        ));
    }
    Ok([keyed[0].1, keyed[1].1, keyed[2].1, keyed[3].1])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::{kernel_eval, kernel_gradient};
    use num_bigint::BigInt;
    use num_rational::BigRational;

    fn quarter() -> BigRational {
        BigRational::new(BigInt::from(1), BigInt::from(4))
    }

    fn simple() -> WalkModel {
        WalkModel::equal_weights(&[(1, 0), (-1, 0), (0, 1), (0, -1)], quarter()).unwrap()
    }

    fn g0(steps: &[(i8, i8)]) -> WalkModel {
        WalkModel::equal_weights(steps, quarter()).unwrap()
    }

    #[test]
    fn degeneracy_examples() {
        assert_eq!(
            is_degenerate(&g0(&[(-1, 1), (1, -1)])),
            Degeneracy::Case3(Diagonal::Antidiagonal)
        );
        assert_eq!(is_degenerate(&g0(&[(0, 1), (0, -1)])), Degeneracy::Case1 { i: 1 });
        assert_eq!(is_degenerate(&simple()), Degeneracy::NonDegenerate);
        assert_eq!(Degeneracy::Case2 { j: -1 }.to_string(), "Case2(j=-1)");
    }

    #[test]
    fn genus_examples() {
        let r = genus_report(&simple()).unwrap();
        assert_eq!(r.genus, Some(1));
        assert!(r.omega.is_none() && r.half_plane_witness.is_none());

        let r = genus_report(&g0(&[(-1, 1), (1, -1), (1, 1)])).unwrap();
        assert_eq!(r.genus, Some(0));
        assert_eq!(r.half_plane_witness, Some((1, 1)));
        assert_eq!(r.omega, Some(CurvePoint::new(ProjPoint::zero(), ProjPoint::zero())));

        let r = genus_report(&g0(&[(-1, 1), (1, -1), (-1, -1)])).unwrap();
        assert_eq!(r.g0_family, Some(G0Family::Third));
        assert_eq!(
            r.omega,
            Some(CurvePoint::new(ProjPoint::infinity(), ProjPoint::infinity()))
        );
    }

    #[test]
    fn omega_is_singular_in_every_family() {
        let models = [
            g0(&[(-1, 1), (1, -1), (1, 1)]),
            g0(&[(-1, -1), (1, 1), (0, -1)]),
            g0(&[(-1, 1), (1, -1), (-1, -1)]),
            g0(&[(-1, -1), (1, 1), (-1, 0), (0, 1)]),
        ];
        for (m, fam) in models.iter().zip(G0Family::ALL) {
            let r = genus_report(m).unwrap();
            assert_eq!(r.g0_family, Some(fam));
            let o = r.omega.unwrap();
            assert!(kernel_eval(m, &o).norm() <= 1e-12);
            for g in kernel_gradient(m, &o) {
                assert!(g.norm() <= 1e-9);
            }
        }
    }

    #[test]
    fn genus_zero_branch_points() {
        let m = g0(&[(-1, 1), (1, -1), (1, 1)]);
        let bd = branch_points(&m).unwrap();
        assert_eq!(bd.a[0], ProjPoint::zero());
        assert_eq!(bd.a[1], ProjPoint::zero());
        let s = 35f64.sqrt();
        // a3 = (-α3 - R)/(2α4) with α3 = 0, α4 < 0
        assert!(bd.a[2].chordal(&ProjPoint::real(s)) < 1e-12);
        assert!(bd.a[3].chordal(&ProjPoint::real(-s)) < 1e-12);
        assert_eq!(bd.a, bd.b);
    }

    #[test]
    fn simple_walk_branch_points() {
        let bd = branch_points(&simple()).unwrap();
        let expect = [
            7.0 + 4.0 * 3f64.sqrt(),
            9.0 + 4.0 * 5f64.sqrt(),
            9.0 - 4.0 * 5f64.sqrt(),
            7.0 - 4.0 * 3f64.sqrt(),
        ];
        for (p, x) in bd.a.iter().zip(expect) {
            assert!(p.chordal(&ProjPoint::real(x)) < 1e-12, "{p:?} vs {x}");
        }
        assert_eq!(bd.labeling, BranchLabeling::GenusOneCyclic);
    }
}

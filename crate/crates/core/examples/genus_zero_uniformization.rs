// The rational parametrization of a genus-zero kernel curve, with σ acting
// as multiplication by q.

use kernelcurve::classify::G0Family;
use kernelcurve::involutions::{Direction, Iota, KernelCurve};
use kernelcurve::model::{parse_rational, WalkModel};
use kernelcurve::uniform_g0::{q_candidates, uniformize_genus0};
use num_complex::Complex64;

pub fn run_example() {
    let m = WalkModel::equal_weights(&[(-1, 1), (1, -1), (1, 1)], parse_rational("1/4").unwrap()).unwrap();
    let u = uniformize_genus0(&m).unwrap();
    let (q_big, q_small) = q_candidates(&m).unwrap();
    println!("q = {} (closed form 71 + 12√35 = {})", u.q, 71.0 + 12.0 * 35f64.sqrt());
    assert!((u.q - (71.0 + 12.0 * 35f64.sqrt())).abs() < 1e-9);
    assert!((u.q - q_big).abs() < 1e-10 && (q_big * q_small - 1.0).abs() < 1e-12);
    assert_eq!(u.family, G0Family::First);

    let curve = KernelCurve::new(&m).unwrap();
    let s = Complex64::new(0.8, 0.45);
    let p = u.phi_affine(s);
    println!("φ({s}) = x {:?}, y {:?}", p.x.to_affine(), p.y.to_affine());
    assert!(curve.residual(&p) < 1e-12);
    let i1 = curve.iota(Iota::One, &p).unwrap();
    let i2 = curve.iota(Iota::Two, &p).unwrap();
    let sg = curve.sigma(&p, Direction::Forward).unwrap();
    assert!(u.phi_affine(1.0 / s).distance(&i1) < 1e-9);
    assert!(u.phi_affine(u.q / s).distance(&i2) < 1e-9);
    assert!(u.phi_affine(u.q * s).distance(&sg) < 1e-9);
    println!("φ(1/s) = ι1 φ(s), φ(q/s) = ι2 φ(s), φ(qs) = σ φ(s)");

    // the other families reduce to the first by inverting coordinates
    let third = WalkModel::equal_weights(&[(1, -1), (-1, 1), (-1, -1)], parse_rational("1/4").unwrap()).unwrap();
    let v = uniformize_genus0(&third).unwrap();
    assert_eq!(v.family, G0Family::Third);
    let c3 = KernelCurve::new(&third).unwrap();
    let p3 = v.phi_affine(s);
    assert!(c3.residual(&p3) < 1e-12);
    assert!(v.phi_affine(v.q * s).distance(&c3.sigma(&p3, Direction::Forward).unwrap()) < 1e-9);
    println!("third family: q = {}, Ω = {:?}", v.q, v.omega());
}

#[allow(dead_code)]
fn main() {
    run_example();
}

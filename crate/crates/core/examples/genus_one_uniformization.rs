// Periods and the elliptic parametrization Λ of the simple-walk curve.

use kernelcurve::involutions::{Direction, Iota};
use kernelcurve::model::{parse_rational, WalkModel};
use kernelcurve::uniform_g1::uniformize_genus1;
use num_complex::Complex64;

pub fn run_example() {
    let m = WalkModel::equal_weights(&[(1, 0), (-1, 0), (0, 1), (0, -1)], parse_rational("1/4").unwrap()).unwrap();
    let u = uniformize_genus1(&m).unwrap();
    println!("ω1 = {}, ω2 = {}, ω3 = {}", u.omega1, u.omega2, u.omega3);
    assert!(u.omega1.re.abs() < 1e-12 && u.omega1.im > 0.0);
    assert!(u.omega3 > 0.0 && u.omega3 < u.omega2);
    assert!((u.omega3 / u.omega2 - 0.5).abs() < 1e-8);

    let (g2, g3) = u.algebraic_invariants();
    println!("g2 = {} (lattice {}), g3 = {} (lattice {})", g2, u.g2, g3, u.g3);
    assert!((u.g2.re - g2).abs() <= 1e-8 * g2.abs().max(1.0));
    assert!((u.g3.re - g3).abs() <= 1e-8 * g3.abs().max(1.0));

    let curve = u.curve();
    let w = Complex64::new(0.37 * u.omega2, 0.29 * u.omega1.im);
    let p = u.lambda_map(w);
    println!("Λ({w}) = x {:?}, y {:?}", p.x.to_affine(), p.y.to_affine());
    assert!(curve.residual(&p) < 1e-10);
    assert!(u.lambda_map(w + u.omega1).distance(&p) < 1e-9);
    assert!(u.lambda_map(w + u.omega2).distance(&p) < 1e-9);
    assert!(u.lambda_map(-w).distance(&curve.iota(Iota::One, &p).unwrap()) < 1e-8);
    let shifted = u.lambda_map(w + u.omega3);
    assert!(shifted.distance(&curve.sigma(&p, Direction::Forward).unwrap()) < 1e-8);
    println!("Λ(w + ω3) = σ Λ(w)");
}

#[allow(dead_code)]
fn main() {
    run_example();
}

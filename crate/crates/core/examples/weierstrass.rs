// The Weierstrass function of a lattice and its differential equation.

use kernelcurve::uniform_g1::Lattice;
use num_complex::Complex64;

pub fn run_example() {
    let l = Lattice::new(Complex64::new(0.0, 1.0), Complex64::new(1.0, 0.0)).unwrap();
    println!("square lattice: g2 = {}, g3 = {}", l.g2, l.g3);
    // the square lattice has g3 = 0 and g2 = Γ(1/4)^8 / (16 π^2)
    let gamma_quarter: f64 = 3.625_609_908_221_908;
    let g2 = gamma_quarter.powi(8) / (16.0 * std::f64::consts::PI.powi(2));
    assert!((l.g2.re - g2).abs() < 1e-9 * g2);
    assert!(l.g3.norm() < 1e-9);

    let l = Lattice::new(Complex64::new(0.2, 1.3), Complex64::new(1.7, 0.1)).unwrap();
    for w in [Complex64::new(0.3, 0.2), Complex64::new(-2.1, 4.4)] {
        let (p, dp) = l.weierstrass(w).unwrap();
        let lhs = dp * dp;
        let rhs = 4.0 * p * p * p - l.g2 * p - l.g3;
        println!("℘({w}) = {p}, ℘' = {dp}, |℘'² - (4℘³ - g2℘ - g3)| = {:.2e}", (lhs - rhs).norm());
        assert!((lhs - rhs).norm() <= 1e-9 * rhs.norm().max(1.0));
        let (p2, _) = l.weierstrass(w + l.omega1 * 3.0 - l.omega2).unwrap();
        assert!((p2 - p).norm() <= 1e-9 * p.norm().max(1.0));
    }
    assert!(l.weierstrass(l.omega1 + l.omega2).is_err());
}

#[allow(dead_code)]
fn main() {
    run_example();
}

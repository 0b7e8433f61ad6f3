// The switches ι1, ι2 and their composition σ on a point of the curve.

use kernelcurve::involutions::{Direction, Iota, KernelCurve};
use kernelcurve::kernel::ProjPoint;
use kernelcurve::model::{parse_rational, WalkModel};
use num_complex::Complex64;

pub fn run_example() {
    let t = parse_rational("1/3").unwrap();
    let m = WalkModel::equal_weights(&[(-1, 0), (0, -1), (1, 1)], t).unwrap();
    let curve = KernelCurve::new(&m).unwrap();
    let [p, q] = curve.points_over_x(ProjPoint::affine(Complex64::new(0.6, 0.2))).unwrap();
    println!("fiber over x = 0.6+0.2i: {:?} and {:?}", p.y.to_affine(), q.y.to_affine());

    let i1 = curve.iota(Iota::One, &p).unwrap();
    assert!(i1.distance(&q) < 1e-12);
    assert!(curve.iota(Iota::One, &i1).unwrap().distance(&p) < 1e-12);
    let s = curve.sigma(&p, Direction::Forward).unwrap();
    let back = curve.sigma(&s, Direction::Inverse).unwrap();
    assert!(back.distance(&p) < 1e-10);
    assert!(curve.residual(&s) < 1e-12);

    // Kreweras: σ has order 3
    let orbit = curve.orbit(&p, 3).unwrap();
    for (n, pt) in orbit.iter().enumerate() {
        println!("σ^{n}: x = {:?}", pt.x.to_affine());
    }
    assert!(orbit[3].distance(&p) < 1e-9);

    let fixed = curve.fixed_points(Iota::One).unwrap();
    println!("{} fixed points of ι1", fixed.len());
    assert_eq!(fixed.len(), 4);
}

#[allow(dead_code)]
fn main() {
    run_example();
}

// The order of σ, by iteration and from the uniformization.

use kernelcurve::involutions::{sigma_order, KernelCurve, OrderMethod, SigmaOrder};
use kernelcurve::kernel::ProjPoint;
use kernelcurve::model::{parse_rational, WalkModel};
use num_complex::Complex64;

fn order_of(steps: &[(i8, i8)], t: &str) -> kernelcurve::involutions::OrbitReport {
    let m = WalkModel::equal_weights(steps, parse_rational(t).unwrap()).unwrap();
    let curve = KernelCurve::new(&m).unwrap();
    let start = curve.points_over_x(ProjPoint::affine(Complex64::new(0.4, 0.3))).unwrap()[0];
    sigma_order(&m, &start, 50, 1e-8).unwrap()
}

pub fn run_example() {
    let simple = order_of(&[(1, 0), (-1, 0), (0, 1), (0, -1)], "1/4");
    println!("simple walk: {:?} via {:?}, ω3/ω2 = {:?}", simple.order, simple.method, simple.period_ratio);
    assert_eq!(simple.order, SigmaOrder::Finite(2));
    assert_eq!(simple.iteration, Some(SigmaOrder::Finite(2)));
    assert!((simple.period_ratio.unwrap() - 0.5).abs() < 1e-8);

    let gessel = order_of(&[(1, 0), (-1, 0), (1, 1), (-1, -1)], "1/4");
    println!("Gessel: {:?}", gessel.order);
    assert_eq!(gessel.order, SigmaOrder::Finite(4));

    let g0 = order_of(&[(-1, 1), (1, -1), (1, 1)], "1/4");
    println!("genus 0: {:?} with q = {:?}", g0.order, g0.multiplier);
    assert_eq!(g0.method, OrderMethod::GenusZeroMultiplier);
    assert!(matches!(g0.order, SigmaOrder::Unbounded(_)));

    // a model whose group is infinite: no small denominator fits ω3/ω2
    let inf = order_of(&[(0, 1), (1, 1), (-1, 0), (0, -1)], "1/4");
    println!("infinite group: {:?}, ω3/ω2 = {:?}", inf.order, inf.period_ratio);
    assert_eq!(inf.order, SigmaOrder::Unbounded(50));
    assert_eq!(inf.iteration, Some(SigmaOrder::Unbounded(50)));
}

#[allow(dead_code)]
fn main() {
    run_example();
}

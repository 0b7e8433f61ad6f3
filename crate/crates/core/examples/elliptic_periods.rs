// Complete and incomplete elliptic integrals between real roots of a
// quartic.

use kernelcurve::kernel::QuarticForm;
use kernelcurve::uniform_g1::{partial_integral, period_integral, IntegralKind};

pub fn run_example() {
    // D = (1 - x²)(1 - k²x²) with k² = 1/2, so ∫_{-1}^{1} dx/√D = 2K(k)
    let d = QuarticForm::from_real([1.0, 0.0, -1.5, 0.0, 0.5]);
    let full = period_integral(&d, -1.0, 1.0, IntegralKind::Sqrt).unwrap();
    let k = 1.854_074_677_301_372; // K(1/√2)
    println!("∫ dx/√D over (-1, 1) = {full}, 2K = {}", 2.0 * k);
    assert!((full - 2.0 * k).abs() < 1e-12);

    // on (1, √2) the quartic is negative: the other period
    let other = period_integral(&d, 1.0, 2f64.sqrt(), IntegralKind::AbsSqrt).unwrap();
    println!("∫ dx/√|D| over (1, √2) = {other} (= K' = K for k² = 1/2)");
    assert!((other - k).abs() < 1e-12);

    let half = partial_integral(&d, -1.0, 1.0, 0.0, IntegralKind::Sqrt).unwrap();
    assert!((half - k).abs() < 1e-12);
}

#[allow(dead_code)]
fn main() {
    run_example();
}

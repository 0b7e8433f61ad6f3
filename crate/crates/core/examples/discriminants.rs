// Exact discriminants of the kernel in both variables and the identity
// `B̄² - 4ĀC̄ = Δ`.

use kernelcurve::kernel::{decompose_exact, discriminant_exact, Axis};
use kernelcurve::model::{format_rational, parse_rational, WalkModel};

pub fn run_example() {
    let t = parse_rational("1/4").unwrap();
    let m = WalkModel::equal_weights(&[(1, 0), (-1, 0), (0, 1), (0, -1)], t).unwrap();
    let dec = decompose_exact(&m).unwrap();
    for (axis, abc) in [(Axis::X, &dec.abc_x), (Axis::Y, &dec.abc_y)] {
        let delta = discriminant_exact(&m, axis).unwrap();
        let [a, b, c] = abc;
        let four = parse_rational("4").unwrap();
        let product = b.mul(b).sub(&a.mul(c).scale(four));
        assert_eq!(product, delta);
        let shown: Vec<String> = delta.coeffs.iter().map(format_rational).collect();
        println!("{axis:?}: [{}]", shown.join(", "));
    }
    let d1 = discriminant_exact(&m, Axis::X).unwrap();
    let expect = ["1/256", "-1/8", "127/128", "-1/8", "1/256"].map(|s| parse_rational(s).unwrap());
    assert_eq!(d1.coeffs, expect);
}

#[allow(dead_code)]
fn main() {
    run_example();
}

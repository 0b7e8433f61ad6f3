// Exact walk enumeration and the kernel functional equation.

use kernelcurve::model::{format_rational, parse_rational, WalkModel};
use kernelcurve::series::{functional_equation_residual, verify_functional_equation, walk_series};

pub fn run_example() {
    let t = parse_rational("1/4").unwrap();
    let m = WalkModel::equal_weights(&[(1, 0), (-1, 0), (0, 1), (0, -1)], t.clone()).unwrap();
    let q = walk_series(&m, 8).unwrap();
    // excursions of the simple walk weighted by (1/4)^k: Catalan products
    for k in [2, 4, 6, 8] {
        println!("q(0,0,{k}) = {}", format_rational(&q.coeff(0, 0, k)));
    }
    assert_eq!(q.coeff(0, 0, 2), parse_rational("1/8").unwrap());
    assert_eq!(q.coeff(0, 0, 4), parse_rational("10/256").unwrap());

    let report = verify_functional_equation(&m, 10).unwrap();
    println!("residual to order 10: {}", format_rational(&report.residual_max));
    assert!(report.is_exact());

    // a series computed with a different weight does not satisfy the
    // equation of this kernel
    let perturbed = WalkModel::exact(
        &[
            ((1, 0), parse_rational("1/4").unwrap()),
            ((-1, 0), parse_rational("1/4").unwrap()),
            ((0, 1), parse_rational("1/4").unwrap()),
            ((0, -1), parse_rational("1/4").unwrap()),
            ((0, 0), parse_rational("1/10").unwrap()),
        ],
        t,
    )
    .unwrap();
    let wrong = walk_series(&perturbed, 10).unwrap();
    let bad = functional_equation_residual(&m, &wrong).unwrap();
    println!("residual of a foreign series: {} at {:?}", format_rational(&bad.residual_max), bad.first_nonzero);
    assert!(!bad.is_exact());
}

#[allow(dead_code)]
fn main() {
    run_example();
}

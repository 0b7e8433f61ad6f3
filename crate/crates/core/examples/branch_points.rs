// Branch points of the two projections of the simple-walk curve, and the
// singular point of a genus-zero curve.

use kernelcurve::classify::{branch_points, genus_report};
use kernelcurve::model::{parse_rational, WalkModel};

pub fn run_example() {
    let t = parse_rational("1/4").unwrap();
    let m = WalkModel::equal_weights(&[(1, 0), (-1, 0), (0, 1), (0, -1)], t.clone()).unwrap();
    let bp = branch_points(&m).unwrap();
    let a: Vec<f64> = bp.a.iter().map(|p| p.to_affine().unwrap().re).collect();
    println!("a1..a4 = {a:?} ({:?})", bp.labeling);
    let mut sorted = a.clone();
    sorted.sort_by(f64::total_cmp);
    let expect = [0.05573, 0.07180, 13.9282, 17.9443];
    for (x, e) in sorted.iter().zip(expect) {
        assert!((x - e).abs() < 1e-4);
    }
    // closed forms 9 ± 4√5 and 7 ± 4√3
    assert!((a[0] - (7.0 + 4.0 * 3f64.sqrt())).abs() < 1e-10);
    assert!((a[1] - (9.0 + 4.0 * 5f64.sqrt())).abs() < 1e-10);

    let g0 = WalkModel::equal_weights(&[(-1, 1), (1, -1), (1, 1)], t).unwrap();
    let r = genus_report(&g0).unwrap();
    let bp = branch_points(&g0).unwrap();
    println!("genus 0: omega = {:?}", r.omega.unwrap());
    println!("         a = {:?}", bp.a.map(|p| p.to_affine()));
    assert_eq!(bp.a[0], bp.a[1]);
}

#[allow(dead_code)]
fn main() {
    run_example();
}

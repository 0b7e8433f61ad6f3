// Degeneracy and genus of a few classic step sets, then a census of all
// 255 equal-weight step sets.

use kernelcurve::classify::{genus_report, Degeneracy};
use kernelcurve::model::{parse_rational, StepSet, WalkModel};

pub fn run_example() {
    let t = parse_rational("1/4").unwrap();
    let named: [(&str, &[(i8, i8)]); 5] = [
        ("simple walk", &[(1, 0), (-1, 0), (0, 1), (0, -1)]),
        ("Kreweras", &[(-1, 0), (0, -1), (1, 1)]),
        ("Gessel", &[(1, 0), (-1, 0), (1, 1), (-1, -1)]),
        ("tandem", &[(1, 0), (0, -1), (-1, 1)]),
        ("diagonal only", &[(1, 1), (-1, -1)]),
    ];
    for (name, steps) in named {
        let m = WalkModel::equal_weights(steps, t.clone()).unwrap();
        let r = genus_report(&m).unwrap();
        println!("{name:>14}: {} genus {:?} family {:?}", r.degeneracy, r.genus, r.g0_family);
    }
    let kreweras = WalkModel::equal_weights(&[(-1, 0), (0, -1), (1, 1)], t.clone()).unwrap();
    assert_eq!(genus_report(&kreweras).unwrap().genus, Some(1));
    let tandem = WalkModel::equal_weights(&[(1, 0), (0, -1), (-1, 1)], t.clone()).unwrap();
    assert_eq!(genus_report(&tandem).unwrap().genus, Some(1));

    let (mut degenerate, mut g0, mut g1) = (0, 0, 0);
    for mask in 1..=255u8 {
        let steps: Vec<(i8, i8)> = StepSet::from_mask(mask).iter().collect();
        let m = WalkModel::equal_weights(&steps, t.clone()).unwrap();
        let r = genus_report(&m).unwrap();
        match (r.degeneracy, r.genus) {
            (Degeneracy::NonDegenerate, Some(0)) => g0 += 1,
            (Degeneracy::NonDegenerate, Some(1)) => g1 += 1,
            _ => degenerate += 1,
        }
    }
    println!("255 step sets: {degenerate} degenerate, {g0} genus 0, {g1} genus 1");
    assert_eq!(degenerate + g0 + g1, 255);
    // the familiar 79 nondegenerate models with at least one step in each
    // direction form a subset of these
    assert!(g1 + g0 >= 79);
}

#[allow(dead_code)]
fn main() {
    run_example();
}

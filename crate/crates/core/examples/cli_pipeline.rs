// Driving the command line in-process: classify, uniformize, verify.

use kernelcurve::cli;
use serde_json::Value;

fn call(args: &[&str]) -> (i32, String, String) {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = cli::run(args.iter().copied(), &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

pub fn run_example() {
    let dir = std::env::temp_dir().join(format!("kernelcurve-example-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let simple = dir.join("simple.json");
    std::fs::write(&simple, r#"{"weights": [[0, "1/4", 0], ["1/4", 0, "1/4"], [0, "1/4", 0]], "t": "1/4"}"#).unwrap();
    let g0 = dir.join("g0.json");
    std::fs::write(&g0, r#"{"weights": [["1/3", 0, "1/3"], [0, 0, 0], [0, 0, "1/3"]], "t": "1/4"}"#).unwrap();
    let (simple, g0) = (simple.to_str().unwrap(), g0.to_str().unwrap());

    let (code, out, _) = call(&["kernelcurve", "classify", simple]);
    let v: Value = serde_json::from_str(&out).unwrap();
    println!("classify: degeneracy {} genus {}", v["degeneracy"], v["genus"]);
    assert_eq!(code, 0);
    assert_eq!(v["degeneracy"], "NonDegenerate");
    assert_eq!(v["genus"], 1);

    // the classify output is itself a valid model document
    let again = dir.join("again.json");
    std::fs::write(&again, &out).unwrap();
    let (_, out2, _) = call(&["kernelcurve", "classify", again.to_str().unwrap()]);
    let v2: Value = serde_json::from_str(&out2).unwrap();
    assert_eq!(v2["genus"], v["genus"]);

    let (code, out, _) = call(&["kernelcurve", "uniformize", g0]);
    let v: Value = serde_json::from_str(&out).unwrap();
    println!("uniformize: q = {}", v["q"]);
    assert_eq!(code, 0);
    assert!((v["q"].as_f64().unwrap() - 141.9930).abs() < 1e-4);

    let (code, out, _) = call(&["kernelcurve", "verify", simple, "--order", "10"]);
    let v: Value = serde_json::from_str(&out).unwrap();
    println!("verify: residual_max = {}", v["residual_max"]);
    assert_eq!((code, v["residual_max"].as_str()), (0, Some("0")));

    let (code, _, err) = call(&["kernelcurve", "uniformize", simple, "--csv"]);
    println!("misuse: exit {code}, {}", err.trim());
    assert_eq!(code, 2);
    let e: Value = serde_json::from_str(&err).unwrap();
    assert_eq!(e["error_kind"], "Usage");

    std::fs::remove_dir_all(&dir).ok();
}

#[allow(dead_code)]
fn main() {
    run_example();
}

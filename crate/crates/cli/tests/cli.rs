use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_vertexcalc")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> (Value, i32) {
    let mut all = args.to_vec();
    all.extend(["--format", "json"]);
    let o = run(&all);
    (serde_json::from_slice(&o.stdout).expect("json output"), o.status.code().unwrap())
}

#[test]
fn zeta_table() {
    let o = run(&["zeta", "--max", "5"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.contains("zeta(-1) = -1/12"), "{s}");
    assert!(s.contains("zeta(0) = -1/2"), "{s}");
    assert!(s.contains("zeta(-5) = -1/252"), "{s}");
}

#[test]
fn qdim_table() {
    let (doc, code) = json(&["qdim", "--max", "6"]);
    assert_eq!(code, 0);
    assert_eq!(doc["schema"], 1);
    let values: Vec<&str> = doc["rows"].as_array().unwrap().iter().map(|r| r["value"].as_str().unwrap()).collect();
    assert_eq!(values, ["1", "1", "2", "3", "5", "7", "11"]);
}

#[test]
fn chi_shift() {
    let (doc, _) = json(&["chi", "--max", "4"]);
    assert_eq!(doc["shift"], "-1/24");
}

#[test]
fn virasoro_report() {
    let (doc, code) = json(&["verify-virasoro", "--m", "2", "--n", "-2", "--weight", "6"]);
    assert_eq!(code, 0);
    assert_eq!(doc["findings"]["central_term"], "1/2");
    assert_eq!(doc["summary"]["failed"], 0);
    assert_eq!(doc["schema"], 1);
}

#[test]
fn json_is_deterministic() {
    let args = ["verify-jacobi", "--u", "omega", "--v", "h", "--weight", "2", "--window", "3", "--format", "json"];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn violations_exit_one() {
    // too few samples to interpolate a degree-7 polynomial
    let o = run(&["verify-bloch-purity", "--r", "1", "--s", "1", "--m-max", "3"]);
    assert_eq!(o.status.code(), Some(1));
    // the ω pair needs n = 4
    let o = run(&["verify-weak-comm", "--u", "omega", "--v", "omega", "--n-max", "3", "--weight", "0"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("FAIL"));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(run(&["verify-virasoro", "--m", "x"]).status.code(), Some(2));
    assert_eq!(run(&["no-such-command"]).status.code(), Some(2));
    assert_eq!(run(&[]).status.code(), Some(2));
    assert_eq!(run(&["verify-jacobi", "--u", "0,1"]).status.code(), Some(2));
    assert_eq!(run(&["verify-thm31", "--convention", "neg-powers-y3"]).status.code(), Some(2));
}

#[test]
fn config_file() {
    let dir = std::env::temp_dir().join(format!("vertexcalc-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let good = dir.join("good.json");
    std::fs::write(
        &good,
        r#"{"command": {"name": "verify-modified", "m": 3, "n": -3, "weight": 4}, "format": "json"}"#,
    )
    .unwrap();
    let o = run(&["--config", good.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let doc: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(doc["findings"]["central_term"], "9/4");

    let bad = dir.join("bad.json");
    std::fs::write(&bad, r#"{"command": {"name": "zeta", "max": 3, "maximum": 4}}"#).unwrap();
    assert_eq!(run(&["--config", bad.to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(run(&["--config", good.to_str().unwrap(), "zeta"]).status.code(), Some(2));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn output_file_and_cell_filter() {
    let path = std::env::temp_dir().join(format!("vertexcalc-out-{}.json", std::process::id()));
    let o = run(&[
        "verify-axioms",
        "--weight",
        "2",
        "--modes",
        "2",
        "--format",
        "json",
        "--cells",
        "failures",
        "--output",
        path.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let doc: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert!(doc["cells"].as_array().unwrap().is_empty());
    assert!(doc["summary"]["passed"].as_u64().unwrap() > 0);
    std::fs::remove_file(&path).ok();
}

#[test]
fn generating_function_conventions() {
    let (doc, code) = json(&["verify-thm31", "--weight", "1", "--window", "3", "--ydeg", "1"]);
    assert_eq!(code, 0);
    assert!(doc["findings"]["validating_conventions"].as_array().unwrap().len() >= 1);
    let (_, code) =
        json(&["verify-thm31", "--weight", "1", "--window", "3", "--ydeg", "1", "--convention", "neg-powers-y2"]);
    assert_eq!(code, 0);
}

#[test]
fn dilation_identity_small() {
    let (doc, code) = json(&["verify-thm42", "--u", "h", "--v", "h", "--w", "vacuum", "--window", "3", "--ydeg", "2"]);
    assert_eq!(code, 0);
    assert!(doc["summary"]["uncertified"].as_u64().unwrap() > 0);
    assert_eq!(doc["summary"]["failed"], 0);
}

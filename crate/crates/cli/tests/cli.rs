use std::process::{Command, Output};

use serde_json::Value;

fn skewrec(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_skewrec"))
        .args(args)
        .env_remove("SKEWREC_MAX_BITS")
        .output()
        .expect("binary runs")
}

fn result(args: &[&str]) -> Value {
    let out = skewrec(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    let doc: Value = serde_json::from_slice(&out.stdout).expect("json output");
    doc["result"].clone()
}

fn num(v: &Value) -> f64 {
    v.as_str().unwrap().parse().unwrap()
}

#[test]
fn measure_lehmer() {
    let r = result(&["measure", "t^10+t^9-t^7-t^6-t^5-t^4-t^3+t+1"]);
    let (lo, hi) = (num(&r["mahler"]["lo"]), num(&r["mahler"]["hi"]));
    assert!(hi - lo <= 1e-10);
    assert!(((lo + hi) / 2.0 - 1.17628).abs() < 5e-6);
    assert_eq!(r["root_count_outside_unit_circle"], 1);
}

#[test]
fn measure_quadratic_and_cyclotomic() {
    let r = result(&["measure", "[1, 3, 1]"]);
    assert!((num(&r["house"]["lo"]) - 2.618_033_988_749_895).abs() < 1e-9);
    let r = result(&["measure", "t^2+t+1"]);
    assert_eq!(r["is_kronecker"], true);
    assert_eq!(r["mahler"]["lo"], "1");
    assert_eq!(r["mahler"]["hi"], "1");
}

#[test]
fn classify_flags() {
    let r = result(&["classify", "t^10+t^9-t^7-t^6-t^5-t^4-t^3+t+1"]);
    assert_eq!(r["reciprocal"], true);
    let r = result(&["classify", "t^2+t-1"]);
    assert_eq!((r["reciprocal"].clone(), r["skew_reciprocal"].clone()), (false.into(), true.into()));
    let r = result(&["classify", "t^4+1"]);
    assert_eq!(r["reciprocal"], true);
    assert_eq!(r["skew_reciprocal"], true);
    assert_eq!(r["kronecker"], true);
    let r = result(&["classify", "t^3+1"]);
    assert_eq!(r["skew_reciprocal"], Value::Null);
}

#[test]
fn decompose_cases() {
    let r = result(&["decompose", "t^4-3t^2+1"]);
    assert_eq!(r.to_string(), r#"{"case":"square","g":[1,-3,1]}"#);
    let r = result(&["decompose", "t^4+t^3-t+1"]);
    assert_eq!(r["case"], "witness");
    let out = skewrec(&["decompose", "t^2+t-1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn companion_matrices() {
    let r = result(&["companion", "t^2+3t+1"]);
    assert_eq!(r["matrix"].to_string(), "[[0,-1],[1,-3]]");
    assert_eq!(r["symplectic"], true);
    let r = result(&["companion", "--anti", "t^2+3t-1"]);
    assert_eq!(r["matrix"].to_string(), "[[0,1],[1,-3]]");
    assert_eq!(r["anti_symplectic"], true);
    assert_eq!(r["charpoly_matches"], true);
    let r = result(&["companion", "t^2+2t+1"]);
    assert_eq!(r["charpoly"].to_string(), "[1,2,1]");
}

#[test]
fn search_examples() {
    let r = result(&["search", "--kind", "reciprocal", "--degree", "2", "--height", "3", "--house"]);
    assert_eq!(r["witnesses"].to_string(), "[[1,-3,1],[1,3,1]]");
    let r = result(&["search", "--kind", "skew", "--degree", "2", "--height", "3", "--house"]);
    assert_eq!(r["witnesses"].to_string(), "[[-1,-1,1],[-1,1,1]]");
    let r = result(&["search", "--kind", "reciprocal", "--degree", "10", "--height", "1"]);
    assert!(r["witnesses"].as_array().unwrap().iter().any(|w| *w == serde_json::json!([1, 1, 0, -1, -1, -1, -1, -1, 0, 1, 1])));
}

#[test]
fn table_csv() {
    let out = skewrec(&["table", "--heights", "3"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert!(lines[0].starts_with("# "));
    assert!(lines[1].starts_with("i,height,r_lo,r_hi,s_lo,s_hi,q_lo,q_hi"));
    let cells: Vec<f64> = lines[2].split(',').skip(6).take(2).map(|c| c.parse().unwrap()).collect();
    assert!(cells[0] <= 2.0 && 2.0 <= cells[1]);
}

#[test]
fn exit_codes() {
    assert_eq!(skewrec(&["measure", "t^2+"]).status.code(), Some(2));
    assert_eq!(skewrec(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(skewrec(&["table", "--heights", "3,3,3,3,3", "--budget", "100"]).status.code(), Some(4));
    assert_eq!(skewrec(&["measure", "--max-bits", "32", "t^2-3t+1"]).status.code(), Some(3));
    assert_eq!(skewrec(&["measure", "--format", "csv", "t^2-3t+1"]).status.code(), Some(2));
}

#[test]
fn max_bits_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_skewrec"))
        .args(["measure", "t^2-3t+1"])
        .env("SKEWREC_MAX_BITS", "32")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
    let out = Command::new(env!("CARGO_BIN_EXE_skewrec"))
        .args(["classify", "t^2-3t+1"])
        .env("SKEWREC_MAX_BITS", "777")
        .output()
        .unwrap();
    let doc: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["run"]["config"]["max_bits"], 777);
}

#[test]
fn output_is_reproducible() {
    let args = ["search", "--kind", "skew", "--degree", "4", "--height", "2", "--jobs", "2"];
    let a = skewrec(&args);
    let b = skewrec(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let doc: Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(doc["run"]["config"]["tol"], 1e-10);
    assert_eq!(doc["run"]["config"]["jobs"], 2);
}

#[test]
fn output_file() {
    let dir = std::env::temp_dir().join(format!("skewrec-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("out.json");
    let out = skewrec(&["classify", "t^2+1", "--output", path.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let doc: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(doc["result"]["kronecker"], true);
    std::fs::remove_dir_all(dir).unwrap();
}

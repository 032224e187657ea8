use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_arcseries")).args(args).output().expect("binary runs")
}

fn code(args: &[&str]) -> i32 {
    run(args).status.code().expect("exit code")
}

fn json(args: &[&str]) -> Value {
    let mut full = args.to_vec();
    full.extend(["--format", "json"]);
    let out = run(&full);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("valid JSON")
}

fn validator() -> jsonschema::Validator {
    let text = include_str!("../schema/output.schema.json");
    let schema: Value = serde_json::from_str(text).expect("schema parses");
    jsonschema::validator_for(&schema).expect("schema compiles")
}

/// Every leaf number in the document, with its path.
fn numbers(v: &Value, path: &str, out: &mut Vec<String>) {
    match v {
        Value::Number(n) => out.push(format!("{path} = {n}")),
        Value::Array(a) => a.iter().enumerate().for_each(|(i, x)| numbers(x, &format!("{path}[{i}]"), out)),
        Value::Object(o) => o.iter().for_each(|(k, x)| numbers(x, &format!("{path}.{k}"), out)),
        _ => {}
    }
}

const SAMPLES: &[&[&str]] = &[
    &["stirling", "--n", "30", "--k", "3"],
    &["stirling", "--n", "25"],
    &["q", "--k", "4", "--m", "4"],
    &["q", "--table", "5", "6"],
    &["bell", "--n", "5", "--k", "2", "--values", "1/2,-3,2/7,1"],
    &["bell", "--preset", "arccos", "--m", "2", "--k", "2"],
    &["prod", "--k", "6", "--variant", "odd"],
    &["prod", "--k", "6", "--stirling"],
    &["series", "--expr", "arcsin-pow", "--k", "2", "--terms", "8"],
    &["series", "--expr", "arccos-ratio", "--k", "1", "--terms", "12", "--eval", "1/2", "--digits", "25"],
    &["series", "--expr", "shifted", "--k", "1", "--variant", "pi-plus-i-arccosh", "--terms", "5"],
    &["series", "--expr", "alpha-ratio", "--alpha", "-1/3", "--terms", "6"],
    &["series", "--expr", "alpha-ratio", "--alpha", "0.70710678118654752440084436210485e0", "--terms", "4"],
    &["series", "--expr", "arcsinh-pow", "--k", "1", "--tol", "1e-12", "--eval", "-0.3"],
    &["pi", "--repr", "sq8", "--terms", "60", "--digits", "30"],
    &["pi", "--repr", "alpha9", "--alpha", "1/2", "--terms", "30", "--digits", "20"],
    &["pi", "--repr", "classic-central", "--terms", "40"],
    &["verify", "q", "--max", "8"],
    &["diag", "rate", "--k", "2", "--terms", "30", "--digits", "15"],
    &["diag", "limits", "--terms", "30", "--digits", "15"],
    &["diag", "compare", "--expr", "arccosh-ratio", "--k", "2", "--x", "7/10", "--terms", "40"],
    &["diag", "compare", "--expr", "arccos-ratio", "--k", "1", "--x", "3/2", "--terms", "10"],
    &["diag", "maclaurin", "--k", "1", "--j", "3", "--terms", "30"],
    &["diag", "deriv", "--k", "2", "--m", "3", "--form", "shifted-hyp"],
    &["diag", "even-deriv", "--k", "1", "--n", "2", "--hyperbolic"],
    &["diag", "trig", "--tag", "sin-arccos@0", "--alpha", "1/3", "--n", "4"],
];

#[test]
fn json_outputs_match_the_schema() {
    let v = validator();
    for args in SAMPLES {
        let doc = json(args);
        let errors: Vec<String> = v.iter_errors(&doc).map(|e| format!("{} at {}", e, e.instance_path())).collect();
        assert!(errors.is_empty(), "{args:?}: {errors:?}\n{doc:#}");
        assert_eq!(doc["schema"], "1");
    }
}

#[test]
fn schema_rejects_native_big_numbers() {
    let v = validator();
    let mut doc = json(&["stirling", "--n", "30", "--k", "3"]);
    doc["value"] = serde_json::json!(1);
    assert!(!v.is_valid(&doc));
    let mut doc = json(&["q", "--k", "4", "--m", "4"]);
    doc["schema"] = serde_json::json!("2");
    assert!(!v.is_valid(&doc));
}

#[test]
fn only_small_indices_are_native_numbers() {
    for args in SAMPLES {
        let mut found = Vec::new();
        numbers(&json(args), "", &mut found);
        for f in found {
            let value: i64 = f.rsplit(" = ").next().unwrap().parse().expect("integer");
            assert!(value.abs() <= 1_000_000, "{args:?}: {f}");
        }
    }
}

#[test]
fn values_through_the_cli() {
    assert_eq!(json(&["stirling", "--n", "4", "--k", "2"])["value"], "11");
    assert_eq!(json(&["q", "--k", "4", "--m", "4"])["value"], "49");
    assert_eq!(json(&["bell", "--preset", "arccos", "--m", "1", "--k", "1"])["value"], "-1/6");
    let p = json(&["prod", "--k", "2"]);
    assert_eq!(p["coeffs"], serde_json::json!(["4", "5", "1"]));
    let s = json(&["series", "--expr", "arccos-ratio", "--k", "1", "--terms", "3"]);
    assert_eq!(s["center"], "one");
    assert_eq!(s["variable"], "x-1");
    assert_eq!(s["coeffs"], serde_json::json!(["1", "-1/6", "2/45", "-1/70"]));
    let pi = json(&["pi", "--repr", "sq8", "--terms", "2"]);
    assert_eq!(pi["partial_sum"], "7/6");
    let big = json(&["stirling", "--n", "60", "--k", "1"]);
    // s(60, 1) = -59!, which has 81 digits
    let v = big["value"].as_str().unwrap();
    assert!(v.starts_with('-') && v.len() == 82);
}

#[test]
fn csv_output() {
    let out = run(&["q", "--table", "3", "3", "--format", "csv"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "k,m=0,m=1,m=2,m=3");
    assert_eq!(lines.len(), 4);
    assert_eq!(lines[1], "1,1,0,-1/4,0");
    let out = run(&["series", "--expr", "arcsin-pow", "--k", "1", "--terms", "2", "--format", "csv"]);
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "n,coeff\n0,1\n1,0\n2,1/6\n3,0\n4,3/40\n");
}

#[test]
fn output_is_byte_identical_across_runs() {
    let cases: &[&[&str]] = &[
        &["verify", "bell", "--max", "10", "--seed", "99", "--format", "json"],
        &["verify", "all", "--max", "6", "--format", "json"],
        &["pi", "--repr", "pow8", "--k", "2", "--terms", "40", "--digits", "40", "--format", "json"],
        &["series", "--expr", "alpha-ratio", "--alpha", "3/7", "--terms", "10", "--eval", "0.2"],
    ];
    for args in cases {
        let a = run(args);
        let b = run(args);
        assert!(a.status.success(), "{args:?}");
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn out_flag_writes_a_file() {
    let dir = std::env::temp_dir().join(format!("arcseries-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("q.json");
    let out = run(&["q", "--k", "3", "--m", "2", "--format", "json", "--out", path.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let doc: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(doc["subcommand"], "q");
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn usage_errors_exit_1() {
    assert_eq!(code(&["q", "--k", "1", "--m", "1", "--bogus"]), 1);
    assert_eq!(code(&["nonsense"]), 1);
    assert_eq!(code(&[]), 1);
    assert_eq!(code(&["stirling", "--n", "x"]), 1);
    assert_eq!(code(&["series", "--expr", "arcsin-pow", "--terms", "3"]), 1);
    assert_eq!(code(&["series", "--expr", "alpha-ratio", "--alpha", "half", "--terms", "3"]), 1);
    assert_eq!(code(&["stirling", "--n", "3", "--format", "yaml"]), 1);
    assert_eq!(code(&["diag", "compare", "--expr", "arcsin-pow", "--k", "1", "--x", "1/2", "--terms", "5", "--format", "csv"]), 1);
    assert_eq!(code(&["--help"]), 0);
    assert_eq!(code(&["--version"]), 0);
}

#[test]
fn domain_errors_exit_2() {
    assert_eq!(code(&["stirling", "--n", "3", "--k", "5"]), 2);
    assert_eq!(code(&["prod", "--k", "2", "--variant", "even"]), 2);
    assert_eq!(code(&["pi", "--repr", "tau", "--terms", "5"]), 2);
    assert_eq!(code(&["pi", "--repr", "pow8", "--terms", "5"]), 2);
    assert_eq!(code(&["series", "--expr", "arcsin-pow", "--k", "0", "--terms", "5"]), 2);
    assert_eq!(code(&["series", "--expr", "arcsin-pow", "--k", "1", "--tol", "1e-10", "--eval", "3/2"]), 2);
    assert_eq!(code(&["diag", "odd", "--k", "1"]), 2);
    assert_eq!(code(&["pi", "--repr", "sq8", "--terms", "10", "--digits", "100000"]), 2);
    assert_eq!(code(&["verify", "everything"]), 2);
    assert_eq!(code(&["verify", "q", "--max", "0"]), 2);
    let out = run(&["diag", "odd", "--k", "2"]);
    assert!(String::from_utf8_lossy(&out.stderr).contains("not expandable"));
}

#[test]
fn verification_suites_pass() {
    for args in [&["verify", "all", "--max", "12"][..], &["verify", "q", "--max", "30"], &["verify", "bell", "--max", "18"]] {
        let out = run(args);
        assert_eq!(out.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&out.stdout));
    }
}

#[test]
fn diag_reports_estimates_only() {
    let d = json(&["diag", "rate", "--k", "1", "--terms", "40", "--digits", "12"]);
    assert_eq!(d["authoritative"], false);
    assert_eq!(d["ratios"].as_array().unwrap().len(), 39);
    let l = json(&["diag", "limits", "--terms", "40", "--digits", "12"]);
    let names: Vec<&str> = l["estimates"].as_array().unwrap().iter().map(|e| e["name"].as_str().unwrap()).collect();
    assert_eq!(names, ["sq8", "classic-basel", "classic-odd", "classic-alt", "classic-central"]);
}

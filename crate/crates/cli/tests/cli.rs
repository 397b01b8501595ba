use std::fs;

use serde_json::Value;
use stabdiv_cli::{run, EXIT_INPUT, EXIT_OK};

fn ok_json(args: &[&str]) -> Value {
    let mut full = vec!["stabdiv"];
    full.extend_from_slice(args);
    let out = run(full);
    assert_eq!(out.code, EXIT_OK, "stderr: {}", out.stderr);
    serde_json::from_str(&out.stdout).expect("json output")
}

fn status(args: &[&str]) -> (i32, String, String) {
    let mut full = vec!["stabdiv"];
    full.extend_from_slice(args);
    let out = run(full);
    (out.code, out.stdout, out.stderr)
}

#[test]
fn divide_by_x() {
    let v = ok_json(&["divide", "--gens", "x", "--h", "x^2+x*y"]);
    assert_eq!(v["quotients"][0], "x+y");
    assert_eq!(v["remainder"], "0");
}

#[test]
fn divide_with_trace_and_remainder() {
    let v = ok_json(&["divide", "--gens", "x^2;y", "--h", "x^3+x*y+1", "--trace"]);
    assert_eq!(v["quotients"][0], "x");
    assert_eq!(v["quotients"][1], "x");
    assert_eq!(v["remainder"], "1");
    assert!(v["trace"].as_array().is_some_and(|t| !t.is_empty()));
}

#[test]
fn divide_vector_example() {
    let v = ok_json(&["divide", "--t", "-2", "--gens", "(x, 0, y)", "--gens", "(0, x, y)", "--h", "(x*y^4, -x*y^4, 0)"]);
    assert_eq!(v["quotients"][0], "y^4");
    assert_eq!(v["quotients"][1], "-y^4");
    assert_eq!(v["ratio_sq"], "6");
}

#[test]
fn norm_in_drury_arveson() {
    let v = ok_json(&["norm", "--t", "-2", "--poly", "x*y"]);
    assert_eq!(v["norm_sq"], "1/2");
    assert_eq!(v["equivalence"]["holds"], true);
    let (_, text, _) = status(&["norm", "--t=-2", "--poly", "x*y", "--format", "text"]);
    assert!(text.starts_with("1/2\n"));
}

#[test]
fn norm_c_ratio_table_as_csv() {
    let (code, out, _) = status(&["norm", "--t", "0", "--poly", "x", "--c-ratio-max", "2", "--format", "csv"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(out, "n,c\n0,1\n1,1/3\n2,1/6\n");
}

#[test]
fn counterexample_grows_linearly() {
    let v = ok_json(&["counterexample", "--t", "-2", "--n-max", "10"]);
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 10);
    assert_eq!(rows[3]["ratio_sq"], "6");
    assert_eq!(v["verdict"], "growing");
    let v = ok_json(&["counterexample", "--t", "-2", "--n-max", "10", "--basis", "rotated"]);
    assert!(v["rows"].as_array().unwrap().iter().all(|r| r["ratio_sq"] == "1"));
}

#[test]
fn groebner_reduced_with_staircase() {
    let v = ok_json(&["groebner", "--gens", "x^2+y^2;x*y", "--reduce"]);
    assert_eq!(v["basis"], serde_json::json!(["y^3", "x^2+y^2", "x*y"]));
    assert_eq!(v["staircase"]["codimension"], 4);
    assert_eq!(v["verified"], true);
    let v = ok_json(&["groebner", "--gens", "x"]);
    assert_eq!(v["staircase"]["codimension"], "infinite");
    assert!(v["staircase"]["monomials"].is_null());
}

#[test]
fn groebner_equalize() {
    let v = ok_json(&["groebner", "--gens", "x;y^2", "--weights", "2,1", "--equalize", "4"]);
    assert_eq!(v["equalized"]["degree"], 4);
    assert_eq!(v["equalized"]["generators"], serde_json::json!(["x^2", "x*y^2", "y^4"]));
}

#[test]
fn beurling_factors_out_gcd() {
    let v = ok_json(&["beurling", "--gens", "x^2*y;x*y^2"]);
    assert_eq!(v["gcd"], "x*y");
    assert_eq!(v["cofactors"], serde_json::json!(["x", "y"]));
    assert_eq!(v["codimension"], 1);
}

#[test]
fn certify_plateau_and_csv() {
    let v = ok_json(&["certify", "--gens", "x^2;x*y;y^2", "--q-max", "12", "--samples", "5"]);
    assert_eq!(v["verdict"], "bounded-plateau");
    assert_eq!(v["sup"], "1");
    let (code, csv, _) = status(&["certify", "--gens", "x^2;x*y;y^2", "--q-max", "6", "--samples", "5", "--format", "csv", "--expect-stable"]);
    assert_eq!(code, EXIT_OK);
    assert!(csv.starts_with("degree,slice_dim,max_ratio_sq,mean_ratio_sq,max_ratio_sq_float\n"));
}

#[test]
fn generators_from_file() {
    let dir = std::env::temp_dir().join(format!("stabdiv-cli-test-{}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    let path = dir.join("gens.txt");
    fs::write(&path, "# ideal\nx^2\n\nx*y  # mixed\ny^2\n").unwrap();
    let v = ok_json(&["groebner", "--gens-file", path.to_str().unwrap()]);
    assert_eq!(v["basis"].as_array().unwrap().len(), 3);
    fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn out_flag_writes_file() {
    let dir = std::env::temp_dir().join(format!("stabdiv-cli-out-{}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    let path = dir.join("n.json");
    let (code, out, err) = status(&["norm", "--poly", "x", "--out", path.to_str().unwrap()]);
    assert_eq!(code, EXIT_OK);
    assert!(out.is_empty());
    assert!(err.contains("wrote"));
    let v: Value = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["norm_sq"], "1");
    fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn range_warnings() {
    let (code, _, err) = status(&["scan-commutators", "--gens", "z1", "--d", "3", "--t", "-3", "--p", "4", "--degrees", "3,4"]);
    assert_eq!(code, EXIT_OK);
    assert!(err.contains("warning: t = -3"));
    let (_, _, err) = status(&["scan-commutators", "--gens", "x", "--degrees", "3,4", "--p", "1.5"]);
    assert!(err.contains("does not exceed d"));
    let (_, _, err) = status(&["divide", "--d", "3", "--t", "-3", "--gens", "z1", "--h", "z1*z2"]);
    assert!(err.contains("below -2"));
    let (_, _, err) = status(&["divide", "--t", "-2", "--gens", "x", "--h", "x"]);
    assert!(err.is_empty());
}

#[test]
fn input_errors_exit_one() {
    for args in [
        &["divide", "--gens", "x", "--h", "x+"][..],
        &["divide", "--gens", "x;x+y", "--h", "x^2"],
        &["norm", "--t", "-3", "--poly", "x"],
        &["norm", "--weights", "1,2,3", "--poly", "x"],
        &["groebner"],
        &["certify", "--gens", "x;y^2", "--q-max", "4"],
        &["angle-check", "--format", "csv"],
        &["no-such-command"],
    ] {
        let (code, out, err) = status(args);
        assert_eq!(code, EXIT_INPUT, "{args:?}");
        assert!(out.is_empty());
        assert!(!err.is_empty());
    }
}

#[test]
fn help_exits_zero() {
    let (code, out, _) = status(&["--help"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("certify"));
}

#[test]
fn scan_and_probe_report_rows() {
    let v = ok_json(&["scan-commutators", "--gens", "x", "--degrees", "4,6"]);
    assert_eq!(v["rows"].as_array().unwrap().len(), 4);
    assert!(v["rows"][0]["increment"].is_null());
    let v = ok_json(&["fang-xia-probe", "--poly", "x*y", "--max-degree", "6", "--samples", "3"]);
    assert_eq!(v["rows"].as_array().unwrap().len(), 6);
    assert!(v["max_ratio"].as_f64().unwrap().is_finite());
}

#[test]
fn angle_check_counts_no_violations() {
    let v = ok_json(&["angle-check", "--ambient", "10", "--m-dim", "3", "--trials", "4", "--samples", "25"]);
    assert_eq!(v["violations"], 0);
    assert_eq!(v["intermediate_violations"], 0);
}

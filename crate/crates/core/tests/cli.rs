use std::process::{Command, Output};

use serde_json::Value;

fn spca(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_spca")).args(args).output().unwrap()
}

fn json_of(out: &Output) -> Value {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn identity_solve_reports_unit_objective() {
    let v = json_of(&spca(&["solve", "--input", "builtin:identity8", "--algo", "svd", "--k", "3", "--sparsity", "3"]));
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["config"]["mode"], "budget");
    assert_eq!(v["config"]["l"], 1);
    assert!((v["result"]["report"]["objective"].as_f64().unwrap() - 1.0).abs() < 1e-12);
}

#[test]
fn exact_sweep_is_nondecreasing() {
    let v = json_of(&spca(&["sweep", "--input", "builtin:randpsd10", "--seed", "4", "--algo", "exact", "--grid", "1:4"]));
    let f: Vec<f64> = v["rows"].as_array().unwrap().iter().map(|r| r["report"]["f_value"].as_f64().unwrap()).collect();
    assert_eq!(f.len(), 4);
    assert!(f.windows(2).all(|w| w[1] >= w[0]), "{f:?}");
}

#[test]
fn csv_and_json_carry_the_same_values() {
    let base = ["sweep", "--input", "builtin:pitprops", "--algo", "svd", "--grid", "3,5", "--epsilon", "0.9"];
    let json = json_of(&spca(&base));
    let mut csv_args = base.to_vec();
    csv_args.extend(["--format", "csv"]);
    let out = spca(&csv_args);
    assert!(out.status.success());
    let mut rdr = csv::Reader::from_reader(&out.stdout[..]);
    let headers = rdr.headers().unwrap().clone();
    let col = |name: &str| headers.iter().position(|h| h == name).unwrap();
    for (rec, row) in rdr.records().zip(json["rows"].as_array().unwrap()) {
        let rec = rec.unwrap();
        for field in ["objective", "pve", "f_value", "thm1_floor"] {
            let from_csv: f64 = rec[col(field)].parse().unwrap();
            assert_eq!(from_csv, row["report"][field].as_f64().unwrap(), "{field}");
        }
    }
}

#[test]
fn repeated_runs_are_byte_identical() {
    let args = ["solve", "--input", "builtin:randpsd9", "--seed", "7", "--algo", "sdp", "--k", "3", "--sparsity", "3"];
    assert_eq!(spca(&args).stdout, spca(&args).stdout);
}

#[test]
fn validation_failures_exit_2_with_structured_stderr() {
    for args in [
        vec!["solve", "--input", "builtin:identity4", "--algo", "svd", "--k", "2"],
        vec!["solve", "--input", "builtin:identity4", "--algo", "svd", "--k", "9", "--sparsity", "2"],
        vec!["solve", "--input", "builtin:nothing", "--algo", "svd", "--k", "1", "--sparsity", "1"],
        vec!["sweep", "--input", "builtin:identity4", "--algo", "svd", "--grid", "3:1"],
        vec!["solve", "--input", "/nonexistent.mtx", "--algo", "svd", "--k", "1", "--sparsity", "1"],
    ] {
        let out = spca(&args);
        let code = out.status.code().unwrap();
        assert!(code == 2 || code == 1, "{args:?}: {code}");
        let diag: Value = serde_json::from_slice(&out.stderr).unwrap();
        assert!(diag["code"].is_string() && diag["message"].is_string());
        assert!(diag["context"].is_object());
    }
}

#[test]
fn strict_flag_maps_non_convergence_to_exit_3() {
    let args = ["solve", "--input", "builtin:randpsd6", "--algo", "sdp", "--k", "2", "--sparsity", "2", "--max-iters", "3"];
    let relaxed = json_of(&spca(&args));
    assert_eq!(relaxed["result"]["sdp"]["converged"], false);
    let mut strict = args.to_vec();
    strict.push("--strict");
    assert_eq!(spca(&strict).status.code(), Some(3));
}

#[test]
fn gen_synthetic_writes_loadable_matrix() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("x.mtx");
    let p = path.to_str().unwrap();
    let v = json_of(&spca(&["gen-synthetic", "--m", "8", "--n", "16", "--seed", "2", "--output", p]));
    assert_eq!(v["shape"], serde_json::json!([8, 16]));
    let solve = json_of(&spca(&["solve", "--input", p, "--data", "--algo", "svd", "--k", "4", "--sparsity", "4"]));
    assert_eq!(solve["input"]["n"], 16);

    let cov = dir.path().join("c.mtx");
    let c = cov.to_str().unwrap();
    json_of(&spca(&["gen-synthetic", "--m", "8", "--n", "16", "--covariance", "--output", c]));
    assert!(dir.path().join("c.mtx.json").exists());
    let o = json_of(&spca(&["oracle", "--input", c, "--k", "2"]));
    assert_eq!(o["result"]["instances_enumerated"], 120);
}

#[test]
fn output_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.json");
    let out = spca(&["oracle", "--input", "builtin:pitprops", "--k", "3", "--output", path.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_slice(&std::fs::read(&path).unwrap()).unwrap();
    assert_eq!(v["command"], "oracle");
    assert_eq!(v["result"]["algo"], "exact");
}

#[test]
fn reproduce_pitprops_reports_three_rows() {
    let v = json_of(&spca(&["reproduce-pitprops"]));
    let rows = v["comparison"]["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 3);
    let zeros = ["moist", "testsg", "ovensg", "clear", "knots", "diaknot"];
    for r in rows {
        let z: Vec<&str> = r["zero_rows"].as_array().unwrap().iter().map(|x| x.as_str().unwrap()).collect();
        assert_eq!(z, zeros);
    }
}

use std::process::{Command, Output};

fn sqsum(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sqsum"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn sum_prints_decimal() {
    let o = sqsum(&["sum", "--d", "2", "--x", "118"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "28561\n");
}

#[test]
fn filter_prints_certificate() {
    let o = sqsum(&["filter", "--d", "5", "--n", "3"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("zhang_bai"));
    assert!(text.contains("\"p\":5"));

    let o = sqsum(&["--json", "filter", "--d", "8", "--n", "2"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["witness"]["kind"], "mod8");
}

#[test]
fn search_streams_json_lines() {
    let o = sqsum(&["search", "--d-min", "2", "--d-max", "3", "--x-bound", "200", "--n-max", "6", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let lines: Vec<serde_json::Value> = stdout(&o)
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    assert!(lines.iter().any(|v| v["x"] == "118" && v["n"] == 4 && v["y"] == "13"));
    assert!(lines.iter().all(|v| v["d"] == 2));
}

#[test]
fn pell_modes() {
    let o = sqsum(&["--json", "pell", "--x-bound", "150"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let xs: Vec<&str> = v.as_array().unwrap().iter().map(|m| m["x"].as_str().unwrap()).collect();
    assert_eq!(xs, vec!["-121", "-22", "-5", "-2", "-1", "2", "19", "118"]);
    let o = sqsum(&["pell", "--count", "3"]);
    assert_eq!(stdout(&o).lines().count(), 3);
    assert_eq!(sqsum(&["pell"]).status.code(), Some(2));
}

#[test]
fn lehmer_subcommands() {
    let o = sqsum(&["lehmer", "seq", "--u", "3", "--p", "3"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("primitive divisors of u_3: 13"));

    let o = sqsum(&["lehmer", "scan", "--p", "7", "--u-bound", "1000"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("violations: []"));

    let o = sqsum(&["lehmer", "poly", "--p", "3"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("u² ∈ {33, 37}: no integer roots"));

    assert_eq!(sqsum(&["lehmer", "poly", "--p", "7"]).status.code(), Some(2));
    assert_eq!(sqsum(&["lehmer", "scan", "--p", "11", "--u-bound", "10"]).status.code(), Some(2));
}

#[test]
fn starved_factorization_exits_three() {
    let o = sqsum(&["--budget", "0", "lehmer", "seq", "--u", "3", "--p", "61"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("cofactor"));
}

#[test]
fn unknown_flag_is_usage_error() {
    let o = sqsum(&["verify", "--x-bound", "200", "--n-max", "4", "--frob"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(o.stdout.is_empty());
    assert!(!o.stderr.is_empty());
}

#[test]
fn every_json_output_parses() {
    for args in [
        &["--json", "sum", "--d", "3", "--x", "0"][..],
        &["--json", "filter", "--d", "6", "--n", "3"],
        &["--json", "pell", "--count", "4"],
        &["--json", "lehmer", "seq", "--u", "-9", "--p", "7"],
        &["--json", "lehmer", "scan", "--p", "13", "--u-bound", "300"],
        &["--json", "lehmer", "poly", "--p", "5"],
        &["--json", "verify", "--x-bound", "200", "--n-max", "4", "--scan-u-bound", "60"],
    ] {
        let o = sqsum(args);
        assert_eq!(o.status.code(), Some(0), "{args:?}");
        serde_json::from_slice::<serde_json::Value>(&o.stdout).unwrap_or_else(|e| panic!("{args:?}: {e}"));
    }
}

#[test]
fn verify_writes_deterministic_report() {
    let dir = tempfile::tempdir().unwrap();
    let paths = [dir.path().join("a.json"), dir.path().join("b.json")];
    for (p, threads) in paths.iter().zip(["1", "2"]) {
        let o = sqsum(&[
            "--threads", threads, "verify", "--x-bound", "1000", "--n-max", "8",
            "--scan-u-bound", "300", "--out", p.to_str().unwrap(),
        ]);
        assert_eq!(o.status.code(), Some(0));
        assert!(stdout(&o).ends_with("verdict: pass\n"));
    }
    let a = std::fs::read(&paths[0]).unwrap();
    assert_eq!(a, std::fs::read(&paths[1]).unwrap());
    let v: serde_json::Value = serde_json::from_slice(&a).unwrap();
    assert_eq!(v["verdict"], "pass");
}

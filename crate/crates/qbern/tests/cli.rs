//! End-to-end checks of the binary: exit-code contract (0 pass, 1 fail,
//! 2 usage), byte-identical reports for identical configurations, and the
//! documented command surface.

use std::process::{Command, Output};

fn qbern(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qbern"))
        .args(args)
        .output()
        .expect("binary runs")
}

#[test]
fn exit_zero_on_passing_suite() {
    let out = qbern(&[
        "verify",
        "distribution",
        "--alpha",
        "1..2",
        "--n",
        "0..2",
        "--d",
        "1..2",
        "--x",
        "0..1",
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["summary"]["failed"], 0);
    assert_eq!(report["cases"][0]["status"], "exact-zero");
}

#[test]
fn exit_two_on_usage_errors() {
    // unknown suite
    let out = qbern(&["verify", "nonsense", "--alpha", "1"]);
    assert_eq!(out.status.code(), Some(2));
    // missing required grid flag, diagnostic names the field
    let out = qbern(&["verify", "distribution", "--alpha", "1", "--d", "1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("--n"));
    // malformed grid expression
    let out = qbern(&[
        "verify",
        "distribution",
        "--alpha",
        "one",
        "--n",
        "0",
        "--d",
        "1",
    ]);
    assert_eq!(out.status.code(), Some(2));
    // unknown flag (clap)
    let out = qbern(&["table", "--no-such-flag"]);
    assert_eq!(out.status.code(), Some(2));
    // floating-point q is rejected
    let out = qbern(&[
        "integrate", "--p", "3", "--q", "1.5", "--alpha", "1", "--n", "1", "--levels", "1..2",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn reports_are_byte_identical_for_identical_configs() {
    let args = [
        "verify",
        "additivity",
        "--p",
        "2,3",
        "--k",
        "0..2",
        "--alpha",
        "1,2",
        "--levels",
        "0,1",
        "--seed",
        "7",
    ];
    let a = qbern(&args);
    let b = qbern(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout, "reports differ between identical runs");
    // and with an explicit worker count to vary scheduling
    let c = qbern(&[&args[..], &["--workers", "1"]].concat());
    assert_eq!(a.stdout, c.stdout, "worker count changed report bytes");
}

#[test]
fn table_rows_match_pinned_strings() {
    let out = qbern(&["table", "--family", "weighted", "--alpha", "1", "--max-n", "4"]);
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["rows"][1]["value"], "(-1)/(q + 1)");
    assert_eq!(doc["rows"][1]["limit"], "-1/2");

    let out = qbern(&["table", "--family", "xi", "--max-n", "2"]);
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["rows"][2]["value"], "(-1)/(q^2 - 1)");
    assert_eq!(doc["rows"][2]["limit"], "pole");

    let out = qbern(&["table", "--family", "weighted", "--alpha", "2", "--max-n", "0"]);
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["rows"][0]["value"], "1");

    // config validation failure names the offending field
    let out = qbern(&["table", "--family", "weighted", "--max-n", "2"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("--alpha"));
}

#[test]
fn integrate_emits_valuation_profile() {
    let out = qbern(&[
        "integrate", "--p", "3", "--q", "1+3", "--alpha", "1", "--n", "0", "--levels", "1..4",
    ]);
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    // n = 0: every level sum is exactly 1, valuation infinite (null)
    for row in doc["levels"].as_array().unwrap() {
        assert_eq!(row["sum"], "1");
        assert!(row["valuation"].is_null());
    }

    let out = qbern(&[
        "integrate", "--p", "3", "--q", "1+3", "--alpha", "1", "--n", "1", "--levels", "1..5",
        "--self-check", "--seed", "3",
    ]);
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let vals: Vec<i64> = doc["levels"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["valuation"].as_i64().unwrap())
        .collect();
    assert!(vals.windows(2).all(|w| w[0] <= w[1]), "{:?}", vals);
    assert_eq!(doc["self_check"]["pass"], true);
}

#[test]
fn integrate_csv_export() {
    let out = qbern(&[
        "integrate", "--p", "2", "--q", "1+4", "--alpha", "2", "--n", "2", "--shift", "1",
        "--levels", "1..3", "--format", "csv",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("level,sum,valuation\n"));
    assert_eq!(text.trim_end().lines().count(), 4);
}

#[test]
fn eq22_suite_certifies_precision() {
    let out = qbern(&[
        "verify", "eq22", "--p", "3", "--chi", "4:1", "--beta", "5", "--k", "0..1", "--alpha",
        "1", "--prec", "12",
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    for case in doc["cases"].as_array().unwrap() {
        assert_eq!(case["status"], "zero-to-precision");
        assert!(case["certified_valuation"].as_i64().unwrap() >= 12);
    }
}

#[test]
fn env_override_sets_default_precision() {
    let out = Command::new(env!("CARGO_BIN_EXE_qbern"))
        .env("QBERN_PRECISION", "14")
        .args([
            "verify", "eq22", "--p", "3", "--chi", "1:0", "--beta", "5", "--k", "0",
        ])
        .output()
        .expect("binary runs");
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["grid"]["prec"], 14);
    assert!(doc["cases"][0]["certified_valuation"].as_i64().unwrap() >= 14);
}

#[test]
fn failing_check_exits_one() {
    // an unreachable valuation floor makes the convergence verdict FAIL
    let out = qbern(&[
        "integrate", "--p", "3", "--q", "1+3", "--alpha", "1", "--n", "1", "--levels", "1..2",
        "--floor", "50",
    ]);
    assert_eq!(out.status.code(), Some(1));
    // the same run with the default floor passes
    let out = qbern(&[
        "integrate", "--p", "3", "--q", "1+3", "--alpha", "1", "--n", "1", "--levels", "1..2",
    ]);
    assert_eq!(out.status.code(), Some(0));
    // the constant-seed rejection demo passes as a suite
    let out = qbern(&[
        "verify", "theorem2", "--p", "2", "--k", "1", "--alpha", "1", "--levels", "0",
        "--const-seed", "1",
    ]);
    assert_eq!(out.status.code(), Some(0));
}

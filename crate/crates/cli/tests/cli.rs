// SPDX-License-Identifier: MIT OR Apache-2.0

use std::fs;
use std::io::Write;
use std::path::Path;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

fn cli(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cusum-lp"))
        .args(args)
        .current_dir(dir)
        .env("CUSUM_LP_CACHE_DIR", dir.join("cache"))
        .output()
        .unwrap()
}

fn json(out: &Output) -> Value {
    assert!(
        out.status.success(),
        "status {}: {}",
        out.status,
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

const FAST: [&str; 4] = ["--reps", "500", "--grid", "256"];

#[test]
fn hand_example_and_constant_series() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("three.csv"), "1\n2\n3\n").unwrap();
    let mut args = vec!["test", "--input", "three.csv", "--sigma", "fixed:1"];
    args.extend(FAST);
    let v = json(&cli(dir.path(), &args));
    assert!((v["statistic_raw"].as_f64().unwrap() - 1.0 / 6.0).abs() < 1e-15);
    assert_eq!(v["N"], 3);
    assert_eq!(v["table_provenance"]["replications"], 500);

    fs::write(dir.path().join("flat.csv"), "# flat\n4\n4\n\n4\n4\n4\n").unwrap();
    for family in ["general", "darling-erdos"] {
        let mut args = vec!["test", "--input", "flat.csv", "--family", family];
        args.extend(FAST);
        let v = json(&cli(dir.path(), &args));
        assert_eq!(v["statistic_raw"], 0.0);
        assert_eq!(v["p_value"], 1.0);
        assert_eq!(v["reject"], false);
    }
}

#[test]
fn exit_codes_partition_errors() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    fs::write(d.join("bad.csv"), "1\n2\nthree\n").unwrap();
    fs::write(d.join("one.csv"), "1\n").unwrap();
    fs::write(d.join("ok.csv"), "1\n3\n2\n5\n4\n").unwrap();

    assert_eq!(code(&cli(d, &["test", "--input", "bad.csv"])), 2);
    assert_eq!(code(&cli(d, &["test", "--input", "missing.csv"])), 2);
    assert_eq!(code(&cli(d, &["test", "--bogus"])), 2);
    assert_eq!(
        code(&cli(d, &["test", "--input", "ok.csv", "--weight-q", "2"])),
        3
    );
    assert_eq!(
        code(&cli(
            d,
            &["test", "--input", "ok.csv", "--family", "renyi", "--kappa", "2", "--t1", "0.2", "--t2", "0.8"]
        )),
        3
    );
    assert_eq!(code(&cli(d, &["test", "--input", "one.csv"])), 4);
    assert_eq!(
        code(&cli(d, &["test", "--input", "ok.csv", "--sigma", "fixed:1", "--family", "darling-erdos", "--output", "no/such/dir/out.json"])),
        5
    );
    let failed = cli(d, &["test", "--input", "bad.csv"]);
    assert!(failed.stdout.is_empty());
    assert!(String::from_utf8_lossy(&failed.stderr).contains("line 3"));
}

#[test]
fn column_and_stdin_input() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    fs::write(d.join("frame.csv"), "t,y\n1,0.5\n2,1.5\n3,0.25\n4,3.0\n").unwrap();
    let mut args = vec!["test", "--input", "frame.csv", "--column", "y", "--sigma", "fixed:1"];
    args.extend(FAST);
    let from_file = json(&cli(d, &args));

    let mut child = Command::new(env!("CARGO_BIN_EXE_cusum-lp"))
        .args(["test", "--input", "-", "--sigma", "fixed:1"])
        .args(FAST)
        .current_dir(d)
        .env("CUSUM_LP_CACHE_DIR", d.join("cache"))
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child
        .stdin
        .take()
        .unwrap()
        .write_all(b"0.5\n1.5\n0.25\n3.0\n")
        .unwrap();
    let from_stdin = json(&child.wait_with_output().unwrap());
    assert_eq!(from_file, from_stdin);
}

#[test]
fn constants_subcommand() {
    let dir = tempfile::tempdir().unwrap();
    let b = |p: &str| json(&cli(dir.path(), &["constants", "--p", p]))["b_p"].as_f64().unwrap();
    assert!((b("2") - 1.0).abs() < 1e-12);
    assert!((b("4") - 3.0).abs() < 1e-12);
    assert!((b("1") - 0.797_884_560_802_865_4).abs() < 1e-12);
    let v = json(&cli(dir.path(), &["constants", "--p", "2", "--a-kernel", "signed"]));
    assert!((v["a_p"].as_f64().unwrap() - 2.0).abs() < 1e-9);
    assert!((v["g_u_mass_check"].as_f64().unwrap() - 1.0).abs() < 1e-9);
    assert_eq!(code(&cli(dir.path(), &["constants", "--p", "0.5"])), 2);
}

#[test]
fn critvals_tables() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let v = json(&cli(d, &["critvals", "--family", "darling-erdos", "--output", "de.csv"]));
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 4);
    assert!((rows[1]["critical_value"].as_f64().unwrap() - 1.644_853_626_951_472).abs() < 1e-9);
    let text = fs::read_to_string(d.join("de.csv")).unwrap();
    assert!(text.starts_with("# {\"format\":\"cusum-lp-critvals/1\""));
    assert!(text.lines().nth(1).unwrap() == "alpha,critical_value");

    let v = json(&cli(
        d,
        &["critvals", "--p", "2", "--reps", "20000", "--grid", "1024", "--seed", "4", "--output", "cvm.csv"],
    ));
    let cv: Vec<f64> = v["rows"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["critical_value"].as_f64().unwrap())
        .collect();
    assert!(cv.windows(2).all(|w| w[1] > w[0]), "{cv:?}");
    assert!((cv[1] - 0.4614).abs() < 0.02, "{cv:?}");

    let v = json(&cli(
        d,
        &["critvals", "--family", "renyi", "--kappa", "3", "--gamma1", "1", "--gamma2", "0.5", "--reps", "500", "--output", "fb.csv"],
    ));
    assert_eq!(v["family"]["gamma2"], 0.5);
    assert_eq!(
        code(&cli(d, &["critvals", "--output", "/no/such/dir/t.csv", "--reps", "200", "--grid", "64"])),
        5
    );
}

#[test]
fn simulate_then_study() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let v = json(&cli(
        d,
        &["simulate", "--noise", "ma", "--ma-coeffs", "0.5", "--n", "300", "--seed", "2", "--output", "ma.csv"],
    ));
    assert_eq!(v["true_lrv"], 2.25);
    let text = fs::read_to_string(d.join("ma.csv")).unwrap();
    assert!(text.starts_with("# {"));
    assert_eq!(text.lines().count(), 301);
    assert_eq!(code(&cli(d, &["simulate", "--noise", "ar1", "--n", "10", "--output", "x.csv"])), 2);
    assert_eq!(
        code(&cli(d, &["simulate", "--noise", "ar1", "--rho", "1.5", "--n", "10", "--output", "x.csv"])),
        2
    );

    fs::write(
        d.join("study.json"),
        r#"{"noise":{"kind":"iid_normal","s":1},"N":200,"change":{"k_star":100,"delta":1},
            "statistic":{"family":"general","p":2,"weight":{"kind":"uniform"}},
            "replications":200,"seed":3,
            "null":{"grid_size":512,"replications":2000,"grid_step":0.005,"tail_tol":0.001}}"#,
    )
    .unwrap();
    let v = json(&cli(d, &["study", "--config", "study.json"]));
    assert!(v["rejection_rate"].as_f64().unwrap() > 0.9);
    assert_eq!(v["config"]["N"], 200);
    let s = json(&cli(d, &["study", "--config", "study.json", "--output", "report.json"]));
    let saved: Value = serde_json::from_str(&fs::read_to_string(d.join("report.json")).unwrap()).unwrap();
    assert_eq!(saved, v);
    assert_eq!(s["rejection_rate"], v["rejection_rate"]);
}

#[test]
fn emitted_path_is_tidy_csv() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    fs::write(d.join("s.csv"), "1\n2\n3\n").unwrap();
    let mut args = vec!["test", "--input", "s.csv", "--sigma", "fixed:1", "--emit-path", "path.csv"];
    args.extend(FAST);
    json(&cli(d, &args));
    let text = fs::read_to_string(d.join("path.csv")).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "t,z");
    assert_eq!(lines.len(), 6);
    assert_eq!(lines[1], "0,0");
    assert_eq!(*lines.last().unwrap(), "1,0");
}

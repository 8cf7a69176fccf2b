use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn selfchain(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_selfchain"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn ok_json(args: &[&str]) -> Value {
    let out = selfchain(args);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn error_json(args: &[&str], code: i32) -> Value {
    let out = selfchain(args);
    assert_eq!(
        out.status.code(),
        Some(code),
        "{}",
        String::from_utf8_lossy(&out.stdout)
    );
    assert!(out.stdout.is_empty());
    serde_json::from_slice(&out.stderr).expect("stderr is JSON")
}

fn f(v: &Value) -> f64 {
    v.as_f64().expect("number")
}

#[test]
fn chain_compare_gaussian() {
    let r = ok_json(&[
        "chain-compare",
        "--copula",
        "gaussian:0.9",
        "--lambdas",
        "0.02,0.02",
        "--periods",
        "100",
        "--dt",
        "1",
        "--scenarios",
        "200000",
        "--seed",
        "42",
    ]);
    let report = &r["report"];
    assert!((f(&report["one_shot_analytic"]) - 0.096_608_8).abs() < 1e-7);
    assert!((f(&report["multi_step_analytic"]) - 0.057_631_0).abs() < 1e-7);
    assert!((f(&report["gap"]) - 0.038_977_8).abs() < 1e-7);
    for (mc, analytic) in [
        ("one_shot_mc", "one_shot_analytic"),
        ("multi_step_mc", "multi_step_analytic"),
    ] {
        let mean = f(&report[mc]["mean"]);
        let se = f(&report[mc]["stderr"]);
        assert!(
            (mean - f(&report[analytic])).abs() <= 4.0 * se,
            "{mc}: {mean} ± {se}"
        );
    }
    assert_eq!(report["N"], 100);
    assert_eq!(r["config"]["seed"], 42);
}

#[test]
fn chain_compare_gumbel_has_no_gap() {
    let r = ok_json(&[
        "chain-compare",
        "--copula",
        "gumbel:2",
        "--lambdas",
        "0.02,0.02",
        "--scenarios",
        "1000",
    ]);
    assert!(f(&r["report"]["gap"]).abs() <= 1e-10);
}

#[test]
fn reports_are_bytewise_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let runs: &[&[&str]] = &[
        &[
            "chain-compare",
            "--copula",
            "gaussian:0.5",
            "--lambdas",
            "0.05,0.01",
            "--scenarios",
            "20000",
            "--periods",
            "10",
        ],
        &[
            "simulate",
            "--copula",
            "mo:0.3,0.7",
            "--scenarios",
            "5000",
            "--format",
            "csv",
        ],
        &["tau", "--copula", "gumbel:3", "--scenarios", "5000"],
    ];
    for (i, args) in runs.iter().enumerate() {
        let mut outputs = Vec::new();
        for workers in ["1", "1", "3"] {
            let path = dir.path().join(format!("run{i}-{}.out", outputs.len()));
            let mut full = args.to_vec();
            full.extend([
                "--seed",
                "42",
                "--workers",
                workers,
                "--out",
                path.to_str().unwrap(),
            ]);
            let out = selfchain(&full);
            assert!(
                out.status.success(),
                "{}",
                String::from_utf8_lossy(&out.stderr)
            );
            outputs.push(std::fs::read(&path).unwrap());
        }
        assert_eq!(outputs[0], outputs[1], "{args:?}");
        assert_eq!(outputs[0], outputs[2], "{args:?}");
    }
}

#[test]
fn verify_verdicts() {
    let g = ok_json(&["verify", "--copula", "gumbel:3"]);
    assert_eq!(g["verdict"], "SELF-CHAINING");
    assert!(g["witness"].is_null());
    assert_eq!(g["axioms"]["passed"], true);

    let ga = ok_json(&["verify", "--copula", "gaussian:0.5"]);
    assert_eq!(ga["verdict"], "NOT SELF-CHAINING");
    let w = &ga["witness"];
    assert_eq!(w["characterization"], "identity");
    assert!(f(&w["residual"]) > 1e-3);
    assert_eq!(w["point"].as_array().unwrap().len(), 2);
    assert_eq!(ga["pde"]["tol"], 1e-4);

    let mo = ok_json(&["verify", "--copula", "mo:0.2,0.9"]);
    assert_eq!(mo["verdict"], "SELF-CHAINING");
}

#[test]
fn verify_three_dimensional() {
    let g = ok_json(&["verify", "--copula", "gumbel:2@3"]);
    assert_eq!(g["verdict"], "SELF-CHAINING");
    assert!(g["pde"].is_null());
    assert_eq!(g["self_chaining"]["grid_size"], 6859);
}

#[test]
fn simulate_uniforms_csv() {
    let out = selfchain(&[
        "simulate",
        "--copula",
        "gumbel:2",
        "--scenarios",
        "1000",
        "--seed",
        "7",
        "--format",
        "csv",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines().filter(|l| !l.starts_with('#'));
    assert_eq!(lines.next(), Some("u1,u2"));
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 1000);
    for row in rows {
        for x in row.split(',') {
            let x: f64 = x.parse().unwrap();
            assert!(x > 0.0 && x < 1.0);
        }
    }
}

#[test]
fn simulate_arrival_times() {
    let r = ok_json(&[
        "simulate",
        "--copula",
        "gumbel:2",
        "--lambdas",
        "0.02,0.02",
        "--arrival-times",
        "--scenarios",
        "100000",
        "--seed",
        "3",
    ]);
    assert_eq!(r["kind"], "arrival_times");
    let rows = r["rows"].as_array().unwrap();
    for col in 0..2 {
        let times: Vec<f64> = rows.iter().map(|row| f(&row[col])).collect();
        assert!(times.iter().all(|t| *t > 0.0));
        let mean = times.iter().sum::<f64>() / times.len() as f64;
        // Exponential(0.02): mean 50, standard error 50/√n ≈ 0.16.
        assert!((mean - 50.0).abs() < 0.8, "{mean}");
    }
}

#[test]
fn simulate_dimension_mismatch() {
    let e = error_json(
        &[
            "simulate",
            "--copula",
            "gumbel:2",
            "--lambdas",
            "0.1,0.2,0.3",
            "--arrival-times",
        ],
        2,
    );
    assert_eq!(e["field"], "lambdas");
    assert!(e["error"].as_str().unwrap().contains("dimension"));
}

#[test]
fn tau_report() {
    let r = ok_json(&[
        "tau",
        "--copula",
        "gumbel:2",
        "--scenarios",
        "100000",
        "--seed",
        "11",
    ]);
    assert_eq!(r["analytic"], 0.5);
    assert!((f(&r["empirical"]) - 0.5).abs() < 0.01);
    assert_eq!(r["samples"], 100000);
}

#[test]
fn pickands_tables() {
    let r = ok_json(&["pickands", "--copula", "gumbel:1", "--grid-size", "11"]);
    let points = r["points"].as_array().unwrap();
    assert_eq!(points.len(), 11);
    assert!(points.iter().all(|p| p[1] == 1.0));
    assert_eq!(r["validity"]["valid"], true);

    let out = selfchain(&["pickands", "--copula", "mo:1,1", "--format", "csv"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().any(|l| l == "0.5,0.5"), "{text}");
    assert!(text.lines().any(|l| l == "t,A"));

    let e = error_json(&["pickands", "--copula", "gaussian:0.3"], 2);
    assert_eq!(e["field"], "copula");
}

#[test]
fn config_file_with_flag_overrides() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.json");
    std::fs::write(
        &cfg,
        r#"{"copula": {"family": "GumbelHougaard", "theta": 2.0, "dim": 2},
            "scenarios": 500, "seed": 1, "format": "csv"}"#,
    )
    .unwrap();
    let cfg = cfg.to_str().unwrap();
    let r = ok_json(&["tau", "--config", cfg, "--seed", "9", "--format", "json"]);
    assert_eq!(r["config"]["seed"], 9);
    assert_eq!(r["config"]["scenarios"], 500);
    assert_eq!(r["config"]["command"], "tau");
}

#[test]
fn embedded_config_regenerates_the_report() {
    let dir = tempfile::tempdir().unwrap();
    let first = selfchain(&[
        "chain-compare",
        "--copula",
        "mo:0.4,0.6",
        "--lambdas",
        "0.03,0.01",
        "--scenarios",
        "3000",
        "--seed",
        "5",
        "--periods",
        "12",
        "--dt",
        "0.5",
    ]);
    assert!(first.status.success());
    let report: Value = serde_json::from_slice(&first.stdout).unwrap();
    let cfg = dir.path().join("echo.json");
    std::fs::write(&cfg, serde_json::to_string(&report["config"]).unwrap()).unwrap();
    let second = selfchain(&["chain-compare", "--config", cfg.to_str().unwrap()]);
    assert!(second.status.success());
    assert_eq!(first.stdout, second.stdout);
}

#[test]
fn copula_from_json_text_and_file() {
    let json = r#"{"family":"MarshallOlkin","alpha1":0.2,"alpha2":0.9,"dim":2}"#;
    let r = ok_json(&["verify", "--copula", json]);
    assert_eq!(r["family"], "MarshallOlkin");
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("c.json");
    std::fs::write(&path, json).unwrap();
    let r = ok_json(&[
        "tau",
        "--copula",
        path.to_str().unwrap(),
        "--scenarios",
        "100",
    ]);
    assert_eq!(r["family"], "MarshallOlkin");
}

#[test]
fn config_errors() {
    assert_eq!(error_json(&["verify"], 2)["field"], "copula");
    assert_eq!(
        error_json(&["verify", "--copula", "gumbel:0.5"], 2)["field"],
        "copula"
    );
    assert_eq!(
        error_json(&["chain-compare", "--copula", "gumbel:2"], 2)["field"],
        "lambdas"
    );
    assert_eq!(
        error_json(&["tau", "--copula", "gumbel:2", "--seed=-1"], 2)["field"],
        "seed"
    );
    assert_eq!(
        error_json(&["tau", "--copula", "gumbel:2", "--format", "xml"], 2)["field"],
        "format"
    );
    assert_eq!(
        error_json(&["tau", "--copula", "gumbel:2@3"], 2)["field"],
        "copula"
    );
    assert_eq!(error_json(&["frobnicate"], 2)["field"], "command");
    let e = error_json(
        &[
            "tau",
            "--copula",
            "gumbel:2",
            "--config",
            "/nonexistent/run.json",
        ],
        2,
    );
    assert_eq!(e["field"], "config");
    let e = error_json(
        &[
            "tau",
            "--copula",
            "gumbel:2",
            "--scenarios",
            "10",
            "--out",
            "/nonexistent/dir/x",
        ],
        2,
    );
    assert_eq!(e["field"], "output_path");
    let e = error_json(
        &[
            "chain-compare",
            "--copula",
            "gaussian:0.5@3",
            "--lambdas",
            "0.1,0.1,0.1",
        ],
        2,
    );
    assert_eq!(e["field"], "copula");
}

#[test]
fn help_exits_cleanly() {
    let out = selfchain(&["--help"]);
    assert_eq!(out.status.code(), Some(0));
    let help = String::from_utf8(out.stdout).unwrap();
    for cmd in ["simulate", "chain-compare", "verify", "pickands", "tau"] {
        assert!(help.contains(cmd));
    }
    assert!(Path::new(env!("CARGO_BIN_EXE_selfchain")).exists());
}

use std::path::Path;
use std::process::{Command, Output};

fn flowbench(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_flowbench"))
        .args(args)
        .output()
        .unwrap()
}

fn p(dir: &Path, name: &str) -> String {
    dir.join(name).to_string_lossy().into_owned()
}

fn generate(dir: &Path, spec: &str) -> String {
    std::fs::write(p(dir, "spec.json"), spec).unwrap();
    let out = flowbench(&[
        "generate",
        "--spec",
        &p(dir, "spec.json"),
        "--out",
        &p(dir, "data.csv"),
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    p(dir, "data.csv")
}

#[test]
fn generate_honours_spec() {
    let dir = tempfile::tempdir().unwrap();
    let data = generate(
        dir.path(),
        r#"{"n_rows": 50, "n_informative": 2, "n_noise": 1}"#,
    );
    let text = std::fs::read_to_string(data).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "inf_0,inf_1,noise_2,Label");
    assert_eq!(lines.count(), 50);
}

#[test]
fn single_config_then_markdown_report() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let data = generate(d, r#"{"n_rows": 300, "anomaly_rate": 0.5, "seed": 1}"#);
    std::fs::write(
        p(d, "cfg.json"),
        r#"{"id": 32, "model": "gboost", "normalization": "zscore", "transformation": "none",
            "selection": "none", "seed": 74, "hyperparameters": {"gboost": {"n_estimators": 30}}}"#,
    )
    .unwrap();
    let out = flowbench(&[
        "run",
        "--data",
        &data,
        "--config",
        &p(d, "cfg.json"),
        "--out",
        &p(d, "r.csv"),
        "--results-json",
        &p(d, "r.json"),
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let csv = std::fs::read_to_string(p(d, "r.csv")).unwrap();
    assert_eq!(csv.lines().count(), 2);
    assert!(csv
        .lines()
        .nth(1)
        .unwrap()
        .starts_with("GBoosting,32,z-score,N/A,N/A,31,"));

    let json: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(p(d, "r.json")).unwrap()).unwrap();
    assert_eq!(json[0]["status"]["status"], "ok");
    assert_eq!(json[0]["fitted_digest"].as_str().unwrap().len(), 64);

    let md = flowbench(&["report", "--in", &p(d, "r.csv"), "--format", "markdown"]);
    assert!(md.status.success());
    let md = String::from_utf8(md.stdout).unwrap();
    assert!(md.starts_with("| Model | ID | Normalization |"));
    assert_eq!(md.lines().count(), 3);

    let again = flowbench(&["report", "--in", &p(d, "r.csv"), "--format", "csv"]);
    assert_eq!(String::from_utf8(again.stdout).unwrap(), csv);
}

#[test]
fn failed_config_sets_exit_code() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let data = generate(d, r#"{"n_rows": 100, "anomaly_rate": 0.95, "seed": 2}"#);
    std::fs::write(
        p(d, "cfg.json"),
        r#"{"id": 22, "model": "autoencoder", "normalization": "zscore",
            "transformation": "none", "selection": "none"}"#,
    )
    .unwrap();
    let out = flowbench(&["run", "--data", &data, "--config", &p(d, "cfg.json")]);
    assert_eq!(out.status.code(), Some(1));
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout
        .lines()
        .nth(1)
        .unwrap()
        .ends_with("failed,failed,failed,failed"));
}

#[test]
fn bad_inputs_are_errors() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    std::fs::write(p(d, "bad.csv"), "a,b,Label\n1,x,Normal\n2,3,Anomaly\n").unwrap();
    let out = flowbench(&["run", "--data", &p(d, "bad.csv")]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("error"));
    let out = flowbench(&["report", "--in", &p(d, "bad.csv"), "--format", "html"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn non_numeric_columns_can_be_dropped() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let mut csv = String::from("Flow_ID,x,Cat,Label\n");
    for i in 0..200 {
        let anomaly = i % 2 == 0;
        let x = if anomaly {
            5.0 + i as f64 * 0.01
        } else {
            -(i as f64) * 0.01
        };
        let label = if anomaly { "Anomaly" } else { "Normal" };
        csv.push_str(&format!("10.0.0.{i}-x,{x},DoS,{label}\n"));
    }
    std::fs::write(p(d, "flows.csv"), csv).unwrap();
    std::fs::write(
        p(d, "cfg.json"),
        r#"{"id": 34, "model": "gboost", "normalization": "none", "transformation": "none", "selection": "none"}"#,
    )
    .unwrap();
    let out = flowbench(&[
        "run",
        "--data",
        &p(d, "flows.csv"),
        "--config",
        &p(d, "cfg.json"),
        "--drop-non-numeric",
        "--drop-cols",
        "Cat",
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.lines().nth(1).unwrap().contains(",1,100.00%,"));
}

use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_torus-search"))
}

#[test]
fn usage_errors_exit_with_one() {
    let out = bin().output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    let out = bin().args(["run", "--algo", "grover"]).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    let out = bin().args(["run", "--sides", "7"]).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    let out = bin().args(["analyze", "--in", "/nonexistent/file.csv"]).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn help_exits_with_zero() {
    let out = bin().arg("--help").output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("verify"));
}

#[test]
fn run_then_analyze() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("spec.json");
    std::fs::write(&config, r#"{"algos": ["controlled"], "sides": [32], "c_delta": [1.0]}"#).unwrap();
    let csv = dir.path().join("out.csv");
    let summary = dir.path().join("summary.json");
    let status = bin()
        .args(["run", "--config"])
        .arg(&config)
        .args(["--sides", "8,12,16", "--algo", "akr,akr+qaa,controlled", "--window", "0.7,1.3,7", "--out"])
        .arg(&csv)
        .args(["--summary"])
        .arg(&summary)
        .status()
        .unwrap();
    assert!(status.success());
    let text = std::fs::read_to_string(&csv).unwrap();
    assert!(text.starts_with("side,N,algo,delta,steps,time_steps_charged,"));
    assert!(text.contains(",akr+qaa,"));
    assert!(text.lines().skip(1).all(|l| l.starts_with("8,") || l.starts_with("12,") || l.starts_with("16,")));
    let json: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&summary).unwrap()).unwrap();
    assert_eq!(json["csv_schema_version"], 1);

    let report = dir.path().join("report.json");
    let status = bin().args(["analyze", "--in"]).arg(&csv).args(["--report"]).arg(&report).status().unwrap();
    assert!(status.success());
    let again: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(again["cost_ratio"], json["cost_ratio"]);
}

#[test]
fn verify_passes() {
    let out = bin().arg("verify").output().unwrap();
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert_eq!(out.status.code(), Some(0), "{stdout}");
    assert_eq!(stdout.lines().filter(|l| l.starts_with("PASS")).count(), 6);
}

use std::path::Path;
use std::process::{Command, Output};

fn qdc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qdc")).args(args).output().expect("qdc runs")
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn gen_compile_verify() {
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("src.qc");
    let out = qdc(&["gen", "--n", "3", "--phasors", "4", "--clifford-pct", "50", "--weight", "2", "--seed", "11", "-o", s(&src)]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));

    for pipeline in ["baseline", "qdc-noreduce", "qdc-full"] {
        let dst = dir.path().join(format!("{pipeline}.qc"));
        let out = qdc(&["compile", "--pipeline", pipeline, "--grid", "3x3", "-i", s(&src), "-o", s(&dst)]);
        assert!(out.status.success(), "{pipeline}: {}", String::from_utf8_lossy(&out.stderr));
        let out = qdc(&["verify", "-i", s(&dst), "--ref", s(&src), "--tol", "1e-9"]);
        assert_eq!(out.status.code(), Some(0), "{pipeline}");
        let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
        assert_eq!(report["equivalent"], true);
    }
}

#[test]
fn verify_reports_a_mismatch() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.qc");
    let b = dir.path().join("b.qc");
    std::fs::write(&a, "qubits 1\ncbits 0\nh 0\n").unwrap();
    std::fs::write(&b, "qubits 1\ncbits 0\nx 0\n").unwrap();
    let out = qdc(&["verify", "-i", s(&a), "--ref", s(&b)]);
    assert_eq!(out.status.code(), Some(1));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["equivalent"], false);
}

#[test]
fn bench_writes_rows_and_aggregates() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    let csv = dir.path().join("results.csv");
    std::fs::write(
        &cfg,
        r#"{"n_qubits": 3, "n_phasors": 5, "clifford_pct": 30, "weight": "random", "seed": 4,
            "pipelines": ["baseline", "qdc_full"], "trials": 3}"#,
    )
    .unwrap();
    let out = qdc(&["bench", "--config", s(&cfg), "-o", s(&csv), "--verify"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read_to_string(&csv).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "trial,pipeline,n,phasors,clifford_pct,weight,seed,depth,cx_count,qubit_count,wall_time_ms");
    assert_eq!(lines.len(), 1 + 6 + 2);
    assert!(lines[7].starts_with("aggregate,baseline"));
}

#[test]
fn bench_rejects_unknown_keys() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    std::fs::write(
        &cfg,
        r#"{"n_qubits": 3, "n_phasors": 5, "clifford_pct": 30, "weight": 2, "seed": 4,
            "pipelines": ["baseline"], "trials": 1, "shots": 100}"#,
    )
    .unwrap();
    let out = qdc(&["bench", "--config", s(&cfg), "-o", s(&dir.path().join("x.csv"))]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("shots"));
}

#[test]
fn expectation_mode_reports_the_observable() {
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("src.qc");
    assert!(qdc(&["gen", "--n", "2", "--phasors", "3", "--clifford-pct", "60", "--seed", "2", "-o", s(&src)]).status.success());
    let out = qdc(&["compile", "--pipeline", "qdc-full", "--grid", "2x3", "-i", s(&src), "--expectation", "ZZ"]);
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("measure"));
    assert!(String::from_utf8_lossy(&out.stdout).contains("#@tag observable"));
}

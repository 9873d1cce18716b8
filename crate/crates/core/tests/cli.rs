use std::path::Path;
use std::process::{Command, Output};

fn fairdice(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fairdice"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn data(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("data")
        .join(name)
        .display()
        .to_string()
}

#[test]
fn mwu_prints_statistics() {
    let o = fairdice(&[
        "mwu",
        "--x",
        "19,22,16,29,24",
        "--y",
        "20,11,17,12",
        "--format",
        "csv",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    let mut lines = out.lines();
    assert_eq!(
        lines.next(),
        Some("comparison,n,m,U_x,U_y,z,p,significant,note")
    );
    let row: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(&row[1..5], ["5", "4", "17", "3"]);
    assert!((row[6].parse::<f64>().unwrap() - 0.111347).abs() < 1e-6);
}

#[test]
fn validation_errors_exit_with_2() {
    assert_eq!(
        fairdice(&["mwu", "--x", "1,a", "--y", "2"]).status.code(),
        Some(2)
    );
    assert_eq!(
        fairdice(&["solve-game", "--game", "rps"]).status.code(),
        Some(2)
    );
    assert_eq!(
        fairdice(&["solve-game", "--harm", "1,2,3"]).status.code(),
        Some(2)
    );
    assert_eq!(
        fairdice(&["classify-demo", "--classifier", "constant:3", "--n", "10"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        fairdice(&[
            "compare",
            "--data",
            "missing.csv",
            "--question",
            "Q1",
            "--groups",
            "a,b"
        ])
        .status
        .code(),
        Some(2)
    );
    assert_eq!(fairdice(&["no-such-command"]).status.code(), Some(2));
    let nominal = fairdice(&[
        "compare",
        "--data",
        &data("sample_survey.csv"),
        "--meta",
        &data("sample_meta.json"),
        "--question",
        "Q22",
        "--groups",
        "teachers,online",
    ]);
    assert_eq!(nominal.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&nominal.stderr).contains("unordered"));
}

#[test]
fn solve_harm_game() {
    let o = fairdice(&["solve-game", "--harm", "1,2,1,6"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("0.750000 0.250000"));
    assert!(out.contains("-1.500000"));
    assert!(out
        .lines()
        .any(|l| l.starts_with("is_nash") && l.ends_with("true")));
}

#[test]
fn classify_demo_reports_analytic_value() {
    let o = fairdice(&[
        "classify-demo",
        "--mixture",
        "overlap:0.5,1",
        "--classifier",
        "md",
        "--n",
        "20000",
        "--format",
        "csv",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("analytic_cost,0.250000"));
}

#[test]
fn simulate_writes_trace_into_out_dir() {
    let dir = tempfile::tempdir().unwrap();
    let out_dir = dir.path().display().to_string();
    let o = fairdice(&[
        "simulate-repeated",
        "--game",
        "mp",
        "--row",
        "pure:0",
        "--col",
        "exploiter",
        "--rounds",
        "50",
        "--trace",
        "trace.csv",
        "--out-dir",
        &out_dir,
        "--seed",
        "3",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let trace = std::fs::read_to_string(dir.path().join("trace.csv")).unwrap();
    assert_eq!(
        trace.lines().next(),
        Some("round,row_action,col_action,row_payoff,col_payoff")
    );
    assert_eq!(trace.lines().count(), 51);
    assert!(dir.path().join("simulate-repeated.csv").exists());
}

#[test]
fn report_is_byte_identical_across_runs() {
    let runs: Vec<_> = (0..2)
        .map(|_| {
            let dir = tempfile::tempdir().unwrap();
            let o = fairdice(&[
                "report",
                "--data",
                &data("sample_survey.csv"),
                "--meta",
                &data("sample_meta.json"),
                "--questions",
                "Q1,Q24",
                "--groups",
                "teachers,academics",
                "--out-dir",
                &dir.path().display().to_string(),
            ]);
            assert_eq!(o.status.code(), Some(0));
            let read = |n: &str| std::fs::read(dir.path().join(n)).unwrap();
            (
                read("comparisons.csv"),
                read("chart_Q1.svg"),
                read("chart_Q24.svg"),
                stdout(&o),
            )
        })
        .collect();
    assert_eq!(runs[0], runs[1]);
    let csv = String::from_utf8(runs[0].0.clone()).unwrap();
    assert_eq!(csv.lines().count(), 3);
}

//! End-to-end checks of the command-line surface: exit codes, formats,
//! determinism, and the external decider protocol.

use std::path::PathBuf;
use std::process::{Command, Output};

use tempfile::TempDir;

fn bin() -> PathBuf {
    PathBuf::from(env!("CARGO_BIN_EXE_matroidkit"))
}

fn run(args: &[&str]) -> Output {
    Command::new(bin())
        .args(args)
        .output()
        .expect("binary runs")
}

fn write(dir: &TempDir, name: &str, content: &str) -> String {
    let path = dir.path().join(name);
    std::fs::write(&path, content).unwrap();
    path.to_string_lossy().into_owned()
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn axioms_pass_fail_and_parse_error_codes() {
    let dir = TempDir::new().unwrap();
    let good = write(&dir, "good.json", r#"{"type":"uniform","n":4,"k":2}"#);
    let out = run(&["axioms", &good]);
    assert_eq!(out.status.code(), Some(0), "{out:?}");
    assert!(stdout(&out).contains("\"Pass\""));

    let broken = write(
        &dir,
        "broken.json",
        r#"{"type":"explicit","n":3,"independent":[[],[1],[2],[3],[2,3]]}"#,
    );
    let out = run(&["axioms", &broken]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("ExchangeViolation"));

    let out = run(&["axioms", &write(&dir, "bad.json", "not json")]);
    assert_eq!(out.status.code(), Some(2));

    let big = write(&dir, "big.json", r#"{"type":"uniform","n":40,"k":2}"#);
    let out = run(&["axioms", &big]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("exceeds the limit"));
}

#[test]
fn reduce_reports_gap_and_equivalence() {
    let dir = TempDir::new().unwrap();
    let emb = write(
        &dir,
        "emb.json",
        r#"{"matroid":{"type":"uniform","n":2,"k":1},"cost":[1,2],"target":2}"#,
    );
    let out = run(&["reduce", &emb, "--params", "max,is,le"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("\"eps\": \"1/288\""));
    assert!(text.contains("\"L\": 8"));
    assert!(text.contains("\"equiv\": true"));

    let out = run(&["reduce", &emb, "--params", "min,is,le"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn sat_decides_and_signals_unsat() {
    let dir = TempDir::new().unwrap();
    let sat = write(&dir, "sat.json", r#"{"n_vars":1,"clauses":[[1]]}"#);
    let out = run(&["sat", &sat]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("\"satisfiable\": true"));

    let unsat = write(&dir, "unsat.json", r#"{"n_vars":1,"clauses":[[1],[-1]]}"#);
    let out = run(&["sat", &unsat]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("\"satisfiable\": false"));

    let empty = write(&dir, "empty.json", r#"{"n_vars":2,"clauses":[]}"#);
    let out = run(&["sat", &empty]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn kcm_reports_ratio_and_infeasibility() {
    let dir = TempDir::new().unwrap();
    let kcm = write(
        &dir,
        "kcm.json",
        r#"{"matroid":{"type":"uniform","n":5,"k":2},"cost":[2,3,10,10,10],"size":[3,4,1,1,1],"demand":7}"#,
    );
    let out = run(&["kcm", &kcm, "--eps", "1/2", "--with-oracle"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("\"cost\": 5"));
    assert!(text.contains("\"ratio\": 1.0"));

    let infeasible = write(
        &dir,
        "inf.json",
        r#"{"matroid":{"type":"uniform","n":3,"k":2},"cost":[1,1,1],"size":[1,1,1],"demand":50}"#,
    );
    let out = run(&["kcm", &infeasible, "--eps", "1/2"]);
    assert_eq!(out.status.code(), Some(1));

    let kcmb = write(
        &dir,
        "kcmb.json",
        r#"{"matroid":{"type":"uniform","n":4,"k":2},"cost":[1,2,3,4],"size":[1,2,3,4],"demand":6,"problem":"kcmb"}"#,
    );
    let out = run(&["kcm", &kcmb, "--eps", "1", "--with-oracle"]);
    assert_eq!(out.status.code(), Some(0), "{out:?}");
}

#[test]
fn adversary_builtin_deciders_and_rates() {
    let out = run(&[
        "adversary",
        "--n",
        "8",
        "--k",
        "4",
        "--alpha",
        "18",
        "--decider",
        "builtin:budget=-1",
        "--seeds",
        "20",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.starts_with("seed,queries,defeated,hidden_set"));
    assert!(text.contains("summary,"), "{text}");
    let summary = text.lines().last().unwrap();
    let fields: Vec<&str> = summary.split(',').collect();
    assert_eq!(fields[2], "1", "defeat rate should be 1.0: {summary}");
    assert_eq!(fields[3], "8"); // |F| at (8,4,18)

    let out = run(&[
        "adversary",
        "--n",
        "8",
        "--decider",
        "builtin:bruteforce",
        "--seeds",
        "3",
        "--jobs",
        "2",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let summary = text.lines().last().unwrap();
    assert_eq!(summary.split(',').nth(2), Some("0"));

    // Empty target family is a domain error.
    let out = run(&[
        "adversary",
        "--n",
        "3",
        "--k",
        "3",
        "--alpha",
        "100",
        "--decider",
        "builtin:alwaysno",
    ]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn identical_invocations_are_byte_identical() {
    let args = [
        "adversary",
        "--n",
        "7",
        "--k",
        "3",
        "--alpha",
        "12",
        "--decider",
        "builtin:budget=2:randomsets",
        "--seeds",
        "10",
        "--format",
        "json",
    ];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(stdout(&a), stdout(&b));
}

#[test]
fn out_flag_writes_the_report_file() {
    let dir = TempDir::new().unwrap();
    let target = dir.path().join("report.json");
    let emb = write(
        &dir,
        "emb.json",
        r#"{"matroid":{"type":"uniform","n":4,"k":2},"cost":[1,2,3,4],"target":5}"#,
    );
    let out = run(&["emb", &emb, "--out", target.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let report = std::fs::read_to_string(&target).unwrap();
    assert!(report.contains("\"solution\""));
    assert!(report.contains('1') && report.contains('4'));
}

/// The external decider protocol, exercised end to end with the sample
/// Python decider: under-budget probing is always defeated.
#[test]
fn external_decider_over_the_line_protocol() {
    let script = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../scripts/budget_decider.py")
        .canonicalize()
        .expect("sample decider script present");
    let spec = format!("python3 {} -1", script.display());
    let out = run(&[
        "adversary",
        "--n",
        "6",
        "--k",
        "2",
        "--alpha",
        "7",
        "--decider",
        &spec,
        "--seeds",
        "6",
    ]);
    assert_eq!(out.status.code(), Some(0), "{out:?}");
    let text = stdout(&out);
    let summary = text.lines().last().unwrap();
    let fields: Vec<&str> = summary.split(',').collect();
    assert_eq!(fields[2], "1", "external decider should always lose: {text}");
    assert_eq!(fields[3], "3"); // |F| at (6,2,7)
}

/// A decider that breaks the protocol (garbage request line) exits 3.
#[test]
fn protocol_violations_exit_three() {
    let dir = TempDir::new().unwrap();
    let bad = write(
        &dir,
        "bad_decider.py",
        "import sys\nsys.stdin.readline()\nprint('HELLO')\nsys.stdout.flush()\n",
    );
    let out = run(&[
        "adversary",
        "--n",
        "6",
        "--k",
        "2",
        "--alpha",
        "7",
        "--decider",
        &format!("python3 {bad}"),
        "--seeds",
        "2",
    ]);
    assert_eq!(out.status.code(), Some(3), "{out:?}");
}

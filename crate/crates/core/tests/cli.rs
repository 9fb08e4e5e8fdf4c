use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn tacit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tacit")).args(args).output().unwrap()
}

fn ok(args: &[&str]) -> String {
    let out = tacit(args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

#[test]
fn full_pipeline() {
    let dir = tempfile::tempdir().unwrap();
    let mazes = dir.path().join("mazes");
    let dfas = dir.path().join("dfas");
    ok(&["gen-mazes", "--size", "7", "--count", "2", "--density", "0.6", "--seed", "4", "--out-dir", p(&mazes)]);
    assert_eq!(fs::read_dir(&mazes).unwrap().count(), 10);

    ok(&["learn-dfas", "--seed", "0", "--out", p(&dfas)]);
    for name in ["right.json", "up.json", "left.json", "down.json", "report.json"] {
        assert!(dfas.join(name).exists(), "{name}");
    }
    let report = ok(&["compare-dfas", "--learned", p(&dfas), "--max-len", "8"]);
    assert_eq!(report.lines().count(), 4);
    assert!(report.lines().all(|l| l.contains("jaccard=1.0000") && l.contains("equivalent=true")));

    let csv_a = dir.path().join("a.csv");
    let csv_b = dir.path().join("b.csv");
    let run = |out: &Path, workers: &str| {
        ok(&[
            "run-experiment", "--mazes", p(&mazes), "--strategy", "ncc", "--trials", "4", "--seed", "9",
            "--dfas", p(&dfas), "--workers", workers, "--out", p(out),
        ])
    };
    run(&csv_a, "1");
    run(&csv_b, "3");
    let a = fs::read(&csv_a).unwrap();
    assert_eq!(a, fs::read(&csv_b).unwrap());
    let text = String::from_utf8(a).unwrap();
    assert_eq!(text.lines().filter(|l| !l.starts_with('#')).count(), 1 + 10 * 4);
    assert!(text.lines().any(|l| l.starts_with("# summary strategy=NCC")));

    let corpus = dir.path().join("corpus.jsonl");
    ok(&["collect-corpus", "--mazes", p(&mazes), "--per-layout", "2", "--seed", "1", "--out", p(&corpus)]);
    assert!(corpus.exists());
}

#[test]
fn failures_exit_nonzero_with_one_line() {
    let dir = tempfile::tempdir().unwrap();
    let cases: Vec<Vec<String>> = vec![
        vec!["run-experiment".into(), "--mazes".into(), p(&dir.path().join("missing")).into(), "--strategy".into(), "nc".into(), "--out".into(), "x.csv".into()],
        vec!["run-experiment".into(), "--mazes".into(), p(dir.path()).into(), "--strategy".into(), "bogus".into(), "--out".into(), "x.csv".into()],
        vec!["gen-mazes".into(), "--density".into(), "1.5".into(), "--out-dir".into(), p(dir.path()).into()],
        vec!["compare-dfas".into(), "--learned".into(), p(dir.path()).into()],
        vec![],
    ];
    for args in cases {
        let args: Vec<&str> = args.iter().map(String::as_str).collect();
        let out = tacit(&args);
        assert!(!out.status.success(), "{args:?}");
        let err = String::from_utf8(out.stderr).unwrap();
        assert_eq!(err.trim_end().lines().count(), 1, "{args:?}: {err}");
        assert!(err.starts_with("error"), "{err}");
    }
}

#[test]
fn malformed_maze_is_reported_with_its_line() {
    let dir = tempfile::tempdir().unwrap();
    let maze = "{\n  \"size\": 3,\n  \"seeker_walls\": [\n    [0, 0, 0, 1],\n    [0, 0, 2, 2]\n  ],\n  \"helper_walls\": [],\n  \"init\": [0, 0],\n  \"goal\": [2, 2]\n}\n";
    fs::write(dir.path().join("bad.json"), maze).unwrap();
    let out = tacit(&["run-experiment", "--mazes", p(dir.path()), "--strategy", "nc", "--out", p(&dir.path().join("o.csv"))]);
    assert!(!out.status.success());
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("bad.json") && err.contains("line 5"), "{err}");
}

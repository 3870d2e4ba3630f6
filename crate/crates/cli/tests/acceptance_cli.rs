//! Acceptance criterion 10 and the exit-code contract, exercised against
//! the built binary.

use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_opgraph"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("spawn opgraph")
}

fn stdout_of(args: &[&str]) -> Vec<u8> {
    let out = run(args);
    assert!(
        out.status.success(),
        "command {args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    out.stdout
}

const SUC_TEXT: &str = "(program (nodes (suc (out (1 1)))) (grafts) (inputs) (outputs (0 0)))";

#[test]
fn criterion_10_determinism_across_workers_and_reruns() {
    // worker-bearing commands: byte-identical output for 1, 4, 8 workers
    let levin_base =
        stdout_of(&["levin", "--max-bits", "22", "--fuel", "2000", "--workers", "1"]);
    for workers in ["4", "8"] {
        let other =
            stdout_of(&["levin", "--max-bits", "22", "--fuel", "2000", "--workers", workers]);
        assert_eq!(levin_base, other, "levin differs at {workers} workers");
    }
    let k_base = stdout_of(&[
        "k", "--min", "1", "--max", "48", "--max-bits", "22", "--fuel", "2000", "--workers", "1",
    ]);
    for workers in ["4", "8"] {
        let other = stdout_of(&[
            "k", "--min", "1", "--max", "48", "--max-bits", "22", "--fuel", "2000", "--workers",
            workers,
        ]);
        assert_eq!(k_base, other, "k differs at {workers} workers");
    }

    // every command: identical invocations produce byte-identical output
    let dir = std::env::temp_dir().join(format!("opgraph-accept-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let table_path = dir.join("mass.tsv");
    std::fs::write(&table_path, &levin_base).unwrap();
    let corpus_path = dir.join("corpus.tsv");
    let corpus = stdout_of(&[
        "sample", "--table", table_path.to_str().unwrap(), "--n", "20000", "--seed", "42",
    ]);
    std::fs::write(&corpus_path, &corpus).unwrap();
    let map_path = dir.join("map.tsv");
    let mut map = String::new();
    for v in [31u64, 32, 33, 63, 64, 65] {
        map.push_str(&format!("{v}\t{v}\n"));
    }
    std::fs::write(&map_path, map).unwrap();

    let invocations: Vec<Vec<&str>> = vec![
        vec!["eval", "--inline", SUC_TEXT, "--args", "3"],
        vec!["enum", "--max-bits", "16"],
        vec!["k", "--min", "1", "--max", "16", "--max-bits", "20", "--fuel", "1000"],
        vec!["kp", "--min", "1", "--max", "16", "--max-bits", "20", "--fuel", "1000"],
        vec!["pairing", "rank", "--k", "2", "--l", "2"],
        vec!["pairing", "unrank", "--rank", "10"],
        vec!["pairing", "bounds", "--r-seq", "linear", "--max-value", "500"],
        vec!["levin", "--max-bits", "18", "--fuel", "1000"],
        vec!["sample", "--table", table_path.to_str().unwrap(), "--n", "5000", "--seed", "7"],
        vec!["zipf", "--corpus", corpus_path.to_str().unwrap(), "--method", "both"],
        vec![
            "numerals",
            "--corpus",
            corpus_path.to_str().unwrap(),
            "--map",
            map_path.to_str().unwrap(),
            "--table",
            table_path.to_str().unwrap(),
        ],
    ];
    for args in &invocations {
        let first = stdout_of(args);
        let second = stdout_of(args);
        assert_eq!(first, second, "{args:?} is not rerun-deterministic");
    }
    std::fs::remove_dir_all(&dir).ok();
    println!("criterion 10 (command determinism): PASS — worker counts 1/4/8 and reruns byte-identical");
}

#[test]
fn exit_code_contract() {
    // 2: parse errors
    let out = run(&["eval", "--inline", "(program", "--args", "1"]);
    assert_eq!(out.status.code(), Some(2));
    // 3: domain errors (argument arity mismatch)
    let out = run(&["eval", "--inline", SUC_TEXT, "--args", "1,2"]);
    assert_eq!(out.status.code(), Some(3));
    // 4: horizon errors
    let out = run(&["pairing", "unrank", "--rank", "999999999", "--horizon", "100"]);
    assert_eq!(out.status.code(), Some(4));
    // parse errors report a byte position
    let out = run(&["eval", "--inline", "", "--args", ""]);
    assert_eq!(out.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("byte 0"), "missing position info: {stderr}");
    // machine-readable diagnostics on request
    let out = run(&["--json-errors", "eval", "--inline", "", "--args", ""]);
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.trim_start().starts_with('{'), "not JSON: {stderr}");
    assert!(stderr.contains("\"exit_code\":2"), "missing exit code: {stderr}");
}

#[test]
fn eval_add_fixture_matches_evaluator_example() {
    let dir = std::env::temp_dir().join(format!("opgraph-addfix-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("add.txt");
    std::fs::write(&path, include_str!("../../core/tests/golden/add_program.txt")).unwrap();
    let out = stdout_of(&["eval", "--file", path.to_str().unwrap(), "--args", "2,3"]);
    let text = String::from_utf8(out).unwrap();
    let doc: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(doc["outcome"]["defined"], serde_json::json!([4]));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn zipf_on_degenerate_corpus_is_domain_error() {
    let dir = std::env::temp_dir().join(format!("opgraph-degen-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("flat.tsv");
    let mut corpus = String::new();
    for i in 0..30 {
        corpus.push_str(&format!("w{i:02}\t5\n"));
    }
    std::fs::write(&path, corpus).unwrap();
    let out = run(&["zipf", "--corpus", path.to_str().unwrap(), "--method", "ls", "--rmin", "1"]);
    assert_eq!(out.status.code(), Some(3));
    std::fs::remove_dir_all(&dir).ok();
}

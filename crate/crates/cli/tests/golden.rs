//! Runs the binary on the bundled corpus and compares against checked-in
//! output. Set `GSPAN_BLESS=1` to rewrite the expected files.

use std::path::{Path, PathBuf};
use std::process::Command;

fn corpus() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../corpus")
}

/// `(expected file, arguments)`; `@` expands to the corpus directory.
const CASES: &[(&str, &str)] = &[
    ("validate-basic.txt", "validate @/basic.json"),
    ("validate-tables.txt", "validate @/tables.json"),
    ("euler-coset-order3.txt", "euler @/basic.json --name Z6/3"),
    ("euler-coset-order2.txt", "euler @/basic.json --name Z6/2"),
    ("euler-action.txt", "euler @/basic.json --name X"),
    ("euler-table.txt", "euler @/tables.json --name P"),
    ("euler-pullback.txt", "euler @/tables.json --name PB"),
    ("euler-fibre.txt", "euler @/tables.json --name F"),
    ("matrix-identity-bz2.txt", "matrix @/basic.json --span I2"),
    ("matrix-identity-bz4-i.txt", "matrix @/basic.json --span I4 --character i"),
    ("matrix-universal.json", "matrix @/basic.json --span U --json"),
    ("matrix-pushforward.txt", "matrix @/basic.json --span Push"),
    ("matrix-pullback.txt", "matrix @/basic.json --span Pull"),
    ("matrix-composite.txt", "matrix @/basic.json --span IU"),
    ("matrix-table-span.txt", "matrix @/tables.json --span T"),
    ("matrix-table-composite.json", "matrix @/tables.json --span SS --json"),
    ("compose-basic.json", "compose @/basic.json --left Id --right U --out C"),
    ("check-basic.txt", "check @/basic.json --which all --seed 0 --trials 10"),
    ("check-tables.txt", "check @/tables.json --which all --seed 0 --trials 10"),
    ("check-random.txt", "check --which all --seed 7 --trials 10"),
    ("stirling-0.txt", "example stirling --n 0"),
    ("stirling-1.txt", "example stirling --n 1"),
    ("stirling-2.txt", "example stirling --n 2"),
    ("stirling-3.txt", "example stirling --n 3"),
    ("stirling-4.txt", "example stirling --n 4"),
    ("stirling-4-sign.txt", "example stirling --n 4 --character sign"),
    ("stirling-3.json", "example stirling --n 3 --json"),
    ("stirling-4-sign.json", "example stirling --n 4 --character sign --json"),
];

fn run(args: &str) -> (String, i32) {
    let dir = corpus();
    let args: Vec<String> = args
        .split(' ')
        .map(|a| a.replace('@', dir.to_str().expect("utf-8 path")))
        .collect();
    let out = Command::new(env!("CARGO_BIN_EXE_gspan"))
        .args(&args)
        .env_remove("GSPAN_STIRLING_GUARD")
        .output()
        .expect("binary runs");
    let stderr = String::from_utf8(out.stderr).expect("utf-8 stderr");
    assert!(stderr.is_empty(), "{args:?} wrote to stderr: {stderr}");
    (String::from_utf8(out.stdout).expect("utf-8 stdout"), out.status.code().unwrap_or(-1))
}

#[test]
fn corpus_matches_golden_files() {
    let bless = std::env::var_os("GSPAN_BLESS").is_some();
    let golden = corpus().join("golden");
    let mut mismatches = Vec::new();
    for (file, args) in CASES {
        let (out, code) = run(args);
        assert_eq!(code, 0, "`gspan {args}` exited with {code}:\n{out}");
        let path = golden.join(file);
        if bless {
            std::fs::write(&path, &out).expect("writable corpus");
            continue;
        }
        let expected = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        if expected != out {
            mismatches.push(format!("{file}: `gspan {args}`\n--- expected\n{expected}--- actual\n{out}"));
        }
    }
    assert!(mismatches.is_empty(), "{}", mismatches.join("\n"));
}

#[test]
fn output_is_deterministic() {
    for (_, args) in CASES.iter().filter(|(f, _)| f.starts_with("check") || f.starts_with("compose")) {
        assert_eq!(run(args), run(args), "{args}");
    }
}

#[test]
fn exit_codes() {
    let dir = corpus();
    let missing = dir.join("does-not-exist.json");
    let out = Command::new(env!("CARGO_BIN_EXE_gspan"))
        .args(["validate", missing.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));

    let out = Command::new(env!("CARGO_BIN_EXE_gspan"))
        .args(["matrix", dir.join("basic.json").to_str().unwrap(), "--span", "nope"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("nope"));

    let out = Command::new(env!("CARGO_BIN_EXE_gspan"))
        .args(["example", "stirling", "--n", "6"])
        .env_remove("GSPAN_STIRLING_GUARD")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn stirling_guard_can_be_raised() {
    let out = Command::new(env!("CARGO_BIN_EXE_gspan"))
        .args(["example", "stirling", "--n", "1"])
        .env("GSPAN_STIRLING_GUARD", "0")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

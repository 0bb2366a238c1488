//! End-to-end acceptance for the CLI: every exercise passes its asymmetry
//! check through the binary, the shipped deobfuscation suite scores 1.0
//! with the answer-scripted model, and the whole flow stays inside the
//! time budget with no network and no host shell.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};
use std::time::Instant;

fn binary() -> &'static str {
    env!("CARGO_BIN_EXE_llmlab")
}

fn repo_root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../..")
        .canonicalize()
        .expect("repo root")
}

fn run(args: &[&str]) -> Output {
    Command::new(binary())
        .args(args)
        .current_dir(repo_root())
        .output()
        .expect("binary runs")
}

fn stdout(output: &Output) -> String {
    String::from_utf8_lossy(&output.stdout).into_owned()
}

const EXERCISE_IDS: [&str; 6] = [
    "sql-excessive-agency",
    "sql-injection",
    "rag-poisoning-cmd-injection",
    "review-prompt-injection",
    "prompt-leak",
    "output-xss",
];

#[test]
fn c9_cli_end_to_end() {
    let started = Instant::now();

    // every exercise passes the asymmetry check through the binary
    for id in EXERCISE_IDS {
        let output = run(&["lab", "run", id, "--variant", "both"]);
        assert_eq!(
            output.status.code(),
            Some(0),
            "{id}: {}",
            String::from_utf8_lossy(&output.stderr)
        );
        let text = stdout(&output);
        assert!(text.contains("COMPROMISED"), "{id}: no compromise line");
        assert!(text.contains("asymmetry: PASS"), "{id}: no pass line");
    }

    // the shipped deobfuscation suite scores 1.0 with the oracle-answer model
    let output = run(&[
        "bench",
        "run",
        "data/suites/deobfuscation.json",
        "--models",
        "deobf-oracle",
    ]);
    assert_eq!(output.status.code(), Some(0));
    let text = stdout(&output);
    assert!(
        text.contains("6/6 passed (rate 1.000)"),
        "unexpected bench output:\n{text}"
    );

    let elapsed = started.elapsed();
    assert!(
        elapsed.as_secs() < 60,
        "CLI acceptance flow took {elapsed:?}, budget is 60s"
    );
    println!("ACCEPTANCE 9 (CLI end-to-end, offline, <60s): PASS");
}

#[test]
fn exit_codes_are_exhaustive() {
    // 0: expected outcome
    let ok = run(&["lab", "run", "prompt-leak", "--variant", "vulnerable"]);
    assert_eq!(ok.status.code(), Some(0));
    let ok = run(&["lab", "run", "prompt-leak", "--variant", "hardened"]);
    assert_eq!(ok.status.code(), Some(0));

    // 1: assertion failure — an override model that never falls for the
    // attack leaves the vulnerable variant uncompromised
    let assertion = run(&[
        "lab",
        "run",
        "sql-excessive-agency",
        "--variant",
        "vulnerable",
        "--model",
        "echo-calc",
    ]);
    assert_eq!(assertion.status.code(), Some(1));

    // 2: usage errors
    let unknown = run(&["lab", "run", "nope"]);
    assert_eq!(unknown.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&unknown.stderr);
    for id in EXERCISE_IDS {
        assert!(stderr.contains(id), "known-id list missing {id}");
    }
    let bad_flag = run(&["lab", "--definitely-not-a-flag"]);
    assert_eq!(bad_flag.status.code(), Some(2));
}

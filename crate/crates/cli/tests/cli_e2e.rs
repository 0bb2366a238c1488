//! Subcommand-level end-to-end tests against the shipped data files.

use std::path::{Path, PathBuf};
use std::process::{Command, Output, Stdio};

fn binary() -> &'static str {
    env!("CARGO_BIN_EXE_llmlab")
}

fn repo_root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../..")
        .canonicalize()
        .expect("repo root")
}

fn run_in(dir: &Path, args: &[&str]) -> Output {
    Command::new(binary())
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn run(args: &[&str]) -> Output {
    run_in(&repo_root(), args)
}

fn run_with_stdin(dir: &Path, args: &[&str], input: &str) -> Output {
    let mut child = Command::new(binary())
        .args(args)
        .current_dir(dir)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary spawns");
    use std::io::Write;
    child
        .stdin
        .as_mut()
        .expect("stdin piped")
        .write_all(input.as_bytes())
        .expect("stdin written");
    child.wait_with_output().expect("binary exits")
}

fn stdout(output: &Output) -> String {
    String::from_utf8_lossy(&output.stdout).into_owned()
}

#[test]
fn lab_list_prints_six_ids() {
    let output = run(&["lab", "list"]);
    assert_eq!(output.status.code(), Some(0));
    assert_eq!(stdout(&output).lines().count(), 6);
}

#[test]
fn lab_run_json_format_is_machine_parseable() {
    let output = run(&["--format", "json", "lab", "run", "prompt-leak", "--variant", "vulnerable"]);
    assert_eq!(output.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_str(&stdout(&output)).unwrap();
    assert_eq!(report["exercise_id"], "prompt-leak");
    assert_eq!(report["compromised"], true);
}

#[test]
fn bench_report_bytes_are_deterministic_with_masked_latency() {
    let dir = tempfile::tempdir().unwrap();
    let out_a = dir.path().join("a.json");
    let out_b = dir.path().join("b.json");
    for out in [&out_a, &out_b] {
        let output = run(&[
            "bench",
            "run",
            "data/suites/deobfuscation.json",
            "--models",
            "deobf-oracle",
            "--mask-latency",
            "--out",
            out.to_str().unwrap(),
        ]);
        assert_eq!(output.status.code(), Some(0));
    }
    assert_eq!(
        std::fs::read(&out_a).unwrap(),
        std::fs::read(&out_b).unwrap()
    );
}

#[test]
fn bench_malformed_suite_exits_2_with_line() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{\n  \"id\": \"x\",\n  broken\n}").unwrap();
    let output = run(&["bench", "run", bad.to_str().unwrap(), "--models", "deobf-oracle"]);
    assert_eq!(output.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&output.stderr).contains("line 3"));
}

#[test]
fn bench_all_shipped_suites_score_full_marks() {
    for (suite, model) in [
        ("data/suites/command_generation.json", "demo-answers"),
        ("data/suites/explanation.json", "demo-answers"),
    ] {
        let output = run(&["bench", "run", suite, "--models", model]);
        assert_eq!(output.status.code(), Some(0), "{suite}");
        assert!(
            stdout(&output).contains("(rate 1.000)"),
            "{suite} not fully solved:\n{}",
            stdout(&output)
        );
    }
}

#[test]
fn rag_ingest_query_answer_flow() {
    let dir = tempfile::tempdir().unwrap();
    let store = dir.path().join("s.jsonl");
    let root = repo_root();
    let corpus = root.join("data/corpus");
    let config = root.join("config.json");

    let output = run_in(
        dir.path(),
        &[
            "rag",
            "ingest",
            corpus.to_str().unwrap(),
            "--store",
            store.to_str().unwrap(),
            "--chunker",
            "paragraphs",
        ],
    );
    assert_eq!(output.status.code(), Some(0));
    let first_len = std::fs::read_to_string(&store).unwrap().lines().count();
    assert!(first_len > 0);

    // ingest again: record ids continue monotonically (file grows)
    let output = run_in(
        dir.path(),
        &[
            "rag",
            "ingest",
            corpus.to_str().unwrap(),
            "--store",
            store.to_str().unwrap(),
            "--chunker",
            "paragraphs",
        ],
    );
    assert_eq!(output.status.code(), Some(0));
    let text = std::fs::read_to_string(&store).unwrap();
    assert_eq!(text.lines().count(), first_len * 2);
    let ids: Vec<u64> = text
        .lines()
        .map(|l| serde_json::from_str::<serde_json::Value>(l).unwrap()["record_id"]
            .as_u64()
            .unwrap())
        .collect();
    assert!(ids.windows(2).all(|w| w[1] > w[0]), "ids not monotone: {ids:?}");

    // query ranks the firewall chunk first for a firewall query
    let output = run_in(
        dir.path(),
        &[
            "--format",
            "json",
            "rag",
            "query",
            "iptables firewall",
            "--store",
            store.to_str().unwrap(),
            "-k",
            "3",
        ],
    );
    assert_eq!(output.status.code(), Some(0));
    let rows: serde_json::Value = serde_json::from_str(&stdout(&output)).unwrap();
    assert!(rows[0]["doc_id"]
        .as_str()
        .unwrap()
        .contains("firewalls.txt"));

    // answer through the scripted rag-demo model with citations
    let output = run_in(
        dir.path(),
        &[
            "--config",
            config.to_str().unwrap(),
            "--format",
            "json",
            "rag",
            "answer",
            "what is iptables",
            "--store",
            store.to_str().unwrap(),
            "--model",
            "rag-demo",
        ],
    );
    assert_eq!(output.status.code(), Some(0));
    let answer: serde_json::Value = serde_json::from_str(&stdout(&output)).unwrap();
    assert!(answer["answer"].as_str().unwrap().contains("iptables"));
    assert!(!answer["citations"].as_array().unwrap().is_empty());

    // missing store exits 2
    let output = run_in(
        dir.path(),
        &["rag", "query", "x", "--store", "missing.jsonl"],
    );
    assert_eq!(output.status.code(), Some(2));
}

#[test]
fn rag_query_on_empty_store_is_ok_and_empty() {
    let dir = tempfile::tempdir().unwrap();
    let store = dir.path().join("empty.jsonl");
    std::fs::write(&store, "").unwrap();
    let output = run_in(
        dir.path(),
        &["rag", "query", "anything", "--store", store.to_str().unwrap()],
    );
    assert_eq!(output.status.code(), Some(0));
    assert!(stdout(&output).trim().is_empty());
}

#[test]
fn chat_plain_and_agent_modes() {
    let root = repo_root();

    // plain: a scripted rule answers the classic question
    let output = run_with_stdin(&root, &["chat", "--model", "echo-calc"], "what is 2+2\n");
    assert_eq!(output.status.code(), Some(0));
    assert_eq!(stdout(&output).trim(), "4");

    // agent mode with the calculator tool
    let dir = tempfile::tempdir().unwrap();
    let trace_path = dir.path().join("trace.json");
    let output = run_with_stdin(
        &root,
        &[
            "chat",
            "--model",
            "react-calc",
            "--agent",
            "--tools",
            "calculator",
            "--trace",
            trace_path.to_str().unwrap(),
        ],
        "compute 2*(3+4)\n",
    );
    assert_eq!(output.status.code(), Some(0));
    assert_eq!(stdout(&output).trim(), "14");

    // the trace file is a valid AgentTrace with the expected shape
    let trace: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&trace_path).unwrap()).unwrap();
    assert_eq!(trace["outcome"]["final_answer"], "14");
    assert_eq!(trace["steps"][0]["action"]["tool"], "calculator");
    assert!(trace["usage"]["prompt_tokens"].as_u64().unwrap() > 0);

    // unknown tool exits 2
    let output = run_with_stdin(
        &root,
        &["chat", "--model", "react-calc", "--agent", "--tools", "nuke"],
        "",
    );
    assert_eq!(output.status.code(), Some(2));
}

#[test]
fn models_list_and_lab() {
    let output = run(&["models", "list"]);
    assert_eq!(output.status.code(), Some(0));
    let listing = stdout(&output);
    let ids: Vec<&str> = listing
        .lines()
        .map(|l| l.split_whitespace().next().unwrap())
        .collect();
    let mut sorted = ids.clone();
    sorted.sort();
    assert_eq!(ids, sorted, "models not sorted by id");
    assert!(listing.contains("local-ollama  http_chat"));

    let dir = tempfile::tempdir().unwrap();
    let prompt = dir.path().join("p.json");
    std::fs::write(&prompt, r#"{"instruction": "Say hi", "input_data": "2+2"}"#).unwrap();
    let output = run(&[
        "models",
        "lab",
        "--prompt-file",
        prompt.to_str().unwrap(),
        "--models",
        "echo-calc,deobf-oracle",
    ]);
    assert_eq!(output.status.code(), Some(0));
    assert_eq!(stdout(&output).lines().count(), 2);

    // prompt file without instruction exits 2
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"input_data": "x"}"#).unwrap();
    let output = run(&[
        "models",
        "lab",
        "--prompt-file",
        bad.to_str().unwrap(),
        "--models",
        "echo-calc",
    ]);
    assert_eq!(output.status.code(), Some(2));

    // missing prompt file exits 2
    let output = run(&[
        "models",
        "lab",
        "--prompt-file",
        "nope.json",
        "--models",
        "echo-calc",
    ]);
    assert_eq!(output.status.code(), Some(2));
}

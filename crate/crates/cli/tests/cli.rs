use std::path::PathBuf;
use std::process::{Command, Output};

use quasikg::gst::SteinerTree;

fn fixtures() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

fn quasikg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_quasikg"))
        .args(args)
        .env("RUST_LOG", "info")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", stdout(out)))
}

fn running_example(command: &str, extra: &[&str]) -> Output {
    let dir = fixtures().join("running_example");
    let question = std::fs::read_to_string(dir.join("question.txt")).unwrap();
    let graph = dir.join("graph.json");
    let config = dir.join("config.json");
    let mut args = vec![
        command,
        "--question",
        question.trim(),
        "--graph",
        graph.to_str().unwrap(),
        "--config",
        config.to_str().unwrap(),
    ];
    args.extend_from_slice(extra);
    quasikg(&args)
}

fn corpus() -> String {
    fixtures().join("corpus").to_str().unwrap().to_string()
}

fn benchmark(name: &str) -> String {
    fixtures().join(name).to_str().unwrap().to_string()
}

#[test]
fn answer_running_example() {
    let out = running_example("answer", &[]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v = json(&out);
    let top: Vec<&str> = v["answers"].as_array().unwrap()[..2]
        .iter()
        .map(|a| a["label"].as_str().unwrap())
        .collect();
    assert!(top.contains(&"Samuel Umtiti") && top.contains(&"Blaise Matuidi"), "{top:?}");
    let log = String::from_utf8_lossy(&out.stderr);
    assert!(log.contains("gst"), "{log}");
}

#[test]
fn answer_is_byte_identical_across_runs() {
    let a = running_example("answer", &["--seed", "7"]);
    let b = running_example("answer", &["--seed", "7"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let join = fixtures().join("corpus").join("join");
    let args = [
        "answer",
        "--question",
        "Who was born in Lyon, played for Juventus and won the Golden Cup?",
        "--corpus-root",
        join.to_str().unwrap(),
    ];
    let a = quasikg(&args);
    let b = quasikg(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(json(&a)["answers"][0]["label"], "Karim Alder");
}

#[test]
fn question_without_content_exits_two() {
    let out = quasikg(&[
        "answer",
        "--question",
        "Which of the?",
        "--corpus-root",
        &corpus(),
        "--question-id",
        "join",
    ]);
    assert_eq!(out.status.code(), Some(2));
    let v = json(&out);
    assert_eq!(v["error"], "NoCornerstones");
    assert_eq!(v["message"], "no cornerstones");
}

#[test]
fn missing_corpus_exits_one() {
    let out = quasikg(&["answer", "--question", "Who won?", "--corpus-root", "/nonexistent/corpus"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["error"], "NotFound");
}

#[test]
fn unknown_strategy_is_a_domain_error() {
    let out = running_example("answer", &["--strategy", "best"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(json(&out)["error"], "ConfigError");
}

#[test]
fn explain_dot_shows_answer_and_cornerstones() {
    let out = running_example("explain", &["--tree-rank", "1", "--format", "dot"]);
    assert!(out.status.success());
    let dot = stdout(&out);
    assert!(dot.starts_with("graph quasikg {"));
    assert!(dot.contains("Samuel Umtiti") || dot.contains("Blaise Matuidi"), "{dot}");
    assert!(dot.matches("penwidth=3").count() >= 2, "{dot}");
}

#[test]
fn explain_json_round_trips() {
    let out = running_example("explain", &["--tree-rank", "2", "--format", "json"]);
    assert!(out.status.success());
    let tree: SteinerTree<f64> = serde_json::from_slice(&out.stdout).unwrap();
    let v = json(&out);
    assert_eq!(v["cost"].as_f64().unwrap(), tree.cost);
    let edge_sum: f64 = v["edge_details"].as_array().unwrap().iter().map(|e| e["cost"].as_f64().unwrap()).sum();
    assert!((edge_sum - tree.cost).abs() < 1e-12);
}

#[test]
fn explain_rank_out_of_range() {
    let out = running_example("explain", &["--tree-rank", "999"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(json(&out)["error"], "InvalidInput");
}

#[test]
fn eval_reports_metrics_and_stages() {
    let out = quasikg(&["eval", "--benchmark", &benchmark("benchmark.json"), "--corpus-root", &corpus(), "--jobs", "2"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v = json(&out);
    assert_eq!(v["metrics"]["mrr"], 1.0);
    assert_eq!(v["stages"]["Answered"], 2);
    assert_eq!(v["questions"][0]["id"], "join");

    let out = quasikg(&["eval", "--benchmark", &benchmark("benchmark_absent.json"), "--corpus-root", &corpus()]);
    let v = json(&out);
    assert_eq!(v["stages"]["AnswerNotInCorpus"], 1);
    assert_eq!(v["metrics"]["mrr"], 0.0);
}

#[test]
fn eval_with_baselines_keeps_the_report_shape() {
    for solver in ["bfs", "shortest-paths"] {
        let out = quasikg(&[
            "eval",
            "--benchmark",
            &benchmark("benchmark.json"),
            "--corpus-root",
            &corpus(),
            "--solver",
            solver,
        ]);
        assert!(out.status.success());
        let v = json(&out);
        for key in ["metrics", "stages", "document_stats", "questions"] {
            assert!(v.get(key).is_some(), "{solver}: {key}");
        }
    }
}

#[test]
fn eval_table_format() {
    let out = quasikg(&[
        "eval",
        "--benchmark",
        &benchmark("benchmark.json"),
        "--corpus-root",
        &corpus(),
        "--format",
        "table",
    ]);
    let table = stdout(&out);
    assert!(table.contains("MRR") && table.contains("AnswerNotInCorpus"), "{table}");
}

#[test]
fn missing_corpus_dir_is_recorded_per_question() {
    let dir = tempfile::tempdir().unwrap();
    let bench = dir.path().join("bench.json");
    std::fs::write(
        &bench,
        r#"{"questions": [
            {"id": "join", "text": "Who was born in Lyon, played for Juventus and won the Golden Cup?", "gold": [["Karim Alder"]]},
            {"id": "nowhere", "text": "Who won?", "gold": [["Nobody"]]}
        ]}"#,
    )
    .unwrap();
    let out = quasikg(&["eval", "--benchmark", bench.to_str().unwrap(), "--corpus-root", &corpus()]);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["metrics"]["mrr"], 0.5);
    assert!(v["questions"][1]["error"].as_str().unwrap().starts_with("NotFound"));
}

#[test]
fn sweep_rows_and_thresholds() {
    let run = |param: &str, values: &str, bench: &str| {
        let out = quasikg(&[
            "sweep",
            "--benchmark",
            bench,
            "--corpus-root",
            &corpus(),
            "--param",
            param,
            "--values",
            values,
        ]);
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
        stdout(&out)
    };
    let csv = run("k", "10,50", &benchmark("benchmark.json"));
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "value,mrr@1,mrr@3,mrr@5");
    assert_eq!(lines.len(), 3);

    let dir = tempfile::tempdir().unwrap();
    let align = dir.path().join("align.json");
    std::fs::write(
        &align,
        r#"{"questions": [{"id": "align", "text": "Who played for Juventus and lifted the Golden Cup?", "gold": [["Karim Alder"]]}]}"#,
    )
    .unwrap();
    let align = align.to_str().unwrap();
    let mrr = |csv: &str| -> Vec<f64> {
        csv.lines().skip(1).map(|l| l.split(',').nth(3).unwrap().parse().unwrap()).collect()
    };
    let at = mrr(&run("alignment-threshold", "0.0,1.0", align));
    assert_eq!(at, [1.0, 0.0]);
    let cs = mrr(&run("cornerstone-thresholds", "0.5,1.0", align));
    assert_eq!(cs, [1.0, 0.0]);
}

#[test]
fn sweep_rejects_unknown_parameter() {
    let out = quasikg(&[
        "sweep",
        "--benchmark",
        &benchmark("benchmark.json"),
        "--corpus-root",
        &corpus(),
        "--param",
        "colour",
        "--values",
        "1",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(json(&out)["error"], "ConfigError");
}

#[test]
fn annotate_round_trips_through_the_loader() {
    let dir = tempfile::tempdir().unwrap();
    let text = dir.path().join("doc.txt");
    std::fs::write(&text, "Samuel Umtiti played for Barcelona. He was born in Yaounde.").unwrap();
    let docs = dir.path().join("q");
    std::fs::create_dir(&docs).unwrap();
    let out_path = docs.join("doc.json");
    let out = quasikg(&[
        "annotate",
        text.to_str().unwrap(),
        "--doc-id",
        "bio",
        "--rank",
        "3",
        "--output",
        out_path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let set = quasikg::corpus::load_directory("q", &docs).unwrap();
    assert_eq!(set.documents[0].doc_id, "bio");
    assert_eq!(set.documents[0].rank, Some(3));
    assert_eq!(set.documents[0].sentences.len(), 2);
}

#[test]
fn graph_command_emits_dot_and_json() {
    let join = fixtures().join("corpus").join("join");
    let out = quasikg(&["graph", "--corpus-root", join.to_str().unwrap(), "--format", "dot"]);
    assert!(stdout(&out).contains("\"Karim Alder\""));
    let out = quasikg(&["graph", "--corpus-root", &corpus(), "--question-id", "join"]);
    let file: quasikg::graph::GraphFile = serde_json::from_slice(&out.stdout).unwrap();
    assert!(file.nodes.iter().any(|n| n.label == "Golden Cup"));
}

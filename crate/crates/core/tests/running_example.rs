use std::path::PathBuf;

use quasikg::graph::{read_graph_json, NodeKind};
use quasikg::pipeline::{load_config, Pipeline};
use quasikg::Graph;

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures/running_example").join(name)
}

fn run() -> (Pipeline, Graph, String) {
    let cfg = load_config(&fixture("config.json")).unwrap();
    let pipeline = Pipeline::new(cfg).unwrap();
    let graph: Graph = read_graph_json(&fixture("graph.json")).unwrap();
    let question = std::fs::read_to_string(fixture("question.txt")).unwrap();
    (pipeline, graph, question.trim().to_string())
}

#[test]
fn both_answers_in_top_two() {
    let (pipeline, graph, question) = run();
    let out = pipeline.answer_on_graph(&question, graph).unwrap();
    let top: Vec<String> = out.labels().into_iter().take(2).collect();
    assert!(top.contains(&"Samuel Umtiti".to_string()), "{top:?}");
    assert!(top.contains(&"Blaise Matuidi".to_string()), "{top:?}");
    assert_eq!(out.graph.count_nodes(NodeKind::Type), 3);
}

#[test]
fn cornerstones_follow_the_question_terms() {
    let (pipeline, graph, question) = run();
    let out = pipeline.answer_on_graph(&question, graph).unwrap();
    let groups = &out.cornerstones.groups;
    assert_eq!(
        groups.labels(),
        ["footballers", "African descent", "played", "FIFA 2018 final", "Euro 2016 final"]
    );
    let labels = |i: usize| -> Vec<&str> { groups.groups()[i].iter().map(|&n| out.graph.node(n).label.as_str()).collect() };
    assert_eq!(labels(3), ["2018 FIFA WC Final", "Russia 2018 Final"]);
    assert!(labels(1).contains(&"Angolan descent") && labels(1).contains(&"born"));
    assert_eq!(out.question.expected_type.as_deref(), Some("footballers"));
}

#[test]
fn every_answer_traces_to_a_tree() {
    let (pipeline, graph, question) = run();
    let out = pipeline.answer_on_graph(&question, graph).unwrap();
    assert!(!out.answers.is_empty());
    for a in &out.answers {
        assert!(!a.supports.is_empty());
        for s in &a.supports {
            let tree = &out.trees[s.tree - 1];
            assert!(a.members.iter().any(|&m| tree.contains(m)));
            assert!(a.members.iter().all(|&m| !out.cornerstones.groups.is_terminal(m)));
        }
    }
    for t in &out.trees {
        t.validate(&out.graph, &out.cornerstones.groups).unwrap();
    }
}

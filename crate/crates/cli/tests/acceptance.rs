//! One PASS/FAIL line per acceptance criterion. Exits nonzero on any FAIL.

#[path = "../../core/tests/common/mod.rs"]
mod common;

use std::collections::{BTreeMap, BTreeSet};
use std::path::PathBuf;
use std::process::{Command, ExitCode};
use std::time::Instant;

use petgraph::algo::dijkstra;
use petgraph::graph::{NodeIndex, UnGraph};
use quasikg::corpus::{fallback_annotate, load_corpus, AnnotatedDocument, Token};
use quasikg::evaluation::{compute_metrics, Benchmark, BenchmarkEntry};
use quasikg::extraction::{compute_pair_score, extract_triples, extract_types, HearstPattern};
use quasikg::graph::{read_graph_json, AblationFlags, EdgeKind, GraphFile, NodeId, NodeKind, QuasiGraph};
use quasikg::gst::{brute_force_gst, solve_gst_k, SolverConfig, TerminalGroups};
use quasikg::pipeline::{load_config, Pipeline, PipelineConfig};
use quasikg::{Graph, Rational};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = Result<String, String>;

fn fixtures() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn gst_exactness() -> Check {
    let start = Instant::now();
    let mut nontrivial = 0;
    for seed in 0..200 {
        let (g, groups) = common::instance(seed, 12, 4);
        let trees = solve_gst_k(&g, &groups, &SolverConfig::with_k(1)).map_err(|e| e.to_string())?;
        let best = brute_force_gst(&g, &groups).map_err(|e| e.to_string())?;
        ensure(trees.first().map(|t| t.cost) == best.as_ref().map(|t| t.cost), || {
            format!("seed {seed}: solver {:?} oracle {:?}", trees.first().map(|t| t.cost), best.map(|t| t.cost))
        })?;
        if let Some(t) = trees.first() {
            t.validate(&g, &groups).map_err(|e| format!("seed {seed}: {e}"))?;
            nontrivial += usize::from(!t.edges.is_empty());
        }
        let ex = common::exact(&g);
        let exact_trees = solve_gst_k(&ex, &groups, &SolverConfig::with_k(1)).map_err(|e| e.to_string())?;
        let exact_best = brute_force_gst(&ex, &groups).map_err(|e| e.to_string())?;
        ensure(exact_trees.first().map(|t| t.cost) == exact_best.map(|t| t.cost), || {
            format!("seed {seed}: rational costs disagree")
        })?;
    }
    let took = start.elapsed().as_secs_f64();
    ensure(took < 30.0, || format!("took {took:.1} s"))?;
    Ok(format!("200/200 equal to the oracle ({nontrivial} with edges), {took:.2} s"))
}

fn top_k_contract() -> Check {
    let mut total = 0;
    for seed in 0..200 {
        let (g, groups) = common::instance(seed, 12, 4);
        let trees = solve_gst_k(&g, &groups, &SolverConfig::with_k(10)).map_err(|e| e.to_string())?;
        if let Some(breach) = common::top_k_breach(&g, &groups, &trees) {
            return Err(format!("seed {seed}: {breach}"));
        }
        total += trees.len();
    }
    Ok(format!("200/200 instances, {total} trees sorted, distinct and valid"))
}

fn reference_distance(g: &Graph, s: usize, t: usize) -> Option<f64> {
    let mut pg: UnGraph<(), f64> = UnGraph::new_undirected();
    let ids: Vec<NodeIndex> = (0..g.node_count()).map(|_| pg.add_node(())).collect();
    for e in g.edges() {
        pg.add_edge(ids[e.a.0], ids[e.b.0], e.cost);
    }
    dijkstra(&pg, ids[s], Some(ids[t]), |e| *e.weight()).get(&ids[t]).copied()
}

fn shortest_path_reduction() -> Check {
    let mut connected = 0;
    for seed in 0..100 {
        let (g, groups) = common::two_terminal_instance(seed, 12);
        let (s, t) = (groups.groups()[0][0].0, groups.groups()[1][0].0);
        let trees = solve_gst_k(&g, &groups, &SolverConfig::with_k(1)).map_err(|e| e.to_string())?;
        let want = reference_distance(&g, s, t);
        ensure(trees.first().map(|t| t.cost) == want, || {
            format!("seed {seed}: solver {:?} dijkstra {want:?}", trees.first().map(|t| t.cost))
        })?;
        connected += usize::from(want.is_some());
    }
    Ok(format!("100/100 equal to Dijkstra ({connected} connected)"))
}

fn running_example() -> Check {
    let dir = fixtures().join("running_example");
    let cfg = load_config(&dir.join("config.json")).map_err(|e| e.to_string())?;
    let pipeline = Pipeline::new(cfg).map_err(|e| e.to_string())?;
    let graph: Graph = read_graph_json(&dir.join("graph.json")).map_err(|e| e.to_string())?;
    let question = std::fs::read_to_string(dir.join("question.txt")).map_err(|e| e.to_string())?;
    let run = pipeline.answer_on_graph(question.trim(), graph).map_err(|e| e.to_string())?;
    let top: Vec<String> = run.labels().into_iter().take(2).collect();
    ensure(top.iter().any(|l| l == "Samuel Umtiti") && top.iter().any(|l| l == "Blaise Matuidi"), || {
        format!("top two are {top:?}")
    })?;
    Ok(format!("top two {top:?}"))
}

fn tok(text: &str, pos: &str, ne: Option<&str>) -> Token {
    Token::new(text, pos, ne)
}

fn extraction_fidelity() -> Check {
    let p = Some("PERSON");
    let o = Some("ORGANIZATION");
    let words = [
        ("Samuel", "NNP", p),
        ("Yves", "NNP", p),
        ("Umtiti", "NNP", p),
        ("is", "VBZ", None),
        ("a", "DT", None),
        ("French", "JJ", None),
        ("professional", "JJ", None),
        ("footballer", "NN", None),
        ("who", "WP", None),
        ("plays", "VBZ", None),
        ("as", "IN", None),
        ("a", "DT", None),
        ("centre-back", "NN", None),
        ("for", "IN", None),
        ("Spanish", "JJ", None),
        ("club", "NN", None),
        ("Barcelona", "NNP", o),
        ("and", "CC", None),
        ("the", "DT", None),
        ("French", "NNP", o),
        ("National", "NNP", o),
        ("Team", "NNP", o),
        (".", ".", None),
    ];
    let sentence: Vec<Token> = words.iter().map(|&(w, pos, ne)| tok(w, pos, ne)).collect();
    let mentions = vec![
        quasikg::corpus::EntityMention { sentence: 0, start: 0, end: 3, surface: "Samuel Umtiti".into() },
        quasikg::corpus::EntityMention { sentence: 0, start: 16, end: 17, surface: "Barcelona".into() },
        quasikg::corpus::EntityMention { sentence: 0, start: 19, end: 22, surface: "French National Team".into() },
    ];
    let doc = AnnotatedDocument::with_mentions("umtiti", Some(1), vec![sentence], mentions).map_err(|e| e.to_string())?;
    let triples = extract_triples(&doc);
    let found: BTreeSet<(&str, &str, &str)> = triples.iter().map(|t| (t.s.as_str(), t.p.as_str(), t.o.as_str())).collect();
    for want in [
        ("Samuel Umtiti", "centre-back for", "Spanish club Barcelona"),
        ("Samuel Umtiti", "centre-back for", "French National Team"),
        ("French professional footballer", "plays as", "Spanish club Barcelona"),
    ] {
        ensure(found.contains(&want), || format!("missing {want:?} in {found:?}"))?;
    }
    let types: BTreeSet<(String, String)> = extract_types(&fallback_annotate("footballers such as Umtiti, Matuidi and Pogba"))
        .into_iter()
        .filter(|a| a.pattern == HearstPattern::SuchAs)
        .map(|a| (a.entity, a.type_phrase))
        .collect();
    let want: BTreeSet<(String, String)> = ["Umtiti", "Matuidi", "Pogba"]
        .iter()
        .map(|e| (e.to_string(), "footballers".to_string()))
        .collect();
    ensure(types == want, || format!("type assertions {types:?}"))?;
    Ok(format!("{} triples including the three expected, 3 type assertions", triples.len()))
}

fn proximity_scoring() -> Check {
    let score: f64 = compute_pair_score(&[1, 3]).map_err(|e| e.to_string())?;
    ensure(score == 0.75, || format!("[1, 3] scored {score}"))?;
    let exact: Rational = compute_pair_score(&[1, 3]).map_err(|e| e.to_string())?;
    ensure(exact == Rational::new(3, 4), || format!("rational {exact}"))?;
    let per = Some("PERSON");
    let sentence = vec![
        tok("Matuidi", "NNP", per),
        tok("later", "RB", None),
        tok("also", "RB", None),
        tok("featured", "VBD", None),
        tok("in", "IN", None),
        tok("Final", "NNP", Some("EVENT")),
    ];
    let triples = extract_triples(&AnnotatedDocument::new("gap", None, vec![sentence]));
    let t = triples
        .iter()
        .find(|t| t.p == "featured in")
        .ok_or_else(|| format!("no featured-in triple in {triples:?}"))?;
    ensure(t.sp_score != t.po_score, || format!("S-P {} equals P-O {}", t.sp_score, t.po_score))?;
    Ok(format!("[1, 3] -> {score}; S-P {:.4} vs P-O {:.4}", t.sp_score, t.po_score))
}

fn metrics() -> Check {
    let entry = |id: &str| BenchmarkEntry {
        id: id.into(),
        text: "?".into(),
        gold: vec![vec!["gold".into()]],
    };
    let bench = Benchmark {
        questions: vec![entry("a"), entry("b"), entry("c")],
    };
    let list = |gold_at: Option<usize>| -> Vec<String> {
        (1..=6)
            .map(|r| if Some(r) == gold_at { "Gold".to_string() } else { format!("other {r}") })
            .collect()
    };
    let results: BTreeMap<String, Vec<String>> =
        [("a", list(Some(1))), ("b", list(Some(2))), ("c", list(None))].into_iter().map(|(k, v)| (k.into(), v)).collect();
    let m = compute_metrics(&results, &bench).map_err(|e| e.to_string())?;
    let want = ((1.0 + 0.5 + 0.0) / 3.0, 1.0 / 3.0, 2.0 / 3.0);
    ensure((m.mrr, m.p_at_1, m.hit_at_5) == want, || format!("got {:?}", (m.mrr, m.p_at_1, m.hit_at_5)))?;
    let results: BTreeMap<String, Vec<String>> =
        [("a", list(Some(6))), ("b", list(Some(5))), ("c", list(Some(3)))].into_iter().map(|(k, v)| (k.into(), v)).collect();
    let m = compute_metrics(&results, &bench).map_err(|e| e.to_string())?;
    let want = ((1.0 / 6.0 + 1.0 / 5.0 + 1.0 / 3.0) / 3.0, 0.0, 2.0 / 3.0);
    ensure((m.mrr, m.p_at_1, m.hit_at_5) == want, || format!("got {:?}", (m.mrr, m.p_at_1, m.hit_at_5)))?;
    Ok("ranks {1, 2, absent}: MRR 0.5, P@1 1/3, Hit@5 2/3".into())
}

fn multi_document_join() -> Check {
    const QUESTION: &str = "Who was born in Lyon, played for Juventus and won the Golden Cup?";
    let docs = load_corpus("join", &fixtures().join("corpus")).map_err(|e| e.to_string())?;
    let pipeline = Pipeline::new(PipelineConfig::default()).map_err(|e| e.to_string())?;
    for d in &docs.documents {
        let text: Vec<&str> = d.sentences.iter().flatten().map(|t| t.text.as_str()).collect();
        let held = ["Lyon", "Juventus", "Cup"].iter().filter(|w| text.contains(w)).count();
        ensure(held < 3, || format!("{} holds every condition", d.doc_id))?;
    }
    let labels = pipeline.answer(QUESTION, &docs).map_err(|e| e.to_string())?.labels();
    ensure(labels.first().map(String::as_str) == Some("Karim Alder"), || format!("ranking {labels:?}"))?;
    let mut after = Vec::new();
    for d in &docs.documents {
        let labels = pipeline.answer(QUESTION, &docs.without(&d.doc_id)).map_err(|e| e.to_string())?.labels();
        let rank = labels.iter().position(|l| l == "Karim Alder").map(|r| r + 1);
        ensure(rank != Some(1), || format!("without {} still first: {labels:?}", d.doc_id))?;
        after.push(format!("-{}: {}", d.doc_id, rank.map_or("absent".into(), |r| format!("rank {r}"))));
    }
    Ok(format!("rank 1 with all three; {}", after.join(", ")))
}

fn ablation_determinism() -> Check {
    let path = fixtures().join("running_example").join("graph.json");
    let text = std::fs::read_to_string(&path).map_err(|e| e.to_string())?;
    let file: GraphFile = serde_json::from_str(&text).map_err(|e| e.to_string())?;
    let count_nodes = |k: NodeKind| file.nodes.iter().filter(|n| n.kind == k).count();
    let count_edges = |k: EdgeKind| file.edges.iter().filter(|e| e.kind == k).count();
    let g: Graph = QuasiGraph::from_file(&file).map_err(|e| e.to_string())?;
    let (n, m) = (file.nodes.len(), file.edges.len());

    let types = g.ablate(&AblationFlags { drop_types: true, ..Default::default() });
    ensure(
        types.node_count() == n - count_nodes(NodeKind::Type) && types.edge_count() == m - count_edges(EdgeKind::TypeEdge),
        || format!("drop_types left {} nodes, {} edges", types.node_count(), types.edge_count()),
    )?;
    let ent = g.ablate(&AblationFlags { drop_entity_align: true, ..Default::default() });
    ensure(ent.node_count() == n && ent.edge_count() == m - count_edges(EdgeKind::EntityAlign), || {
        format!("drop_entity_align left {} edges", ent.edge_count())
    })?;
    let rel = g.ablate(&AblationFlags { drop_relation_align: true, ..Default::default() });
    ensure(rel.node_count() == n && rel.edge_count() == m - count_edges(EdgeKind::RelationAlign), || {
        format!("drop_relation_align left {} edges", rel.edge_count())
    })?;
    let flat = g.ablate(&AblationFlags { degenerate_edge_weights: true, ..Default::default() });
    ensure(flat.edges().iter().all(|e| e.cost == 0.5), || "a degenerate cost differs from 0.5".into())?;
    ensure(g.ablate(&AblationFlags::default()) == g, || "no-op ablation changed the graph".into())?;
    ensure(types == g.ablate(&AblationFlags { drop_types: true, ..Default::default() }), || "ablation is not repeatable".into())?;
    Ok(format!(
        "-{} type nodes/-{} type edges, -{} entity and -{} relation alignments, all costs 0.5",
        count_nodes(NodeKind::Type),
        count_edges(EdgeKind::TypeEdge),
        count_edges(EdgeKind::EntityAlign),
        count_edges(EdgeKind::RelationAlign)
    ))
}

fn performance() -> Check {
    let (n, m) = (1000, 15_000);
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut g: Graph = QuasiGraph::new();
    for i in 0..n {
        g.add_node(&format!("e{i}"), NodeKind::Entity).map_err(|e| e.to_string())?;
    }
    for i in 1..n {
        let j = rng.random_range(0..i);
        g.add_edge(NodeId(i), NodeId(j), EdgeKind::EntityAlign, rng.random::<f64>()).map_err(|e| e.to_string())?;
    }
    while g.edge_count() < m {
        let (a, b) = (rng.random_range(0..n), rng.random_range(0..n));
        if a != b {
            g.add_edge(NodeId(a), NodeId(b), EdgeKind::EntityAlign, rng.random::<f64>()).map_err(|e| e.to_string())?;
        }
    }
    let groups: Vec<Vec<NodeId>> = (0..4).map(|_| (0..10).map(|_| NodeId(rng.random_range(0..n))).collect()).collect();
    let groups = TerminalGroups::new(groups).map_err(|e| e.to_string())?;
    let start = Instant::now();
    let trees = solve_gst_k(&g, &groups, &SolverConfig::with_k(50)).map_err(|e| e.to_string())?;
    let took = start.elapsed().as_secs_f64();
    ensure(trees.len() == 50, || format!("{} trees", trees.len()))?;
    if let Some(breach) = common::top_k_breach(&g, &groups, &trees) {
        return Err(breach);
    }
    ensure(took < 10.0, || format!("took {took:.2} s"))?;
    Ok(format!("GST-50 on {n} nodes / {m} edges / 4x10 terminals in {took:.2} s"))
}

fn determinism() -> Check {
    let dir = fixtures().join("running_example");
    let question = std::fs::read_to_string(dir.join("question.txt")).map_err(|e| e.to_string())?;
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_quasikg"))
            .arg("answer")
            .args(["--question", question.trim()])
            .arg("--graph")
            .arg(dir.join("graph.json"))
            .arg("--config")
            .arg(dir.join("config.json"))
            .args(["--seed", "11"])
            .output()
            .map_err(|e| e.to_string())
    };
    let corpus_run = || {
        Command::new(env!("CARGO_BIN_EXE_quasikg"))
            .arg("answer")
            .args(["--question", "Who was born in Lyon, played for Juventus and won the Golden Cup?"])
            .arg("--corpus-root")
            .arg(fixtures().join("corpus"))
            .args(["--question-id", "join", "--seed", "11"])
            .output()
            .map_err(|e| e.to_string())
    };
    let (a, b) = (run()?, run()?);
    ensure(a.status.success() && b.status.success(), || "answer failed".into())?;
    ensure(a.stdout == b.stdout, || "graph runs differ".into())?;
    let (c, d) = (corpus_run()?, corpus_run()?);
    ensure(c.status.success() && c.stdout == d.stdout, || "corpus runs differ".into())?;
    Ok(format!("{} and {} identical bytes", a.stdout.len(), c.stdout.len()))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Check); 11] = [
        ("gst exactness", gst_exactness),
        ("top-k contract", top_k_contract),
        ("shortest-path reduction", shortest_path_reduction),
        ("running example", running_example),
        ("extraction fidelity", extraction_fidelity),
        ("proximity scoring", proximity_scoring),
        ("metrics", metrics),
        ("multi-document join", multi_document_join),
        ("ablation determinism", ablation_determinism),
        ("performance envelope", performance),
        ("determinism", determinism),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("PASS {:>2} {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {detail}", i + 1);
            }
        }
    }
    println!("{}/{} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

//! Benchmarks with gold aliases, MRR / P@1 / Hit@5, failure diagnosis by
//! pipeline stage, and per-rank document statistics of the trees.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::answering::Candidate;
use crate::corpus::DocumentSet;
use crate::error::{Error, Result};
use crate::graph::{NodeKind, QuasiGraph};
use crate::gst::SteinerTree;
use crate::scalar::Scalar;
use crate::text::{normalize, tokens};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BenchmarkEntry {
    pub id: String,
    pub text: String,
    /// One alias set per distinct correct answer.
    pub gold: Vec<Vec<String>>,
}

impl BenchmarkEntry {
    /// True when `label` equals any alias of any gold answer after
    /// normalization.
    pub fn is_correct(&self, label: &str) -> bool {
        let label = normalize(label);
        self.aliases().any(|a| normalize(a) == label)
    }

    pub fn aliases(&self) -> impl Iterator<Item = &str> {
        self.gold.iter().flatten().map(String::as_str)
    }

    /// 1-based rank of the first correct label.
    pub fn first_correct(&self, ranked: &[impl AsRef<str>]) -> Option<usize> {
        ranked.iter().position(|l| self.is_correct(l.as_ref())).map(|i| i + 1)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Benchmark {
    pub questions: Vec<BenchmarkEntry>,
}

impl Benchmark {
    pub fn from_json_str(origin: &str, json: &str) -> Result<Self> {
        let bench: Benchmark = serde_json::from_str(json)
            .map_err(|e| Error::parse(origin, format!("line {} column {}", e.line(), e.column()), e.to_string()))?;
        let mut ids = BTreeSet::new();
        for q in &bench.questions {
            let bad = |m: &str| Err(Error::parse(origin, format!("question {}", q.id), m));
            if !ids.insert(q.id.as_str()) {
                return bad("duplicate question id");
            }
            if q.gold.is_empty() || q.gold.iter().any(Vec::is_empty) {
                return bad("every question needs at least one gold answer with an alias");
            }
            if q.aliases().any(|a| normalize(a).is_empty()) {
                return bad("empty gold alias");
            }
        }
        Ok(bench)
    }

    pub fn get(&self, id: &str) -> Option<&BenchmarkEntry> {
        self.questions.iter().find(|q| q.id == id)
    }
}

pub fn load_benchmark(path: &Path) -> Result<Benchmark> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    Benchmark::from_json_str(&path.display().to_string(), &text)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuestionScore {
    pub id: String,
    /// Rank of the first correct answer.
    pub rank: Option<usize>,
    pub reciprocal_rank: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Metrics {
    pub mrr: f64,
    pub p_at_1: f64,
    pub hit_at_5: f64,
    /// In benchmark order.
    pub per_question: Vec<QuestionScore>,
}

impl Metrics {
    /// MRR counting only correct answers within the top `k`.
    pub fn mrr_at(&self, k: usize) -> f64 {
        mean(self.per_question.iter().map(|q| match q.rank {
            Some(r) if r <= k => 1.0 / r as f64,
            _ => 0.0,
        }))
    }
}

fn mean(values: impl ExactSizeIterator<Item = f64>) -> f64 {
    let n = values.len();
    if n == 0 {
        0.0
    } else {
        values.sum::<f64>() / n as f64
    }
}

/// Scores ranked answer labels per question id against the benchmark.
/// Benchmark questions without results count as unanswered; averages run
/// over the whole benchmark.
pub fn compute_metrics(results: &BTreeMap<String, Vec<String>>, bench: &Benchmark) -> Result<Metrics> {
    if let Some(id) = results.keys().find(|id| bench.get(id).is_none()) {
        return Err(Error::Config(format!("question {id} is not in the benchmark")));
    }
    let per_question: Vec<QuestionScore> = bench
        .questions
        .iter()
        .map(|q| {
            let rank = results.get(&q.id).and_then(|ranked| q.first_correct(ranked));
            QuestionScore {
                id: q.id.clone(),
                rank,
                reciprocal_rank: rank.map_or(0.0, |r| 1.0 / r as f64),
            }
        })
        .collect();
    let hit = |k: usize| mean(per_question.iter().map(|q| f64::from(q.rank.is_some_and(|r| r <= k))));
    Ok(Metrics {
        mrr: mean(per_question.iter().map(|q| q.reciprocal_rank)),
        p_at_1: hit(1),
        hit_at_5: hit(5),
        per_question,
    })
}

/// The first pipeline stage at which a gold answer was lost.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum ErrorStage {
    AnswerNotInCorpus,
    InCorpusNotInGraph,
    InGraphNotInTopKTrees,
    InTreesNotInCandidates,
    InCandidatesNotInTop5,
    Answered,
}

impl ErrorStage {
    pub const ALL: [ErrorStage; 6] = [
        ErrorStage::AnswerNotInCorpus,
        ErrorStage::InCorpusNotInGraph,
        ErrorStage::InGraphNotInTopKTrees,
        ErrorStage::InTreesNotInCandidates,
        ErrorStage::InCandidatesNotInTop5,
        ErrorStage::Answered,
    ];
}

/// Everything one question produced on its way through the pipeline.
pub struct Artifacts<'a, S> {
    pub documents: &'a DocumentSet,
    pub graph: &'a QuasiGraph<S>,
    pub trees: &'a [SteinerTree<S>],
    pub candidates: &'a [Candidate],
    /// Answer labels in rank order.
    pub ranked: &'a [String],
}

fn contains_run(haystack: &[String], needle: &[String]) -> bool {
    !needle.is_empty() && haystack.windows(needle.len()).any(|w| w == needle)
}

/// Checks, in order: an alias occurs as a token run in some document
/// sentence; an entity node carries an alias; such a node is in a tree (or
/// among its one-hop additions); it is a candidate; it is ranked within the
/// top five.
pub fn diagnose_failure<S: Scalar>(art: &Artifacts<'_, S>, gold: &BenchmarkEntry) -> ErrorStage {
    if gold.first_correct(art.ranked).is_some_and(|r| r <= 5) {
        return ErrorStage::Answered;
    }
    let alias_tokens: Vec<Vec<String>> = gold.aliases().map(tokens).collect();
    let in_corpus = art.documents.documents.iter().any(|d| {
        d.sentences.iter().any(|s| {
            let words: Vec<String> = s.iter().flat_map(|t| tokens(&t.text)).collect();
            alias_tokens.iter().any(|a| contains_run(&words, a))
        })
    });
    if !in_corpus {
        return ErrorStage::AnswerNotInCorpus;
    }
    let nodes: BTreeSet<_> = art
        .graph
        .nodes()
        .iter()
        .filter(|n| n.kind == NodeKind::Entity && gold.is_correct(&n.label))
        .map(|n| n.id)
        .collect();
    if nodes.is_empty() {
        return ErrorStage::InCorpusNotInGraph;
    }
    let in_trees = art
        .trees
        .iter()
        .any(|t| t.nodes.iter().chain(t.hops.iter().map(|(n, _)| n)).any(|n| nodes.contains(n)));
    if !in_trees {
        return ErrorStage::InGraphNotInTopKTrees;
    }
    if !art.candidates.iter().any(|c| nodes.contains(&c.node)) {
        return ErrorStage::InTreesNotInCandidates;
    }
    ErrorStage::InCandidatesNotInTop5
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankBin {
    /// 1-based, inclusive.
    pub first_rank: usize,
    pub last_rank: usize,
    pub trees: usize,
    /// Mean number of distinct documents contributing edges per tree.
    pub mean_docs: f64,
}

/// Document statistics over trees, accumulated over any number of
/// questions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DocumentStats {
    pub bin_width: usize,
    pub bins: Vec<RankBin>,
    /// Number of trees per distinct-document count.
    pub histogram: BTreeMap<usize, usize>,
}

impl DocumentStats {
    pub fn new(bin_width: usize) -> Self {
        DocumentStats {
            bin_width: bin_width.max(1),
            bins: Vec::new(),
            histogram: BTreeMap::new(),
        }
    }

    /// Adds one question's trees, in rank order.
    pub fn add<S>(&mut self, trees: &[SteinerTree<S>]) {
        for (i, tree) in trees.iter().enumerate() {
            let b = i / self.bin_width;
            while self.bins.len() <= b {
                let first = self.bins.len() * self.bin_width + 1;
                self.bins.push(RankBin {
                    first_rank: first,
                    last_rank: first + self.bin_width - 1,
                    trees: 0,
                    mean_docs: 0.0,
                });
            }
            let n = tree.docs.len();
            let bin = &mut self.bins[b];
            bin.mean_docs = (bin.mean_docs * bin.trees as f64 + n as f64) / (bin.trees + 1) as f64;
            bin.trees += 1;
            *self.histogram.entry(n).or_insert(0) += 1;
        }
    }

    pub fn merge(&mut self, other: &DocumentStats) {
        assert_eq!(self.bin_width, other.bin_width, "bin widths differ");
        for (i, ob) in other.bins.iter().enumerate() {
            if self.bins.len() <= i {
                self.bins.push(RankBin {
                    trees: 0,
                    mean_docs: 0.0,
                    ..ob.clone()
                });
            }
            let b = &mut self.bins[i];
            let total = b.trees + ob.trees;
            if total > 0 {
                b.mean_docs = (b.mean_docs * b.trees as f64 + ob.mean_docs * ob.trees as f64) / total as f64;
            }
            b.trees = total;
        }
        for (&k, &v) in &other.histogram {
            *self.histogram.entry(k).or_insert(0) += v;
        }
    }
}

/// Rank bins of width ten over one list of trees.
pub fn gst_document_stats<S>(trees: &[SteinerTree<S>]) -> DocumentStats {
    let mut stats = DocumentStats::new(10);
    stats.add(trees);
    stats
}

/// Outcome of one benchmark question.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuestionReport {
    pub id: String,
    pub answers: Vec<String>,
    pub rank: Option<usize>,
    pub stage: Option<ErrorStage>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub metrics: Metrics,
    pub stages: BTreeMap<ErrorStage, usize>,
    pub document_stats: DocumentStats,
    pub questions: Vec<QuestionReport>,
}

impl EvalReport {
    pub fn to_table(&self) -> String {
        let mut out = String::new();
        let m = &self.metrics;
        let _ = writeln!(out, "{:<10} {:>8}", "metric", "value");
        for (name, v) in [("MRR", m.mrr), ("P@1", m.p_at_1), ("Hit@5", m.hit_at_5)] {
            let _ = writeln!(out, "{name:<10} {v:>8.4}");
        }
        let _ = writeln!(out);
        let _ = writeln!(out, "{:<24} {:>6}", "stage", "count");
        for stage in ErrorStage::ALL {
            let n = self.stages.get(&stage).copied().unwrap_or(0);
            let _ = writeln!(out, "{:<24} {n:>6}", format!("{stage:?}"));
        }
        let _ = writeln!(out);
        let _ = writeln!(out, "{:<10} {:>6} {:>10}", "ranks", "trees", "mean docs");
        for b in &self.document_stats.bins {
            let _ = writeln!(
                out,
                "{:<10} {:>6} {:>10.2}",
                format!("{}-{}", b.first_rank, b.last_rank),
                b.trees,
                b.mean_docs
            );
        }
        let _ = writeln!(out);
        let _ = writeln!(out, "{:<10} {:>6}", "docs", "trees");
        for (d, n) in &self.document_stats.histogram {
            let _ = writeln!(out, "{d:<10} {n:>6}");
        }
        let _ = writeln!(out);
        let _ = writeln!(out, "{:<16} {:>5} {:<24} error", "question", "rank", "stage");
        for q in &self.questions {
            let _ = writeln!(
                out,
                "{:<16} {:>5} {:<24} {}",
                q.id,
                q.rank.map_or("-".to_string(), |r| r.to_string()),
                q.stage.map_or("-".to_string(), |s| format!("{s:?}")),
                q.error.as_deref().unwrap_or("")
            );
        }
        out
    }
}

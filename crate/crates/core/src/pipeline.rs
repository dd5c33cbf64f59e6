//! End-to-end wiring: configuration, document sources, the extraction cache,
//! single questions, benchmark evaluation and parameter sweeps.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::answering::{
    aggregate, extract_candidates, filter_by_type, rank, rank_by, select_cornerstones, AnswerGroup, Candidate,
    Cornerstones, CornerstoneThresholds, Question, RankedAnswers, RankingStrategy, Support, TypeFilter,
};
use crate::corpus::{load_corpus, resolve_pronouns, sample_strata, DocumentSet, StrataConfig};
use crate::error::{Error, Result};
use crate::evaluation::{
    compute_metrics, diagnose_failure, Artifacts, Benchmark, DocumentStats, ErrorStage, EvalReport, QuestionReport,
};
use crate::extraction::{extract_corpus, Extraction};
use crate::graph::{build_graph, AblationFlags, GraphConfig, NodeKind, QuasiGraph};
use crate::gst::{
    augment_one_hop, bfs_baseline, shortest_paths_baseline, solve_gst_k, BaselineCandidate, SolverConfig,
    SteinerTree,
};
use crate::similarity::{load_embeddings, load_mention_dictionary, EmbeddingStore, MentionDictionary, SimilarityModel};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SolverKind {
    #[default]
    Gst,
    Bfs,
    ShortestPaths,
}

impl FromStr for SolverKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "gst" => Ok(SolverKind::Gst),
            "bfs" => Ok(SolverKind::Bfs),
            "shortest-paths" => Ok(SolverKind::ShortestPaths),
            _ => Err(Error::Config(format!(
                "unknown solver {s:?}; expected gst, bfs or shortest-paths"
            ))),
        }
    }
}

/// Every tunable of the pipeline. Read from flat JSON; missing fields take
/// their defaults.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct PipelineConfig {
    pub k: usize,
    pub entity_threshold: f64,
    pub relation_threshold: f64,
    pub type_threshold: f64,
    pub alignment_threshold: f64,
    pub type_filter_threshold: f64,
    pub strategy: RankingStrategy,
    pub solver: SolverKind,
    #[serde(flatten)]
    pub ablation: AblationFlags,
    pub strict_type_filter: bool,
    /// Adds one-hop neighbours of the terminals to the candidate pool. Unset
    /// means only for single-group questions.
    pub one_hop: Option<bool>,
    pub resolve_pronouns: bool,
    /// Stratified document sampling as `"x1-x2-x3"`; the whole pool is used
    /// when unset.
    pub strata: Option<String>,
    pub pool_size: usize,
    pub rng_seed: u64,
    pub max_queue: Option<usize>,
    /// Relative paths are resolved against the config file's directory.
    pub embeddings: Option<PathBuf>,
    pub mention_dictionary: Option<PathBuf>,
    /// Content-addressed extraction cache; off when unset.
    pub cache_dir: Option<PathBuf>,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            k: 50,
            entity_threshold: 0.5,
            relation_threshold: 0.5,
            type_threshold: 0.5,
            alignment_threshold: 0.5,
            type_filter_threshold: 0.5,
            strategy: RankingStrategy::InvCostSum,
            solver: SolverKind::Gst,
            ablation: AblationFlags::default(),
            strict_type_filter: false,
            one_hop: None,
            resolve_pronouns: true,
            strata: None,
            pool_size: 10,
            rng_seed: 0,
            max_queue: SolverConfig::default().max_queue,
            embeddings: None,
            mention_dictionary: None,
            cache_dir: None,
        }
    }
}

impl PipelineConfig {
    pub fn validate(&self) -> Result<()> {
        if self.k == 0 {
            return Err(Error::Config("k must be at least 1".into()));
        }
        for (name, v) in [
            ("entity_threshold", self.entity_threshold),
            ("relation_threshold", self.relation_threshold),
            ("type_threshold", self.type_threshold),
            ("alignment_threshold", self.alignment_threshold),
            ("type_filter_threshold", self.type_filter_threshold),
        ] {
            if !(0.0..=1.0).contains(&v) {
                return Err(Error::Config(format!("{name} = {v} is outside [0, 1]")));
            }
        }
        self.strata_config().map(|_| ())
    }

    pub fn from_json_str(origin: &str, json: &str) -> Result<Self> {
        let cfg: PipelineConfig = serde_json::from_str(json)
            .map_err(|e| Error::parse(origin, format!("line {} column {}", e.line(), e.column()), e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn strata_config(&self) -> Result<Option<StrataConfig>> {
        self.strata
            .as_deref()
            .map(|text| StrataConfig::parse(text, self.pool_size, self.rng_seed))
            .transpose()
    }

    pub fn cornerstone_thresholds(&self) -> CornerstoneThresholds {
        CornerstoneThresholds {
            entity: self.entity_threshold,
            relation: self.relation_threshold,
            type_: self.type_threshold,
        }
    }

    pub fn graph_config(&self) -> GraphConfig {
        GraphConfig {
            alignment_threshold: self.alignment_threshold,
        }
    }

    pub fn solver_config(&self) -> SolverConfig {
        SolverConfig {
            k: self.k,
            max_queue: self.max_queue,
        }
    }

    pub fn type_filter(&self) -> TypeFilter {
        TypeFilter {
            threshold: self.type_filter_threshold,
            strict: self.strict_type_filter,
        }
    }

    /// A copy with one sweepable parameter set.
    pub fn with_param(&self, param: SweepParam, value: f64) -> Result<Self> {
        let mut cfg = self.clone();
        match param {
            SweepParam::K => {
                if value < 1.0 || value.fract() != 0.0 {
                    return Err(Error::Config(format!("k must be a positive integer, got {value}")));
                }
                cfg.k = value as usize;
            }
            SweepParam::AlignmentThreshold => cfg.alignment_threshold = value,
            SweepParam::CornerstoneThresholds => {
                cfg.entity_threshold = value;
                cfg.relation_threshold = value;
                cfg.type_threshold = value;
            }
            SweepParam::TypeThreshold => cfg.type_filter_threshold = value,
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

/// Reads a config file and resolves relative resource paths against its
/// directory.
pub fn load_config(path: &Path) -> Result<PipelineConfig> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let mut cfg = PipelineConfig::from_json_str(&path.display().to_string(), &text)?;
    let base = path.parent().unwrap_or(Path::new("."));
    for p in [&mut cfg.embeddings, &mut cfg.mention_dictionary, &mut cfg.cache_dir]
        .into_iter()
        .flatten()
    {
        if p.is_relative() {
            *p = base.join(&*p);
        }
    }
    Ok(cfg)
}

/// Where a question's documents come from.
pub trait DocumentSource: Sync {
    fn fetch(&self, question_id: &str, question: &str) -> Result<DocumentSet>;
}

/// Pre-annotated documents in `root/<question id>/*.json`.
#[derive(Debug, Clone)]
pub struct DirectorySource {
    pub root: PathBuf,
}

impl DirectorySource {
    pub fn new(root: impl Into<PathBuf>) -> Self {
        DirectorySource { root: root.into() }
    }
}

impl DocumentSource for DirectorySource {
    fn fetch(&self, question_id: &str, _question: &str) -> Result<DocumentSet> {
        load_corpus(question_id, &self.root)
    }
}

/// A fixed pool handed out for every question.
#[derive(Debug, Clone)]
pub struct FixedSource(pub DocumentSet);

impl DocumentSource for FixedSource {
    fn fetch(&self, question_id: &str, _question: &str) -> Result<DocumentSet> {
        Ok(DocumentSet {
            question_id: question_id.to_string(),
            ..self.0.clone()
        })
    }
}

/// Wall-clock time per stage.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Timings {
    pub extraction: Duration,
    pub graph: Duration,
    pub cornerstones: Duration,
    pub gst: Duration,
    pub answers: Duration,
}

impl fmt::Display for Timings {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ms = |d: Duration| d.as_secs_f64() * 1e3;
        write!(
            f,
            "extraction {:.1} ms, graph {:.1} ms, cornerstones {:.1} ms, gst {:.1} ms, answers {:.1} ms",
            ms(self.extraction),
            ms(self.graph),
            ms(self.cornerstones),
            ms(self.gst),
            ms(self.answers)
        )
    }
}

/// Everything produced while answering one question.
#[derive(Debug, Clone)]
pub struct QuestionRun {
    pub question: Question,
    pub graph: QuasiGraph,
    pub cornerstones: Cornerstones,
    /// Empty for the baseline solvers.
    pub trees: Vec<SteinerTree>,
    /// After type filtering.
    pub candidates: Vec<Candidate>,
    pub answers: Vec<AnswerGroup>,
    pub timings: Timings,
}

impl QuestionRun {
    pub fn ranked(&self) -> RankedAnswers {
        RankedAnswers::new(&self.question.text, &self.answers)
    }

    pub fn labels(&self) -> Vec<String> {
        self.answers.iter().map(|a| a.label.clone()).collect()
    }
}

/// Bumped whenever extraction output changes shape or content.
const CACHE_VERSION: &str = "extraction-v1";

/// The configured pipeline with its similarity resources loaded.
pub struct Pipeline {
    pub config: PipelineConfig,
    pub sim: SimilarityModel<f64>,
}

impl Pipeline {
    pub fn new(config: PipelineConfig) -> Result<Self> {
        config.validate()?;
        let mentions = match &config.mention_dictionary {
            Some(p) => load_mention_dictionary(p)?,
            None => MentionDictionary::new(),
        };
        let embeddings = match &config.embeddings {
            Some(p) => load_embeddings(p)?,
            None => EmbeddingStore::new(1),
        };
        Ok(Pipeline {
            config,
            sim: SimilarityModel::new(mentions, embeddings),
        })
    }

    pub fn with_model(config: PipelineConfig, sim: SimilarityModel<f64>) -> Result<Self> {
        config.validate()?;
        Ok(Pipeline { config, sim })
    }

    fn cache_key(&self, docs: &DocumentSet) -> String {
        let mut h = Sha256::new();
        h.update(CACHE_VERSION);
        h.update([u8::from(self.config.resolve_pronouns)]);
        for d in &docs.documents {
            let json = d.to_json();
            h.update((json.len() as u64).to_le_bytes());
            h.update(json);
        }
        hex::encode(h.finalize())
    }

    /// The configured stratified sample of a rank-ordered pool.
    pub fn sample(&self, docs: &DocumentSet) -> Result<DocumentSet> {
        match self.config.strata_config()? {
            Some(strata) => {
                let sample = sample_strata(docs, &strata)?;
                for w in &sample.warnings {
                    log::warn!("question {}: {w}", docs.question_id);
                }
                Ok(sample.documents)
            }
            None => Ok(docs.clone()),
        }
    }

    /// Pronoun resolution and extraction, through the cache when one is
    /// configured.
    pub fn extract(&self, docs: &DocumentSet) -> Result<Extraction> {
        let cached = match &self.config.cache_dir {
            Some(dir) => {
                let path = dir.join(&docs.question_id).join(self.cache_key(docs)).join("extraction.json");
                if let Ok(text) = fs::read_to_string(&path) {
                    match serde_json::from_str(&text) {
                        Ok(ext) => return Ok(ext),
                        Err(e) => log::warn!("ignoring unreadable cache entry {}: {e}", path.display()),
                    }
                }
                Some(path)
            }
            None => None,
        };
        let docs = if self.config.resolve_pronouns {
            DocumentSet {
                question_id: docs.question_id.clone(),
                documents: docs.documents.iter().map(resolve_pronouns).collect(),
            }
        } else {
            docs.clone()
        };
        let ext = extract_corpus(&docs);
        if let Some(path) = cached {
            let dir = path.parent().expect("cache paths have a parent");
            fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
            let json = serde_json::to_string(&ext).expect("extractions serialize");
            fs::write(&path, json).map_err(|e| Error::io(&path, e))?;
        }
        Ok(ext)
    }

    /// Graph construction followed by the configured ablations.
    pub fn build(&self, ext: &Extraction) -> Result<QuasiGraph> {
        let g = build_graph(&ext.triples, &ext.types, &self.sim, &self.config.graph_config())?;
        if self.config.ablation == AblationFlags::default() {
            Ok(g)
        } else {
            Ok(g.ablate(&self.config.ablation))
        }
    }

    /// Answers over `docs` as given; call [`Pipeline::sample`] first for a
    /// stratified pool.
    pub fn answer(&self, question: &str, docs: &DocumentSet) -> Result<QuestionRun> {
        let start = Instant::now();
        let ext = self.extract(docs)?;
        let extraction = start.elapsed();
        let start = Instant::now();
        let graph = self.build(&ext)?;
        let graph_time = start.elapsed();
        let mut run = self.answer_on_graph(question, graph)?;
        run.timings.extraction = extraction;
        run.timings.graph = graph_time;
        log::info!("{}", run.timings);
        Ok(run)
    }

    /// Runs cornerstone selection, the solver and answer ranking on a built
    /// graph.
    pub fn answer_on_graph(&self, question: &str, mut graph: QuasiGraph) -> Result<QuestionRun> {
        let cfg = &self.config;
        let mut timings = Timings::default();
        let q = Question::new(question);

        let start = Instant::now();
        let cornerstones = select_cornerstones(&graph, &q, &self.sim, &cfg.cornerstone_thresholds())?;
        cornerstones.apply_weights(&mut graph);
        timings.cornerstones = start.elapsed();
        let groups = &cornerstones.groups;

        let start = Instant::now();
        let (trees, baseline) = match cfg.solver {
            SolverKind::Gst => {
                let mut trees = solve_gst_k(&graph, groups, &cfg.solver_config())?;
                if cfg.one_hop.unwrap_or(groups.len() == 1) {
                    augment_one_hop(&mut trees, &graph, groups);
                }
                (trees, None)
            }
            SolverKind::Bfs => (Vec::new(), Some(bfs_baseline(&graph, groups))),
            SolverKind::ShortestPaths => (Vec::new(), Some(shortest_paths_baseline(&graph, groups))),
        };
        timings.gst = start.elapsed();
        log::info!("{:?} solver: {:?} for {} groups", cfg.solver, timings.gst, groups.len());

        let start = Instant::now();
        let expected = q.expected_type.as_deref();
        let answers = match baseline {
            None => {
                let candidates = extract_candidates(&trees, &graph, groups);
                let candidates = filter_by_type(candidates, expected, &self.sim, &cfg.type_filter());
                let answers = rank(aggregate(&candidates, &graph), cfg.strategy);
                timings.answers = start.elapsed();
                return Ok(QuestionRun {
                    question: q,
                    graph,
                    cornerstones,
                    trees,
                    candidates,
                    answers,
                    timings,
                });
            }
            Some(found) => found,
        };
        let (candidates, scores) = baseline_candidates(&graph, &answers);
        let candidates = filter_by_type(candidates, expected, &self.sim, &cfg.type_filter());
        let ranked = rank_by(aggregate(&candidates, &graph), |a| {
            a.members.iter().map(|n| scores[n]).fold(0.0, f64::max)
        });
        timings.answers = start.elapsed();
        Ok(QuestionRun {
            question: q,
            graph,
            cornerstones,
            trees,
            candidates,
            answers: ranked,
            timings,
        })
    }

    /// Answers every benchmark question, `jobs` at a time, and collects
    /// metrics, failure stages and tree statistics in benchmark order.
    pub fn evaluate(&self, bench: &Benchmark, source: &dyn DocumentSource, jobs: usize) -> Result<EvalReport> {
        let outcomes = in_pool(jobs, || {
            bench
                .questions
                .par_iter()
                .map(|q| {
                    let docs = source.fetch(&q.id, &q.text).and_then(|d| self.sample(&d));
                    let run = docs.as_ref().map_err(clone_error).and_then(|d| self.answer(&q.text, d));
                    evaluate_one(q, docs.ok().as_ref(), run)
                })
                .collect::<Vec<_>>()
        })?;
        finish_report(bench, outcomes)
    }

    /// Evaluation once per value of `param`. Extractions are computed once per
    /// question; graphs are rebuilt only when the parameter changes them.
    pub fn sweep(
        &self,
        bench: &Benchmark,
        source: &dyn DocumentSource,
        param: SweepParam,
        values: &[f64],
        jobs: usize,
    ) -> Result<Vec<SweepRow>> {
        let configs: Vec<PipelineConfig> = values
            .iter()
            .map(|&v| self.config.with_param(param, v))
            .collect::<Result<_>>()?;
        let prepared: Vec<(Result<DocumentSet>, Option<Result<Extraction>>)> = in_pool(jobs, || {
            bench
                .questions
                .par_iter()
                .map(|q| {
                    let docs = source.fetch(&q.id, &q.text).and_then(|d| self.sample(&d));
                    let ext = docs.as_ref().ok().map(|d| self.extract(d));
                    (docs, ext)
                })
                .collect()
        })?;
        let mut graphs: HashMap<(usize, u64), Result<QuasiGraph>> = HashMap::new();
        let mut rows = Vec::new();
        for (value, cfg) in values.iter().zip(configs) {
            let pipeline = Pipeline {
                config: cfg,
                sim: self.sim.clone(),
            };
            let align = pipeline.config.alignment_threshold.to_bits();
            for (i, (_, ext)) in prepared.iter().enumerate() {
                if let Some(Ok(ext)) = ext {
                    graphs.entry((i, align)).or_insert_with(|| pipeline.build(ext));
                }
            }
            let outcomes = in_pool(jobs, || {
                bench
                    .questions
                    .par_iter()
                    .enumerate()
                    .map(|(i, q)| {
                        let (docs, ext) = &prepared[i];
                        let run = match (docs, ext) {
                            (Err(e), _) => Err(clone_error(e)),
                            (_, Some(Err(e))) => Err(clone_error(e)),
                            _ => match &graphs[&(i, align)] {
                                Ok(g) => pipeline.answer_on_graph(&q.text, g.clone()),
                                Err(e) => Err(clone_error(e)),
                            },
                        };
                        evaluate_one(q, docs.as_ref().ok(), run)
                    })
                    .collect::<Vec<_>>()
            })?;
            let report = finish_report(bench, outcomes)?;
            rows.push(SweepRow {
                value: *value,
                mrr_at_1: report.metrics.mrr_at(1),
                mrr_at_3: report.metrics.mrr_at(3),
                mrr_at_5: report.metrics.mrr_at(5),
            });
        }
        Ok(rows)
    }
}

fn baseline_candidates(
    g: &QuasiGraph,
    found: &[BaselineCandidate],
) -> (Vec<Candidate>, BTreeMap<crate::graph::NodeId, f64>) {
    let mut scores = BTreeMap::new();
    let candidates = found
        .iter()
        .enumerate()
        .filter(|(_, c)| g.node(c.node).kind == NodeKind::Entity)
        .map(|(i, c)| {
            scores.insert(c.node, c.score);
            Candidate {
                node: c.node,
                label: g.node(c.node).label.clone(),
                types: crate::answering::type_labels(g, c.node),
                supports: vec![Support {
                    tree: i + 1,
                    cost: c.path_cost,
                    node_weight: c.nodes.iter().map(|&n| g.node(n).weight).sum(),
                    distance: c.path_cost,
                    hop_distance: c.edges.len() as f64,
                }],
                docs: g.documents_of(&c.edges),
            }
        })
        .collect();
    (candidates, scores)
}

/// Errors are not `Clone` because of the io source; this keeps the message.
fn clone_error(e: &Error) -> Error {
    match e {
        Error::NotFound(m) => Error::NotFound(m.clone()),
        Error::Parse {
            file,
            location,
            message,
        } => Error::parse(file.clone(), location.clone(), message.clone()),
        Error::Io { path, source } => Error::io(path.clone(), std::io::Error::new(source.kind(), source.to_string())),
        Error::EmptyOccurrences => Error::EmptyOccurrences,
        Error::EmptyGraph => Error::EmptyGraph,
        Error::InvariantViolation(m) => Error::InvariantViolation(m.clone()),
        Error::RefusedSize { nodes, limit } => Error::RefusedSize {
            nodes: *nodes,
            limit: *limit,
        },
        Error::ResourceExhausted { cap } => Error::ResourceExhausted { cap: *cap },
        Error::NoCornerstones => Error::NoCornerstones,
        Error::Config(m) => Error::Config(m.clone()),
        Error::InvalidInput(m) => Error::InvalidInput(m.clone()),
    }
}

fn in_pool<T: Send>(jobs: usize, f: impl FnOnce() -> T + Send) -> Result<T> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| Error::Config(format!("cannot start {jobs} worker threads: {e}")))?;
    Ok(pool.install(f))
}

struct Outcome {
    report: QuestionReport,
    stats: Option<DocumentStats>,
}

fn evaluate_one(
    q: &crate::evaluation::BenchmarkEntry,
    docs: Option<&DocumentSet>,
    run: Result<QuestionRun>,
) -> Outcome {
    match run {
        Ok(run) => {
            let labels = run.labels();
            let rank = q.first_correct(&labels);
            let stage = diagnose_failure(
                &Artifacts {
                    documents: docs.expect("a run implies documents"),
                    graph: &run.graph,
                    trees: &run.trees,
                    candidates: &run.candidates,
                    ranked: &labels,
                },
                q,
            );
            let mut stats = DocumentStats::new(10);
            stats.add(&run.trees);
            Outcome {
                report: QuestionReport {
                    id: q.id.clone(),
                    answers: labels,
                    rank,
                    stage: Some(stage),
                    error: None,
                },
                stats: Some(stats),
            }
        }
        Err(e) => {
            log::warn!("question {}: {e}", q.id);
            // without cornerstones the graph still exists; diagnose what we can
            let stage = match (&e, docs) {
                (Error::NoCornerstones | Error::EmptyGraph, Some(d)) => {
                    let empty: QuasiGraph = QuasiGraph::new();
                    let stage = diagnose_failure(
                        &Artifacts {
                            documents: d,
                            graph: &empty,
                            trees: &[],
                            candidates: &[],
                            ranked: &[],
                        },
                        q,
                    );
                    (stage == ErrorStage::AnswerNotInCorpus).then_some(stage)
                }
                _ => None,
            };
            Outcome {
                report: QuestionReport {
                    id: q.id.clone(),
                    answers: Vec::new(),
                    rank: None,
                    stage,
                    error: Some(format!("{}: {e}", e.kind())),
                },
                stats: None,
            }
        }
    }
}

fn finish_report(bench: &Benchmark, outcomes: Vec<Outcome>) -> Result<EvalReport> {
    let results: BTreeMap<String, Vec<String>> = outcomes
        .iter()
        .filter(|o| o.report.error.is_none())
        .map(|o| (o.report.id.clone(), o.report.answers.clone()))
        .collect();
    let metrics = compute_metrics(&results, bench)?;
    let mut stages = BTreeMap::new();
    let mut document_stats = DocumentStats::new(10);
    for o in &outcomes {
        if let Some(s) = o.report.stage {
            *stages.entry(s).or_insert(0) += 1;
        }
        if let Some(s) = &o.stats {
            document_stats.merge(s);
        }
    }
    Ok(EvalReport {
        metrics,
        stages,
        document_stats,
        questions: outcomes.into_iter().map(|o| o.report).collect(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SweepParam {
    K,
    AlignmentThreshold,
    CornerstoneThresholds,
    TypeThreshold,
}

impl FromStr for SweepParam {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "k" => Ok(SweepParam::K),
            "alignment-threshold" => Ok(SweepParam::AlignmentThreshold),
            "cornerstone-thresholds" => Ok(SweepParam::CornerstoneThresholds),
            "type-threshold" => Ok(SweepParam::TypeThreshold),
            _ => Err(Error::Config(format!(
                "unknown sweep parameter {s:?}; expected k, alignment-threshold, cornerstone-thresholds or type-threshold"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub value: f64,
    pub mrr_at_1: f64,
    pub mrr_at_3: f64,
    pub mrr_at_5: f64,
}

/// CSV with a header row.
pub fn sweep_csv(rows: &[SweepRow]) -> String {
    let mut out = String::from("value,mrr@1,mrr@3,mrr@5\n");
    for r in rows {
        out.push_str(&format!("{},{},{},{}\n", r.value, r.mrr_at_1, r.mrr_at_3, r.mrr_at_5));
    }
    out
}

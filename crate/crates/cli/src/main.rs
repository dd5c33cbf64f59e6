use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use quasikg::answering::RankingStrategy;
use quasikg::corpus::{fallback_annotate, load_corpus, load_directory, DocumentSet};
use quasikg::evaluation::load_benchmark;
use quasikg::graph::{read_graph_json, DotStyle};
use quasikg::gst::TreeExport;
use quasikg::pipeline::{load_config, sweep_csv, DirectorySource, Pipeline, PipelineConfig, QuestionRun, SolverKind, SweepParam};
use quasikg::{Error, Graph};

#[derive(Parser)]
#[command(name = "quasikg", version, about = "Answer questions over quasi knowledge graphs built from text")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Answer one question and print the ranked answers as JSON.
    Answer {
        #[command(flatten)]
        input: QuestionInput,
        #[command(flatten)]
        opts: PipelineOpts,
    },
    /// Evaluate a benchmark.
    Eval {
        #[arg(long)]
        benchmark: PathBuf,
        #[arg(long)]
        corpus_root: PathBuf,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        #[arg(long, value_enum, default_value_t = ReportFormat::Json)]
        format: ReportFormat,
        #[command(flatten)]
        opts: PipelineOpts,
    },
    /// Print one of the trees behind the answers.
    Explain {
        #[command(flatten)]
        input: QuestionInput,
        /// 1-based rank of the tree.
        #[arg(long, default_value_t = 1)]
        tree_rank: usize,
        #[arg(long, value_enum, default_value_t = TreeFormat::Dot)]
        format: TreeFormat,
        #[command(flatten)]
        opts: PipelineOpts,
    },
    /// Evaluate a benchmark once per parameter value and print MRR as CSV.
    Sweep {
        #[arg(long)]
        benchmark: PathBuf,
        #[arg(long)]
        corpus_root: PathBuf,
        /// k, alignment-threshold, cornerstone-thresholds or type-threshold.
        #[arg(long)]
        param: String,
        #[arg(long, value_delimiter = ',', required = true)]
        values: Vec<f64>,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        #[command(flatten)]
        opts: PipelineOpts,
    },
    /// Annotate raw text with the built-in tagger and print the document JSON.
    Annotate {
        /// Text file; stdin when omitted.
        input: Option<PathBuf>,
        #[arg(long, default_value = "doc")]
        doc_id: String,
        #[arg(long)]
        rank: Option<u32>,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Build the quasi graph of a corpus and print it as JSON or DOT.
    Graph {
        #[arg(long)]
        corpus_root: PathBuf,
        #[arg(long)]
        question_id: Option<String>,
        #[arg(long, value_enum, default_value_t = TreeFormat::Json)]
        format: TreeFormat,
        #[command(flatten)]
        opts: PipelineOpts,
    },
}

#[derive(Args)]
struct QuestionInput {
    #[arg(long)]
    question: String,
    /// Directory of annotated documents, or the root holding one directory
    /// per question when `--question-id` is given.
    #[arg(long, required_unless_present = "graph")]
    corpus_root: Option<PathBuf>,
    #[arg(long)]
    question_id: Option<String>,
    /// A prebuilt graph in JSON; skips extraction.
    #[arg(long, conflicts_with = "corpus_root")]
    graph: Option<PathBuf>,
}

#[derive(Args)]
struct PipelineOpts {
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    solver: Option<String>,
    #[arg(long)]
    strategy: Option<String>,
    #[arg(long)]
    seed: Option<u64>,
    /// Write the result here instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum ReportFormat {
    Json,
    Table,
}

#[derive(Clone, Copy, ValueEnum)]
enum TreeFormat {
    Dot,
    Json,
}

impl PipelineOpts {
    fn config(&self) -> quasikg::Result<PipelineConfig> {
        let mut cfg = match &self.config {
            Some(p) => load_config(p)?,
            None => PipelineConfig::default(),
        };
        if let Some(k) = self.k {
            cfg.k = k;
        }
        if let Some(s) = &self.solver {
            cfg.solver = s.parse::<SolverKind>()?;
        }
        if let Some(s) = &self.strategy {
            cfg.strategy = s.parse::<RankingStrategy>()?;
        }
        if let Some(seed) = self.seed {
            cfg.rng_seed = seed;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    fn pipeline(&self) -> quasikg::Result<Pipeline> {
        Pipeline::new(self.config()?)
    }
}

fn documents(root: &Path, question_id: Option<&str>) -> quasikg::Result<DocumentSet> {
    match question_id {
        Some(id) => load_corpus(id, root),
        None => load_directory("question", root),
    }
}

fn run_question(input: &QuestionInput, pipeline: &Pipeline) -> quasikg::Result<QuestionRun> {
    match (&input.graph, &input.corpus_root) {
        (Some(path), _) => {
            let g: Graph = read_graph_json(path)?;
            let g = g.ablate(&pipeline.config.ablation);
            pipeline.answer_on_graph(&input.question, g)
        }
        (None, Some(root)) => {
            let docs = pipeline.sample(&documents(root, input.question_id.as_deref())?)?;
            pipeline.answer(&input.question, &docs)
        }
        (None, None) => unreachable!("clap requires a corpus root or a graph"),
    }
}

fn emit(output: Option<&Path>, text: &str) -> anyhow::Result<()> {
    match output {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())?;
            out.flush()?;
            Ok(())
        }
    }
}

fn with_newline(mut s: String) -> String {
    if !s.ends_with('\n') {
        s.push('\n');
    }
    s
}

fn run(cli: Cli) -> anyhow::Result<()> {
    match cli.command {
        Command::Answer { input, opts } => {
            let pipeline = opts.pipeline()?;
            let run = run_question(&input, &pipeline)?;
            log::info!("stages: {}", run.timings);
            let json = serde_json::to_string_pretty(&run.ranked())?;
            emit(opts.output.as_deref(), &with_newline(json))
        }
        Command::Eval {
            benchmark,
            corpus_root,
            jobs,
            format,
            opts,
        } => {
            let pipeline = opts.pipeline()?;
            let bench = load_benchmark(&benchmark)?;
            let report = pipeline.evaluate(&bench, &DirectorySource::new(corpus_root), jobs)?;
            let text = match format {
                ReportFormat::Json => serde_json::to_string_pretty(&report)?,
                ReportFormat::Table => report.to_table(),
            };
            emit(opts.output.as_deref(), &with_newline(text))
        }
        Command::Explain {
            input,
            tree_rank,
            format,
            opts,
        } => {
            let pipeline = opts.pipeline()?;
            let run = run_question(&input, &pipeline)?;
            let Some(tree) = tree_rank.checked_sub(1).and_then(|i| run.trees.get(i)) else {
                return Err(Error::InvalidInput(format!(
                    "tree rank {tree_rank} is out of range; {} trees were found",
                    run.trees.len()
                ))
                .into());
            };
            let groups = &run.cornerstones.groups;
            let text = match format {
                TreeFormat::Dot => tree.to_dot(&run.graph, groups),
                TreeFormat::Json => TreeExport::new(tree, &run.graph, groups).to_json(),
            };
            emit(opts.output.as_deref(), &with_newline(text))
        }
        Command::Sweep {
            benchmark,
            corpus_root,
            param,
            values,
            jobs,
            opts,
        } => {
            let param: SweepParam = param.parse()?;
            let pipeline = opts.pipeline()?;
            let bench = load_benchmark(&benchmark)?;
            let rows = pipeline.sweep(&bench, &DirectorySource::new(corpus_root), param, &values, jobs)?;
            emit(opts.output.as_deref(), &sweep_csv(&rows))
        }
        Command::Annotate {
            input,
            doc_id,
            rank,
            output,
        } => {
            let text = match &input {
                Some(p) => fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?,
                None => std::io::read_to_string(std::io::stdin()).context("reading stdin")?,
            };
            let mut doc = fallback_annotate(&text);
            if doc.sentences.is_empty() {
                bail!("no text to annotate");
            }
            doc.doc_id = doc_id;
            doc.rank = rank;
            emit(output.as_deref(), &with_newline(doc.to_json()))
        }
        Command::Graph {
            corpus_root,
            question_id,
            format,
            opts,
        } => {
            let pipeline = opts.pipeline()?;
            let docs = pipeline.sample(&documents(&corpus_root, question_id.as_deref())?)?;
            let g = pipeline.build(&pipeline.extract(&docs)?)?;
            let text = match format {
                TreeFormat::Dot => g.to_dot(&DotStyle::default()),
                TreeFormat::Json => serde_json::to_string_pretty(&g.to_file())?,
            };
            emit(opts.output.as_deref(), &with_newline(text))
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let (code, kind) = match e.downcast_ref::<Error>() {
                Some(err) if err.is_domain() => (2, err.kind()),
                Some(err) => (1, err.kind()),
                None => (1, "IoError"),
            };
            let msg = match e.downcast_ref::<Error>() {
                Some(err) => err.to_string(),
                None => format!("{e:#}"),
            };
            let body = serde_json::json!({ "error": kind, "message": msg });
            println!("{body}");
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}

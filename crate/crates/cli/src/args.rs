use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use hotkit_core::construct::Level;

#[derive(Debug, Parser)]
#[command(
    name = "hotkit",
    version,
    about = "Build, evaluate and browse hypergraphs of text"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build a hypergraph from a JSON Lines corpus.
    Construct(ConstructArgs),
    /// Score one or more hypergraphs against relevance sets.
    Evaluate(EvaluateArgs),
    /// Serve a hypergraph read-only over HTTP.
    Serve(ServeArgs),
    /// Add aligned hyperedges step by step and record the metrics.
    Simulate(SimulateArgs),
    /// Convert the MultiHop-RAG release into a corpus and relevance sets.
    AdaptMultihop(AdaptArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Allwords,
    Llm,
    Twostep,
    Random,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Allwords => "allwords",
            Method::Llm => "llm",
            Method::Twostep => "twostep",
            Method::Random => "random",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum LevelArg {
    Document,
    Sentence,
}

impl From<LevelArg> for Level {
    fn from(l: LevelArg) -> Level {
        match l {
            LevelArg::Document => Level::Document,
            LevelArg::Sentence => Level::Sentence,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct ConstructArgs {
    /// Corpus in JSON Lines, one `{"id", "title"?, "text"}` per line.
    #[arg(long)]
    pub corpus: PathBuf,
    #[arg(long, value_enum)]
    pub method: Method,
    /// allwords: share of scored words kept as hyperedges [default: 0.05].
    #[arg(long)]
    pub top_fraction: Option<f64>,
    /// llm: extraction unit [default: document].
    #[arg(long, value_enum)]
    pub level: Option<LevelArg>,
    /// twostep: sentences kept per document [default: 5].
    #[arg(long)]
    pub k_sentences: Option<usize>,
    /// twostep: number of sentence pairs [default: 10 per document].
    #[arg(long)]
    pub k_pairs: Option<usize>,
    /// twostep: drop hyperedges smaller than this after merging.
    #[arg(long)]
    pub prune_min_size: Option<usize>,
    /// random: number of hyperedges.
    #[arg(long)]
    pub edges: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// TOML file with `[chat]` and `[embedding]` provider tables.
    #[arg(long, conflicts_with = "mock_providers")]
    pub provider_config: Option<PathBuf>,
    /// Use deterministic offline providers instead of HTTP backends.
    #[arg(long)]
    pub mock_providers: bool,
    /// Replace the built-in stopword list (one word per line).
    #[arg(long)]
    pub stopwords: Option<PathBuf>,
    /// Keep provider responses here so interrupted runs can resume.
    #[arg(long)]
    pub cache_dir: Option<PathBuf>,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Args)]
pub struct EvaluateArgs {
    /// Hypergraph file, optionally as `LABEL=PATH`. Repeatable.
    #[arg(long = "hot", required = true)]
    pub hots: Vec<String>,
    #[arg(long)]
    pub relevance: PathBuf,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Directory for report.json and report.txt.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct ServeArgs {
    #[arg(long)]
    pub hot: PathBuf,
    #[arg(long, default_value = "127.0.0.1:8080")]
    pub bind: String,
    /// Static UI bundle; the built-in page is used when absent.
    #[arg(long)]
    pub ui_dir: Option<PathBuf>,
    /// Name shown by the UI [default: manifest label or file name].
    #[arg(long)]
    pub label: Option<String>,
}

#[derive(Debug, Clone, Args)]
pub struct SimulateArgs {
    /// Starting hypergraph.
    #[arg(long)]
    pub hot: PathBuf,
    #[arg(long)]
    pub relevance: PathBuf,
    /// Minimum share of member pairs in each added edge that are relevant.
    #[arg(long)]
    pub alpha: f64,
    #[arg(long, default_value_t = 100)]
    pub steps: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Trajectory JSON output.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Args)]
pub struct AdaptArgs {
    /// The release's `corpus.json`.
    #[arg(long)]
    pub corpus: PathBuf,
    /// The release's `MultiHopRAG.json`.
    #[arg(long)]
    pub queries: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
}

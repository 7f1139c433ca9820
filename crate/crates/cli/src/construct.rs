use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{bail, Context, Result};
use hotkit_core::construct::topics::PROMPT_VERSION;
use hotkit_core::construct::twostep::{self, TwoStepParams};
use hotkit_core::construct::{allwords, llm, Level};
use hotkit_core::corpus::{document_nodes, ingest_path, Document, TfIdfStats, Tokenizer};
use hotkit_core::eval::add_random_hyperedges;
use hotkit_core::provider::http::{HttpChatModel, HttpEmbedder};
use hotkit_core::provider::mock::{HashEmbedder, TfIdfMockChat};
use hotkit_core::provider::{ChatModel, Embedder, ProviderConfig};
use hotkit_core::TextHypergraph;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::args::{ConstructArgs, LevelArg, Method};

pub const MANIFEST_FILE: &str = "manifest.json";
pub const HOT_FILE: &str = "hot.json";
const MOCK_EMBED_DIM: usize = 64;
const MOCK_CONCURRENCY: usize = 4;

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProviderFile {
    pub chat: Option<ProviderConfig>,
    pub embedding: Option<ProviderConfig>,
}

impl ProviderFile {
    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path)
            .with_context(|| format!("reading provider config {}", path.display()))?;
        let file: ProviderFile = toml::from_str(&text)
            .with_context(|| format!("parsing provider config {}", path.display()))?;
        for c in file.chat.iter().chain(&file.embedding) {
            c.validate()?;
        }
        Ok(file)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProviderModels {
    pub mock: bool,
    pub chat: Option<String>,
    pub embedding: Option<String>,
    pub prompt_version: String,
}

/// Everything needed to rerun a construction.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub tool_version: String,
    pub label: String,
    pub method: String,
    pub parameters: Value,
    pub seed: u64,
    pub corpus: PathBuf,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stopwords: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub providers: Option<ProviderModels>,
    pub documents: usize,
    pub skipped_empty: usize,
    pub node_count: usize,
    pub hyperedge_count: usize,
    /// Seconds spent building; the only field that varies between reruns.
    pub wall_time_secs: f64,
}

impl Manifest {
    /// Reads `manifest.json` beside a hypergraph file, if there is one.
    pub fn beside(hot_path: &Path) -> Option<Manifest> {
        let path = hot_path.parent()?.join(MANIFEST_FILE);
        serde_json::from_slice(&fs::read(path).ok()?).ok()
    }
}

/// Method parameters after defaults, checked against the method.
#[derive(Debug, Clone, PartialEq)]
pub enum Plan {
    AllWords { top_fraction: f64 },
    Llm { level: Level },
    TwoStep(TwoStepParams),
    Random { edges: usize },
}

impl Plan {
    pub fn from_args(a: &ConstructArgs) -> Result<Plan> {
        let given = [
            ("--top-fraction", a.top_fraction.is_some(), Method::Allwords),
            ("--level", a.level.is_some(), Method::Llm),
            ("--k-sentences", a.k_sentences.is_some(), Method::Twostep),
            ("--k-pairs", a.k_pairs.is_some(), Method::Twostep),
            (
                "--prune-min-size",
                a.prune_min_size.is_some(),
                Method::Twostep,
            ),
            ("--edges", a.edges.is_some(), Method::Random),
        ];
        for (flag, set, owner) in given {
            if set && owner != a.method {
                bail!("{flag} does not apply to --method {}", a.method.name());
            }
        }
        let uses_providers = matches!(a.method, Method::Llm | Method::Twostep);
        if !uses_providers && (a.provider_config.is_some() || a.mock_providers) {
            bail!("--method {} does not use providers", a.method.name());
        }
        if uses_providers && a.provider_config.is_none() && !a.mock_providers {
            bail!(
                "--method {} needs --provider-config or --mock-providers",
                a.method.name()
            );
        }
        Ok(match a.method {
            Method::Allwords => {
                let f = a.top_fraction.unwrap_or(0.05);
                if !(f > 0.0 && f <= 1.0) {
                    bail!("--top-fraction must be in (0, 1], got {f}");
                }
                Plan::AllWords { top_fraction: f }
            }
            Method::Llm => Plan::Llm {
                level: a.level.unwrap_or(LevelArg::Document).into(),
            },
            Method::Twostep => {
                let p = TwoStepParams {
                    k_sentences: a.k_sentences.unwrap_or(5),
                    k_pairs: a.k_pairs,
                    prune_min_size: a.prune_min_size,
                    ..TwoStepParams::default()
                };
                if p.k_sentences == 0 {
                    bail!("--k-sentences must be at least 1");
                }
                if p.k_pairs == Some(0) {
                    bail!("--k-pairs must be at least 1");
                }
                Plan::TwoStep(p)
            }
            Method::Random => match a.edges {
                Some(0) | None => bail!("--method random needs --edges N with N > 0"),
                Some(edges) => Plan::Random { edges },
            },
        })
    }

    fn label(&self) -> String {
        match self {
            Plan::AllWords { top_fraction } => {
                format!("All-Words top {}%", trim_float(top_fraction * 100.0))
            }
            Plan::Llm {
                level: Level::Document,
            } => "LLM (document)".into(),
            Plan::Llm {
                level: Level::Sentence,
            } => "LLM (sentence)".into(),
            Plan::TwoStep(p) => match p.prune_min_size {
                Some(m) => format!("Two-step (min size {m})"),
                None => "Two-step".into(),
            },
            Plan::Random { edges } => format!("Random HG ({edges})"),
        }
    }
}

fn trim_float(x: f64) -> String {
    let s = format!("{x:.4}");
    s.trim_end_matches('0').trim_end_matches('.').to_owned()
}

struct Providers {
    chat: Box<dyn ChatModel>,
    embedder: Option<Box<dyn Embedder>>,
    max_concurrent: usize,
    mock: bool,
}

impl Providers {
    fn open(a: &ConstructArgs, stats: &TfIdfStats, tokenizer: &Tokenizer) -> Result<Providers> {
        if a.mock_providers {
            return Ok(Providers {
                chat: Box::new(TfIdfMockChat::new(stats.clone(), tokenizer.clone())),
                embedder: Some(Box::new(HashEmbedder::new(MOCK_EMBED_DIM, a.seed))),
                max_concurrent: MOCK_CONCURRENCY,
                mock: true,
            });
        }
        let path = a.provider_config.as_deref().expect("checked by Plan");
        let file = ProviderFile::load(path)?;
        let chat_cfg = file
            .chat
            .with_context(|| format!("{} has no [chat] table", path.display()))?;
        let max_concurrent = chat_cfg.max_concurrent;
        let embedder = match (a.method, file.embedding) {
            (Method::Twostep, None) => {
                bail!("{} has no [embedding] table", path.display())
            }
            (_, Some(cfg)) => Some(Box::new(HttpEmbedder::new(cfg)?) as Box<dyn Embedder>),
            (_, None) => None,
        };
        Ok(Providers {
            chat: Box::new(HttpChatModel::new(chat_cfg)?),
            embedder,
            max_concurrent,
            mock: false,
        })
    }

    fn models(&self) -> ProviderModels {
        ProviderModels {
            mock: self.mock,
            chat: Some(self.chat.model_name().to_owned()),
            embedding: self.embedder.as_ref().map(|e| e.model_name().to_owned()),
            prompt_version: PROMPT_VERSION.to_owned(),
        }
    }
}

pub struct Constructed {
    pub hot: TextHypergraph,
    pub manifest: Manifest,
}

/// Builds the hypergraph and its manifest without writing anything.
pub fn construct(a: &ConstructArgs) -> Result<Constructed> {
    let plan = Plan::from_args(a)?;
    let tokenizer = match &a.stopwords {
        Some(p) => Tokenizer::from_stopword_file(p)
            .with_context(|| format!("reading stopwords {}", p.display()))?,
        None => Tokenizer::default(),
    };
    let ingested = ingest_path(&a.corpus, &tokenizer)
        .with_context(|| format!("reading corpus {}", a.corpus.display()))?;
    let docs = &ingested.documents;
    if docs.is_empty() {
        bail!("corpus {} has no documents", a.corpus.display());
    }
    log::info!(
        "{} documents ({} empty skipped)",
        docs.len(),
        ingested.skipped_empty
    );
    let stats = TfIdfStats::from_documents(docs);
    if let Some(dir) = &a.cache_dir {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    }

    let started = Instant::now();
    let (hot, parameters, providers) = build(&plan, a, docs, &stats, &tokenizer)?;
    let wall_time_secs = started.elapsed().as_secs_f64();

    let manifest = Manifest {
        tool_version: env!("CARGO_PKG_VERSION").to_owned(),
        label: plan.label(),
        method: a.method.name().to_owned(),
        parameters,
        seed: a.seed,
        corpus: a.corpus.clone(),
        stopwords: a.stopwords.clone(),
        providers,
        documents: docs.len(),
        skipped_empty: ingested.skipped_empty,
        node_count: hot.node_count(),
        hyperedge_count: hot.hyperedge_count(),
        wall_time_secs,
    };
    Ok(Constructed { hot, manifest })
}

fn build(
    plan: &Plan,
    a: &ConstructArgs,
    docs: &[Document],
    stats: &TfIdfStats,
    tokenizer: &Tokenizer,
) -> Result<(TextHypergraph, Value, Option<ProviderModels>)> {
    Ok(match plan {
        Plan::AllWords { top_fraction } => {
            let hot = allwords::build(docs, stats, *top_fraction)?;
            (hot, json!({ "top_fraction": top_fraction }), None)
        }
        Plan::Random { edges } => {
            let mut hot = document_nodes(docs)?;
            add_random_hyperedges(&mut hot, *edges, a.seed)?;
            (hot, json!({ "edges": edges }), None)
        }
        Plan::Llm { level } => {
            let p = Providers::open(a, stats, tokenizer)?;
            let mut cache = match &a.cache_dir {
                Some(dir) => Some(llm::open_cache(dir.join(cache_name(*level)))?),
                None => None,
            };
            let hot = llm::build(docs, *level, &*p.chat, p.max_concurrent, cache.as_mut())?;
            (hot, json!({ "level": level }), Some(p.models()))
        }
        Plan::TwoStep(params) => {
            let p = Providers::open(a, stats, tokenizer)?;
            let params = TwoStepParams {
                max_concurrent: p.max_concurrent,
                ..params.clone()
            };
            let mut cache = match &a.cache_dir {
                Some(dir) => Some(twostep::open_cache(dir.join("pairs.jsonl"))?),
                None => None,
            };
            let embedder = p.embedder.as_deref().expect("twostep has an embedder");
            let out = twostep::build(docs, stats, &params, embedder, &*p.chat, cache.as_mut())?;
            if out.selection.shortfall > 0 {
                log::warn!(
                    "only {} of {} requested pairs were available",
                    out.selection.pairs.len(),
                    params.pair_budget(docs.len())
                );
            }
            let parameters = json!({
                "k_sentences": params.k_sentences,
                "k_pairs": params.pair_budget(docs.len()),
                "prune_min_size": params.prune_min_size,
                "pairs_selected": out.selection.pairs.len(),
                "candidates": out.candidates.len(),
            });
            (out.hot, parameters, Some(p.models()))
        }
    })
}

fn cache_name(level: Level) -> &'static str {
    match level {
        Level::Document => "llm-document.jsonl",
        Level::Sentence => "llm-sentence.jsonl",
    }
}

pub fn run(a: &ConstructArgs) -> Result<()> {
    let Constructed { hot, manifest } = construct(a)?;
    fs::create_dir_all(&a.out).with_context(|| format!("creating {}", a.out.display()))?;
    hot.save(a.out.join(HOT_FILE))
        .with_context(|| format!("writing {}", a.out.join(HOT_FILE).display()))?;
    let mut bytes = serde_json::to_vec_pretty(&manifest)?;
    bytes.push(b'\n');
    fs::write(a.out.join(MANIFEST_FILE), bytes)?;
    log::info!(
        "{}: {} nodes, {} hyperedges in {:.2}s -> {}",
        manifest.label,
        manifest.node_count,
        manifest.hyperedge_count,
        manifest.wall_time_secs,
        a.out.display()
    );
    Ok(())
}

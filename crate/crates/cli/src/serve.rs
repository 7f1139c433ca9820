//! Read-only JSON API over one loaded hypergraph, plus the UI bundle.

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;
use std::sync::Arc;

use anyhow::{Context, Result};
use axum::extract::{Path as UrlPath, Query, State};
use axum::http::StatusCode;
use axum::response::{Html, IntoResponse, Response};
use axum::routing::get;
use axum::{Json, Router};
use hotkit_core::{HyperedgeId, NodeId, TextHypergraph};
use serde::{Deserialize, Serialize};
use tower_http::services::{ServeDir, ServeFile};

use crate::args::ServeArgs;
use crate::construct::Manifest;
use crate::BindError;

const INDEX_HTML: &str = include_str!("../assets/index.html");
const DEFAULT_LIMIT: usize = 20;
const MAX_LIMIT: usize = 500;

pub struct ServeState {
    hot: TextHypergraph,
    label: String,
    incident: BTreeMap<NodeId, Vec<HyperedgeId>>,
}

impl ServeState {
    pub fn new(hot: TextHypergraph, label: impl Into<String>) -> Self {
        let mut incident: BTreeMap<NodeId, Vec<HyperedgeId>> = BTreeMap::new();
        for (eid, e) in hot.hyperedges() {
            for m in e.members() {
                incident.entry(m.clone()).or_default().push(eid.clone());
            }
        }
        ServeState {
            hot,
            label: label.into(),
            incident,
        }
    }

    fn edges_of(&self, node: &str) -> &[HyperedgeId] {
        self.incident.get(node).map_or(&[], Vec::as_slice)
    }

    fn node_ref(&self, id: &NodeId) -> NodeRef {
        NodeRef {
            id: id.to_string(),
            title: self
                .hot
                .node(id.as_str())
                .map(|n| n.title.clone())
                .unwrap_or_default(),
        }
    }

    fn edge_ref(&self, id: &HyperedgeId) -> EdgeRef {
        let e = self
            .hot
            .hyperedge(id.as_str())
            .expect("indexed edge exists");
        EdgeRef {
            id: id.to_string(),
            label: e.label.clone(),
            size: e.len(),
        }
    }
}

#[derive(Debug, Serialize, Deserialize, PartialEq)]
pub struct Meta {
    pub node_count: usize,
    pub edge_count: usize,
    pub label: String,
}

#[derive(Debug, Serialize, Deserialize, PartialEq)]
pub struct NodeRef {
    pub id: String,
    pub title: String,
}

#[derive(Debug, Serialize, Deserialize, PartialEq)]
pub struct EdgeRef {
    pub id: String,
    pub label: String,
    pub size: usize,
}

#[derive(Debug, Serialize, Deserialize, PartialEq)]
pub struct NodeView {
    pub id: String,
    pub title: String,
    pub text: String,
    pub hyperedges: Vec<EdgeRef>,
}

#[derive(Debug, Serialize, Deserialize, PartialEq)]
pub struct EdgeView {
    pub id: String,
    pub label: String,
    pub size: usize,
    pub members: Vec<NodeRef>,
}

#[derive(Debug, Serialize, Deserialize, PartialEq)]
pub struct SearchResults {
    pub query: String,
    pub nodes: Vec<NodeRef>,
    pub hyperedges: Vec<EdgeRef>,
}

#[derive(Debug, Serialize, Deserialize, PartialEq)]
pub struct NeighborGroup {
    pub hyperedge: EdgeRef,
    pub nodes: Vec<NodeRef>,
}

#[derive(Debug, Serialize, Deserialize, PartialEq)]
pub struct Neighbors {
    pub id: String,
    /// Distinct nodes one hop away.
    pub neighbor_count: usize,
    pub groups: Vec<NeighborGroup>,
}

pub struct ApiError(StatusCode, String);

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let body = serde_json::json!({ "error": self.1, "status": self.0.as_u16() });
        (self.0, Json(body)).into_response()
    }
}

fn not_found(what: &str, id: &str) -> ApiError {
    ApiError(StatusCode::NOT_FOUND, format!("no {what} with id `{id}`"))
}

type Shared = State<Arc<ServeState>>;

async fn meta(State(s): Shared) -> Json<Meta> {
    Json(Meta {
        node_count: s.hot.node_count(),
        edge_count: s.hot.hyperedge_count(),
        label: s.label.clone(),
    })
}

async fn node(State(s): Shared, UrlPath(id): UrlPath<String>) -> Result<Json<NodeView>, ApiError> {
    let n = s.hot.node(&id).ok_or_else(|| not_found("node", &id))?;
    Ok(Json(NodeView {
        title: n.title.clone(),
        text: n.text.clone(),
        hyperedges: s.edges_of(&id).iter().map(|e| s.edge_ref(e)).collect(),
        id,
    }))
}

async fn hyperedge(
    State(s): Shared,
    UrlPath(id): UrlPath<String>,
) -> Result<Json<EdgeView>, ApiError> {
    let e = s
        .hot
        .hyperedge(&id)
        .ok_or_else(|| not_found("hyperedge", &id))?;
    Ok(Json(EdgeView {
        label: e.label.clone(),
        size: e.len(),
        members: e.members().iter().map(|m| s.node_ref(m)).collect(),
        id,
    }))
}

async fn search(
    State(s): Shared,
    Query(p): Query<BTreeMap<String, String>>,
) -> Result<Json<SearchResults>, ApiError> {
    let raw = p.get("q").cloned().unwrap_or_default();
    let q = raw.trim().to_lowercase();
    if q.is_empty() {
        return Err(ApiError(
            StatusCode::BAD_REQUEST,
            "query parameter `q` is required".into(),
        ));
    }
    let limit = match p.get("limit") {
        None => DEFAULT_LIMIT,
        Some(l) => l.parse::<usize>().map_err(|_| {
            ApiError(
                StatusCode::BAD_REQUEST,
                format!("`limit` must be a non-negative integer, got `{l}`"),
            )
        })?,
    }
    .min(MAX_LIMIT);
    let nodes = s
        .hot
        .nodes()
        .filter(|(id, n)| {
            n.title.to_lowercase().contains(&q) || id.as_str().to_lowercase().contains(&q)
        })
        .take(limit)
        .map(|(id, _)| s.node_ref(id))
        .collect();
    let hyperedges = s
        .hot
        .hyperedges()
        .filter(|(_, e)| e.label.to_lowercase().contains(&q))
        .take(limit)
        .map(|(id, _)| s.edge_ref(id))
        .collect();
    Ok(Json(SearchResults {
        query: raw,
        nodes,
        hyperedges,
    }))
}

async fn neighbors(
    State(s): Shared,
    UrlPath(id): UrlPath<String>,
) -> Result<Json<Neighbors>, ApiError> {
    if !s.hot.contains_node(&id) {
        return Err(not_found("node", &id));
    }
    let mut all = BTreeSet::new();
    let groups = s
        .edges_of(&id)
        .iter()
        .filter_map(|eid| {
            let e = s.hot.hyperedge(eid.as_str())?;
            let nodes: Vec<NodeRef> = e
                .members()
                .iter()
                .filter(|m| m.as_str() != id)
                .inspect(|m| {
                    all.insert((*m).clone());
                })
                .map(|m| s.node_ref(m))
                .collect();
            (!nodes.is_empty()).then(|| NeighborGroup {
                hyperedge: s.edge_ref(eid),
                nodes,
            })
        })
        .collect();
    Ok(Json(Neighbors {
        neighbor_count: all.len(),
        groups,
        id,
    }))
}

async fn api_fallback() -> ApiError {
    ApiError(StatusCode::NOT_FOUND, "unknown endpoint".into())
}

async fn embedded_index() -> Html<&'static str> {
    Html(INDEX_HTML)
}

/// The full application. Non-API paths serve `ui_dir` with an
/// `index.html` fallback, or the built-in page.
pub fn router(state: Arc<ServeState>, ui_dir: Option<&Path>) -> Router {
    let api = Router::new()
        .route("/api/meta", get(meta))
        .route("/api/nodes/{id}", get(node))
        .route("/api/hyperedges/{id}", get(hyperedge))
        .route("/api/search", get(search))
        .route("/api/neighbors/{id}", get(neighbors))
        .route("/api", get(api_fallback))
        .route("/api/{*rest}", get(api_fallback))
        .with_state(state);
    match ui_dir {
        Some(dir) => api
            .fallback_service(ServeDir::new(dir).fallback(ServeFile::new(dir.join("index.html")))),
        None => api.fallback(embedded_index),
    }
}

fn resolve_label(a: &ServeArgs) -> String {
    a.label
        .clone()
        .or_else(|| Manifest::beside(&a.hot).map(|m| m.label))
        .unwrap_or_else(|| crate::evaluate::default_label(&a.hot))
}

pub fn run(a: &ServeArgs) -> Result<()> {
    let hot = TextHypergraph::load(&a.hot)
        .with_context(|| format!("reading hypergraph {}", a.hot.display()))?;
    if let Some(dir) = &a.ui_dir {
        if !dir.join("index.html").is_file() {
            anyhow::bail!("{} has no index.html", dir.display());
        }
    }
    let state = Arc::new(ServeState::new(hot, resolve_label(a)));
    let app = router(state, a.ui_dir.as_deref());
    let rt = tokio::runtime::Runtime::new()?;
    rt.block_on(async {
        let listener = tokio::net::TcpListener::bind(&a.bind)
            .await
            .map_err(|source| BindError {
                addr: a.bind.clone(),
                source,
            })?;
        log::info!("serving on http://{}", listener.local_addr()?);
        axum::serve(listener, app)
            .with_graceful_shutdown(async {
                let _ = tokio::signal::ctrl_c().await;
            })
            .await?;
        Ok(())
    })
}

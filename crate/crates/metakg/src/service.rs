//! Read-only JSON API over a finished working directory.

use std::collections::HashMap;
use std::net::SocketAddr;
use std::path::Path;
use std::sync::Arc;

use anyhow::{Context, Result};
use axum::extract::{Path as UrlPath, Query, Request, State};
use axum::http::{header, HeaderValue, Method, StatusCode};
use axum::middleware::{self, Next};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use metakg_core::embed::EmbeddingTable;
use metakg_core::mine::HornRule;
use metakg_core::model::LocalNamespace;
use metakg_core::store::{BgpQuery, TripleStore};
use serde_json::{json, Value};

use crate::api::{run_query, similar_nodes, RuleView, MAX_PATTERNS, MAX_ROWS};
use crate::catalog::Catalog;
use crate::pipeline::{load_embeddings, load_graph, load_rules};

pub struct AppState {
    pub store: TripleStore,
    pub catalog: Catalog,
    pub rules: Vec<HornRule>,
    pub embeddings: Option<EmbeddingTable>,
    pub ns: LocalNamespace,
}

impl AppState {
    pub fn load(graph: &Path, rules: Option<&Path>, embeddings: Option<&Path>, ns: LocalNamespace) -> Result<Self> {
        let store = load_graph(graph)?;
        let rules = rules.map(load_rules).transpose()?.unwrap_or_default();
        let embeddings = embeddings.map(load_embeddings).transpose()?;
        Ok(Self::new(store, rules, embeddings, ns))
    }

    pub fn new(
        store: TripleStore,
        rules: Vec<HornRule>,
        embeddings: Option<EmbeddingTable>,
        ns: LocalNamespace,
    ) -> Self {
        AppState { catalog: Catalog::from_store(&store, &ns), store, rules, embeddings, ns }
    }
}

type Shared = Arc<AppState>;

fn error(status: StatusCode, message: impl Into<String>) -> Response {
    (status, Json(json!({ "error": message.into() }))).into_response()
}

#[allow(clippy::result_large_err)]
fn param<T: std::str::FromStr>(params: &HashMap<String, String>, name: &str, default: T) -> Result<T, Response> {
    match params.get(name) {
        None => Ok(default),
        Some(v) => v.parse().map_err(|_| error(StatusCode::BAD_REQUEST, format!("{name} must be a positive integer"))),
    }
}

async fn list_datasets(State(state): State<Shared>, Query(params): Query<HashMap<String, String>>) -> Response {
    let (page, page_size) = match (param(&params, "page", 1usize), param(&params, "page_size", 20usize)) {
        (Ok(p), Ok(s)) => (p, s),
        (Err(r), _) | (_, Err(r)) => return r,
    };
    let q = params.get("q").map(String::as_str).unwrap_or("");
    let category = params.get("category").map(String::as_str).filter(|c| !c.is_empty());
    match state.catalog.search(q, category, page, page_size) {
        Ok(found) => Json(found).into_response(),
        Err(e) => error(StatusCode::BAD_REQUEST, e.0),
    }
}

async fn dataset(State(state): State<Shared>, UrlPath(id): UrlPath<String>) -> Response {
    match state.catalog.get(&id) {
        Some(d) => Json(d).into_response(),
        None => error(StatusCode::NOT_FOUND, format!("unknown dataset {id}")),
    }
}

async fn query(State(state): State<Shared>, body: String) -> Response {
    let value: Value = match serde_json::from_str(&body) {
        Ok(v) => v,
        Err(e) => return error(StatusCode::BAD_REQUEST, format!("malformed query: {e}")),
    };
    if let Some(n) = value.get("patterns").and_then(Value::as_array).map(Vec::len) {
        if n > MAX_PATTERNS {
            return error(StatusCode::PAYLOAD_TOO_LARGE, format!("{n} patterns exceed the limit of {MAX_PATTERNS}"));
        }
    }
    match BgpQuery::from_json_value(value) {
        Ok(q) => Json(run_query(&state.store, &q, MAX_ROWS)).into_response(),
        Err(e) => error(StatusCode::BAD_REQUEST, e.to_string()),
    }
}

async fn rules(State(state): State<Shared>) -> Response {
    Json(state.rules.iter().map(RuleView::from).collect::<Vec<_>>()).into_response()
}

async fn similar(
    State(state): State<Shared>,
    UrlPath(id): UrlPath<String>,
    Query(params): Query<HashMap<String, String>>,
) -> Response {
    let k = match param(&params, "k", 10usize) {
        Ok(k) => k,
        Err(r) => return r,
    };
    let Some(table) = &state.embeddings else {
        return error(StatusCode::SERVICE_UNAVAILABLE, "no embeddings have been computed");
    };
    if state.catalog.get(&id).is_none() {
        return error(StatusCode::NOT_FOUND, format!("unknown dataset {id}"));
    }
    match similar_nodes(table, &state.ns, &state.ns.dataset(&id), k, true) {
        Ok(hits) => Json(hits).into_response(),
        Err(e) => error(StatusCode::NOT_FOUND, e.to_string()),
    }
}

async fn cors(State(origin): State<HeaderValue>, req: Request, next: Next) -> Response {
    let mut resp =
        if req.method() == Method::OPTIONS { StatusCode::NO_CONTENT.into_response() } else { next.run(req).await };
    let h = resp.headers_mut();
    h.insert(header::ACCESS_CONTROL_ALLOW_ORIGIN, origin);
    h.insert(header::ACCESS_CONTROL_ALLOW_METHODS, HeaderValue::from_static("GET, POST, OPTIONS"));
    h.insert(header::ACCESS_CONTROL_ALLOW_HEADERS, HeaderValue::from_static("content-type"));
    resp
}

pub fn router(state: Arc<AppState>, cors_origin: &str) -> Result<Router> {
    let origin = HeaderValue::from_str(cors_origin).context("invalid CORS origin")?;
    Ok(Router::new()
        .route("/api/datasets", get(list_datasets))
        .route("/api/datasets/{id}", get(dataset))
        .route("/api/query", post(query))
        .route("/api/rules", get(rules))
        .route("/api/similar/{id}", get(similar))
        .with_state(state)
        .layer(middleware::from_fn_with_state(origin, cors)))
}

/// Serves until Ctrl-C.
pub async fn serve(app: Router, addr: SocketAddr) -> Result<()> {
    let listener = tokio::net::TcpListener::bind(addr).await.with_context(|| format!("cannot bind {addr}"))?;
    log::info!("listening on http://{}", listener.local_addr()?);
    axum::serve(listener, app)
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await?;
    Ok(())
}

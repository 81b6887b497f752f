//! HTTP service exposing the repository engine: asset CRUD, the six search
//! methods, the search-or-register workflow, pattern instantiation, and the
//! evaluation harness.
//!
//! Handlers never hold the repository lock across engine work: searches
//! clone the immutable snapshot under a brief read lock and run on it
//! afterwards, so writers are only ever blocked by the store's own I/O.

use std::collections::BTreeMap;
use std::sync::{Arc, RwLock};

use axum::extract::{Path, Query as UrlQuery, State};
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use serde_json::json;

use reuse_client::wire;
use reuse_core::engines::{QueryError, Tunables};
use reuse_core::eval::EvalError;
use reuse_core::minilang::{parse_expr_source, Bindings, HoleMode};
use reuse_core::model::ParseIdError;
use reuse_core::pipeline::{self, SearchRequest};
use reuse_core::store::{ListFilter, Snapshot, StoreError};
use reuse_core::{
    AssetId, AssetRecord, CorpusSpec, EvalOptions, PipelineOutcome, Query, Repository,
};

pub struct AppState {
    repo: RwLock<Repository>,
    tunables: Tunables,
}

impl AppState {
    pub fn new(repo: Repository, tunables: Tunables) -> AppState {
        AppState {
            repo: RwLock::new(repo),
            tunables,
        }
    }

    fn snapshot(&self) -> Arc<Snapshot> {
        self.repo.read().expect("repository lock poisoned").snapshot()
    }
}

/// Error envelope: every non-2xx response is `{"kind", "message"}`.
pub struct ApiError {
    status: StatusCode,
    kind: &'static str,
    message: String,
}

impl ApiError {
    fn new(status: StatusCode, kind: &'static str, message: impl Into<String>) -> ApiError {
        ApiError {
            status,
            kind,
            message: message.into(),
        }
    }

    fn bad_request(kind: &'static str, message: impl Into<String>) -> ApiError {
        ApiError::new(StatusCode::BAD_REQUEST, kind, message)
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let body = wire::ErrorBody {
            kind: self.kind.to_string(),
            message: self.message,
        };
        (self.status, Json(body)).into_response()
    }
}

impl From<StoreError> for ApiError {
    fn from(err: StoreError) -> ApiError {
        let message = err.to_string();
        match err {
            StoreError::UnknownId(_) => ApiError::new(StatusCode::NOT_FOUND, "unknown_id", message),
            StoreError::Conflict { .. } => ApiError::new(StatusCode::CONFLICT, "conflict", message),
            StoreError::Invalid(_) => {
                ApiError::new(StatusCode::UNPROCESSABLE_ENTITY, "validation", message)
            }
            StoreError::Busy(_) => ApiError::new(StatusCode::LOCKED, "busy", message),
            StoreError::MissingRepository(_) | StoreError::Corrupt { .. } | StoreError::Io(_) => {
                ApiError::new(StatusCode::INTERNAL_SERVER_ERROR, "store", message)
            }
        }
    }
}

impl From<QueryError> for ApiError {
    fn from(err: QueryError) -> ApiError {
        let message = err.to_string();
        match err {
            QueryError::UnknownId(_) => ApiError::new(StatusCode::NOT_FOUND, "unknown_id", message),
            QueryError::WrongKind { .. } => {
                ApiError::new(StatusCode::CONFLICT, "wrong_kind", message)
            }
            QueryError::EmptyQuery(_)
            | QueryError::InvalidSamples(_)
            | QueryError::BadShape(_)
            | QueryError::IncompleteBindings(_) => ApiError::bad_request("bad_query", message),
            QueryError::ContractViolation(_) => {
                ApiError::new(StatusCode::INTERNAL_SERVER_ERROR, "internal", message)
            }
        }
    }
}

impl From<EvalError> for ApiError {
    fn from(err: EvalError) -> ApiError {
        ApiError::bad_request("bad_eval", err.to_string())
    }
}

impl From<ParseIdError> for ApiError {
    fn from(err: ParseIdError) -> ApiError {
        ApiError::bad_request("bad_id", err.to_string())
    }
}

pub fn router(state: Arc<AppState>) -> Router {
    Router::new()
        .route("/health", get(health))
        .route("/config", get(server_config))
        .route("/assets", get(list_assets).post(add_asset))
        .route("/assets/:id", get(get_asset).delete(remove_asset))
        .route("/search", post(search_typed))
        .route("/search/auto", post(search_workflow))
        .route("/instantiate", post(instantiate))
        .route("/eval", post(run_eval))
        .route("/admin/rebuild-indexes", post(rebuild_indexes))
        .with_state(state)
}

async fn health(State(state): State<Arc<AppState>>) -> Json<wire::Health> {
    let record_count = state.snapshot().len();
    Json(wire::Health {
        status: "ok".to_string(),
        record_count,
    })
}

async fn server_config(State(state): State<Arc<AppState>>) -> Json<wire::ServerInfo> {
    let repository = state
        .repo
        .read()
        .expect("repository lock poisoned")
        .root()
        .display()
        .to_string();
    Json(wire::ServerInfo {
        repository,
        tunables: state.tunables.clone(),
    })
}

async fn list_assets(
    State(state): State<Arc<AppState>>,
    UrlQuery(filter): UrlQuery<ListFilter>,
) -> Json<Vec<AssetRecord>> {
    let records = state
        .repo
        .read()
        .expect("repository lock poisoned")
        .list_assets(&filter);
    Json(records.iter().map(|r| (**r).clone()).collect())
}

async fn add_asset(
    State(state): State<Arc<AppState>>,
    Json(body): Json<wire::AddAsset>,
) -> Result<(StatusCode, Json<wire::Added>), ApiError> {
    let id = blocking(move || {
        state
            .repo
            .write()
            .expect("repository lock poisoned")
            .add_asset(body.fields, body.id)
    })
    .await??;
    Ok((StatusCode::CREATED, Json(wire::Added { id })))
}

async fn get_asset(
    State(state): State<Arc<AppState>>,
    Path(id): Path<String>,
) -> Result<Json<AssetRecord>, ApiError> {
    let id: AssetId = id.parse()?;
    let record = state
        .repo
        .read()
        .expect("repository lock poisoned")
        .get_asset(id)?;
    Ok(Json((*record).clone()))
}

async fn remove_asset(
    State(state): State<Arc<AppState>>,
    Path(id): Path<String>,
) -> Result<Json<AssetRecord>, ApiError> {
    let id: AssetId = id.parse()?;
    let removed = blocking(move || {
        state
            .repo
            .write()
            .expect("repository lock poisoned")
            .remove_asset(id)
    })
    .await??;
    Ok(Json(removed))
}

async fn search_typed(
    State(state): State<Arc<AppState>>,
    Json(query): Json<Query>,
) -> Result<Json<wire::Hits>, ApiError> {
    let snapshot = state.snapshot();
    let tunables = state.tunables.clone();
    let hits = blocking(move || {
        pipeline::run_query(&snapshot, &query, &tunables)
    })
    .await??;
    Ok(Json(wire::Hits { hits }))
}

async fn search_workflow(
    State(state): State<Arc<AppState>>,
    Json(body): Json<wire::WorkflowSearch>,
) -> Result<Json<PipelineOutcome>, ApiError> {
    let request = match (body.query, body.raw) {
        (Some(query), None) => SearchRequest::Typed(query),
        (None, Some(text)) => {
            SearchRequest::raw(text, body.k.unwrap_or(state.tunables.default_k))
        }
        (Some(_), Some(_)) => {
            return Err(ApiError::bad_request(
                "bad_request",
                "send either `query` or `raw`, not both",
            ))
        }
        (None, None) => {
            return Err(ApiError::bad_request(
                "bad_request",
                "send one of `query` (typed) or `raw` (text)",
            ))
        }
    };
    let threshold = body
        .threshold
        .unwrap_or(state.tunables.acceptance_threshold);
    let snapshot = state.snapshot();
    let tunables = state.tunables.clone();
    let outcome = blocking(move || {
        pipeline::search_or_register(&snapshot, &request, threshold, &tunables)
    })
    .await??;
    Ok(Json(outcome))
}

async fn instantiate(
    State(state): State<Arc<AppState>>,
    Json(body): Json<wire::Instantiate>,
) -> Result<Json<wire::Instantiated>, ApiError> {
    let bindings = parse_bindings(&body.bindings)?;
    let snapshot = state.snapshot();
    let program =
        reuse_core::engines::retrieve_and_instantiate(&snapshot, body.id, &bindings)?;
    Ok(Json(wire::Instantiated { program }))
}

/// Bindings arrive as expression source; they must parse hole-free.
fn parse_bindings(raw: &BTreeMap<String, String>) -> Result<Bindings, ApiError> {
    let mut bindings = Bindings::new();
    for (hole, source) in raw {
        let expr = parse_expr_source(source, HoleMode::Forbid).map_err(|e| {
            ApiError::bad_request("bad_bindings", format!("binding {hole:?}: {e}"))
        })?;
        bindings.insert(hole.clone(), expr).map_err(|e| {
            ApiError::bad_request("bad_bindings", format!("binding {hole:?}: {e}"))
        })?;
    }
    Ok(bindings)
}

async fn run_eval(
    Json(body): Json<wire::EvalRequest>,
) -> Result<Json<reuse_core::EvaluationReport>, ApiError> {
    let spec = body.spec.unwrap_or_else(CorpusSpec::default);
    let seed = body.seed.unwrap_or(42);
    let options = body.options.unwrap_or_else(EvalOptions::default);
    let report = blocking(move || reuse_core::run_evaluation(&spec, seed, &options)).await??;
    Ok(Json(report))
}

async fn rebuild_indexes(
    State(state): State<Arc<AppState>>,
) -> Result<Json<wire::Rebuilt>, ApiError> {
    let stats = blocking(move || {
        state
            .repo
            .write()
            .expect("repository lock poisoned")
            .rebuild_indexes()
    })
    .await??;
    Ok(Json(wire::Rebuilt { stats }))
}

/// Run store I/O or engine work off the async executor.
async fn blocking<T: Send + 'static>(
    work: impl FnOnce() -> T + Send + 'static,
) -> Result<T, ApiError> {
    tokio::task::spawn_blocking(work).await.map_err(|e| {
        ApiError::new(
            StatusCode::INTERNAL_SERVER_ERROR,
            "internal",
            format!("worker failed: {e}"),
        )
    })
}

/// 404 for unknown routes, in the same envelope as every other error.
pub async fn fallback() -> ApiError {
    ApiError::new(StatusCode::NOT_FOUND, "no_route", "no such endpoint")
}

/// Build the full application router for a repository.
pub fn app(repo: Repository, tunables: Tunables) -> Router {
    router(Arc::new(AppState::new(repo, tunables))).fallback(fallback)
}

/// Smoke-level self description, used by main for startup logging.
pub fn describe(tunables: &Tunables) -> serde_json::Value {
    json!({
        "endpoints": [
            "GET /health",
            "GET /config",
            "GET /assets",
            "POST /assets",
            "GET /assets/{id}",
            "DELETE /assets/{id}",
            "POST /search",
            "POST /search/auto",
            "POST /instantiate",
            "POST /eval",
            "POST /admin/rebuild-indexes",
        ],
        "tunables": tunables,
    })
}

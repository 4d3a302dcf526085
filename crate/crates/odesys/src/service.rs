//! HTTP API over the store.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use axum::body::Bytes;
use axum::extract::{Path, Query, State};
use axum::http::{header, HeaderValue, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post, put};
use axum::{Json, Router};
use odesys_core::baselines::{evaluate_alternatives, MethodLabel};
use odesys_core::error::SolverError;
use odesys_core::{GaConfig, HookRegistry, Problem};
use serde::{Deserialize, Serialize};
use tokio::sync::Semaphore;

use crate::document::{from_json_str, DocumentError, PreferencesUpdate, ProblemDocument};
use crate::runner::{diagnostics_jsonl, execute, Method, ResultDocument};
use crate::store::{now_ms, RunFailure, RunRecord, RunStatus, Store, StoreError};

/// Runs that may be queued or executing at once.
pub const DEFAULT_QUEUE_CAPACITY: usize = 4;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErrorBody {
    pub code: String,
    pub message: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub path: Option<String>,
}

#[derive(Debug)]
pub struct ApiError {
    pub status: StatusCode,
    pub body: ErrorBody,
}

impl ApiError {
    pub fn new(status: StatusCode, code: &str, message: impl Into<String>) -> Self {
        Self { status, body: ErrorBody { code: code.into(), message: message.into(), path: None } }
    }

    fn with_path(mut self, path: Option<String>) -> Self {
        self.body.path = path.filter(|p| !p.is_empty() && p != ".");
        self
    }

    fn not_found(what: &str, id: &str) -> Self {
        Self::new(StatusCode::NOT_FOUND, "not_found", format!("unknown {what} `{id}`"))
    }

    fn invalid(code: &str, message: impl Into<String>) -> Self {
        Self::new(StatusCode::UNPROCESSABLE_ENTITY, code, message)
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.status, Json(self.body)).into_response()
    }
}

impl From<DocumentError> for ApiError {
    fn from(e: DocumentError) -> Self {
        let path = e.path().map(str::to_string);
        Self::invalid(e.code(), e.to_string()).with_path(path)
    }
}

impl From<StoreError> for ApiError {
    fn from(e: StoreError) -> Self {
        match e {
            StoreError::InvalidId(id) => Self::new(StatusCode::NOT_FOUND, "not_found", format!("invalid id `{id}`")),
            other => {
                log::error!("store failure: {other}");
                Self::new(StatusCode::INTERNAL_SERVER_ERROR, "store_error", other.to_string())
            }
        }
    }
}

/// Machine-readable code for a solver failure.
pub fn solver_error_code(e: &SolverError) -> &'static str {
    match e {
        SolverError::Config(_) => "invalid_config",
        SolverError::SeedDimension { .. } => "invalid_seed",
        SolverError::NoFeasiblePoint => "no_feasible_point",
        SolverError::UnknownObjective(_) => "unknown_objective",
        SolverError::GridTooLarge { .. } => "grid_too_large",
        SolverError::TooFewAlternatives { .. } => "too_few_alternatives",
        SolverError::Evaluation(_) => "evaluation_error",
        SolverError::Aggregation(_) => "aggregation_error",
    }
}

impl From<SolverError> for ApiError {
    fn from(e: SolverError) -> Self {
        Self::invalid(solver_error_code(&e), e.to_string())
    }
}

type ApiResult<T> = Result<T, ApiError>;

struct Inner {
    store: Store,
    registry: HookRegistry,
    permits: Arc<Semaphore>,
    /// Queued or running runs per problem. Held while checking it and
    /// writing to the store, which makes this the single writer lock.
    active: Mutex<HashMap<String, usize>>,
}

#[derive(Clone)]
pub struct AppState(Arc<Inner>);

impl AppState {
    pub fn new(store: Store) -> Self {
        Self::with_capacity(store, DEFAULT_QUEUE_CAPACITY)
    }

    pub fn with_capacity(store: Store, capacity: usize) -> Self {
        Self(Arc::new(Inner {
            store,
            registry: HookRegistry::with_builtins(),
            permits: Arc::new(Semaphore::new(capacity)),
            active: Mutex::new(HashMap::new()),
        }))
    }

    fn writer(&self) -> std::sync::MutexGuard<'_, HashMap<String, usize>> {
        self.0.active.lock().unwrap_or_else(|e| e.into_inner())
    }

    fn problem(&self, id: &str) -> ApiResult<ProblemDocument> {
        self.0.store.load_problem(id)?.ok_or_else(|| ApiError::not_found("problem", id))
    }

    fn build(&self, doc: &ProblemDocument) -> ApiResult<Problem> {
        Ok(doc.build(&self.0.registry)?)
    }
}

pub fn router(state: AppState) -> Router {
    Router::new()
        .route("/problems", get(list_problems))
        .route("/problems/{id}", get(get_problem))
        .route("/problems/{id}/preferences", put(put_preferences))
        .route("/runs", post(create_run).get(list_runs))
        .route("/runs/{id}", get(get_run))
        .route("/runs/{id}/result", get(get_result))
        .route("/runs/{id}/diagnostics", get(get_diagnostics))
        .route("/evaluate", post(evaluate))
        .with_state(state)
}

fn parse_body<T: serde::de::DeserializeOwned>(body: &Bytes) -> ApiResult<T> {
    let text = std::str::from_utf8(body).map_err(|_| ApiError::invalid("schema_error", "body is not UTF-8"))?;
    Ok(from_json_str(text)?)
}

#[derive(Debug, Serialize)]
struct ProblemSummary {
    id: String,
    name: String,
}

async fn list_problems(State(state): State<AppState>) -> ApiResult<Json<Vec<ProblemSummary>>> {
    let mut out = Vec::new();
    for id in state.0.store.list_problems()? {
        let doc = state.problem(&id)?;
        out.push(ProblemSummary { id, name: doc.name });
    }
    Ok(Json(out))
}

fn document_response(doc: &ProblemDocument) -> Response {
    let mut response = Json(doc).into_response();
    if let Ok(v) = HeaderValue::from_str(&doc.hash()) {
        response.headers_mut().insert("x-problem-hash", v);
    }
    response
}

async fn get_problem(State(state): State<AppState>, Path(id): Path<String>) -> ApiResult<Response> {
    Ok(document_response(&state.problem(&id)?))
}

async fn put_preferences(State(state): State<AppState>, Path(id): Path<String>, body: Bytes) -> ApiResult<Response> {
    let update: PreferencesUpdate = parse_body(&body)?;
    let active = state.writer();
    let doc = state.problem(&id)?;
    if active.get(&id).copied().unwrap_or(0) > 0 {
        return Err(ApiError::new(
            StatusCode::CONFLICT,
            "run_in_progress",
            format!("problem `{id}` has a queued or running run"),
        ));
    }
    let updated = doc.with_preferences(update);
    state.build(&updated)?;
    state.0.store.save_problem(&id, &updated)?;
    drop(active);
    Ok(document_response(&updated))
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RunRequest {
    problem_id: String,
    method: String,
    #[serde(default)]
    config: GaConfig,
    #[serde(default)]
    seeds: Vec<Vec<f64>>,
}

async fn create_run(State(state): State<AppState>, body: Bytes) -> ApiResult<Response> {
    let request: RunRequest = parse_body(&body)?;
    let doc = state.problem(&request.problem_id)?;
    let problem = state.build(&doc)?;
    let method: Method = request.method.parse().map_err(|m: String| ApiError::invalid("invalid_method", m).with_path(Some("method".into())))?;
    if let Method::Sodo { objective, .. } = &method {
        if problem.objective_index(objective).is_none() {
            return Err(ApiError::invalid("unknown_objective", format!("unknown objective `{objective}`"))
                .with_path(Some("method".into())));
        }
    }
    request.config.validate().map_err(|e| ApiError::from(e).with_path(Some("config".into())))?;
    for (i, seed) in request.seeds.iter().enumerate() {
        if seed.len() != problem.dimension() {
            return Err(ApiError::invalid(
                "invalid_seed",
                format!("seed {i} has {} values, expected {}", seed.len(), problem.dimension()),
            )
            .with_path(Some(format!("seeds[{i}]"))));
        }
    }
    let permit = state
        .0
        .permits
        .clone()
        .try_acquire_owned()
        .map_err(|_| ApiError::new(StatusCode::SERVICE_UNAVAILABLE, "queue_full", "the run queue is full"))?;

    let hash = doc.hash();
    let record = RunRecord {
        id: uuid::Uuid::new_v4().simple().to_string(),
        problem_id: request.problem_id.clone(),
        problem_hash: hash.clone(),
        method: method.to_string(),
        config: request.config.clone(),
        seeds: request.seeds.clone(),
        status: RunStatus::Queued,
        created_ms: now_ms(),
        finished_ms: None,
        result: None,
        error: None,
    };
    {
        let mut active = state.writer();
        state.0.store.save_run(&record)?;
        *active.entry(record.problem_id.clone()).or_default() += 1;
    }

    let worker_state = state.clone();
    let mut run = record.clone();
    tokio::spawn(async move {
        let _permit = permit;
        run.status = RunStatus::Running;
        if let Err(e) = worker_state.0.store.save_run(&run) {
            log::error!("run {}: {e}", run.id);
        }
        let (config, seeds) = (request.config, request.seeds);
        let job_method = method.clone();
        let outcome = tokio::task::spawn_blocking(move || {
            execute(&problem, &job_method, &config, &seeds)
                .map(|result| (ResultDocument::new(&problem, &hash, &job_method, &config, &result), result.history))
        })
        .await;
        let mut active = worker_state.writer();
        run.finished_ms = Some(now_ms());
        match outcome {
            Ok(Ok((result, history))) => {
                if let Err(e) = worker_state.0.store.save_result(&run.id, &result.to_bytes(), &diagnostics_jsonl(&history)) {
                    log::error!("run {}: {e}", run.id);
                }
                run.status = RunStatus::Done;
                run.result = Some(result);
            }
            Ok(Err(e)) => {
                run.status = RunStatus::Failed;
                run.error = Some(RunFailure { code: solver_error_code(&e).into(), message: e.to_string() });
            }
            Err(e) => {
                run.status = RunStatus::Failed;
                run.error = Some(RunFailure { code: "worker_panic".into(), message: e.to_string() });
            }
        }
        if let Err(e) = worker_state.0.store.save_run(&run) {
            log::error!("run {}: {e}", run.id);
        }
        if let Some(n) = active.get_mut(&run.problem_id) {
            *n -= 1;
            if *n == 0 {
                active.remove(&run.problem_id);
            }
        }
    });

    let mut response = (StatusCode::ACCEPTED, Json(&record)).into_response();
    if let Ok(v) = HeaderValue::from_str(&format!("/runs/{}", record.id)) {
        response.headers_mut().insert(header::LOCATION, v);
    }
    Ok(response)
}

async fn get_run(State(state): State<AppState>, Path(id): Path<String>) -> ApiResult<Json<RunRecord>> {
    state.0.store.load_run(&id)?.map(Json).ok_or_else(|| ApiError::not_found("run", &id))
}

#[derive(Debug, Deserialize)]
struct RunsQuery {
    problem_id: Option<String>,
}

async fn list_runs(State(state): State<AppState>, Query(q): Query<RunsQuery>) -> ApiResult<Json<Vec<RunRecord>>> {
    if let Some(p) = &q.problem_id {
        state.problem(p)?;
    }
    Ok(Json(state.0.store.list_runs(q.problem_id.as_deref())?))
}

fn stored_bytes(bytes: Option<Vec<u8>>, id: &str, content_type: &'static str) -> ApiResult<Response> {
    let bytes = bytes.ok_or_else(|| ApiError::not_found("result for run", id))?;
    Ok(([(header::CONTENT_TYPE, content_type)], bytes).into_response())
}

/// The exact bytes of the run's `result.json`.
async fn get_result(State(state): State<AppState>, Path(id): Path<String>) -> ApiResult<Response> {
    stored_bytes(state.0.store.load_result(&id)?, &id, "application/json")
}

async fn get_diagnostics(State(state): State<AppState>, Path(id): Path<String>) -> ApiResult<Response> {
    stored_bytes(state.0.store.load_diagnostics(&id)?, &id, "application/jsonl")
}

/// A design to evaluate: a bare vector or a labelled one.
#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum DesignInput {
    Bare(Vec<f64>),
    Labelled {
        #[serde(default)]
        method: Option<MethodLabel>,
        x: Vec<f64>,
    },
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct EvaluateRequest {
    problem_id: String,
    designs: Vec<DesignInput>,
}

async fn evaluate(State(state): State<AppState>, body: Bytes) -> ApiResult<Response> {
    let request: EvaluateRequest = parse_body(&body)?;
    let doc = state.problem(&request.problem_id)?;
    let problem = state.build(&doc)?;
    let alternatives: Vec<(MethodLabel, Vec<f64>)> = request
        .designs
        .into_iter()
        .enumerate()
        .map(|(i, d)| match d {
            DesignInput::Bare(x) => (MethodLabel::Manual(format!("design{}", i + 1)), x),
            DesignInput::Labelled { method, x } => {
                (method.unwrap_or_else(|| MethodLabel::Manual(format!("design{}", i + 1))), x)
            }
        })
        .collect();
    for (i, (_, x)) in alternatives.iter().enumerate() {
        problem
            .check(x)
            .map_err(|e| ApiError::invalid("invalid_design", e.to_string()).with_path(Some(format!("designs[{i}]"))))?;
    }
    let table = tokio::task::spawn_blocking(move || evaluate_alternatives(&problem, &alternatives))
        .await
        .map_err(|e| ApiError::new(StatusCode::INTERNAL_SERVER_ERROR, "worker_panic", e.to_string()))??;
    Ok(Json(table).into_response())
}

/// Serves until Ctrl-C.
pub async fn serve(listener: tokio::net::TcpListener, state: AppState) -> std::io::Result<()> {
    axum::serve(listener, router(state))
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await
}

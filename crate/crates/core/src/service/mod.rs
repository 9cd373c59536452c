//! HTTP API over the decision engine.
//!
//! Readers take an `Arc` snapshot of the knowledge base and never block on
//! writers; commits are serialized and swap in a new snapshot atomically.
//! Every response carries the `x-kb-version` header of the snapshot it used.

mod error;
mod record;

use std::fs::{File, OpenOptions};
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::sync::{Arc, Mutex, RwLock};

use axum::body::Bytes;
use axum::extract::{Query, Request, State};
use axum::http::{header, HeaderValue, StatusCode};
use axum::middleware::{self, Next};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::Router;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::af::{extensions, parse_apx, Semantics};
use crate::coach::{coach_rule, kb_append_entry, load_kb_file, CoachError};
use crate::domain::RequestContext;
use crate::dsl::{parse_entries, parse_scenario};
use crate::fixtures::BUNDLED_SCENARIOS;
use crate::rules::{decide, KbEntry, KnowledgeBase};
use crate::scenarios::{run_fixtures, LoadedFixture};

pub use error::{ApiError, ErrorCode};
pub use record::{replay_decisions, DecisionRecord, ReplayMismatch, ReplayReport};

pub const KB_VERSION_HEADER: &str = "x-kb-version";

pub struct AppState {
    kb: RwLock<Arc<KnowledgeBase>>,
    kb_log: Option<PathBuf>,
    writer: tokio::sync::Mutex<()>,
    decision_log: Option<Mutex<File>>,
}

impl AppState {
    /// Commits live in memory only.
    pub fn in_memory(kb: KnowledgeBase) -> Self {
        Self {
            kb: RwLock::new(Arc::new(kb)),
            kb_log: None,
            writer: tokio::sync::Mutex::new(()),
            decision_log: None,
        }
    }

    /// Backed by an append-only log; commits are appended to it.
    pub fn with_kb_log(path: &Path) -> Result<Self, CoachError> {
        let mut state = Self::in_memory(load_kb_file(path)?);
        state.kb_log = Some(path.to_path_buf());
        Ok(state)
    }

    /// Records every successful decision as one JSON line.
    pub fn with_decision_log(mut self, path: &Path) -> std::io::Result<Self> {
        let file = OpenOptions::new().create(true).append(true).open(path)?;
        self.decision_log = Some(Mutex::new(file));
        Ok(self)
    }

    pub fn snapshot(&self) -> Arc<KnowledgeBase> {
        self.kb.read().expect("kb lock poisoned").clone()
    }

    fn swap(&self, kb: KnowledgeBase) {
        *self.kb.write().expect("kb lock poisoned") = Arc::new(kb);
    }

    fn record(&self, rec: &DecisionRecord) -> std::io::Result<()> {
        if let Some(log) = &self.decision_log {
            let mut line = serde_json::to_string(rec).expect("record serializes");
            line.push('\n');
            log.lock().expect("decision log poisoned").write_all(line.as_bytes())?;
        }
        Ok(())
    }
}

type Shared = Arc<AppState>;

pub fn router(state: Shared) -> Router {
    Router::new()
        .route("/v1/decide", post(decide_handler))
        .route("/v1/kb", get(kb_handler))
        .route("/v1/kb/rules", post(rules_handler))
        .route("/v1/scenarios", get(scenarios_handler))
        .route("/v1/scenarios/run", post(scenarios_run_handler))
        .route("/v1/af/solve", post(af_solve_handler))
        .layer(middleware::from_fn_with_state(state.clone(), version_header))
        .with_state(state)
}

pub async fn serve(listener: tokio::net::TcpListener, state: Shared) -> std::io::Result<()> {
    axum::serve(listener, router(state))
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await
}

/// Fills in the header for responses that did not set it from a snapshot.
async fn version_header(State(state): State<Shared>, req: Request, next: Next) -> Response {
    let mut res = next.run(req).await;
    if !res.headers().contains_key(KB_VERSION_HEADER) {
        let v = HeaderValue::from(state.snapshot().version());
        res.headers_mut().insert(KB_VERSION_HEADER, v);
    }
    res
}

fn json_response(version: u64, status: StatusCode, body: String) -> Response {
    (
        status,
        [
            (header::CONTENT_TYPE, HeaderValue::from_static("application/json")),
            (
                header::HeaderName::from_static(KB_VERSION_HEADER),
                HeaderValue::from(version),
            ),
        ],
        body,
    )
        .into_response()
}

fn parse_body<T: for<'de> Deserialize<'de>>(body: &Bytes) -> Result<T, ApiError> {
    serde_json::from_slice(body).map_err(|e| ApiError::new(ErrorCode::BadRequest, e.to_string()))
}

async fn decide_handler(State(state): State<Shared>, body: Bytes) -> Result<Response, ApiError> {
    let ctx: RequestContext = parse_body(&body)?;
    let kb = state.snapshot();
    let decision = decide(ctx.clone(), &kb)?;
    state
        .record(&DecisionRecord {
            kb_version: kb.version(),
            context: ctx,
            decision_sha256: decision.sha256(),
        })
        .map_err(|e| ApiError::new(ErrorCode::Internal, format!("decision log: {e}")))?;
    Ok(json_response(kb.version(), StatusCode::OK, decision.to_json()))
}

async fn kb_handler(State(state): State<Shared>) -> Response {
    let kb = state.snapshot();
    let body = json!({ "version": kb.version(), "text": crate::dsl::emit_kb(&kb) });
    json_response(kb.version(), StatusCode::OK, body.to_string())
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RuleSubmission {
    rule: String,
    #[serde(default)]
    context: Option<RequestContext>,
    #[serde(default)]
    author: Option<String>,
    #[serde(default)]
    base_version: Option<u64>,
}

#[derive(Debug, Deserialize)]
struct RulesQuery {
    #[serde(default)]
    preview: Option<String>,
}

impl RulesQuery {
    fn is_preview(&self) -> bool {
        matches!(self.preview.as_deref(), Some("1" | "true"))
    }
}

fn single_entry(text: &str) -> Result<KbEntry, ApiError> {
    let mut entries = parse_entries(text)?;
    if entries.len() != 1 {
        return Err(ApiError::new(
            ErrorCode::BadRequest,
            format!("expected exactly one rule or topic block, found {}", entries.len()),
        ));
    }
    Ok(entries.pop().expect("one entry").node)
}

async fn rules_handler(
    State(state): State<Shared>,
    Query(q): Query<RulesQuery>,
    body: Bytes,
) -> Result<Response, ApiError> {
    let sub: RuleSubmission = parse_body(&body)?;
    let entry = single_entry(&sub.rule)?;

    if q.is_preview() {
        let KbEntry::Rule(rule) = entry else {
            return Err(ApiError::new(ErrorCode::BadRequest, "preview needs an argument block"));
        };
        let ctx = sub
            .context
            .ok_or_else(|| ApiError::new(ErrorCode::BadRequest, "preview needs a context"))?;
        let kb = state.snapshot();
        let step = coach_rule(ctx, &kb, rule)?;
        let body = serde_json::to_string(&step).expect("step serializes");
        return Ok(json_response(kb.version(), StatusCode::OK, body));
    }

    let _guard = state.writer.lock().await;
    let current = state.snapshot();
    if let Some(base) = sub.base_version {
        if base != current.version() {
            return Err(ApiError::new(
                ErrorCode::KbConflict,
                format!("base version {base} is stale; current version is {}", current.version()),
            ));
        }
    }
    let mut next = (*current).clone();
    next.apply(entry.clone())
        .map_err(|e| ApiError::new(ErrorCode::BadRequest, e.to_string()))?;
    if let Some(path) = state.kb_log.clone() {
        let author = sub.author.unwrap_or_else(|| "api".to_string());
        let version = tokio::task::spawn_blocking(move || kb_append_entry(&path, entry, &author))
            .await
            .map_err(|e| ApiError::new(ErrorCode::Internal, e.to_string()))??;
        debug_assert_eq!(version, next.version());
    }
    let version = next.version();
    state.swap(next);
    tracing::info!(version, "knowledge base updated");
    let body = json!({ "version": version, "previous_version": current.version() });
    Ok(json_response(version, StatusCode::CREATED, body.to_string()))
}

fn bundled() -> Vec<LoadedFixture> {
    BUNDLED_SCENARIOS
        .iter()
        .flat_map(|(file, text)| {
            parse_scenario(text)
                .expect("bundled fixtures parse")
                .into_iter()
                .map(|fixture| LoadedFixture {
                    file: file.to_string(),
                    fixture,
                })
        })
        .collect()
}

async fn scenarios_handler(State(state): State<Shared>) -> Response {
    let version = state.snapshot().version();
    let body = json!({ "fixtures": bundled() });
    json_response(version, StatusCode::OK, body.to_string())
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct ScenarioRun {
    #[serde(default)]
    fixtures: Option<String>,
}

async fn scenarios_run_handler(State(state): State<Shared>, body: Bytes) -> Result<Response, ApiError> {
    let run: ScenarioRun = if body.is_empty() {
        ScenarioRun::default()
    } else {
        parse_body(&body)?
    };
    let fixtures = match run.fixtures {
        None => bundled(),
        Some(text) => parse_scenario(&text)?
            .into_iter()
            .map(|fixture| LoadedFixture {
                file: "request".to_string(),
                fixture,
            })
            .collect(),
    };
    let kb = state.snapshot();
    let report = run_fixtures(&fixtures, &kb);
    Ok(json_response(kb.version(), StatusCode::OK, report.to_json()))
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct SolveRequest {
    apx: String,
    semantics: String,
}

#[derive(Serialize)]
struct SolveResponse {
    semantics: Semantics,
    extensions: Vec<Vec<String>>,
}

async fn af_solve_handler(body: Bytes) -> Result<Response, ApiError> {
    let req: SolveRequest = parse_body(&body)?;
    let semantics: Semantics = req
        .semantics
        .parse()
        .map_err(|e: String| ApiError::new(ErrorCode::BadRequest, e))?;
    let af = parse_apx(&req.apx)?;
    let exts = extensions(&af, semantics)?;
    let body = SolveResponse {
        semantics,
        extensions: exts
            .into_iter()
            .map(|e| e.into_iter().map(|a| a.to_string()).collect())
            .collect(),
    };
    Ok((
        StatusCode::OK,
        [(header::CONTENT_TYPE, "application/json")],
        serde_json::to_string(&body).expect("solve serializes"),
    )
        .into_response())
}

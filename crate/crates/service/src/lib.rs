//! HTTP API over one hot-replaceable risk model.
//!
//! Every response carries the revision it was computed against in the
//! `x-model-revision` header. Reads work on an immutable snapshot; `PUT
//! /api/model` builds the new model first and then swaps the snapshot.

use std::net::SocketAddr;
use std::path::PathBuf;
use std::sync::{Arc, RwLock};

use axum::body::Bytes;
use axum::extract::{Path, Query, State};
use axum::http::{header, HeaderValue, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::get;
use axum::{Json, Router};
use serde::Serialize;
use serde_json::{json, Value};
use tower_http::services::ServeDir;

use ndpolar_core::aggregation::{walk_with, WalkOptions};
use ndpolar_core::render::render;
use ndpolar_core::report::{aggregate_report, slice_report};
use ndpolar_core::rules::lint_rules;
use ndpolar_core::{
    layout, Error, ModelDocument, PartialSlice, RenderSpec, RiskModel, RiskPosition, SliceSelector, View,
};

pub const REVISION_HEADER: &str = "x-model-revision";

/// One immutable model version.
#[derive(Debug)]
pub struct Snapshot {
    pub model: RiskModel,
    pub revision: u64,
}

#[derive(Clone)]
pub struct AppState {
    current: Arc<RwLock<Arc<Snapshot>>>,
}

impl AppState {
    pub fn new(model: RiskModel) -> Self {
        Self {
            current: Arc::new(RwLock::new(Arc::new(Snapshot { model, revision: 1 }))),
        }
    }

    pub fn snapshot(&self) -> Arc<Snapshot> {
        self.current.read().unwrap_or_else(|e| e.into_inner()).clone()
    }

    /// Installs `model` as the next revision and returns that revision.
    pub fn replace(&self, model: RiskModel) -> u64 {
        let mut slot = self.current.write().unwrap_or_else(|e| e.into_inner());
        let revision = slot.revision + 1;
        *slot = Arc::new(Snapshot { model, revision });
        revision
    }
}

pub fn router(state: AppState) -> Router {
    Router::new()
        .route("/api/model", get(get_model).put(put_model))
        .route("/api/slice", get(get_slice))
        .route("/api/aggregate", get(get_aggregate))
        .route("/api/walk", get(get_walk))
        .route("/api/violations", get(get_violations))
        .route("/api/layout", get(get_layout))
        .route("/api/render/{file}", get(get_render))
        .with_state(state)
}

/// Router plus static files from `ui_dir` for every non-API path.
pub fn app(state: AppState, ui_dir: Option<PathBuf>) -> Router {
    let api = router(state);
    match ui_dir {
        Some(dir) => api.fallback_service(ServeDir::new(dir)),
        None => api,
    }
}

pub async fn serve(model: RiskModel, addr: SocketAddr, ui_dir: Option<PathBuf>) -> std::io::Result<()> {
    let listener = tokio::net::TcpListener::bind(addr).await?;
    eprintln!("ndpolar: serving `{}` on http://{}", model.name(), listener.local_addr()?);
    axum::serve(listener, app(AppState::new(model), ui_dir)).await
}

type Params = Query<Vec<(String, String)>>;

struct ApiError {
    status: StatusCode,
    body: Value,
}

impl ApiError {
    fn bad_request(message: impl Into<String>) -> Self {
        Self {
            status: StatusCode::BAD_REQUEST,
            body: json!({ "error": { "code": "E_QUERY", "message": message.into() } }),
        }
    }

    fn from_query(err: Error) -> Self {
        let status = if err.is_unknown_reference() {
            StatusCode::NOT_FOUND
        } else {
            StatusCode::BAD_REQUEST
        };
        Self {
            status,
            body: json!({ "error": error_json(&err) }),
        }
    }
}

fn error_json(err: &Error) -> Value {
    let mut v = json!({ "code": err.code(), "message": err.to_string() });
    if let Error::NonTotal { examples, count } = err {
        v["uncovered"] = json!(examples);
        v["uncovered_count"] = json!(count);
    }
    v
}

fn with_revision(revision: u64, mut response: Response) -> Response {
    response
        .headers_mut()
        .insert(REVISION_HEADER, HeaderValue::from(revision));
    response
}

fn reply<T: Serialize>(snap: &Snapshot, result: Result<T, ApiError>) -> Response {
    let response = match result {
        Ok(body) => Json(body).into_response(),
        Err(e) => (e.status, Json(e.body)).into_response(),
    };
    with_revision(snap.revision, response)
}

/// Query parameters that are not context axis names.
const RESERVED: [&str; 9] = [
    "risk", "vary", "state", "grids", "width", "height", "theta0_deg", "labels", "thresholds",
];

fn param<'a>(params: &'a [(String, String)], key: &str) -> Option<&'a str> {
    params.iter().rev().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
}

fn partial_slice(model: &RiskModel, params: &[(String, String)]) -> Result<PartialSlice, ApiError> {
    let mut partial = PartialSlice::default();
    for (k, v) in params {
        if RESERVED.contains(&k.as_str()) {
            continue;
        }
        partial.set_text(model.space(), k, v).map_err(ApiError::from_query)?;
    }
    Ok(partial)
}

fn selection(model: &RiskModel, params: &[(String, String)]) -> Result<SliceSelector, ApiError> {
    partial_slice(model, params)?
        .complete(model.space(), model.default_slice())
        .map_err(ApiError::from_query)
}

fn risk(model: &RiskModel, params: &[(String, String)]) -> Result<RiskPosition, ApiError> {
    match param(params, "risk") {
        Some(text) => RiskPosition::parse(model.space(), text).map_err(ApiError::from_query),
        None => model
            .risk()
            .ok_or_else(|| ApiError::bad_request("`risk=L,I` is required: the model has no default risk position")),
    }
}

fn flag(params: &[(String, String)], key: &str, default: bool) -> Result<bool, ApiError> {
    match param(params, key) {
        None => Ok(default),
        Some("true" | "1") => Ok(true),
        Some("false" | "0") => Ok(false),
        Some(other) => Err(ApiError::bad_request(format!("`{key}` must be true or false, got `{other}`"))),
    }
}

fn number<T: std::str::FromStr>(params: &[(String, String)], key: &str) -> Result<Option<T>, ApiError> {
    param(params, key)
        .map(|v| {
            v.parse()
                .map_err(|_| ApiError::bad_request(format!("`{key}` must be a number, got `{v}`")))
        })
        .transpose()
}

async fn get_model(State(state): State<AppState>) -> Response {
    let snap = state.snapshot();
    let document = ModelDocument::from_model(&snap.model);
    reply(&snap, Ok(json!({ "revision": snap.revision, "document": document })))
}

async fn put_model(State(state): State<AppState>, body: Bytes) -> Response {
    let text = match std::str::from_utf8(&body) {
        Ok(t) => t,
        Err(_) => {
            let snap = state.snapshot();
            let err = Error::Schema("request body is not UTF-8".into());
            return invalid_model(&snap, &err);
        }
    };
    match ndpolar_core::load_model(text) {
        Ok(model) => {
            let diagnostics = lint_rules(model.assignment().assignment(), model.space(), model.scale());
            let revision = state.replace(model);
            let response = Json(json!({ "revision": revision, "diagnostics": diagnostics })).into_response();
            with_revision(revision, response)
        }
        Err(err) => invalid_model(&state.snapshot(), &err),
    }
}

fn invalid_model(snap: &Snapshot, err: &Error) -> Response {
    let body = json!({
        "revision": snap.revision,
        "error": error_json(err),
        "diagnostics": [error_json(err)],
    });
    with_revision(snap.revision, (StatusCode::UNPROCESSABLE_ENTITY, Json(body)).into_response())
}

async fn get_slice(State(state): State<AppState>, Query(params): Params) -> Response {
    let snap = state.snapshot();
    let result = selection(&snap.model, &params)
        .and_then(|sigma| slice_report(&snap.model, &sigma).map_err(ApiError::from_query));
    reply(&snap, result)
}

async fn get_aggregate(State(state): State<AppState>, Query(params): Params) -> Response {
    let snap = state.snapshot();
    let result = (|| {
        let sigma = selection(&snap.model, &params)?;
        let risk = risk(&snap.model, &params)?;
        aggregate_report(&snap.model, &sigma, risk).map_err(ApiError::from_query)
    })();
    reply(&snap, result)
}

async fn get_walk(State(state): State<AppState>, Query(params): Params) -> Response {
    let snap = state.snapshot();
    let result = (|| {
        let vary = param(&params, "vary").ok_or_else(|| ApiError::bad_request("`vary=<context axis>` is required"))?;
        let fixed = partial_slice(&snap.model, &params)?;
        let risk = risk(&snap.model, &params)?;
        let options = WalkOptions {
            inline_grids: flag(&params, "grids", false)?,
        };
        let result = walk_with(&snap.model, vary, &fixed, risk, options).map_err(ApiError::from_query)?;
        Ok(result.report(&snap.model))
    })();
    reply(&snap, result)
}

async fn get_violations(State(state): State<AppState>, Query(params): Params) -> Response {
    let snap = state.snapshot();
    let result = (|| {
        let text = param(&params, "state").ok_or_else(|| ApiError::bad_request("`state=l1,l2,...` is required"))?;
        let state = snap.model.parse_state(text).map_err(ApiError::from_query)?;
        snap.model.violations(&state).map_err(ApiError::from_query)
    })();
    reply(&snap, result)
}

async fn get_layout(State(state): State<AppState>, Query(params): Params) -> Response {
    let snap = state.snapshot();
    let result = number::<f64>(&params, "theta0_deg").map(|deg| {
        let theta0 = deg.map(f64::to_radians).unwrap_or(snap.model.theta0());
        let axes: Vec<Value> = snap
            .model
            .space()
            .axes()
            .iter()
            .map(|a| json!({ "id": a.id(), "role": a.role(), "labels": a.labels(), "threshold": a.threshold() }))
            .collect();
        json!({ "axes": axes, "layout": layout(snap.model.space(), theta0) })
    });
    reply(&snap, result)
}

async fn get_render(State(state): State<AppState>, Path(file): Path<String>, Query(params): Params) -> Response {
    let snap = state.snapshot();
    let result = (|| {
        let view = match file.as_str() {
            "polar.svg" => View::Polar,
            "matrix.svg" => View::Matrix,
            other => {
                return Err(ApiError {
                    status: StatusCode::NOT_FOUND,
                    body: json!({ "error": { "code": "E_NOT_FOUND", "message": format!("no view `{other}`") } }),
                })
            }
        };
        let sigma = selection(&snap.model, &params)?;
        let risk = risk(&snap.model, &params)?;
        let mut spec = RenderSpec::for_view(view);
        if let Some(w) = number(&params, "width")? {
            spec.width = w;
        }
        if let Some(h) = number(&params, "height")? {
            spec.height = h;
        }
        if let Some(deg) = number::<f64>(&params, "theta0_deg")? {
            spec.theta0 = Some(deg.to_radians());
        }
        spec.show_labels = flag(&params, "labels", spec.show_labels)?;
        spec.show_thresholds = flag(&params, "thresholds", spec.show_thresholds)?;
        render(&snap.model, &sigma, risk, &spec).map_err(ApiError::from_query)
    })();
    let response = match result {
        Ok(svg) => ([(header::CONTENT_TYPE, "image/svg+xml")], svg).into_response(),
        Err(e) => (e.status, Json(e.body)).into_response(),
    };
    with_revision(snap.revision, response)
}

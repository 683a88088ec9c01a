//! Read-only HTTP service over one decomposition.

use std::net::SocketAddr;
use std::path::PathBuf;
use std::sync::Arc;

use axum::extract::{Path, Query, State};
use axum::http::{header, StatusCode};
use axum::response::{Html, IntoResponse, Response};
use axum::routing::get;
use axum::{Json, Router};
use serde::{Deserialize, Serialize};
use simplexrank::decompose::{label_point, Utility};
use simplexrank::exact::{q, SimplexPoint};
use simplexrank::extensions::nonlinear_aggregate;
use simplexrank::{aggregate, Decomposition, InputSet, RankLabel, SensitivityField, WeightVector};
use tower_http::services::ServeDir;

use crate::format::{DecompositionFile, LabelRecord, MethodRecord};

/// Everything a request can read. Built once, never mutated.
pub struct AppState {
    pub file: DecompositionFile,
    json: String,
    input_set: InputSet,
    utility: Utility,
    labels: Vec<RankLabel>,
    exact: Option<(Decomposition, SensitivityField)>,
}

impl AppState {
    pub fn new(file: DecompositionFile) -> anyhow::Result<Self> {
        let input_set = file.input_set()?;
        let utility = file.utility()?;
        let labels = file.labels()?;
        let exact = match file.method {
            MethodRecord::Exact => {
                let d = file.to_decomposition()?;
                let field = SensitivityField::new(&d);
                Some((d, field))
            }
            MethodRecord::Grid => None,
        };
        Ok(AppState {
            json: file.to_json(),
            file,
            input_set,
            utility,
            labels,
            exact,
        })
    }
}

fn bad_request(message: impl Into<String>) -> Response {
    (StatusCode::BAD_REQUEST, Json(ErrorBody { error: message.into() })).into_response()
}

#[derive(Serialize)]
struct ErrorBody {
    error: String,
}

#[derive(Debug, Deserialize)]
pub struct WeightQuery {
    l1: Option<f64>,
    l2: Option<f64>,
    l3: Option<f64>,
}

impl WeightQuery {
    fn weight(&self) -> Result<WeightVector, Response> {
        let (Some(l1), Some(l2), Some(l3)) = (self.l1, self.l2, self.l3) else {
            return Err(bad_request("query needs l1, l2 and l3"));
        };
        WeightVector::new([l1, l2, l3]).map_err(|e| bad_request(format!("weight outside the simplex: {e}")))
    }
}

#[derive(Serialize)]
struct LabelResponse {
    weight: [f64; 3],
    labels: Vec<LabelRecord>,
    scores: Vec<f64>,
}

async fn decomposition(State(state): State<Arc<AppState>>) -> Response {
    ([(header::CONTENT_TYPE, "application/json")], state.json.clone()).into_response()
}

/// The point the linear aggregate must be evaluated at to rank like the
/// problem's utility at `w`.
fn query_point(state: &AppState, w: &WeightVector) -> SimplexPoint {
    let pulled = match &state.utility {
        Utility::Linear => *w,
        Utility::Nonlinear(f) => f.normalize(w),
    };
    let [l1, l2, _] = pulled.lambda();
    SimplexPoint::new(q(l1), q(l2))
}

async fn label(State(state): State<Arc<AppState>>, Query(query): Query<WeightQuery>) -> Response {
    let w = match query.weight() {
        Ok(w) => w,
        Err(r) => return r,
    };
    let point = query_point(&state, &w);
    let labels = match label_point(&state.input_set, &state.labels, &point) {
        Ok(l) => l,
        Err(e) => return bad_request(e.to_string()),
    };
    let scores = match &state.utility {
        Utility::Linear => aggregate(&state.input_set, &w),
        Utility::Nonlinear(f) => nonlinear_aggregate(&state.input_set, f, &w),
    };
    match scores {
        Ok(s) => Json(LabelResponse {
            weight: w.lambda(),
            labels: labels.iter().map(LabelRecord::new).collect(),
            scores: s.values().to_vec(),
        })
        .into_response(),
        Err(e) => bad_request(e.to_string()),
    }
}

#[derive(Serialize)]
struct HeatEntry {
    region: usize,
    label: LabelRecord,
    position: u32,
}

async fn heatmap(State(state): State<Arc<AppState>>, Path(item): Path<String>) -> Response {
    let Some(idx) = state.file.items.iter().position(|i| *i == item) else {
        return (StatusCode::NOT_FOUND, Json(ErrorBody { error: format!("unknown item `{item}`") })).into_response();
    };
    let entries: Vec<HeatEntry> = state
        .labels
        .iter()
        .enumerate()
        .map(|(region, l)| HeatEntry {
            region,
            label: LabelRecord::new(l),
            position: l.position(idx),
        })
        .collect();
    Json(entries).into_response()
}

#[derive(Serialize)]
struct SensitivityResponse {
    region: Option<usize>,
    value: f64,
}

async fn sensitivity(State(state): State<Arc<AppState>>, Query(query): Query<WeightQuery>) -> Response {
    let w = match query.weight() {
        Ok(w) => w,
        Err(r) => return r,
    };
    let Some((_, field)) = &state.exact else {
        return bad_request("sensitivity needs an exact decomposition");
    };
    let hit = field.at_equilateral(simplexrank::geometry::to_equilateral(&w));
    Json(SensitivityResponse {
        region: hit.map(|(k, _)| k),
        value: hit.map_or(0.0, |(_, v)| v),
    })
    .into_response()
}

const INDEX: &str = "<!doctype html>\n<title>simplexrank</title>\n<p>No UI bundle configured. API: \
<code>/api/decomposition</code>, <code>/api/label?l1=&amp;l2=&amp;l3=</code>, \
<code>/api/heatmap/{item}</code>, <code>/api/sensitivity?l1=&amp;l2=&amp;l3=</code>.</p>\n";

pub fn router(state: Arc<AppState>, ui_dir: Option<PathBuf>) -> Router {
    let api = Router::new()
        .route("/api/decomposition", get(decomposition))
        .route("/api/label", get(label))
        .route("/api/heatmap/{item}", get(heatmap))
        .route("/api/sensitivity", get(sensitivity))
        .with_state(state);
    match ui_dir {
        Some(dir) => api.fallback_service(ServeDir::new(dir)),
        None => api.route("/", get(|| async { Html(INDEX) })),
    }
}

/// Serves until the process is stopped.
pub async fn serve(state: AppState, addr: SocketAddr, ui_dir: Option<PathBuf>) -> anyhow::Result<()> {
    let listener = tokio::net::TcpListener::bind(addr).await?;
    eprintln!("listening on http://{}", listener.local_addr()?);
    axum::serve(listener, router(Arc::new(state), ui_dir)).await?;
    Ok(())
}

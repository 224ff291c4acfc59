//! HTTP JSON API for the solvers, sweeps and boundary search.
//!
//! The service keeps no state between requests; every body carries the whole
//! problem. CPU-bound work runs on the blocking pool.

mod error;

use std::net::SocketAddr;
use std::path::PathBuf;

use axum::body::Bytes;
use axum::extract::DefaultBodyLimit;
use axum::routing::{get, post};
use axum::{Json, Router};
use indexmap::IndexMap;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use tower_http::cors::CorsLayer;
use tower_http::services::ServeDir;

use qstar_core::mdp::MdpDocument;
use qstar_core::problem::{resolve_problem, ProblemSource};
use qstar_core::solvers::SolveReportDocument;
use qstar_core::sweep::{sweep_1d, sweep_2d};
use qstar_core::{
    classify_regions, find_boundary, presets, solve_exact, BoundaryRequest, BoundaryResult,
    ExperimentPreset, Regions, SolverConfig, SweepResult, SweepSpec,
};

pub use error::{ApiError, ErrorCode};

pub const DEFAULT_PORT: u16 = 8080;
pub const MAX_BODY_BYTES: usize = 1 << 20;
pub const MAX_GRID_CELLS: usize = 250_000;

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolveRequest {
    #[serde(default)]
    pub preset: Option<String>,
    #[serde(default)]
    pub mdp: Option<MdpDocument>,
    #[serde(default)]
    pub overrides: IndexMap<String, f64>,
    #[serde(default)]
    pub solver: SolverConfig,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RegionsRequest {
    pub spec: SweepSpec,
    #[serde(default)]
    pub state: Option<String>,
}

/// Routes under `/api`, plus static files from `static_dir` at `/` when given.
pub fn router(static_dir: Option<PathBuf>) -> Router {
    let api = Router::new()
        .route("/api/health", get(|| async { "ok" }))
        .route("/api/presets", get(list_presets))
        .route("/api/solve", post(solve))
        .route("/api/sweep1d", post(sweep1d))
        .route("/api/sweep2d", post(sweep2d))
        .route("/api/boundary", post(boundary))
        .route("/api/regions", post(regions))
        .layer(DefaultBodyLimit::max(MAX_BODY_BYTES))
        .layer(CorsLayer::permissive());
    match static_dir {
        Some(dir) => api.fallback_service(ServeDir::new(dir)),
        None => api,
    }
}

pub async fn serve(port: u16, static_dir: Option<PathBuf>) -> std::io::Result<()> {
    let addr = SocketAddr::from(([0, 0, 0, 0], port));
    let listener = tokio::net::TcpListener::bind(addr).await?;
    tracing::info!("listening on {}", listener.local_addr()?);
    axum::serve(listener, router(static_dir)).await
}

fn parse<T: DeserializeOwned>(body: &Bytes) -> Result<T, ApiError> {
    serde_json::from_slice(body).map_err(|e| ApiError::bad_request(format!("malformed body: {e}")))
}

async fn blocking<T, F>(f: F) -> Result<Json<T>, ApiError>
where
    T: Serialize + Send + 'static,
    F: FnOnce() -> Result<T, ApiError> + Send + 'static,
{
    tokio::task::spawn_blocking(f)
        .await
        .map_err(|e| ApiError {
            code: ErrorCode::SolverFailed,
            message: format!("worker failed: {e}"),
            detail: serde_json::Value::Null,
        })?
        .map(Json)
}

async fn list_presets() -> Json<Vec<ExperimentPreset>> {
    Json(presets())
}

async fn solve(body: Bytes) -> Result<Json<SolveReportDocument>, ApiError> {
    let req: SolveRequest = parse(&body)?;
    let source = match (req.preset, req.mdp) {
        (Some(name), None) => ProblemSource::Preset(name),
        (None, Some(doc)) => ProblemSource::Document(doc),
        (Some(_), Some(_)) => return Err(ApiError::bad_request("give either preset or mdp, not both")),
        (None, None) => return Err(ApiError::bad_request("one of preset or mdp is required")),
    };
    let overrides = req.overrides;
    let cfg = req.solver;
    blocking(move || {
        cfg.check()?;
        let mdp = resolve_problem(&source, &overrides)?;
        let report = solve_exact(&mdp, &cfg)?;
        Ok(SolveReportDocument::new(&mdp, &report))
    })
    .await
}

fn check_grid(spec: &SweepSpec) -> Result<(), ApiError> {
    let cells = spec
        .axes
        .iter()
        .try_fold(1usize, |acc, a| acc.checked_mul(a.steps))
        .unwrap_or(usize::MAX);
    if cells > MAX_GRID_CELLS {
        return Err(ApiError::bad_request(format!(
            "grid of {cells} cells exceeds the limit of {MAX_GRID_CELLS}"
        )));
    }
    Ok(())
}

fn checked_spec(body: &Bytes) -> Result<SweepSpec, ApiError> {
    let spec: SweepSpec = parse(body)?;
    check_grid(&spec)?;
    Ok(spec)
}

async fn sweep1d(body: Bytes) -> Result<Json<SweepResult>, ApiError> {
    let spec = checked_spec(&body)?;
    blocking(move || Ok(sweep_1d(&spec)?)).await
}

async fn sweep2d(body: Bytes) -> Result<Json<SweepResult>, ApiError> {
    let spec = checked_spec(&body)?;
    blocking(move || Ok(sweep_2d(&spec)?)).await
}

async fn boundary(body: Bytes) -> Result<Json<BoundaryResult>, ApiError> {
    let req: BoundaryRequest = parse(&body)?;
    blocking(move || Ok(find_boundary(&req)?)).await
}

async fn regions(body: Bytes) -> Result<Json<Regions>, ApiError> {
    let req: RegionsRequest = parse(&body)?;
    check_grid(&req.spec)?;
    blocking(move || {
        let result = match req.spec.axes.len() {
            2 => sweep_2d(&req.spec)?,
            _ => sweep_1d(&req.spec)?,
        };
        Ok(classify_regions(&result, req.state.as_deref())?)
    })
    .await
}

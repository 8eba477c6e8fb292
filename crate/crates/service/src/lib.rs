//! JSON-over-HTTP access to one in-memory network snapshot.
//!
//! Every handler is a thin wrapper around a `lensnet_core` call. Heavy work
//! runs on the blocking pool behind a semaphore, so at most `workers` queries
//! compute at once and the async runtime stays responsive.

use std::net::SocketAddr;
use std::sync::{Arc, OnceLock};

use axum::extract::rejection::{JsonRejection, QueryRejection};
use axum::extract::{Query, State};
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use lensnet_core::centrality::{self, CentralityOptions, CentralityReport, CentralityRow, Measure};
use lensnet_core::report::{self, Limits, PartitionQuery, ReportQuery};
use lensnet_core::snapshot::Snapshot;
use lensnet_core::stats::{self, NetworkStats};
use lensnet_core::{parse_id_list, Error, NodeId, Person, SeedQuery, SignedGraph};
use serde::{Deserialize, Serialize};
use tokio::sync::Semaphore;

pub const DEFAULT_WORKERS: usize = 4;
pub const DEFAULT_PAGE: usize = 50;
pub const MAX_PAGE: usize = 500;

#[derive(Debug, Clone, Copy)]
pub struct Config {
    pub limits: Limits,
    pub workers: usize,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            limits: Limits::default(),
            workers: DEFAULT_WORKERS,
        }
    }
}

struct Shared {
    graph: SignedGraph,
    dynasty: Option<String>,
    limits: Limits,
    pool: Semaphore,
    // whole-graph results never change, so compute them once
    stats: OnceLock<NetworkStats>,
    centrality: OnceLock<CentralityReport>,
}

#[derive(Clone)]
pub struct AppState(Arc<Shared>);

impl AppState {
    pub fn new(graph: SignedGraph, dynasty: Option<String>, config: Config) -> AppState {
        AppState(Arc::new(Shared {
            graph,
            dynasty,
            limits: config.limits,
            pool: Semaphore::new(config.workers.max(1)),
            stats: OnceLock::new(),
            centrality: OnceLock::new(),
        }))
    }

    /// Runs `f` on the blocking pool once a worker slot is free.
    async fn compute<T, F>(&self, f: F) -> Result<T, ApiError>
    where
        T: Send + 'static,
        F: FnOnce(&Shared) -> lensnet_core::Result<T> + Send + 'static,
    {
        let _permit = self.0.pool.acquire().await.expect("semaphore is never closed");
        let shared = Arc::clone(&self.0);
        tokio::task::spawn_blocking(move || f(&shared))
            .await
            .map_err(|e| ApiError::internal(e.to_string()))?
            .map_err(ApiError::from)
    }
}

/// Error body: `{"error": "<kind>", "message": "..."}`.
#[derive(Debug, Serialize)]
pub struct ApiError {
    #[serde(skip)]
    status: StatusCode,
    error: &'static str,
    message: String,
}

impl ApiError {
    fn bad_request(message: impl Into<String>) -> ApiError {
        ApiError {
            status: StatusCode::BAD_REQUEST,
            error: "invalid_argument",
            message: message.into(),
        }
    }

    fn internal(message: String) -> ApiError {
        ApiError {
            status: StatusCode::INTERNAL_SERVER_ERROR,
            error: "internal",
            message,
        }
    }
}

impl From<Error> for ApiError {
    fn from(e: Error) -> ApiError {
        let status = match &e {
            Error::NotFound(_) => StatusCode::NOT_FOUND,
            Error::Guard(_) => StatusCode::UNPROCESSABLE_ENTITY,
            Error::InvalidArgument(_) | Error::Json(_) => StatusCode::BAD_REQUEST,
            _ => StatusCode::INTERNAL_SERVER_ERROR,
        };
        ApiError {
            status,
            error: e.kind(),
            message: e.to_string(),
        }
    }
}

impl From<QueryRejection> for ApiError {
    fn from(r: QueryRejection) -> ApiError {
        ApiError::bad_request(r.body_text())
    }
}

impl From<JsonRejection> for ApiError {
    fn from(r: JsonRejection) -> ApiError {
        ApiError::bad_request(r.body_text())
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.status, Json(&self)).into_response()
    }
}

type ApiResult<T> = Result<Json<T>, ApiError>;

pub fn router(state: AppState) -> Router {
    Router::new()
        .route("/api/stats", get(stats_handler))
        .route("/api/persons", get(persons_handler))
        .route("/api/centrality", get(centrality_handler))
        .route("/api/subgraph", get(subgraph_handler))
        .route("/api/pair", get(pair_handler))
        .route("/api/partition", post(partition_handler))
        .route("/api/report", post(report_handler))
        .with_state(state)
}

/// Serves until ctrl-c, then lets in-flight requests finish.
pub async fn serve(addr: SocketAddr, state: AppState) -> std::io::Result<()> {
    let listener = tokio::net::TcpListener::bind(addr).await?;
    eprintln!("listening on http://{}", listener.local_addr()?);
    axum::serve(listener, router(state))
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await
}

async fn stats_handler(State(st): State<AppState>) -> ApiResult<NetworkStats> {
    let out = st
        .compute(|s| Ok(s.stats.get_or_init(|| stats::network_stats(&s.graph, s.dynasty.as_deref())).clone()))
        .await?;
    Ok(Json(out))
}

#[derive(Debug, Deserialize)]
pub struct PersonsParams {
    #[serde(default)]
    q: String,
    #[serde(default)]
    offset: usize,
    limit: Option<usize>,
}

#[derive(Debug, Serialize)]
pub struct PersonsPage {
    pub total: usize,
    pub offset: usize,
    pub items: Vec<Person>,
}

/// Matches a case-insensitive substring of the English name, or the exact
/// Chinese name, or the id.
fn person_matches(p: &Person, needle: &str) -> bool {
    needle.is_empty()
        || p.name_en.to_lowercase().contains(&needle.to_lowercase())
        || p.name_cn == needle
        || p.id.to_string() == needle
}

async fn persons_handler(
    State(st): State<AppState>,
    params: Result<Query<PersonsParams>, QueryRejection>,
) -> ApiResult<PersonsPage> {
    let Query(p) = params?;
    let limit = p.limit.unwrap_or(DEFAULT_PAGE);
    if limit == 0 || limit > MAX_PAGE {
        return Err(ApiError::bad_request(format!("limit must be in 1..={MAX_PAGE}")));
    }
    let needle = p.q.trim().to_string();
    let hits: Vec<&Person> = st.0.graph.persons().iter().filter(|x| person_matches(x, &needle)).collect();
    Ok(Json(PersonsPage {
        total: hits.len(),
        offset: p.offset,
        items: hits.into_iter().skip(p.offset).take(limit).cloned().collect(),
    }))
}

#[derive(Debug, Deserialize)]
pub struct CentralityParams {
    top: Option<usize>,
    order_by: Option<String>,
    seeds: Option<String>,
    #[serde(default)]
    depth: usize,
}

#[derive(Debug, Serialize)]
pub struct CentralityResponse {
    pub node_count: usize,
    pub edge_count: usize,
    pub order_by: Measure,
    pub eigenvector_converged: bool,
    pub warnings: Vec<String>,
    pub rows: Vec<CentralityRow>,
}

async fn centrality_handler(
    State(st): State<AppState>,
    params: Result<Query<CentralityParams>, QueryRejection>,
) -> ApiResult<CentralityResponse> {
    let Query(p) = params?;
    let order_by: Measure = p.order_by.as_deref().unwrap_or("degree").parse()?;
    let top = p.top.unwrap_or(15);
    let seeds = match p.seeds.as_deref() {
        Some(s) => Some(parse_id_list(s)?),
        None => None,
    };
    let out = st
        .compute(move |s| {
            let scoped;
            let report = match seeds {
                None => s
                    .centrality
                    .get_or_init(|| centrality::centrality_report(&s.graph, &CentralityOptions::default())),
                Some(ids) => {
                    let sq = SeedQuery::new(ids, p.depth)?;
                    let (sub, _) = report::guarded_subgraph(&s.graph, &sq, &s.limits)?;
                    scoped = centrality::centrality_report(&sub, &CentralityOptions::default());
                    &scoped
                }
            };
            Ok(CentralityResponse {
                node_count: report.node_count,
                edge_count: report.edge_count,
                order_by,
                eigenvector_converged: report.eigenvector_converged,
                warnings: report.warnings.clone(),
                rows: centrality::top_central(report, top, order_by)?,
            })
        })
        .await?;
    Ok(Json(out))
}

#[derive(Debug, Deserialize)]
pub struct SubgraphParams {
    seeds: String,
    #[serde(default)]
    depth: usize,
}

async fn subgraph_handler(
    State(st): State<AppState>,
    params: Result<Query<SubgraphParams>, QueryRejection>,
) -> ApiResult<Snapshot> {
    let Query(p) = params?;
    let sq = SeedQuery::new(parse_id_list(&p.seeds)?, p.depth)?;
    let out = st
        .compute(move |s| {
            let (sub, _) = report::guarded_subgraph(&s.graph, &sq, &s.limits)?;
            Ok(Snapshot::from_graph(&sub, s.dynasty.as_deref()))
        })
        .await?;
    Ok(Json(out))
}

#[derive(Debug, Deserialize)]
pub struct PairParams {
    u: NodeId,
    v: NodeId,
}

async fn pair_handler(
    State(st): State<AppState>,
    params: Result<Query<PairParams>, QueryRejection>,
) -> ApiResult<report::PairRelationshipReport> {
    let Query(p) = params?;
    Ok(Json(report::pair_relationship(&st.0.graph, p.u, p.v)?))
}

async fn partition_handler(
    State(st): State<AppState>,
    body: Result<Json<PartitionQuery>, JsonRejection>,
) -> ApiResult<lensnet_core::Partition> {
    let Json(q) = body?;
    let out = st.compute(move |s| report::partition_query(&s.graph, &q, &s.limits)).await?;
    Ok(Json(out))
}

async fn report_handler(
    State(st): State<AppState>,
    body: Result<Json<ReportQuery>, JsonRejection>,
) -> ApiResult<lensnet_core::ThreePartReport> {
    let Json(q) = body?;
    let out = st.compute(move |s| report::three_part_report(&s.graph, &q, &s.limits)).await?;
    Ok(Json(out))
}

use std::future::Future;
use std::sync::Arc;
use std::time::{Duration, Instant};

use axum::extract::{Path, RawQuery, State};
use axum::http::{header, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::get;
use axum::Router;
use serde::{Deserialize, Serialize};
use tokio::net::TcpListener;

use skyselect_core::catalog::{Catalog, SharedCatalog};
use skyselect_core::pricing::RateTable;
use skyselect_core::selection::{ResultId, ResultStore, SelectionError, DEFAULT_RESULT_TTL};
use skyselect_core::{select, Recommendation};

use crate::query::{ApiQuery, Endpoint, MediaType, Problem, QueryError};
use crate::render::{Envelope, DISPLAY_DIGITS};

/// Shared service state: the live catalog, exchange rates and stored results.
#[derive(Clone)]
pub struct AppState {
    inner: Arc<Inner>,
}

struct Inner {
    catalog: SharedCatalog,
    rates: RateTable,
    results: ResultStore<Vec<Recommendation>>,
    digits: u32,
}

impl AppState {
    pub fn new(catalog: Catalog, rates: RateTable) -> Self {
        Self::with_options(catalog, rates, DEFAULT_RESULT_TTL, DISPLAY_DIGITS)
    }

    pub fn with_options(catalog: Catalog, rates: RateTable, ttl: Duration, digits: u32) -> Self {
        AppState {
            inner: Arc::new(Inner {
                catalog: SharedCatalog::new(catalog),
                rates,
                results: ResultStore::new(ttl),
                digits,
            }),
        }
    }

    pub fn catalog(&self) -> &SharedCatalog {
        &self.inner.catalog
    }

    pub fn rates(&self) -> &RateTable {
        &self.inner.rates
    }

    pub fn results(&self) -> &ResultStore<Vec<Recommendation>> {
        &self.inner.results
    }

    /// Runs a parsed query against the current catalog snapshot and builds
    /// the response body, storing non-empty results for later detail fetch.
    pub fn run(&self, query: &ApiQuery) -> Result<Envelope, SelectionError> {
        let snapshot = self.inner.catalog.snapshot();
        let started = Instant::now();
        let rows = select(&query.request, &snapshot, &self.inner.rates)?;
        let elapsed = started.elapsed();
        let id = self.inner.results.store(rows.clone()).ok().map(|id| id.to_string());
        let digits = (!query.precise).then_some(self.inner.digits);
        Ok(Envelope::new(&rows, query.request.currency.as_str(), digits, elapsed, id))
    }
}

/// Error body: `{status, problems: [{field, message}]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ErrorBody {
    pub status: u16,
    pub problems: Vec<Problem>,
}

fn error(status: StatusCode, problems: Vec<Problem>) -> Response {
    let body = ErrorBody { status: status.as_u16(), problems };
    (status, [(header::CONTENT_TYPE, MediaType::Json.content_type())], serde_json::to_string_pretty(&body).unwrap())
        .into_response()
}

fn body(media_type: MediaType, envelope: &Envelope) -> Response {
    ([(header::CONTENT_TYPE, media_type.content_type())], envelope.render(media_type)).into_response()
}

fn cost(state: &AppState, endpoint: Endpoint, raw: Option<String>) -> Response {
    let query = match ApiQuery::parse(endpoint, raw.as_deref().unwrap_or("")) {
        Ok(q) => q,
        Err(QueryError(problems)) => return error(StatusCode::BAD_REQUEST, problems),
    };
    match state.run(&query) {
        Ok(envelope) => {
            tracing::debug!(%endpoint, rows = envelope.meta.count, "cost query");
            body(query.media_type, &envelope)
        }
        Err(SelectionError::Invalid(errors)) => {
            error(StatusCode::BAD_REQUEST, errors.iter().map(Problem::from).collect())
        }
        Err(e) => {
            error(StatusCode::BAD_REQUEST, vec![Problem { field: Some("currency".into()), message: e.to_string() }])
        }
    }
}

async fn storage(State(state): State<AppState>, RawQuery(raw): RawQuery) -> Response {
    cost(&state, Endpoint::Storage, raw)
}

async fn compute(State(state): State<AppState>, RawQuery(raw): RawQuery) -> Response {
    cost(&state, Endpoint::Compute, raw)
}

async fn combined(State(state): State<AppState>, RawQuery(raw): RawQuery) -> Response {
    cost(&state, Endpoint::Combined, raw)
}

/// Full, unrounded breakdowns of a stored result.
async fn recommendation(State(state): State<AppState>, Path(id): Path<String>, RawQuery(raw): RawQuery) -> Response {
    let media_type = form_urlencoded::parse(raw.as_deref().unwrap_or("").as_bytes())
        .find(|(k, _)| k == "media_type")
        .and_then(|(_, v)| v.parse().ok())
        .unwrap_or_default();
    let found = id.parse::<ResultId>().and_then(|rid| state.results().fetch(&rid));
    match found {
        Ok(rows) => {
            let currency = rows.first().map_or_else(String::new, |r| r.breakdown.currency.to_string());
            body(media_type, &Envelope::new(&rows, &currency, None, Duration::ZERO, Some(id)))
        }
        Err(e) => error(StatusCode::NOT_FOUND, vec![Problem { field: None, message: e.to_string() }]),
    }
}

async fn health() -> &'static str {
    "ok"
}

pub fn router(state: AppState) -> Router {
    Router::new()
        .route(Endpoint::Storage.path(), get(storage))
        .route(Endpoint::Compute.path(), get(compute))
        .route(Endpoint::Combined.path(), get(combined))
        .route("/api/recommendation/{id}", get(recommendation))
        .route("/api/health", get(health))
        .with_state(state)
}

/// Serves until `shutdown` resolves, then drains in-flight requests.
pub async fn serve(
    listener: TcpListener,
    state: AppState,
    shutdown: impl Future<Output = ()> + Send + 'static,
) -> std::io::Result<()> {
    axum::serve(listener, router(state)).with_graceful_shutdown(shutdown).await
}

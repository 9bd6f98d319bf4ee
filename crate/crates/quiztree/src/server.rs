//! HTTP API for interactive games.
//!
//! - `POST /api/session` with `{distribution, strategy}` starts a game
//! - `POST /api/session/{id}/answer` with `{answer: bool}` advances it
//! - `GET /api/session/{id}` shows the full state
//! - `GET /api/meta/strategies` lists the strategies

use std::net::SocketAddr;
use std::sync::Arc;

use axum::extract::rejection::JsonRejection;
use axum::extract::{Path, State};
use axum::http::{HeaderValue, Method, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use serde::Deserialize;
use serde_json::{json, Value};
use tower_http::cors::{AllowOrigin, Any, CorsLayer};

use quiztree_core::json::DistributionJson;

use crate::session::{SessionError, SessionStore};
use crate::spec::{catalog, StrategySpec};

/// Largest ground set a client may ask for.
pub const MAX_N: usize = 1 << 16;

pub struct ApiError(StatusCode, String);

impl ApiError {
    fn bad_request(msg: impl Into<String>) -> Self {
        ApiError(StatusCode::BAD_REQUEST, msg.into())
    }
}

impl From<SessionError> for ApiError {
    fn from(e: SessionError) -> Self {
        ApiError(status_of(&e), e.to_string())
    }
}

impl From<JsonRejection> for ApiError {
    fn from(e: JsonRejection) -> Self {
        ApiError::bad_request(e.body_text())
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.0, Json(json!({ "error": self.1 }))).into_response()
    }
}

pub fn status_of(e: &SessionError) -> StatusCode {
    match e {
        SessionError::UnknownSession(_) => StatusCode::NOT_FOUND,
        SessionError::WrongState | SessionError::InconsistentAnswers => StatusCode::CONFLICT,
        SessionError::BadStrategy(_) | SessionError::BadDistribution(_) => StatusCode::BAD_REQUEST,
    }
}

#[derive(Deserialize)]
struct CreateRequest {
    distribution: DistributionJson,
    strategy: Value,
}

#[derive(Deserialize)]
struct AnswerRequest {
    answer: bool,
}

type Shared = Arc<SessionStore>;

async fn create(State(store): State<Shared>, body: Result<Json<CreateRequest>, JsonRejection>) -> Result<Response, ApiError> {
    let Json(req) = body?;
    let n = match &req.distribution {
        DistributionJson::Weights { weights, .. } => weights.len(),
        DistributionJson::Dyadic { dyadic_exponents } => dyadic_exponents.len(),
    };
    if n > MAX_N {
        return Err(ApiError::bad_request(format!("n = {n} exceeds the limit of {MAX_N}")));
    }
    let dist = req
        .distribution
        .to_distribution()
        .map_err(|e| ApiError::bad_request(e.to_string()))?;
    let strategy = StrategySpec::from_json(&req.strategy).map_err(|e| ApiError::bad_request(e.to_string()))?;
    // Tree building can be slow for large n; keep it off the reactor.
    let body = tokio::task::spawn_blocking(move || -> Result<Value, SessionError> {
        let session = store.create(dist, strategy)?;
        let s = session.lock().expect("session lock");
        let mut v = s.step_json();
        v["id"] = json!(s.id());
        v["summary"] = s.summary_json();
        Ok(v)
    })
    .await
    .map_err(|e| ApiError(StatusCode::INTERNAL_SERVER_ERROR, e.to_string()))??;
    Ok((StatusCode::CREATED, Json(body)).into_response())
}

async fn answer(
    State(store): State<Shared>,
    Path(id): Path<String>,
    body: Result<Json<AnswerRequest>, JsonRejection>,
) -> Result<Json<Value>, ApiError> {
    let Json(req) = body?;
    let session = store.get(&id)?;
    let mut s = session.lock().expect("session lock");
    s.answer(req.answer)?;
    Ok(Json(s.step_json()))
}

async fn show(State(store): State<Shared>, Path(id): Path<String>) -> Result<Json<Value>, ApiError> {
    let session = store.get(&id)?;
    let s = session.lock().expect("session lock");
    Ok(Json(s.full_json()))
}

async fn strategies() -> Json<Value> {
    Json(catalog())
}

/// `origins` empty means any origin is allowed.
pub fn router(store: Shared, origins: &[String]) -> anyhow::Result<Router> {
    let allow = if origins.is_empty() {
        AllowOrigin::from(Any)
    } else {
        let hs = origins
            .iter()
            .map(|o| HeaderValue::from_str(o))
            .collect::<Result<Vec<_>, _>>()?;
        AllowOrigin::list(hs)
    };
    let cors = CorsLayer::new()
        .allow_origin(allow)
        .allow_methods([Method::GET, Method::POST])
        .allow_headers([axum::http::header::CONTENT_TYPE]);
    Ok(Router::new()
        .route("/api/session", post(create))
        .route("/api/session/{id}", get(show))
        .route("/api/session/{id}/answer", post(answer))
        .route("/api/meta/strategies", get(strategies))
        .layer(cors)
        .with_state(store))
}

/// Binds `addr` (port 0 picks a free port) and returns the bound address
/// with the serving future.
pub async fn bind(
    addr: SocketAddr,
    origins: &[String],
) -> anyhow::Result<(SocketAddr, impl std::future::Future<Output = std::io::Result<()>>)> {
    let app = router(Arc::new(SessionStore::default()), origins)?;
    let listener = tokio::net::TcpListener::bind(addr).await?;
    let local = listener.local_addr()?;
    Ok((local, async move { axum::serve(listener, app).await }))
}

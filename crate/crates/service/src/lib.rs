//! Session-oriented HTTP API for playing along with a live Wordle.
//!
//! A client opens a session, reports each guess together with the colors the
//! real game returned, and asks for the next suggestion. Sessions live in
//! memory only.

pub mod error;
pub mod session;

use std::collections::HashSet;
use std::path::PathBuf;
use std::sync::Arc;
use std::time::Duration;

use axum::body::Bytes;
use axum::extract::{Path, State};
use axum::http::StatusCode;
use axum::response::IntoResponse;
use axum::routing::{get, post};
use axum::{Json, Router};
use chrono::{DateTime, Utc};
use serde::{Deserialize, Serialize};
use tower_http::services::ServeDir;
use uuid::Uuid;

use rank1_wordle::game::{GuessHistory, MAX_GUESSES};
use rank1_wordle::{BundledLexicons, BundledList, Encoding, Feedback, Word};

pub use error::ApiError;
pub use session::{Candidate, FeedbackOutcome, Session, SessionStore, SuggestionView};

/// Largest integer a JavaScript number holds exactly.
const JS_SAFE_SEED_BITS: u32 = 53;
/// Remaining words listed in a session summary.
const SUMMARY_WORDS: usize = 100;

#[derive(Debug, Clone)]
pub struct ServiceConfig {
    pub default_encoding: Encoding,
    pub default_pool: BundledList,
    pub capacity: usize,
    pub ttl: Duration,
    /// Directory of web UI assets served at `/`.
    pub static_dir: Option<PathBuf>,
}

impl Default for ServiceConfig {
    fn default() -> Self {
        ServiceConfig {
            default_encoding: Encoding::Positional,
            default_pool: BundledList::Solutions,
            capacity: 1024,
            ttl: Duration::from_secs(24 * 60 * 60),
            static_dir: None,
        }
    }
}

pub struct AppState {
    config: ServiceConfig,
    guesses: Arc<[Word]>,
    solutions: Arc<[Word]>,
    vocabulary: HashSet<Word>,
    sessions: SessionStore,
}

impl AppState {
    pub fn new(lexicons: &BundledLexicons, config: ServiceConfig) -> AppState {
        let vocabulary = lexicons
            .guesses
            .iter()
            .chain(lexicons.solutions.iter())
            .copied()
            .collect();
        AppState {
            guesses: lexicons.guesses.words().into(),
            solutions: lexicons.solutions.words().into(),
            vocabulary,
            sessions: SessionStore::new(config.capacity, config.ttl),
            config,
        }
    }

    pub fn sessions(&self) -> &SessionStore {
        &self.sessions
    }

    fn pool(&self, list: BundledList) -> Arc<[Word]> {
        match list {
            BundledList::Guesses => Arc::clone(&self.guesses),
            BundledList::Solutions => Arc::clone(&self.solutions),
        }
    }

    fn session(&self, id: &str) -> Result<session::SharedSession, ApiError> {
        Uuid::parse_str(id)
            .ok()
            .and_then(|uuid| self.sessions.get(&uuid))
            .ok_or_else(|| ApiError::NotFound(id.to_string()))
    }
}

pub fn router(state: Arc<AppState>) -> Router {
    let api = Router::new()
        .route("/api/v1/sessions", post(create_session))
        .route(
            "/api/v1/sessions/{id}",
            get(get_session).delete(delete_session),
        )
        .route("/api/v1/sessions/{id}/feedback", post(post_feedback))
        .route("/api/v1/sessions/{id}/suggestion", get(get_suggestion))
        .route("/healthz", get(|| async { "ok" }));
    let app = match &state.config.static_dir {
        Some(dir) => {
            api.fallback_service(ServeDir::new(dir).append_index_html_on_directories(true))
        }
        None => api,
    };
    app.with_state(state)
}

/// Serves `app` on `listener` until the process ends.
pub async fn serve(listener: tokio::net::TcpListener, app: Router) -> std::io::Result<()> {
    axum::serve(listener, app).await
}

fn parse_body<T: for<'de> Deserialize<'de>>(
    body: &Bytes,
    reject: fn(String) -> ApiError,
) -> Result<T, ApiError> {
    let text: &[u8] = if body.iter().all(u8::is_ascii_whitespace) {
        b"{}"
    } else {
        body
    };
    serde_json::from_slice(text).map_err(|e| reject(e.to_string()))
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct CreateRequest {
    encoding: Option<String>,
    pool: Option<String>,
    seed: Option<u64>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct Created {
    pub id: Uuid,
    pub remaining_count: usize,
    pub seed: u64,
}

async fn create_session(
    State(state): State<Arc<AppState>>,
    body: Bytes,
) -> Result<impl IntoResponse, ApiError> {
    let req: CreateRequest = parse_body(&body, ApiError::BadRequest)?;
    let encoding = match req.encoding {
        Some(text) => text.parse().map_err(ApiError::BadRequest)?,
        None => state.config.default_encoding,
    };
    let list = match req.pool {
        Some(text) => text.parse().map_err(ApiError::BadRequest)?,
        None => state.config.default_pool,
    };
    let seed = req
        .seed
        .unwrap_or_else(|| rand::random::<u64>() >> (64 - JS_SAFE_SEED_BITS));
    let session = Session::new(encoding, list.label().to_string(), state.pool(list), seed);
    let created = Created {
        id: session.id,
        remaining_count: session.remaining().len(),
        seed,
    };
    state.sessions.insert(session);
    tracing::debug!(id = %created.id, %encoding, pool = list.label(), "session created");
    Ok((StatusCode::CREATED, Json(created)))
}

#[derive(Debug, Deserialize)]
struct FeedbackRequest {
    guess: String,
    feedback: String,
}

async fn post_feedback(
    State(state): State<Arc<AppState>>,
    Path(id): Path<String>,
    body: Bytes,
) -> Result<Json<FeedbackOutcome>, ApiError> {
    let shared = state.session(&id)?;
    let req: FeedbackRequest = parse_body(&body, ApiError::Unprocessable)?;
    let guess = Word::parse(&req.guess).map_err(|e| ApiError::Unprocessable(e.to_string()))?;
    if !state.vocabulary.contains(&guess) {
        return Err(ApiError::Unprocessable(format!(
            "{guess} is not an accepted guess"
        )));
    }
    let feedback: Feedback = req
        .feedback
        .parse()
        .map_err(|e: rank1_wordle::game::InvalidFeedback| ApiError::Unprocessable(e.to_string()))?;
    let mut session = shared.try_lock().map_err(|_| ApiError::Busy)?;
    Ok(Json(session.record(guess, feedback)?))
}

async fn get_suggestion(
    State(state): State<Arc<AppState>>,
    Path(id): Path<String>,
) -> Result<Json<SuggestionView>, ApiError> {
    let shared = state.session(&id)?;
    let mut session = shared.lock_owned().await;
    let view = tokio::task::spawn_blocking(move || session.suggestion())
        .await
        .map_err(|e| ApiError::Internal(e.to_string()))??;
    Ok(Json(view))
}

#[derive(Debug, Serialize, Deserialize)]
pub struct SessionSummary {
    pub id: Uuid,
    pub created_at: DateTime<Utc>,
    pub encoding: Encoding,
    pub pool: String,
    pub seed: u64,
    pub history: GuessHistory,
    pub guesses_left: usize,
    pub remaining_count: usize,
    /// At most the first hundred remaining words, in pool order.
    pub remaining: Vec<Word>,
    pub solved: bool,
    pub empty_pool: bool,
}

async fn get_session(
    State(state): State<Arc<AppState>>,
    Path(id): Path<String>,
) -> Result<Json<SessionSummary>, ApiError> {
    let shared = state.session(&id)?;
    let session = shared.lock().await;
    let outcome = session.outcome();
    Ok(Json(SessionSummary {
        id: session.id,
        created_at: session.created_at,
        encoding: session.encoding,
        pool: session.pool_label.clone(),
        seed: session.seed,
        history: session.history().clone(),
        guesses_left: MAX_GUESSES - session.history().len(),
        remaining_count: outcome.remaining_count,
        remaining: session
            .remaining()
            .iter()
            .take(SUMMARY_WORDS)
            .copied()
            .collect(),
        solved: outcome.solved,
        empty_pool: outcome.empty_pool,
    }))
}

async fn delete_session(
    State(state): State<Arc<AppState>>,
    Path(id): Path<String>,
) -> Result<StatusCode, ApiError> {
    let removed = Uuid::parse_str(&id)
        .map(|uuid| state.sessions.remove(&uuid))
        .unwrap_or(false);
    if removed {
        Ok(StatusCode::NO_CONTENT)
    } else {
        Err(ApiError::NotFound(id))
    }
}

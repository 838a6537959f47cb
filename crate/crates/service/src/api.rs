//! HTTP API over a [`SessionStore`].
//!
//! | method | path | body | response |
//! |---|---|---|---|
//! | POST | `/sessions` | optional config overrides | `{"id": ...}` |
//! | GET | `/sessions` | | list of ids |
//! | GET | `/sessions/{id}` | | id, revision, transcript, config |
//! | POST | `/sessions/{id}/text` | `{"text", "conllu"?, "category"?}` | submission report |
//! | GET | `/sessions/{id}/domain` | | bundle |
//! | GET | `/sessions/{id}/suggestions?status=pending\|all` | | suggestions |
//! | POST | `/sessions/{id}/suggestions/{sid}/accept` | | decision report |
//! | POST | `/sessions/{id}/suggestions/{sid}/reject` | | decision report |
//! | GET | `/sessions/{id}/code?target=sexpr\|pddl` | | code as text |
//! | POST | `/spellcheck` | `{"text", "session"?}` | flags |
//!
//! Errors come back as `{"error": message}` with a 4xx or 5xx status.
//! Pipeline work runs on the blocking pool; each session is locked for
//! the whole request, so its mutations are serialized.

use std::sync::Arc;

use axum::extract::{Path, Query, State};
use axum::http::{header, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use nl2domain::pipeline::Category;
use nl2domain::suggest::{Decision, SuggestError, Suggestion};
use serde::{Deserialize, Serialize};

use crate::session::{SessionError, SessionStore, Target};
use crate::spellcheck::{spellcheck, Dictionary, Flag};

#[derive(Clone)]
pub struct AppState {
    pub store: Arc<SessionStore>,
    pub dictionary: Arc<Dictionary>,
}

pub struct ApiError(SessionError);

impl From<SessionError> for ApiError {
    fn from(e: SessionError) -> Self {
        ApiError(e)
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let status = match &self.0 {
            SessionError::NotFound(_) | SessionError::Suggest(SuggestError::Unknown(_)) => StatusCode::NOT_FOUND,
            SessionError::Suggest(SuggestError::AlreadyDecided { .. }) => StatusCode::CONFLICT,
            SessionError::Pipeline(_)
            | SessionError::Config(_)
            | SessionError::Target(_)
            | SessionError::Suggest(_) => StatusCode::BAD_REQUEST,
            SessionError::Codegen(_) => StatusCode::UNPROCESSABLE_ENTITY,
            SessionError::Corrupt { .. } | SessionError::Io { .. } => StatusCode::INTERNAL_SERVER_ERROR,
        };
        if status.is_server_error() {
            log::error!("{}", self.0);
        }
        (status, Json(serde_json::json!({ "error": self.0.to_string() }))).into_response()
    }
}

type ApiResult<T> = Result<T, ApiError>;

/// Runs `f` on the blocking pool.
async fn blocking<T: Send + 'static>(f: impl FnOnce() -> ApiResult<T> + Send + 'static) -> ApiResult<T> {
    tokio::task::spawn_blocking(f).await.expect("request task panicked")
}

pub fn router(state: AppState) -> Router {
    Router::new()
        .route("/sessions", post(create_session).get(list_sessions))
        .route("/sessions/{id}", get(session_summary))
        .route("/sessions/{id}/text", post(submit_text))
        .route("/sessions/{id}/domain", get(domain))
        .route("/sessions/{id}/suggestions", get(suggestions))
        .route("/sessions/{id}/suggestions/{sid}/accept", post(accept))
        .route("/sessions/{id}/suggestions/{sid}/reject", post(reject))
        .route("/sessions/{id}/code", get(code))
        .route("/spellcheck", post(spell))
        .with_state(state)
}

#[derive(Serialize)]
struct Created {
    id: String,
}

async fn create_session(
    State(s): State<AppState>,
    body: Option<Json<serde_json::Value>>,
) -> ApiResult<impl IntoResponse> {
    let overrides = body.map(|Json(v)| v).filter(|v| !v.is_null());
    let id = blocking(move || {
        let config = s.store.merged_config(overrides.as_ref())?;
        Ok(s.store.create(config)?)
    })
    .await?;
    Ok((StatusCode::CREATED, Json(Created { id })))
}

async fn list_sessions(State(s): State<AppState>) -> Json<Vec<String>> {
    Json(s.store.ids())
}

async fn session_summary(State(s): State<AppState>, Path(id): Path<String>) -> ApiResult<impl IntoResponse> {
    blocking(move || {
        let session = s.store.get(&id)?;
        let summary = session.lock().unwrap().summary();
        Ok(Json(summary))
    })
    .await
}

#[derive(Deserialize)]
struct SubmitBody {
    text: String,
    #[serde(default)]
    conllu: Option<String>,
    #[serde(default)]
    category: Option<Category>,
}

async fn submit_text(
    State(s): State<AppState>,
    Path(id): Path<String>,
    Json(body): Json<SubmitBody>,
) -> ApiResult<impl IntoResponse> {
    blocking(move || {
        let session = s.store.get(&id)?;
        let mut session = session.lock().unwrap();
        let (response, event) = session.submit(&body.text, body.conllu.as_deref(), body.category);
        if let Some(event) = event {
            s.store.persist(&session, &event)?;
        }
        Ok(Json(response))
    })
    .await
}

async fn domain(State(s): State<AppState>, Path(id): Path<String>) -> ApiResult<impl IntoResponse> {
    blocking(move || {
        let session = s.store.get(&id)?;
        let bundle = session.lock().unwrap().bundle.clone();
        Ok(Json(bundle))
    })
    .await
}

#[derive(Deserialize)]
struct SuggestionQuery {
    #[serde(default)]
    status: Option<String>,
}

async fn suggestions(
    State(s): State<AppState>,
    Path(id): Path<String>,
    Query(q): Query<SuggestionQuery>,
) -> ApiResult<impl IntoResponse> {
    blocking(move || {
        let session = s.store.get(&id)?;
        let session = session.lock().unwrap();
        let list: Vec<Suggestion> = match q.status.as_deref() {
            None | Some("pending") => session.suggestions.pending(),
            Some("all") => session.suggestions.all().cloned().collect(),
            Some(other) => {
                return Err(
                    SessionError::Config(format!("unknown status filter {other:?}; expected pending or all")).into()
                )
            }
        };
        Ok(Json(list))
    })
    .await
}

async fn decide(s: AppState, id: String, sid: String, decision: Decision) -> ApiResult<impl IntoResponse> {
    blocking(move || {
        let session = s.store.get(&id)?;
        let mut session = session.lock().unwrap();
        let (response, event) = session.decide(&sid, decision)?;
        s.store.persist(&session, &event)?;
        Ok(Json(response))
    })
    .await
}

async fn accept(State(s): State<AppState>, Path((id, sid)): Path<(String, String)>) -> ApiResult<impl IntoResponse> {
    decide(s, id, sid, Decision::Accept).await
}

async fn reject(State(s): State<AppState>, Path((id, sid)): Path<(String, String)>) -> ApiResult<impl IntoResponse> {
    decide(s, id, sid, Decision::Reject).await
}

#[derive(Deserialize)]
struct CodeQuery {
    #[serde(default)]
    target: Option<String>,
}

async fn code(
    State(s): State<AppState>,
    Path(id): Path<String>,
    Query(q): Query<CodeQuery>,
) -> ApiResult<impl IntoResponse> {
    blocking(move || {
        let target: Target = q.target.as_deref().unwrap_or("sexpr").parse()?;
        let session = s.store.get(&id)?;
        let text = session.lock().unwrap().code(target)?;
        Ok(([(header::CONTENT_TYPE, "text/plain; charset=utf-8")], text))
    })
    .await
}

#[derive(Deserialize)]
struct SpellBody {
    text: String,
    /// Session whose domain words are exempt.
    #[serde(default)]
    session: Option<String>,
}

async fn spell(State(s): State<AppState>, Json(body): Json<SpellBody>) -> ApiResult<Json<Vec<Flag>>> {
    blocking(move || {
        let vocabulary = match &body.session {
            Some(id) => s.store.get(id)?.lock().unwrap().vocabulary(),
            None => Vec::new(),
        };
        Ok(Json(spellcheck(&body.text, &s.dictionary, &vocabulary)))
    })
    .await
}

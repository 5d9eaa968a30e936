//! JSON consultation API.
//!
//! | method | path                         | body                     |
//! |--------|------------------------------|--------------------------|
//! | GET    | `/api/v1/symptoms`           |                          |
//! | GET    | `/api/v1/diseases`           |                          |
//! | POST   | `/api/v1/consult/disease`    | `{"disease_ids": [..]}`  |
//! | POST   | `/api/v1/consult/symptoms`   | `{"symptom_ids": [..]}`  |
//!
//! Every non-2xx response carries an [`ApiError`] body.

use std::path::PathBuf;
use std::sync::Arc;

use axum::extract::rejection::JsonRejection;
use axum::extract::State;
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use mates_core::diagnosis::DiseaseGuidance;
use mates_core::{
    consult_by_disease, rank, ConsultationResult, DiagnosisError, KnowledgeBase, Query, Violation,
};
use serde::{Deserialize, Serialize};
use tower_http::services::ServeDir;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ErrorCode {
    UnknownId,
    BadRequest,
    KbInvalid,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ApiError {
    pub code: ErrorCode,
    pub message: String,
    pub offending_ids: Vec<String>,
    #[serde(skip)]
    status: u16,
}

impl ApiError {
    fn new(status: StatusCode, code: ErrorCode, message: impl Into<String>) -> Self {
        Self {
            code,
            message: message.into(),
            offending_ids: Vec::new(),
            status: status.as_u16(),
        }
    }

    fn bad_request(message: impl Into<String>) -> Self {
        Self::new(StatusCode::BAD_REQUEST, ErrorCode::BadRequest, message)
    }
}

impl From<DiagnosisError> for ApiError {
    fn from(err: DiagnosisError) -> Self {
        match err {
            DiagnosisError::EmptyRequest => Self::bad_request(err.to_string()),
            _ => Self {
                offending_ids: err.offending_ids().to_vec(),
                ..Self::new(StatusCode::NOT_FOUND, ErrorCode::UnknownId, err.to_string())
            },
        }
    }
}

impl From<JsonRejection> for ApiError {
    fn from(rejection: JsonRejection) -> Self {
        Self::bad_request(rejection.body_text())
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let status = StatusCode::from_u16(self.status).unwrap_or(StatusCode::INTERNAL_SERVER_ERROR);
        (status, Json(self)).into_response()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CatalogEntry {
    pub id: String,
    pub display_name: String,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiseaseRequest {
    pub disease_ids: Vec<String>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SymptomRequest {
    pub symptom_ids: Vec<String>,
}

/// Response body of `POST /api/v1/consult/disease`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DiseaseConsultation {
    pub results: Vec<DiseaseGuidance>,
}

#[derive(Clone)]
struct AppState {
    kb: Arc<KnowledgeBase>,
    violations: Arc<Vec<Violation>>,
}

impl AppState {
    fn kb(&self) -> Result<&KnowledgeBase, ApiError> {
        if self.violations.is_empty() {
            return Ok(&self.kb);
        }
        let mut err = ApiError::new(
            StatusCode::INTERNAL_SERVER_ERROR,
            ErrorCode::KbInvalid,
            format!(
                "loaded knowledge base has {} violation(s)",
                self.violations.len()
            ),
        );
        err.offending_ids = self
            .violations
            .iter()
            .map(|v| v.offending_id().to_owned())
            .collect();
        Err(err)
    }
}

/// API routes over `kb`. The KB is validated once, here.
pub fn router(kb: KnowledgeBase) -> Router {
    let violations = kb.validate();
    let state = AppState {
        kb: Arc::new(kb),
        violations: Arc::new(violations),
    };
    let api = Router::new()
        .route("/symptoms", get(list_symptoms))
        .route("/diseases", get(list_diseases))
        .route("/consult/disease", post(consult_disease))
        .route("/consult/symptoms", post(consult_symptoms))
        .fallback(|| async {
            ApiError::new(
                StatusCode::NOT_FOUND,
                ErrorCode::BadRequest,
                "no such endpoint",
            )
        })
        .method_not_allowed_fallback(|| async {
            ApiError::new(
                StatusCode::METHOD_NOT_ALLOWED,
                ErrorCode::BadRequest,
                "method not allowed",
            )
        })
        .with_state(state);
    Router::new().nest("/api/v1", api)
}

/// API routes plus static files from `ui_dir` at `/`.
pub fn app(kb: KnowledgeBase, ui_dir: Option<PathBuf>) -> Router {
    let router = router(kb);
    match ui_dir {
        Some(dir) => router.fallback_service(ServeDir::new(dir)),
        None => router,
    }
}

async fn list_symptoms(State(state): State<AppState>) -> Result<Json<Vec<CatalogEntry>>, ApiError> {
    let kb = state.kb()?;
    Ok(Json(
        kb.symptoms
            .iter()
            .map(|s| CatalogEntry {
                id: s.id.to_string(),
                display_name: s.display_name.clone(),
            })
            .collect(),
    ))
}

async fn list_diseases(State(state): State<AppState>) -> Result<Json<Vec<CatalogEntry>>, ApiError> {
    let kb = state.kb()?;
    Ok(Json(
        kb.diseases
            .iter()
            .map(|d| CatalogEntry {
                id: d.id.to_string(),
                display_name: d.display_name.clone(),
            })
            .collect(),
    ))
}

async fn consult_disease(
    State(state): State<AppState>,
    body: Result<Json<DiseaseRequest>, JsonRejection>,
) -> Result<Json<DiseaseConsultation>, ApiError> {
    let kb = state.kb()?;
    let Json(req) = body?;
    let results = consult_by_disease(kb, &req.disease_ids)?;
    Ok(Json(DiseaseConsultation { results }))
}

async fn consult_symptoms(
    State(state): State<AppState>,
    body: Result<Json<SymptomRequest>, JsonRejection>,
) -> Result<Json<ConsultationResult>, ApiError> {
    let kb = state.kb()?;
    let Json(req) = body?;
    let query = Query::resolve(kb, &req.symptom_ids)?;
    Ok(Json(rank(kb, &query)?))
}

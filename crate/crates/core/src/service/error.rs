use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::Json;
use serde::Serialize;

use crate::af::AfError;
use crate::coach::CoachError;
use crate::domain::DomainError;
use crate::dsl::{DslError, SourceSpan};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ErrorCode {
    BadRequest,
    Unclassifiable,
    ParseError,
    KbConflict,
    Internal,
}

impl ErrorCode {
    pub fn status(self) -> StatusCode {
        match self {
            ErrorCode::BadRequest | ErrorCode::ParseError => StatusCode::BAD_REQUEST,
            ErrorCode::Unclassifiable => StatusCode::UNPROCESSABLE_ENTITY,
            ErrorCode::KbConflict => StatusCode::CONFLICT,
            ErrorCode::Internal => StatusCode::INTERNAL_SERVER_ERROR,
        }
    }
}

/// JSON error body: `{"code": ..., "message": ..., "span"?: {line, column}}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ApiError {
    pub code: ErrorCode,
    pub message: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub span: Option<SourceSpan>,
}

impl ApiError {
    pub fn new(code: ErrorCode, message: impl Into<String>) -> Self {
        Self {
            code,
            message: message.into(),
            span: None,
        }
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.code.status(), Json(self)).into_response()
    }
}

impl From<DomainError> for ApiError {
    fn from(e: DomainError) -> Self {
        let code = match e {
            DomainError::Unclassifiable(_) => ErrorCode::Unclassifiable,
            _ => ErrorCode::BadRequest,
        };
        Self::new(code, e.to_string())
    }
}

impl From<DslError> for ApiError {
    fn from(e: DslError) -> Self {
        Self {
            code: ErrorCode::ParseError,
            message: format!("{}: {}", e.kind.as_str(), e.message),
            span: Some(e.span),
        }
    }
}

impl From<AfError> for ApiError {
    fn from(e: AfError) -> Self {
        match e {
            AfError::Syntax { line, .. } | AfError::UndeclaredArgument { line, .. } => Self {
                code: ErrorCode::ParseError,
                message: e.to_string(),
                span: Some(SourceSpan { line, column: 1 }),
            },
            other => Self::new(ErrorCode::BadRequest, other.to_string()),
        }
    }
}

impl From<CoachError> for ApiError {
    fn from(e: CoachError) -> Self {
        match e {
            CoachError::Parse(e) => e.into(),
            CoachError::Context(e) => e.into(),
            CoachError::Validation(m) => Self::new(ErrorCode::BadRequest, m),
            other => Self::new(ErrorCode::Internal, other.to_string()),
        }
    }
}

use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::Json;
use serde::Serialize;
use serde_json::{json, Value};

use qstar_core::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ErrorCode {
    BadRequest,
    ValidationFailed,
    SolverFailed,
    NotFound,
}

impl ErrorCode {
    pub fn status(self) -> StatusCode {
        match self {
            ErrorCode::BadRequest => StatusCode::BAD_REQUEST,
            ErrorCode::ValidationFailed => StatusCode::UNPROCESSABLE_ENTITY,
            ErrorCode::SolverFailed => StatusCode::INTERNAL_SERVER_ERROR,
            ErrorCode::NotFound => StatusCode::NOT_FOUND,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ApiError {
    pub code: ErrorCode,
    pub message: String,
    #[serde(skip_serializing_if = "Value::is_null")]
    pub detail: Value,
}

impl ApiError {
    pub fn bad_request(message: impl Into<String>) -> Self {
        Self { code: ErrorCode::BadRequest, message: message.into(), detail: Value::Null }
    }
}

impl From<Error> for ApiError {
    fn from(err: Error) -> Self {
        let message = err.to_string();
        let (code, detail) = classify(&err);
        Self { code, message, detail }
    }
}

fn classify(err: &Error) -> (ErrorCode, Value) {
    match err {
        Error::UnknownPreset(name) => (ErrorCode::NotFound, json!({ "preset": name })),
        Error::Validation(violations) => {
            (ErrorCode::ValidationFailed, json!({ "violations": violations }))
        }
        Error::Domain(_) => (ErrorCode::ValidationFailed, Value::Null),
        Error::NoSignChange { a1, a2, lo, hi, dq_lo, dq_hi } => (
            ErrorCode::ValidationFailed,
            json!({ "actions": [a1, a2], "interval": [lo, hi], "delta": [dq_lo, dq_hi] }),
        ),
        Error::Cell { index, source } => {
            let (_, inner) = classify(source);
            (ErrorCode::ValidationFailed, json!({ "cell": index, "cause": inner }))
        }
        Error::UnknownParameter(name) => (ErrorCode::BadRequest, json!({ "parameter": name })),
        Error::UnknownState(state) => (ErrorCode::BadRequest, json!({ "state": state })),
        Error::UnknownAction { state, action } => {
            (ErrorCode::BadRequest, json!({ "state": state, "action": action }))
        }
        Error::Schema(_)
        | Error::InvalidPolicy(_)
        | Error::InvalidSweep(_)
        | Error::InvalidConfig(_) => (ErrorCode::BadRequest, Value::Null),
        Error::Singular
        | Error::IterationLimit { .. }
        | Error::CapExceeded { .. }
        | Error::NoOptimalPolicy
        | Error::Csv(_) => (ErrorCode::SolverFailed, Value::Null),
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.code.status(), Json(self)).into_response()
    }
}

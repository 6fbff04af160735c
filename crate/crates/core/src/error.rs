use thiserror::Error;

use crate::graph::ValidationReport;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid graph: {0}")]
    InvalidGraph(ValidationReport),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("invalid parameter: {0}")]
    Param(String),

    #[error("instance too large: n = {n}, limit = {limit}")]
    TooLarge { n: usize, limit: usize },

    #[error("schedule does not match graph: {0}")]
    ScheduleMismatch(String),

    #[error("3-OCC violation: literal {literal} occurs in {count} clauses")]
    OccurrenceLimit { literal: i64, count: usize },

    #[error("iteration cap {cap} exceeded in {context}")]
    IterationCap { cap: usize, context: &'static str },

    #[error("invariant broken: {0}")]
    Invariant(String),

    #[error("{path}: {err}")]
    File { path: String, err: std::io::Error },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

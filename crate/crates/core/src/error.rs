use std::path::PathBuf;

use crate::catalog::TaskId;
use crate::instance::Split;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("catalog: {0}")]
    Catalog(String),

    #[error("invalid instance for {task}: {reason}")]
    InvalidInstance { task: TaskId, reason: String },

    #[error("no solution exists for this {0} instance")]
    NoSolution(TaskId),

    #[error("empty input: {0}")]
    EmptyInput(&'static str),

    #[error("complement of the ID element set within universal range [{lo}, {hi}] is empty")]
    EmptyComplement { lo: u64, hi: u64 },

    #[error("{task} {split}: need {needed} instances, only {available} available")]
    Shortfall { task: TaskId, split: Split, needed: usize, available: usize },

    #[error("config: {0}")]
    Config(String),

    #[error("missing coverage: {}", format_missing(.0))]
    Coverage(Vec<(TaskId, Split)>),

    #[error(transparent)]
    Gateway(#[from] crate::gateway::GatewayError),

    #[error("evaluation incomplete for {}; rerun evaluate to retry failed requests", .0.join(", "))]
    Incomplete(Vec<String>),

    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },

    #[error("{path}:{line}: {source}")]
    Record { path: PathBuf, line: usize, source: serde_json::Error },

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

fn format_missing(pairs: &[(TaskId, Split)]) -> String {
    pairs
        .iter()
        .map(|(t, s)| format!("({t}, {s})"))
        .collect::<Vec<_>>()
        .join(", ")
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io { path: path.into(), source }
    }

    /// Process exit code for the CLI.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_) | Error::Catalog(_) => 2,
            Error::Gateway(_) | Error::Incomplete(_) => 3,
            Error::Coverage(_) => 4,
            Error::Shortfall { .. } | Error::EmptyComplement { .. } => 5,
            _ => 1,
        }
    }
}

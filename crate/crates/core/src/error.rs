use std::path::PathBuf;

use thiserror::Error;

use crate::channel::Diagnostic;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error in {func}: {detail}")]
    Domain { func: &'static str, detail: String },

    #[error("{func} did not converge within {max_iter} iterations")]
    NonConvergence { func: &'static str, max_iter: usize },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("no element count up to {cap} reaches coverage {target}")]
    NoSolution { cap: u64, target: f64 },

    #[error("empty sample")]
    EmptySample,

    #[error("invalid scenario: {}", join_diagnostics(.0))]
    Validation(Vec<Diagnostic>),

    #[error("{path}:{line}: {msg}")]
    Parse {
        path: PathBuf,
        line: usize,
        msg: String,
    },

    #[error("unknown coverage method `{0}`")]
    UnknownMethod(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn domain(func: &'static str, detail: impl Into<String>) -> Self {
        Error::Domain {
            func,
            detail: detail.into(),
        }
    }

    /// Process exit code for the command-line front end: 2 for numerical
    /// failures, 1 for everything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::NonConvergence { .. } | Error::NoSolution { .. } => 2,
            _ => 1,
        }
    }
}

fn join_diagnostics(diags: &[Diagnostic]) -> String {
    diags
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join("; ")
}

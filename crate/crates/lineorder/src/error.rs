use std::path::PathBuf;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Core(#[from] lineorder_core::Error),

    #[error("invalid input: {0}")]
    Input(String),

    #[error("malformed certificate: {0}")]
    Malformed(String),

    #[error("certificate rejected by the {check} check: {detail}")]
    Rejected { check: String, detail: String },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },

    #[error("{0}")]
    Json(#[from] serde_json::Error),

    #[error("{0}")]
    Toml(#[from] toml::de::Error),
}

impl Error {
    pub(crate) fn rejected(check: &str, detail: impl Into<String>) -> Self {
        Error::Rejected {
            check: check.into(),
            detail: detail.into(),
        }
    }

    /// Name of the failed verification check, if this is a rejection.
    pub fn check(&self) -> Option<&str> {
        match self {
            Error::Rejected { check, .. } => Some(check),
            Error::Core(lineorder_core::Error::Rejected { check, .. }) => Some(check),
            _ => None,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

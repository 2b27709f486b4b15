use thiserror::Error;

pub type LabResult<T> = std::result::Result<T, LabError>;

#[derive(Debug, Error)]
pub enum LabError {
    #[error("unknown preset {0:?} (see `cbopt list-presets`)")]
    UnknownPreset(String),

    #[error("invalid experiment: {0}")]
    InvalidSpec(String),

    #[error(transparent)]
    Core(#[from] cbopt::Error),

    #[error("{series}: {aborted} of {requested} trials aborted (limit 1%); first error: {first}")]
    TooManyAborts {
        series: String,
        aborted: usize,
        requested: usize,
        first: String,
    },

    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error("cannot build worker pool: {0}")]
    Pool(String),
}

impl LabError {
    /// Usage errors exit with 1, everything else with 2.
    pub fn is_usage(&self) -> bool {
        matches!(self, LabError::UnknownPreset(_) | LabError::InvalidSpec(_) | LabError::Json(_))
    }

    pub(crate) fn io(path: &std::path::Path, source: std::io::Error) -> Self {
        LabError::Io { path: path.display().to_string(), source }
    }
}

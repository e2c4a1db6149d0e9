use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("degenerate input: {0}")]
    DegenerateInput(String),

    #[error("grasp has no hand Jacobian")]
    MissingJacobian,

    #[error("missing normalization constant `{0}`")]
    MissingNormalization(String),

    #[error("joint {joint}: mid-range value coincides with the selected limit")]
    DegenerateRange { joint: usize },

    #[error("invalid thresholds: lo = {lo}, hi = {hi} (need hi > lo)")]
    InvalidThresholds { lo: f64, hi: f64 },

    #[error("metric {metric}: {source}")]
    Metric {
        metric: &'static str,
        #[source]
        source: Box<Error>,
    },

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("duplicate grasp_id `{0}`")]
    DuplicateId(String),

    #[error("stratification failed: {0}")]
    Stratification(String),

    #[error("record `{grasp_id}` lacks metric `{metric}`")]
    MissingFeature { grasp_id: String, metric: String },

    #[error("unsupported model version {found} (expected {expected})")]
    UnsupportedModelVersion { found: u32, expected: u32 },

    #[error("schema error: {0}")]
    Schema(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn in_metric(self, metric: &'static str) -> Self {
        Error::Metric {
            metric,
            source: Box::new(self),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

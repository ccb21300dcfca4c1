use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("column `{0}` not found in header")]
    MissingColumn(String),

    #[error("cell at row {row}, column `{column}` is not a finite number: `{value}`")]
    NonNumericCell { row: usize, column: String, value: String },

    #[error("dataset has no rows")]
    EmptyDataset,

    #[error("column `{0}` is assigned to more than one role")]
    DuplicateRole(String),

    #[error("invalid dataset: {0}")]
    InvalidDataset(String),

    #[error("design matrix is rank deficient (condition estimate {condition:e})")]
    RankDeficient { condition: f64 },

    #[error("{rows} rows cannot determine {params} parameters")]
    Underdetermined { rows: usize, params: usize },

    #[error("expected {expected} values, got {got}")]
    ArityMismatch { expected: usize, got: usize },

    #[error("model was fit with the sensitive attribute; a sensitive value is required")]
    SensitiveRequired,

    #[error("model was fit without the sensitive attribute; no sensitive value may be supplied")]
    SensitiveForbidden,

    #[error("feature {0} has zero variance")]
    ZeroVariance(usize),

    #[error("model has no sensitive coefficient to replace")]
    NotFullModel,

    #[error("group {0} has no members")]
    EmptyGroup(u8),

    #[error("group labels must be 0 or 1, found {value} at position {index}")]
    NonBinaryGroup { index: usize, value: f64 },

    #[error("invalid scenario: {0}")]
    InvalidSpec(String),

    #[error("invalid lambda: {0}")]
    InvalidLambda(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    /// Stable machine-readable name of the variant.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::MissingColumn(_) => "MissingColumn",
            Error::NonNumericCell { .. } => "NonNumericCell",
            Error::EmptyDataset => "EmptyDataset",
            Error::DuplicateRole(_) => "DuplicateRole",
            Error::InvalidDataset(_) => "InvalidDataset",
            Error::RankDeficient { .. } => "RankDeficient",
            Error::Underdetermined { .. } => "Underdetermined",
            Error::ArityMismatch { .. } => "ArityMismatch",
            Error::SensitiveRequired => "SensitiveRequired",
            Error::SensitiveForbidden => "SensitiveForbidden",
            Error::ZeroVariance(_) => "ZeroVariance",
            Error::NotFullModel => "NotFullModel",
            Error::EmptyGroup(_) => "EmptyGroup",
            Error::NonBinaryGroup { .. } => "NonBinaryGroup",
            Error::InvalidSpec(_) => "InvalidSpec",
            Error::InvalidLambda(_) => "InvalidLambda",
            Error::Io(_) => "Io",
            Error::Csv(_) => "Csv",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Errors raised by the dataset, model and statistics layers.
///
/// Diagram construction has its own error type
/// ([`crate::diagram::DiagramError`]) because it carries source positions.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("no header line")]
    Empty,

    #[error("line {line}: expected {expected} fields, found {found}")]
    RaggedRow {
        line: usize,
        expected: usize,
        found: usize,
    },

    #[error("line {line}, column {column}: `{text}` is not a finite number")]
    NotNumeric {
        line: usize,
        column: usize,
        text: String,
    },

    #[error("duplicate column `{0}`")]
    DuplicateColumn(String),

    #[error("`{0}` is not a valid column name")]
    BadIdentifier(String),

    #[error("unknown column `{0}`")]
    UnknownColumn(String),

    #[error("missing predictor `{0}`")]
    MissingPredictor(String),

    #[error("need at least {needed} rows, found {found}")]
    TooFewRows { needed: usize, found: usize },

    #[error("design matrix is rank deficient: `{0}` is collinear with earlier columns")]
    RankDeficient(String),

    #[error("vector lengths differ ({0} vs {1})")]
    LengthMismatch(usize, usize),

    #[error("{0} is constant")]
    ConstantVector(String),

    #[error("argument out of domain: {0}")]
    Domain(String),

    #[error("invalid model: {0}")]
    InvalidModel(String),
}

impl Error {
    /// Stable diagnostic code, e.g. `E_RANK_DEFICIENT`.
    pub fn code(&self) -> &'static str {
        match self {
            Error::Empty => "E_EMPTY",
            Error::RaggedRow { .. } => "E_RAGGED_ROW",
            Error::NotNumeric { .. } => "E_NOT_NUMERIC",
            Error::DuplicateColumn(_) => "E_DUP_COLUMN",
            Error::BadIdentifier(_) => "E_BAD_IDENT",
            Error::UnknownColumn(_) => "E_UNKNOWN_COLUMN",
            Error::MissingPredictor(_) => "E_MISSING_PREDICTOR",
            Error::TooFewRows { .. } => "E_TOO_FEW_ROWS",
            Error::RankDeficient(_) => "E_RANK_DEFICIENT",
            Error::LengthMismatch(..) => "E_LENGTH_MISMATCH",
            Error::ConstantVector(_) => "E_CONSTANT_VECTOR",
            Error::Domain(_) => "E_DOMAIN",
            Error::InvalidModel(_) => "E_INVALID_MODEL",
        }
    }
}

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("rule table: {0}")]
    RuleParse(#[from] RuleParseError),

    /// The uncontrolled reference run never left equilibrium.
    #[error("amplitude ratio undefined: uncontrolled amplitude is zero")]
    UndefinedRatio,

    #[error("config: {field}: {message}")]
    Config { field: String, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    pub(crate) fn config(field: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Config {
            field: field.into(),
            message: message.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RuleParseError {
    #[error("empty rule table")]
    Empty,
    #[error("line {line}: {message}")]
    Header { line: usize, message: String },
    #[error("unknown label {label:?} at ({row}, {col})")]
    UnknownLabel {
        label: String,
        row: String,
        col: String,
    },
    #[error("unknown row label {label:?} on line {line}")]
    UnknownRow { label: String, line: usize },
    #[error("duplicate {axis} label {label:?}")]
    Duplicate { axis: &'static str, label: String },
    #[error("row {row:?} has {found} cells, expected {expected}")]
    Ragged {
        row: String,
        found: usize,
        expected: usize,
    },
    #[error("row {found:?} out of order, expected {expected:?}")]
    RowOrder { found: String, expected: String },
    #[error("expected {expected} rows, found {found}")]
    RowCount { expected: usize, found: usize },
}

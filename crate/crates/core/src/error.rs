use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("{context}: {message}")]
    Parse { context: String, message: String },

    #[error("invalid field `{field}`: {message}")]
    InvalidField { field: String, message: String },

    #[error("dangling reference `{id}` in {field}")]
    DanglingReference { field: String, id: String },

    #[error("unknown preset `{0}` (expected fig4 or fig6)")]
    UnknownPreset(String),

    #[error("io error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    pub(crate) fn field(field: impl Into<String>, message: impl Into<String>) -> Self {
        Error::InvalidField {
            field: field.into(),
            message: message.into(),
        }
    }

    /// True for errors caused by a malformed or inconsistent scenario.
    pub fn is_validation(&self) -> bool {
        !matches!(self, Error::Io { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;

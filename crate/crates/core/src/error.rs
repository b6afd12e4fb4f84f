use thiserror::Error;

/// Errors reported by every operation in the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("syntax error at byte {offset}: {message}")]
    Syntax { offset: usize, message: String },

    #[error("unknown letter {letter:?} at byte {offset}")]
    UnknownLetter { offset: usize, letter: String },

    #[error("the empty-language symbol at byte {offset} is not supported; expressions must be free of it")]
    EmptySetSymbol { offset: usize },

    #[error("expected a homogeneous expression or language")]
    NotHomogeneous,

    #[error("expression contains a star: {0}")]
    StarPresent(&'static str),

    #[error("the expression describes only the empty word")]
    EpsilonInput,

    #[error("budget exceeded: more than {limit} {what}")]
    Budget { what: &'static str, limit: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("the {0}-slice is empty: no accepted word has that length")]
    EmptySlice(usize),

    #[error("the language is empty")]
    EmptyLanguage,

    #[error("unsupported family for this operation: {0}")]
    UnsupportedFamily(String),

    #[error("letter {0} lies outside the binary alphabet")]
    NonBinaryLetter(u32),

    #[error("format error on line {line}: {message}")]
    Format { line: usize, message: String },

    #[error("indeterminate comparison: {0}")]
    Indeterminate(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Error {
        Error::InvalidParameter(msg.into())
    }

    pub(crate) fn budget(what: &'static str, limit: usize) -> Error {
        Error::Budget { what, limit }
    }

    /// True for errors caused by enumeration or search limits.
    pub fn is_budget(&self) -> bool {
        matches!(self, Error::Budget { .. })
    }
}

use thiserror::Error;

/// Errors raised across the library.
///
/// Words are carried in their raw letter-index form; callers holding an
/// [`Alphabet`](crate::algebra::Alphabet) can render them by name.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("position {position} out of range for a word of degree {degree}")]
    PositionOutOfRange { position: usize, degree: usize },

    #[error("letter index {index} outside alphabet of size {size}")]
    LetterOutOfRange { index: usize, size: usize },

    #[error("bar-word factors must be non-empty words")]
    EmptyFactor,

    #[error("half-unshuffle coproducts are undefined on the unit")]
    HalfCoproductOfUnit,

    #[error("no value for word {word} (table covers degree <= {max_degree})")]
    MissingValue { word: String, max_degree: usize },

    #[error("invalid form: {0}")]
    InvalidForm(String),

    #[error("argument out of range: {0}")]
    OutOfRange(String),

    #[error("incomplete table: missing word {0}")]
    Incomplete(String),

    #[error("routes disagree on word {word}: {primary} vs {oracle}")]
    RouteDisagreement {
        word: String,
        primary: String,
        oracle: String,
    },

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

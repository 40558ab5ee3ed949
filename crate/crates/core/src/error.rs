use std::path::PathBuf;

use crate::frameworks::FrameworkTag;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Errors raised anywhere in the toolkit.
///
/// [`Error::class`] groups them into the coarse categories the command-line
/// front end turns into exit codes.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed row at line {line}: {reason}")]
    MalformedRow { line: usize, reason: String },
    #[error("score out of range [0, 1] for term {0:?}")]
    ScoreOutOfRange(String),
    #[error("duplicate term {0:?}")]
    DuplicateTerm(String),
    #[error("invalid term {0:?}")]
    InvalidTerm(String),
    #[error("need at least {needed} terms, got {got}")]
    InsufficientData { needed: usize, got: usize },
    #[error("column {0} has zero variance")]
    DegenerateColumn(&'static str),
    #[error("score matrix is rank deficient (sigma3 / sigma1 = {ratio:e})")]
    RankDeficient { ratio: f64 },
    #[error("expected a {expected} input, got {found}")]
    WrongFramework {
        expected: FrameworkTag,
        found: FrameworkTag,
    },
    #[error("unknown term {0:?}")]
    UnknownTerm(String),
    #[error("empty input")]
    EmptyInput,
    #[error("degenerate geometry: {0}")]
    Degenerate(String),
    #[error("no corpus term is covered by the lexicon")]
    NoOverlap,
    #[error("every slice is empty")]
    AllEmpty,
    #[error("smoothing window {window_secs}s is shorter than the resolution {resolution_secs}s")]
    WindowTooSmall { window_secs: i64, resolution_secs: i64 },
    #[error("series do not share timestamps")]
    MisalignedSeries,
    #[error("bucket timestamp {0} is not aligned to the resolution grid")]
    MisalignedBucket(String),
    #[error("bucket timestamps must be strictly increasing (at {0})")]
    UnorderedBuckets(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

/// Coarse failure category.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    /// Unreadable or unparsable input.
    Input,
    /// Numerically degenerate data.
    Numeric,
    /// A term or key that is not present.
    Lookup,
}

impl Error {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn malformed(line: usize, reason: impl Into<String>) -> Self {
        Error::MalformedRow {
            line,
            reason: reason.into(),
        }
    }

    pub fn class(&self) -> ErrorClass {
        match self {
            Error::InsufficientData { .. }
            | Error::DegenerateColumn(_)
            | Error::RankDeficient { .. }
            | Error::EmptyInput
            | Error::Degenerate(_)
            | Error::NoOverlap
            | Error::AllEmpty => ErrorClass::Numeric,
            Error::UnknownTerm(_) => ErrorClass::Lookup,
            _ => ErrorClass::Input,
        }
    }
}

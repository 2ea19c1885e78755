use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Coarse classification used by the command line front end to pick an exit
/// code.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    Usage,
    Data,
    Invariant,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("series of {len} days is too short: at least {required} days are needed")]
    SeriesTooShort { len: usize, required: usize },

    #[error("window [{start}, {end}] falls outside a series of {len} days")]
    WindowOutOfRange { start: i64, end: i64, len: usize },

    #[error("cannot normalize a window with zero total activity")]
    EmptyWindow,

    #[error("need at least {required} points, got {got}")]
    TooFewPoints { required: usize, got: usize },

    #[error("non-finite value in input")]
    NonFinite,

    #[error("no adopter of `{0}` has followers; the adoption fraction is undefined")]
    NoFollowers(String),

    #[error("empty input: {0}")]
    EmptyInput(String),

    #[error("synset {0} is not in the taxonomy")]
    UnknownSynset(String),

    #[error("taxonomy is cyclic through {0}")]
    CyclicTaxonomy(String),

    #[error("no language profiles loaded")]
    NoProfiles,

    #[error("malformed {what} at {location}: {reason}")]
    Malformed {
        what: &'static str,
        location: String,
        reason: String,
    },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: {source}")]
    Csv {
        path: PathBuf,
        #[source]
        source: csv::Error,
    },

    #[error("{path}: {source}")]
    Json {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },

    #[error("{path}: {reason}")]
    Config { path: PathBuf, reason: String },

    #[error("stage `{stage}` failed: {source}")]
    Stage {
        stage: &'static str,
        #[source]
        source: Box<Error>,
    },

    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

impl Error {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub fn csv(path: impl Into<PathBuf>, source: csv::Error) -> Self {
        Error::Csv {
            path: path.into(),
            source,
        }
    }

    pub fn json(path: impl Into<PathBuf>, source: serde_json::Error) -> Self {
        Error::Json {
            path: path.into(),
            source,
        }
    }

    pub fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }

    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::InvalidParameter { .. } | Error::Config { .. } => ErrorKind::Usage,
            Error::Invariant(_) => ErrorKind::Invariant,
            Error::Stage { source, .. } => source.kind(),
            _ => ErrorKind::Data,
        }
    }
}

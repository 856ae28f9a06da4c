//! Crate-wide error type.

use std::path::PathBuf;

use thiserror::Error;

/// Errors produced by corpus handling, feature extraction, training and
/// evaluation.
#[derive(Debug, Error)]
pub enum Error {
    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}:{line}: malformed record: {msg}")]
    MalformedRecord {
        path: PathBuf,
        line: usize,
        msg: String,
    },

    #[error("duplicate document id {id:?}")]
    DuplicateId { id: String },

    #[error("unknown label {label:?} (expected one of {expected:?})")]
    UnknownLabel { label: String, expected: Vec<String> },

    #[error("document {id:?} has an empty body")]
    EmptyBody { id: String },

    #[error("prompt template is missing the {placeholder:?} placeholder")]
    MissingPlaceholder { placeholder: String },

    #[error("generation failed for {} title(s); manifest written to {manifest}", failed_ids.len())]
    GenerationFailed {
        failed_ids: Vec<String>,
        manifest: PathBuf,
    },

    #[error("endpoint returned an empty generation for title id {id:?}")]
    EmptyGeneration { id: String },

    #[error("environment variable {var:?} (auth token) is not set")]
    MissingAuthToken { var: String },

    #[error("{path}:{line}: AFINN valence {valence} for {word:?} outside [-5, 5]")]
    ValenceOutOfRange {
        path: PathBuf,
        line: usize,
        word: String,
        valence: i64,
    },

    #[error("{path}:{line}: unknown {lexicon} tag {tag:?}")]
    UnknownTag {
        path: PathBuf,
        line: usize,
        lexicon: String,
        tag: String,
    },

    #[error("lexicon file {path} contains no entries")]
    EmptyLexicon { path: PathBuf },

    #[error("document {id:?} has no tokens after cleaning; rejected")]
    DocumentRejected { id: String },

    #[error("cannot impute: every row is missing AFINN statistics")]
    CannotImpute,

    #[error("row {id:?} carries unimputed AFINN statistics")]
    NotImputed { id: String },

    #[error("dataset has a single class; training requires at least two")]
    SingleClass,

    #[error("dataset is empty")]
    EmptyDataset,

    #[error("feature schema mismatch: model expects {expected:?}, got {got:?}")]
    SchemaMismatch {
        expected: Vec<String>,
        got: Vec<String>,
    },

    #[error("unsupported model file version {found} (supported: {supported})")]
    ModelVersion { found: u32, supported: u32 },

    #[error("model file corrupted: {reason}")]
    CorruptModel { reason: String },

    #[error("fold count {k} invalid for {n} instances")]
    BadFoldCount { k: usize, n: usize },

    #[error("fold {fold}: {source}")]
    FoldTraining {
        fold: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("stratification requires at least two classes with instances")]
    UnstratifiableDataset,

    #[error("undefined metric: {what}")]
    UndefinedMetric { what: String },

    #[error("correlation undefined: {reason}")]
    DegenerateCorrelation { reason: String },

    #[error("correlation needs at least 4 stems in the union, got {n}")]
    TooFewStems { n: usize },

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error("http request failed: {0}")]
    Http(#[from] reqwest::Error),
}

impl Error {
    /// An i/o error annotated with the path it occurred on.
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

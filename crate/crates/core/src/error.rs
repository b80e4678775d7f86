use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("line {line}: invalid item id {token:?}")]
    Parse { line: usize, token: String },

    #[error("input contains no usable transactions")]
    EmptyDatabase,

    #[error("row {row} has {found} values, expected {expected}")]
    RaggedRow {
        row: usize,
        expected: usize,
        found: usize,
    },

    #[error("row {row}, column {column}: value is not finite")]
    NonFinite { row: usize, column: usize },

    #[error("csv: {0}")]
    Csv(String),

    #[error("itemset is empty")]
    EmptyItemset,

    #[error("item {0} is not in the database")]
    UnknownItem(u32),

    #[error("bond is undefined: no transaction contains any item of {0:?}")]
    UndefinedBond(Vec<u32>),

    #[error("support table is missing the subset {0:?}")]
    MissingSubset(Vec<u32>),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("oracle enumeration limited to {cap} items, database has {items}")]
    OracleCapExceeded { cap: usize, items: usize },

    #[error("expected a {expected} representation, got {found}")]
    KindMismatch { expected: String, found: String },

    #[error("representation file, line {line}: {message}")]
    Format { line: usize, message: String },
}

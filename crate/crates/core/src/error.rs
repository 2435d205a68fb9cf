use std::io;
use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("cannot read {path}: {source}")]
    Read { path: PathBuf, source: io::Error },
    #[error("input text is empty")]
    EmptyText,
    #[error("input contains the sentinel byte 0 at offset {offset}")]
    SentinelInInput { offset: usize },
    #[error("length {requested} is out of range (usable text length {available})")]
    LengthOutOfRange { requested: usize, available: usize },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("the compact suffix array needs a corpus with the sentinel appended")]
    SentinelRequired,
    #[error("corrupt compact suffix array: {0}")]
    Corrupt(String),
    #[error("range {start}..{end} exceeds {n} suffixes")]
    RangeOverflow { start: usize, end: usize, n: usize },
    #[error(transparent)]
    Format(#[from] crate::io::FormatError),
    #[error("verification mismatch: {0}")]
    Verification(String),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

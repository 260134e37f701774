use std::path::PathBuf;

use crate::apcore::Kind;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("progression a={a} d={d} k={k} repeats elements in Z_{n}")]
    NonDistinct { a: usize, d: usize, k: usize, n: usize },
    #[error("progression a={a} d={d} k={k} leaves [{n}]")]
    OutOfRange { a: usize, d: usize, k: usize, n: usize },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("coloring is not exact: color {missing} of 1..={r} is unused")]
    NotExact { missing: usize, r: usize },
    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("aw([{m}],{k}) is not cached but suffix pruning needs it")]
    CacheMiss { m: usize, k: usize },
    #[error("search gave up after {nodes} nodes")]
    Inconclusive { nodes: u64 },
    #[error("{0} colors exceed the solver's limit of 64")]
    TooManyColors(usize),
    #[error("n={n} is above the configured limit {limit}")]
    LimitExceeded { n: usize, limit: usize },
    #[error("a={a} and m={m} are not coprime")]
    NotCoprime { a: u64, m: u64 },
    #[error("value does not fit the integer width")]
    Overflow,
    #[error("precondition failed: {0}")]
    PreconditionFailed(String),
    #[error("conflicting records for {kind} n={n} k={k}: stored {stored}, new {new}")]
    Conflict { kind: Kind, n: usize, k: usize, stored: usize, new: usize },
    #[error("corrupt record in {path:?} line {line}: {msg}")]
    Corrupt { path: PathBuf, line: usize, msg: String },
    #[error("bound violated: {0}")]
    BoundViolation(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

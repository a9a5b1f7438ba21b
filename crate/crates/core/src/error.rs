use std::io;
use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = RqaError> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum RqaError {
    #[error("cannot read {}: {source}", path.display())]
    FileNotReadable {
        path: PathBuf,
        #[source]
        source: io::Error,
    },

    /// `row` is the 1-based line number in the input.
    #[error("row {row}: column {column} out of range ({found} columns)")]
    ColumnOutOfRange {
        row: usize,
        column: usize,
        found: usize,
    },

    #[error("row {row}: cannot parse {token:?} as a finite number")]
    Parse { row: usize, token: String },

    #[error("time series is empty")]
    EmptySeries,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error(
        "series of length {len} is too short for embedding dimension {dimension} and delay {delay}"
    )]
    SeriesTooShort {
        len: usize,
        dimension: usize,
        delay: usize,
    },

    #[error("state vectors differ in dimension ({left} vs {right})")]
    DimensionMismatch { left: usize, right: usize },

    #[error("{operator} on tile ({tile_row}, {tile_col}) ran before a predecessor tile")]
    DependencyViolation {
        operator: &'static str,
        tile_row: usize,
        tile_col: usize,
    },

    #[error("histograms cover different vector counts ({left} vs {right})")]
    ShapeMismatch { left: usize, right: usize },

    #[error("oracle refuses {n} vectors (limit {limit})")]
    TooLargeForOracle { n: usize, limit: usize },

    #[error("plot side {side} exceeds {limit} pixels")]
    PlotTooLarge { side: usize, limit: usize },

    #[error("worker pool: {0}")]
    WorkerPool(String),

    #[error(transparent)]
    Io(#[from] io::Error),
}

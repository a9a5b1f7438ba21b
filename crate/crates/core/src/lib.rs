//! Recurrence quantification analysis (RQA) for very long time series.
//!
//! The recurrence matrix of an embedded series is never held in memory as a
//! whole. It is cut into square tiles; each tile is filled, scanned for
//! diagonal, vertical and white vertical lines, and dropped. Lines that run
//! across tile borders are stitched together through carryover buffers, so
//! the resulting line-length histograms are exact and independent of the
//! tile size and of the number of workers.
//!
//! ```
//! use tilerqa::{compute_measures, embed, generate_sine, run_analysis, AnalysisSettings, Metric};
//!
//! let series = generate_sine(1_001, 10.0 * std::f64::consts::PI).unwrap();
//! let settings = AnalysisSettings::new(1.0)
//!     .with_embedding(2, 2)
//!     .with_metric(Metric::Euclidean);
//! let embedded = embed(&series, 2, 2).unwrap();
//! let output = run_analysis(&embedded, &settings, 128, 2).unwrap();
//! let result = compute_measures(&output.histograms, &settings);
//! assert!(result.measures.determinism.unwrap() > 0.9);
//! ```

pub mod embedding;
pub mod error;
pub mod histogram;
pub mod ingest;
pub mod measures;
pub mod oracle;
pub mod plot;
pub mod tiling;

pub use embedding::{distance, embed, is_recurrent, AnalysisSettings, EmbeddedSeries, Metric};
pub use error::{Result, RqaError};
pub use histogram::{Histogram, LineHistograms};
pub use ingest::{generate_sine, read_column, ColumnReader, TimeSeries};
pub use measures::{compute_measures, Measures, RqaResult};
pub use oracle::{oracle_analyze, oracle_matrix, ORACLE_MAX_VECTORS};
pub use plot::{recurrence_plot, render, PbmImage, RecurrencePlot};
pub use tiling::{
    create_recurrence_matrix, detect_diagonal_lines, detect_vertical_lines, flush_carryovers,
    partition, run_analysis, AnalysisOutput, CarryoverBuffers, OperatorTiming, Tile, TileGrid,
    TileSpec, DEFAULT_TILE_SIZE,
};

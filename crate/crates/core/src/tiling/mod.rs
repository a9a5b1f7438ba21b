//! Tiled evaluation of the recurrence matrix.
//!
//! The N×N matrix is cut into square tiles ([`partition`]). Each tile runs
//! three operators: fill the bit matrix ([`create_recurrence_matrix`]),
//! scan its diagonal segments ([`detect_diagonal_lines`]) and scan its
//! column segments ([`detect_vertical_lines`]). Runs that reach a tile
//! border are parked in [`CarryoverBuffers`] and continued by the next tile
//! on the same diagonal or column; whatever is still open at the end is
//! emitted by [`flush_carryovers`].
//!
//! [`run_analysis`] drives all of this over a worker pool.

mod carryover;
mod detect;
mod engine;
mod grid;
pub(crate) mod tile;

pub use carryover::{flush_carryovers, CarryoverBuffers};
pub use detect::{detect_diagonal_lines, detect_vertical_lines};
pub use engine::{run_analysis, AnalysisOutput, OperatorTiming, DEFAULT_TILE_SIZE};
pub use grid::{partition, TileGrid, TileSpec};
pub use tile::{create_recurrence_matrix, Tile};

use std::time::{Duration, Instant};

use rayon::prelude::*;

use super::carryover::{CarryView, CarryoverBuffers};
use super::detect::{scan_columns, scan_diagonals, RunTally};
use super::grid::{partition, TileSpec};
use super::tile::fill;
use crate::embedding::{AnalysisSettings, EmbeddedSeries};
use crate::error::{Result, RqaError};
use crate::histogram::LineHistograms;

/// 4096² bits = 2 MiB per tile.
pub const DEFAULT_TILE_SIZE: usize = 4096;

/// Time spent in each operator, summed over all tiles and workers, plus
/// the wall-clock time of the whole run. Operator times overlap when more
/// than one worker is active.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct OperatorTiming {
    pub create_recurrence_matrix: Duration,
    pub detect_diagonal_lines: Duration,
    pub detect_vertical_lines: Duration,
    pub total: Duration,
}

#[derive(Debug, Clone)]
pub struct AnalysisOutput {
    pub histograms: LineHistograms,
    pub timing: OperatorTiming,
}

struct TileOutcome {
    diagonal: RunTally,
    vertical: RunTally,
    white_vertical: RunTally,
    recurrence_points: u64,
    timing: OperatorTiming,
}

fn process_tile(
    spec: TileSpec,
    mut carry: CarryView<'_>,
    embedded: &EmbeddedSeries,
    settings: &AnalysisSettings,
    dense_len: usize,
) -> Result<TileOutcome> {
    let t0 = Instant::now();
    let tile = fill(spec, embedded, settings);
    let t1 = Instant::now();
    let mut diagonal = RunTally::new(dense_len);
    scan_diagonals(&tile, &mut carry, &mut diagonal)?;
    let t2 = Instant::now();
    let mut vertical = RunTally::new(dense_len);
    let mut white_vertical = RunTally::new(dense_len);
    scan_columns(&tile, &mut carry, &mut vertical, &mut white_vertical)?;
    let t3 = Instant::now();
    Ok(TileOutcome {
        diagonal,
        vertical,
        white_vertical,
        recurrence_points: tile.count_ones(),
        timing: OperatorTiming {
            create_recurrence_matrix: t1 - t0,
            detect_diagonal_lines: t2 - t1,
            detect_vertical_lines: t3 - t2,
            total: Duration::ZERO,
        },
    })
}

/// Computes the exact line histograms of the recurrence matrix of
/// `embedded`, tile by tile, on `workers` threads.
///
/// Tiles are scheduled in anti-diagonal waves (all tiles with equal
/// `row + col` run concurrently, waves run in order), which places every
/// tile after the neighbours its carried-in lines come from. Within a wave
/// the tiles share no carryover entry. Results do not depend on
/// `tile_size` or `workers`.
pub fn run_analysis(
    embedded: &EmbeddedSeries,
    settings: &AnalysisSettings,
    tile_size: usize,
    workers: usize,
) -> Result<AnalysisOutput> {
    let started = Instant::now();
    embedded.check_settings(settings)?;
    if workers == 0 {
        return Err(RqaError::InvalidArgument(
            "worker count must be >= 1".into(),
        ));
    }
    let n = embedded.len();
    let grid = partition(n, tile_size)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .thread_name(|i| format!("tilerqa-worker-{i}"))
        .build()
        .map_err(|e| RqaError::WorkerPool(e.to_string()))?;

    let mut carry = CarryoverBuffers::new(n);
    let mut diagonal = RunTally::new(n + 1);
    let mut vertical = RunTally::new(n + 1);
    let mut white_vertical = RunTally::new(n + 1);
    let mut recurrence_points = 0u64;
    let mut timing = OperatorTiming::default();

    // lines completed inside a tile are at most carry + tile extent long
    let tile_dense_len = (2 * grid.tile_size()).min(n) + 1;
    for wave in 0..grid.wave_count() {
        let specs = grid.wave(wave);
        let views = carry.views(&specs)?;
        let outcomes: Vec<TileOutcome> = pool.install(|| {
            specs
                .into_par_iter()
                .zip(views)
                .map(|(spec, view)| process_tile(spec, view, embedded, settings, tile_dense_len))
                .collect::<Result<_>>()
        })?;
        for tile in outcomes {
            diagonal.add_from(&tile.diagonal);
            vertical.add_from(&tile.vertical);
            white_vertical.add_from(&tile.white_vertical);
            recurrence_points += tile.recurrence_points;
            timing.create_recurrence_matrix += tile.timing.create_recurrence_matrix;
            timing.detect_diagonal_lines += tile.timing.detect_diagonal_lines;
            timing.detect_vertical_lines += tile.timing.detect_vertical_lines;
        }
    }
    debug_assert!(carry.is_complete());
    carry.flush_into(&mut diagonal, &mut vertical, &mut white_vertical);

    timing.total = started.elapsed();
    Ok(AnalysisOutput {
        histograms: LineHistograms {
            n_vectors: n,
            recurrence_points,
            diagonal: diagonal.into_histogram(),
            vertical: vertical.into_histogram(),
            white_vertical: white_vertical.into_histogram(),
        },
        timing,
    })
}

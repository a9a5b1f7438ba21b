//! Brute-force reference: the whole matrix in memory, every diagonal and
//! column scanned start to end on one thread.
//!
//! Shares only [`EmbeddedSeries::recurrence`] with the tiled engine, so a
//! disagreement between the two isolates the tiling and carryover logic.

use crate::embedding::{AnalysisSettings, EmbeddedSeries};
use crate::error::{Result, RqaError};
use crate::histogram::{Histogram, LineHistograms};

pub const ORACLE_MAX_VECTORS: usize = 20_000;

/// Full recurrence matrix, `matrix[i][j] = R(i, j)`.
pub fn oracle_matrix(
    embedded: &EmbeddedSeries,
    settings: &AnalysisSettings,
) -> Result<Vec<Vec<bool>>> {
    embedded.check_settings(settings)?;
    let n = embedded.len();
    if n > ORACLE_MAX_VECTORS {
        return Err(RqaError::TooLargeForOracle {
            n,
            limit: ORACLE_MAX_VECTORS,
        });
    }
    Ok((0..n)
        .map(|i| {
            (0..n)
                .map(|j| embedded.recurrence(i, j, settings))
                .collect()
        })
        .collect())
}

/// Splits a sequence of cells into maximal runs and records the lengths of
/// the runs whose value is `colour`. A run touching the end is recorded at
/// its truncated length.
fn record_runs(cells: impl Iterator<Item = bool>, colour: bool, hist: &mut Histogram) {
    let mut run = 0;
    for cell in cells {
        if cell == colour {
            run += 1;
        } else if run > 0 {
            hist.add(run, 1);
            run = 0;
        }
    }
    if run > 0 {
        hist.add(run, 1);
    }
}

#[allow(clippy::needless_range_loop)]
pub fn oracle_analyze(
    embedded: &EmbeddedSeries,
    settings: &AnalysisSettings,
) -> Result<LineHistograms> {
    let matrix = oracle_matrix(embedded, settings)?;
    let n = matrix.len();
    let mut out = LineHistograms::empty(n);

    out.recurrence_points = matrix
        .iter()
        .map(|row| row.iter().filter(|&&x| x).count() as u64)
        .sum();

    // diagonal with offset d = j - i
    for d in -(n as i64 - 1)..n as i64 {
        let (i0, j0) = if d >= 0 {
            (0, d as usize)
        } else {
            ((-d) as usize, 0)
        };
        let len = n - d.unsigned_abs() as usize;
        record_runs(
            (0..len).map(|t| matrix[i0 + t][j0 + t]),
            true,
            &mut out.diagonal,
        );
    }

    for j in 0..n {
        record_runs((0..n).map(|i| matrix[i][j]), true, &mut out.vertical);
        record_runs((0..n).map(|i| matrix[i][j]), false, &mut out.white_vertical);
    }
    Ok(out)
}

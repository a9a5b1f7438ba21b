//! Operators II and III: run-length scans of diagonal and column segments.
//!
//! Both scans walk a tile row by row, 64 columns at a time, and only touch
//! the cells where a run changes colour. A run is identified by the global
//! row at which it started, so its length at any point is `row - start`;
//! runs carried in from an earlier tile simply start above the tile.

use std::collections::BTreeMap;

use super::carryover::{CarryView, CarryoverBuffers};
use super::tile::Tile;
use crate::error::{Result, RqaError};
use crate::histogram::Histogram;

/// Receives the length of every completed line.
pub(crate) trait RunSink {
    fn record(&mut self, length: usize);
}

impl RunSink for Histogram {
    fn record(&mut self, length: usize) {
        self.add(length, 1);
    }
}

/// Histogram accumulator with a dense prefix for short lengths.
#[derive(Debug, Clone)]
pub(crate) struct RunTally {
    dense: Vec<u64>,
    overflow: BTreeMap<usize, u64>,
}

impl RunTally {
    /// Lengths below `dense_len` are counted in a flat array.
    pub fn new(dense_len: usize) -> Self {
        Self {
            dense: vec![0; dense_len],
            overflow: BTreeMap::new(),
        }
    }

    pub fn add_from(&mut self, other: &RunTally) {
        for (l, &c) in other.dense.iter().enumerate().filter(|(_, &c)| c > 0) {
            self.add(l, c);
        }
        for (&l, &c) in &other.overflow {
            self.add(l, c);
        }
    }

    fn add(&mut self, length: usize, count: u64) {
        match self.dense.get_mut(length) {
            Some(slot) => *slot += count,
            None => *self.overflow.entry(length).or_insert(0) += count,
        }
    }

    pub fn into_histogram(self) -> Histogram {
        self.dense
            .into_iter()
            .enumerate()
            .chain(self.overflow)
            .filter(|&(_, c)| c > 0)
            .collect()
    }
}

impl RunSink for RunTally {
    #[inline]
    fn record(&mut self, length: usize) {
        self.add(length, 1);
    }
}

/// Operator II over one tile. The tile's predecessors on every diagonal it
/// crosses must already have been scanned.
pub fn detect_diagonal_lines(
    tile: &Tile,
    carryover: &mut CarryoverBuffers,
    histogram: &mut Histogram,
) -> Result<()> {
    let mut view = carryover.view(&tile.spec())?;
    scan_diagonals(tile, &mut view, histogram)
}

/// Operator III over one tile: recurrence runs go to `vertical`,
/// non-recurrence runs to `white_vertical`. The tile above must already have
/// been scanned.
pub fn detect_vertical_lines(
    tile: &Tile,
    carryover: &mut CarryoverBuffers,
    vertical: &mut Histogram,
    white_vertical: &mut Histogram,
) -> Result<()> {
    let mut view = carryover.view(&tile.spec())?;
    scan_columns(tile, &mut view, vertical, white_vertical)
}

#[inline]
fn for_each_set_bit(mut word: u64, mut f: impl FnMut(usize)) {
    while word != 0 {
        f(word.trailing_zeros() as usize);
        word &= word - 1;
    }
}

fn chunk_mask(width: usize, c: usize) -> u64 {
    let nbits = (width - 64 * c).min(64);
    if nbits == 64 {
        u64::MAX
    } else {
        (1u64 << nbits) - 1
    }
}

/// First cell of a diagonal segment: continue the carried run or close it.
#[inline]
fn enter_diagonal(open: usize, row: usize, bit: bool, start: &mut usize, sink: &mut impl RunSink) {
    if bit {
        *start = row - open;
    } else if open > 0 {
        sink.record(open);
    }
}

#[allow(clippy::needless_range_loop)]
pub(crate) fn scan_diagonals(
    tile: &Tile,
    carry: &mut CarryView<'_>,
    sink: &mut impl RunSink,
) -> Result<()> {
    let spec = tile.spec();
    let (h, w, r0) = (spec.height, spec.width, spec.row_offset);
    let diagonals = h + w - 1;

    // Local diagonal q = v - u + (h - 1) enters the tile at the top row when
    // q >= h - 1 and at the left column otherwise.
    let entry_row = |q: usize| r0 + (h - 1).saturating_sub(q);
    if (0..diagonals).any(|q| carry.diagonal_next_row[q] != entry_row(q)) {
        return Err(RqaError::DependencyViolation {
            operator: "detect_diagonal_lines",
            tile_row: spec.tile_row,
            tile_col: spec.tile_col,
        });
    }

    let mut start = vec![0usize; diagonals];
    for v in 0..w {
        let q = v + h - 1;
        enter_diagonal(carry.diagonal[q], r0, tile.get(0, v), &mut start[q], sink);
    }

    let chunks = tile.chunks_per_row();
    let mut prev: Vec<u64> = (0..chunks).map(|c| tile.row_chunk(0, c)).collect();
    let mut cur = vec![0u64; chunks];
    for u in 1..h {
        let row = r0 + u;
        let q = h - 1 - u;
        enter_diagonal(carry.diagonal[q], row, tile.get(u, 0), &mut start[q], sink);
        for c in 0..chunks {
            cur[c] = tile.row_chunk(u, c);
            let carried = if c > 0 { prev[c - 1] >> 63 } else { 0 };
            let pred = (prev[c] << 1) | carried;
            let mut changed = (cur[c] ^ pred) & chunk_mask(w, c);
            if c == 0 {
                changed &= !1;
            }
            let word = cur[c];
            for_each_set_bit(changed, |b| {
                let q = 64 * c + b + h - 1 - u;
                if word >> b & 1 == 1 {
                    start[q] = row;
                } else {
                    sink.record(row - start[q]);
                }
            });
        }
        std::mem::swap(&mut prev, &mut cur);
    }

    for q in 0..diagonals {
        let u_last = (h - 1).min(w + h - 2 - q);
        let v_last = u_last + q + 1 - h;
        let end = r0 + u_last + 1;
        carry.diagonal[q] = if tile.get(u_last, v_last) {
            end - start[q]
        } else {
            0
        };
        carry.diagonal_next_row[q] = end;
    }
    Ok(())
}

#[allow(clippy::needless_range_loop)]
pub(crate) fn scan_columns(
    tile: &Tile,
    carry: &mut CarryView<'_>,
    vertical: &mut impl RunSink,
    white_vertical: &mut impl RunSink,
) -> Result<()> {
    let spec = tile.spec();
    let (h, w, r0) = (spec.height, spec.width, spec.row_offset);
    if carry.column_next_row.iter().any(|&r| r != r0) {
        return Err(RqaError::DependencyViolation {
            operator: "detect_vertical_lines",
            tile_row: spec.tile_row,
            tile_col: spec.tile_col,
        });
    }

    // colour of the run currently open in each column, as row-chunk words
    let chunks = tile.chunks_per_row();
    let mut colour = vec![0u64; chunks];
    let mut start = vec![r0; w];
    for v in 0..w {
        let (black, white) = (carry.vertical[v], carry.white_vertical[v]);
        let is_black = if black > 0 {
            start[v] = r0 - black;
            true
        } else if white > 0 {
            start[v] = r0 - white;
            false
        } else {
            tile.get(0, v)
        };
        colour[v / 64] |= (is_black as u64) << (v % 64);
    }

    for u in 0..h {
        let row = r0 + u;
        for c in 0..chunks {
            let word = tile.row_chunk(u, c);
            let before = colour[c];
            for_each_set_bit(word ^ before, |b| {
                let v = 64 * c + b;
                let len = row - start[v];
                if before >> b & 1 == 1 {
                    vertical.record(len);
                } else {
                    white_vertical.record(len);
                }
                start[v] = row;
            });
            colour[c] = word;
        }
    }

    let end = r0 + h;
    for v in 0..w {
        let len = end - start[v];
        if colour[v / 64] >> (v % 64) & 1 == 1 {
            carry.vertical[v] = len;
            carry.white_vertical[v] = 0;
        } else {
            carry.vertical[v] = 0;
            carry.white_vertical[v] = len;
        }
        carry.column_next_row[v] = end;
    }
    Ok(())
}

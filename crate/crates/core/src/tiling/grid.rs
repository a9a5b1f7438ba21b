use crate::error::{Result, RqaError};

/// Geometry of one tile: block coordinates and the global index ranges it
/// covers, rows `[row_offset, row_offset + height)` and columns
/// `[col_offset, col_offset + width)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct TileSpec {
    pub tile_row: usize,
    pub tile_col: usize,
    pub row_offset: usize,
    pub col_offset: usize,
    pub height: usize,
    pub width: usize,
}

impl TileSpec {
    /// Smallest global diagonal index `k = j - i + (n - 1)` touching the tile.
    pub(crate) fn first_diagonal(&self, n: usize) -> usize {
        self.col_offset + n - self.row_offset - self.height
    }

    /// Number of distinct diagonals crossing the tile.
    pub(crate) fn diagonal_count(&self) -> usize {
        self.height + self.width - 1
    }

    pub(crate) fn fits(&self, n: usize) -> bool {
        self.height >= 1
            && self.width >= 1
            && self.row_offset + self.height <= n
            && self.col_offset + self.width <= n
    }
}

/// Square partition of an N×N matrix into ⌈N/T⌉² tiles; tiles on the last
/// block row and column may be smaller than T.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TileGrid {
    n: usize,
    tile_size: usize,
    per_side: usize,
}

pub fn partition(n: usize, tile_size: usize) -> Result<TileGrid> {
    if n < 1 || tile_size < 1 {
        return Err(RqaError::InvalidArgument(format!(
            "cannot partition N={n} with tile size {tile_size}"
        )));
    }
    Ok(TileGrid {
        n,
        tile_size,
        per_side: n.div_ceil(tile_size),
    })
}

impl TileGrid {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn tile_size(&self) -> usize {
        self.tile_size
    }

    /// Tiles per block row (and per block column).
    pub fn tiles_per_side(&self) -> usize {
        self.per_side
    }

    pub fn tile_count(&self) -> usize {
        self.per_side * self.per_side
    }

    fn extent(&self, block: usize) -> (usize, usize) {
        let start = block * self.tile_size;
        (start, (self.n - start).min(self.tile_size))
    }

    pub fn tile(&self, tile_row: usize, tile_col: usize) -> TileSpec {
        assert!(tile_row < self.per_side && tile_col < self.per_side);
        let (row_offset, height) = self.extent(tile_row);
        let (col_offset, width) = self.extent(tile_col);
        TileSpec {
            tile_row,
            tile_col,
            row_offset,
            col_offset,
            height,
            width,
        }
    }

    /// All tiles in row-major block order.
    pub fn tiles(&self) -> impl Iterator<Item = TileSpec> + '_ {
        (0..self.per_side).flat_map(move |r| (0..self.per_side).map(move |c| self.tile(r, c)))
    }

    pub fn wave_count(&self) -> usize {
        2 * self.per_side - 1
    }

    /// Tiles with `tile_row + tile_col == wave`, by ascending column.
    ///
    /// Every predecessor a tile depends on, (r-1, c-1), (r-1, c) and
    /// (r, c-1), lies on an earlier wave, and no two tiles of one wave share
    /// a column or a diagonal.
    pub fn wave(&self, wave: usize) -> Vec<TileSpec> {
        let last = self.per_side - 1;
        let lo = wave.saturating_sub(last);
        let hi = wave.min(last);
        (lo..=hi).rev().map(|r| self.tile(r, wave - r)).collect()
    }
}

use super::detect::RunSink;
use super::grid::TileSpec;
use crate::error::{Result, RqaError};
use crate::histogram::LineHistograms;

/// Lengths of lines still open at the border of the processed region.
///
/// `diagonal[k]` belongs to the diagonal `j - i = k - (N - 1)`, `vertical[j]`
/// and `white_vertical[j]` to column `j`. Besides the open lengths the
/// buffers track, per diagonal and per column, the next row a detector must
/// start at; a tile whose segments do not start there is rejected with
/// [`RqaError::DependencyViolation`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CarryoverBuffers {
    n: usize,
    diagonal: Vec<usize>,
    vertical: Vec<usize>,
    white_vertical: Vec<usize>,
    diagonal_next_row: Vec<usize>,
    column_next_row: Vec<usize>,
}

impl CarryoverBuffers {
    pub fn new(n: usize) -> Self {
        let diagonals = (2 * n).saturating_sub(1);
        Self {
            n,
            diagonal: vec![0; diagonals],
            vertical: vec![0; n],
            white_vertical: vec![0; n],
            // diagonal k starts at row max(0, N - 1 - k)
            diagonal_next_row: (0..diagonals).map(|k| (n - 1).saturating_sub(k)).collect(),
            column_next_row: vec![0; n],
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn diagonal(&self) -> &[usize] {
        &self.diagonal
    }

    pub fn vertical(&self) -> &[usize] {
        &self.vertical
    }

    pub fn white_vertical(&self) -> &[usize] {
        &self.white_vertical
    }

    /// True when no line is open.
    pub fn is_clear(&self) -> bool {
        [&self.diagonal, &self.vertical, &self.white_vertical]
            .iter()
            .all(|b| b.iter().all(|&x| x == 0))
    }

    /// True when every diagonal and column has been scanned to the bottom
    /// (or right) edge of the matrix.
    pub fn is_complete(&self) -> bool {
        let n = self.n;
        self.column_next_row.iter().all(|&r| r == n)
            && self
                .diagonal_next_row
                .iter()
                .enumerate()
                .all(|(k, &r)| r == n.min(2 * n - 1 - k))
    }

    pub(crate) fn view(&mut self, spec: &TileSpec) -> Result<CarryView<'_>> {
        let mut views = self.views(std::slice::from_ref(spec))?;
        Ok(views.pop().expect("one spec, one view"))
    }

    /// Disjoint views for tiles ordered by ascending column whose column and
    /// diagonal ranges do not overlap (one wavefront of the grid).
    pub(crate) fn views(&mut self, specs: &[TileSpec]) -> Result<Vec<CarryView<'_>>> {
        let n = self.n;
        let mut diag = Carver::new(&mut self.diagonal);
        let mut diag_next = Carver::new(&mut self.diagonal_next_row);
        let mut vert = Carver::new(&mut self.vertical);
        let mut white = Carver::new(&mut self.white_vertical);
        let mut col_next = Carver::new(&mut self.column_next_row);

        let mut out = Vec::with_capacity(specs.len());
        for spec in specs {
            if !spec.fits(n) {
                return Err(RqaError::InvalidArgument(format!(
                    "tile {spec:?} does not fit carryover buffers for N={n}"
                )));
            }
            let k0 = spec.first_diagonal(n);
            let nd = spec.diagonal_count();
            let (j0, nc) = (spec.col_offset, spec.width);
            out.push(CarryView {
                diagonal: diag.take(k0, nd)?,
                diagonal_next_row: diag_next.take(k0, nd)?,
                vertical: vert.take(j0, nc)?,
                white_vertical: white.take(j0, nc)?,
                column_next_row: col_next.take(j0, nc)?,
            });
        }
        Ok(out)
    }

    pub(crate) fn flush_into(
        &mut self,
        diagonal: &mut impl RunSink,
        vertical: &mut impl RunSink,
        white_vertical: &mut impl RunSink,
    ) {
        for (buf, sink) in [
            (&mut self.diagonal, diagonal as &mut dyn RunSink),
            (&mut self.vertical, vertical as &mut dyn RunSink),
            (&mut self.white_vertical, white_vertical as &mut dyn RunSink),
        ] {
            for len in buf.iter_mut() {
                if *len > 0 {
                    sink.record(*len);
                    *len = 0;
                }
            }
        }
    }
}

/// Emits every open line at its current (border-truncated) length and
/// zeroes the buffers.
pub fn flush_carryovers(carryover: &mut CarryoverBuffers, histograms: &mut LineHistograms) {
    carryover.flush_into(
        &mut histograms.diagonal,
        &mut histograms.vertical,
        &mut histograms.white_vertical,
    );
}

/// Carryover slices covering exactly one tile: diagonals
/// `first_diagonal .. first_diagonal + height + width - 1` and columns
/// `col_offset .. col_offset + width`, both indexed from 0.
pub(crate) struct CarryView<'a> {
    pub diagonal: &'a mut [usize],
    pub diagonal_next_row: &'a mut [usize],
    pub vertical: &'a mut [usize],
    pub white_vertical: &'a mut [usize],
    pub column_next_row: &'a mut [usize],
}

/// Hands out consecutive non-overlapping sub-slices.
struct Carver<'a> {
    rest: &'a mut [usize],
    consumed: usize,
}

impl<'a> Carver<'a> {
    fn new(slice: &'a mut [usize]) -> Self {
        Self {
            rest: slice,
            consumed: 0,
        }
    }

    fn take(&mut self, start: usize, len: usize) -> Result<&'a mut [usize]> {
        let skip = start.checked_sub(self.consumed).ok_or_else(|| {
            RqaError::InvalidArgument("overlapping tiles in one wavefront".into())
        })?;
        let rest = std::mem::take(&mut self.rest);
        if skip + len > rest.len() {
            return Err(RqaError::InvalidArgument(
                "tile outside carryover buffers".into(),
            ));
        }
        let (mine, rest) = rest[skip..].split_at_mut(len);
        self.rest = rest;
        self.consumed = start + len;
        Ok(mine)
    }
}

//! Recurrence plots as binary PBM (P4) bitmaps.
//!
//! Row 0 of the matrix is the bottom row of the image; column 0 is the left
//! edge. With a reduction factor `b > 1` each pixel is the OR of a `b×b`
//! block of the matrix, so no recurrence point disappears.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use rayon::prelude::*;

use crate::embedding::{AnalysisSettings, EmbeddedSeries};
use crate::error::{Result, RqaError};
use crate::tiling::{partition, DEFAULT_TILE_SIZE};

pub const MAX_PLOT_SIDE: usize = 65_536;

/// Bit-packed, possibly reduced, recurrence matrix in matrix orientation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RecurrencePlot {
    n: usize,
    reduction_factor: usize,
    side: usize,
    words_per_row: usize,
    bits: Vec<u64>,
}

impl RecurrencePlot {
    fn blank(n: usize, reduction_factor: usize) -> Self {
        let side = n.div_ceil(reduction_factor);
        let words_per_row = side.div_ceil(64);
        Self {
            n,
            reduction_factor,
            side,
            words_per_row,
            bits: vec![0; side * words_per_row],
        }
    }

    /// Dimension of the source matrix.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn reduction_factor(&self) -> usize {
        self.reduction_factor
    }

    /// Pixels per image side, `⌈N / b⌉`.
    pub fn side(&self) -> usize {
        self.side
    }

    /// Plot cell `(row, col)` in matrix orientation.
    pub fn get(&self, row: usize, col: usize) -> bool {
        assert!(row < self.side && col < self.side);
        self.bits[row * self.words_per_row + col / 64] >> (col % 64) & 1 == 1
    }

    fn set(&mut self, row: usize, col: usize) {
        self.bits[row * self.words_per_row + col / 64] |= 1 << (col % 64);
    }

    pub fn write_pbm<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        write!(out, "P4\n{} {}\n", self.side, self.side)?;
        let mut line = vec![0u8; self.side.div_ceil(8)];
        for row in (0..self.side).rev() {
            line.fill(0);
            for col in 0..self.side {
                if self.get(row, col) {
                    line[col / 8] |= 0x80 >> (col % 8);
                }
            }
            out.write_all(&line)?;
        }
        Ok(())
    }

    pub fn to_pbm_bytes(&self) -> Vec<u8> {
        let mut buf = Vec::new();
        self.write_pbm(&mut buf)
            .expect("writing to a Vec cannot fail");
        buf
    }
}

/// Computes the plot with the tiled operator I on `workers` threads.
pub fn recurrence_plot(
    embedded: &EmbeddedSeries,
    settings: &AnalysisSettings,
    reduction_factor: usize,
    tile_size: usize,
    workers: usize,
) -> Result<RecurrencePlot> {
    embedded.check_settings(settings)?;
    if reduction_factor == 0 {
        return Err(RqaError::InvalidArgument(
            "reduction factor must be >= 1".into(),
        ));
    }
    if workers == 0 {
        return Err(RqaError::InvalidArgument(
            "worker count must be >= 1".into(),
        ));
    }
    let n = embedded.len();
    let side = n.div_ceil(reduction_factor);
    if side > MAX_PLOT_SIDE {
        return Err(RqaError::PlotTooLarge {
            side,
            limit: MAX_PLOT_SIDE,
        });
    }

    let grid = partition(n, tile_size)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| RqaError::WorkerPool(e.to_string()))?;

    let mut plot = RecurrencePlot::blank(n, reduction_factor);
    let specs: Vec<_> = grid.tiles().collect();
    // at most 2·workers tiles alive at once
    for batch in specs.chunks(2 * workers) {
        let tiles: Vec<_> = pool.install(|| {
            batch
                .par_iter()
                .map(|&spec| crate::tiling::tile::fill(spec, embedded, settings))
                .collect()
        });
        for tile in tiles {
            let spec = tile.spec();
            for u in 0..spec.height {
                let row = (spec.row_offset + u) / reduction_factor;
                for c in 0..tile.chunks_per_row() {
                    let mut word = tile.row_chunk(u, c);
                    while word != 0 {
                        let v = 64 * c + word.trailing_zeros() as usize;
                        plot.set(row, (spec.col_offset + v) / reduction_factor);
                        word &= word - 1;
                    }
                }
            }
        }
    }
    Ok(plot)
}

/// Writes the recurrence plot of `embedded` to `out` as a P4 bitmap.
pub fn render(
    embedded: &EmbeddedSeries,
    settings: &AnalysisSettings,
    reduction_factor: usize,
    out: impl AsRef<Path>,
) -> Result<RecurrencePlot> {
    let workers = std::thread::available_parallelism().map_or(1, |n| n.get());
    let plot = recurrence_plot(
        embedded,
        settings,
        reduction_factor,
        DEFAULT_TILE_SIZE,
        workers,
    )?;
    let mut file = BufWriter::new(File::create(out)?);
    plot.write_pbm(&mut file)?;
    file.flush()?;
    Ok(plot)
}

/// A decoded P4 bitmap. `true` is black.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PbmImage {
    pub width: usize,
    pub height: usize,
    pixels: Vec<bool>,
}

impl PbmImage {
    pub fn parse(data: &[u8]) -> Result<Self> {
        let bad = |msg: &str| RqaError::InvalidArgument(format!("malformed PBM: {msg}"));
        if !data.starts_with(b"P4") {
            return Err(bad("missing P4 magic"));
        }
        let mut pos = 2;
        let mut fields = [0usize; 2];
        for field in &mut fields {
            // whitespace and comments before each header number
            loop {
                match data.get(pos) {
                    Some(b) if b.is_ascii_whitespace() => pos += 1,
                    Some(b'#') => {
                        while data.get(pos).is_some_and(|&b| b != b'\n') {
                            pos += 1;
                        }
                    }
                    _ => break,
                }
            }
            let digits = data[pos..]
                .iter()
                .take_while(|b| b.is_ascii_digit())
                .count();
            if digits == 0 {
                return Err(bad("expected a number"));
            }
            *field = std::str::from_utf8(&data[pos..pos + digits])
                .unwrap()
                .parse()
                .map_err(|_| bad("dimension out of range"))?;
            pos += digits;
        }
        if !data.get(pos).is_some_and(|b| b.is_ascii_whitespace()) {
            return Err(bad("missing separator after header"));
        }
        pos += 1;

        let [width, height] = fields;
        let stride = width.div_ceil(8);
        let body = &data[pos..];
        if body.len() < stride * height {
            return Err(bad("truncated raster"));
        }
        let pixels = (0..height)
            .flat_map(|y| (0..width).map(move |x| (y, x)))
            .map(|(y, x)| body[y * stride + x / 8] & (0x80 >> (x % 8)) != 0)
            .collect();
        Ok(Self {
            width,
            height,
            pixels,
        })
    }

    /// Pixel at column `x`, row `y` counted from the top.
    pub fn pixel(&self, x: usize, y: usize) -> bool {
        self.pixels[y * self.width + x]
    }

    /// Undoes the bottom-left origin: `matrix[i][j]` is the pixel of matrix
    /// row `i`, column `j`.
    pub fn to_matrix(&self) -> Vec<Vec<bool>> {
        (0..self.height)
            .map(|i| {
                (0..self.width)
                    .map(|j| self.pixel(j, self.height - 1 - i))
                    .collect()
            })
            .collect()
    }
}

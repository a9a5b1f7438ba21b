use super::grid::TileSpec;
use crate::embedding::{
    strided_distance, strided_distance_fixed, AnalysisSettings, Chebyshev, EmbeddedSeries, Euclid,
    Metric, Norm, Taxicab,
};
use crate::error::{Result, RqaError};

/// One filled sub-matrix of the recurrence matrix.
///
/// Bits are packed row-major without row padding: element `(u, v)` is bit
/// `u * width + v`, least significant bit first within each byte. Storage is
/// exactly `⌈height·width / 8⌉` bytes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tile {
    spec: TileSpec,
    bits: Vec<u8>,
    ones: u64,
}

impl Tile {
    pub fn spec(&self) -> TileSpec {
        self.spec
    }

    pub fn height(&self) -> usize {
        self.spec.height
    }

    pub fn width(&self) -> usize {
        self.spec.width
    }

    pub fn as_bytes(&self) -> &[u8] {
        &self.bits
    }

    /// Number of recurrence points in the tile.
    pub fn count_ones(&self) -> u64 {
        self.ones
    }

    /// Local element `(u, v)`, i.e. global `(row_offset + u, col_offset + v)`.
    pub fn get(&self, u: usize, v: usize) -> bool {
        assert!(u < self.spec.height && v < self.spec.width);
        let bit = u * self.spec.width + v;
        self.bits[bit >> 3] >> (bit & 7) & 1 == 1
    }

    pub(crate) fn chunks_per_row(&self) -> usize {
        self.spec.width.div_ceil(64)
    }

    /// Columns `64c .. 64c + 64` of row `u` as a word, column `64c` in the
    /// least significant bit. Columns past the tile width read as 0.
    #[inline]
    pub(crate) fn row_chunk(&self, u: usize, c: usize) -> u64 {
        let first = 64 * c;
        let nbits = (self.spec.width - first).min(64);
        let pos = u * self.spec.width + first;
        let byte = pos >> 3;
        let shift = pos & 7;
        let raw = match self.bits.get(byte..byte + 16) {
            Some(s) => u128::from_le_bytes(s.try_into().unwrap()),
            None => {
                let mut buf = [0u8; 16];
                let tail = &self.bits[byte..];
                buf[..tail.len()].copy_from_slice(tail);
                u128::from_le_bytes(buf)
            }
        };
        let word = (raw >> shift) as u64;
        if nbits == 64 {
            word
        } else {
            word & ((1u64 << nbits) - 1)
        }
    }
}

/// Appends bit groups to a byte vector in order.
struct BitWriter {
    bytes: Vec<u8>,
    acc: u64,
    filled: u32,
}

impl BitWriter {
    fn with_bits(total: usize) -> Self {
        Self {
            bytes: Vec::with_capacity(total.div_ceil(8) + 8),
            acc: 0,
            filled: 0,
        }
    }

    /// Appends the low `nbits` of `word` (higher bits must be zero).
    #[inline]
    fn push(&mut self, word: u64, nbits: u32) {
        debug_assert!(nbits <= 64 && (nbits == 64 || word >> nbits == 0));
        if nbits == 0 {
            return;
        }
        self.acc |= word << self.filled;
        let total = self.filled + nbits;
        if total >= 64 {
            self.bytes.extend_from_slice(&self.acc.to_le_bytes());
            self.acc = if self.filled == 0 {
                0
            } else {
                word >> (64 - self.filled)
            };
            self.filled = total - 64;
        } else {
            self.filled = total;
        }
    }

    fn finish(mut self) -> Vec<u8> {
        let tail = self.filled.div_ceil(8) as usize;
        self.bytes
            .extend_from_slice(&self.acc.to_le_bytes()[..tail]);
        self.bytes
    }
}

/// Operator I: fills a tile with the recurrence values of its element range.
pub fn create_recurrence_matrix(
    spec: TileSpec,
    embedded: &EmbeddedSeries,
    settings: &AnalysisSettings,
) -> Result<Tile> {
    embedded.check_settings(settings)?;
    if !spec.fits(embedded.len()) {
        return Err(RqaError::InvalidArgument(format!(
            "tile {spec:?} does not fit a {n}x{n} matrix",
            n = embedded.len()
        )));
    }
    Ok(fill(spec, embedded, settings))
}

pub(crate) fn fill(spec: TileSpec, embedded: &EmbeddedSeries, settings: &AnalysisSettings) -> Tile {
    match settings.metric {
        Metric::Taxicab => fill_norm::<Taxicab>(spec, embedded, settings),
        Metric::Euclidean => fill_norm::<Euclid>(spec, embedded, settings),
        Metric::Maximum => fill_norm::<Chebyshev>(spec, embedded, settings),
    }
}

fn fill_norm<N: Norm>(spec: TileSpec, e: &EmbeddedSeries, s: &AnalysisSettings) -> Tile {
    let values = e.values();
    let delay = e.delay();
    let dim = e.dimension();
    match dim {
        1 => fill_with(spec, s, |i, j| {
            strided_distance_fixed::<N, 1>(values, i, j, delay)
        }),
        2 => fill_with(spec, s, |i, j| {
            strided_distance_fixed::<N, 2>(values, i, j, delay)
        }),
        3 => fill_with(spec, s, |i, j| {
            strided_distance_fixed::<N, 3>(values, i, j, delay)
        }),
        4 => fill_with(spec, s, |i, j| {
            strided_distance_fixed::<N, 4>(values, i, j, delay)
        }),
        _ => fill_with(spec, s, |i, j| {
            strided_distance::<N>(values, i, j, dim, delay)
        }),
    }
}

#[inline(always)]
fn fill_with<F: Fn(usize, usize) -> f64>(
    spec: TileSpec,
    settings: &AnalysisSettings,
    dist: F,
) -> Tile {
    let radius = settings.radius;
    let mut writer = BitWriter::with_bits(spec.height * spec.width);
    let mut ones = 0u64;
    for u in 0..spec.height {
        let i = spec.row_offset + u;
        let mut first = 0;
        while first < spec.width {
            let nbits = (spec.width - first).min(64);
            let j0 = spec.col_offset + first;
            let mut word = 0u64;
            for b in 0..nbits {
                word |= ((dist(i, j0 + b) <= radius) as u64) << b;
            }
            if !settings.include_main_diagonal && (j0..j0 + nbits).contains(&i) {
                word &= !(1u64 << (i - j0));
            }
            ones += u64::from(word.count_ones());
            writer.push(word, nbits as u32);
            first += nbits;
        }
    }
    Tile {
        spec,
        bits: writer.finish(),
        ones,
    }
}

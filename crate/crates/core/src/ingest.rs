//! Time series input: column extraction from delimiter-separated text and
//! synthetic generators.

use std::fs::File;
use std::io::{BufRead, BufReader};
use std::path::Path;
use std::sync::Arc;

use crate::error::{Result, RqaError};

/// An immutable sequence of finite samples. Cloning is cheap.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeSeries {
    values: Arc<[f64]>,
}

impl TimeSeries {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(RqaError::EmptySeries);
        }
        if let Some(pos) = values.iter().position(|v| !v.is_finite()) {
            return Err(RqaError::InvalidArgument(format!(
                "sample {pos} is not finite ({})",
                values[pos]
            )));
        }
        Ok(Self {
            values: values.into(),
        })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// Reads one column of a delimiter-separated text file.
///
/// Rows are separated by `\n` (a trailing `\r` is dropped). Rows of zero
/// length are ignored entirely and do not count toward `offset`. Tokens may
/// carry surrounding whitespace. Row numbers in errors are 1-based line
/// numbers of the input.
#[derive(Debug, Clone)]
pub struct ColumnReader {
    delimiter: char,
    column: usize,
    offset: usize,
    skip_invalid: bool,
}

/// Result of a column read, including how many rows were dropped because
/// their token was not a finite number (only nonzero with `skip_invalid`).
#[derive(Debug, Clone)]
pub struct ColumnRead {
    pub series: TimeSeries,
    pub skipped_rows: usize,
}

impl ColumnReader {
    pub fn new(delimiter: char, column: usize) -> Self {
        Self {
            delimiter,
            column,
            offset: 0,
            skip_invalid: false,
        }
    }

    /// Number of leading data rows to discard (headers, warm-up samples).
    pub fn offset(mut self, offset: usize) -> Self {
        self.offset = offset;
        self
    }

    /// Drop rows whose selected token does not parse instead of failing.
    pub fn skip_invalid(mut self, skip: bool) -> Self {
        self.skip_invalid = skip;
        self
    }

    pub fn read_path(&self, path: impl AsRef<Path>) -> Result<ColumnRead> {
        let path = path.as_ref();
        let not_readable = |source| RqaError::FileNotReadable {
            path: path.to_path_buf(),
            source,
        };
        let file = File::open(path).map_err(not_readable)?;
        self.read_lines(BufReader::new(file))
            .map_err(|err| match err {
                RqaError::Io(source) => not_readable(source),
                other => other,
            })
    }

    pub fn read_str(&self, text: &str) -> Result<ColumnRead> {
        self.read_lines(text.as_bytes())
    }

    pub fn read_lines<R: BufRead>(&self, reader: R) -> Result<ColumnRead> {
        let mut values = Vec::new();
        let mut data_rows = 0usize;
        let mut skipped_rows = 0usize;

        for (idx, line) in reader.lines().enumerate() {
            let line = line?;
            let row = idx + 1;
            if line.is_empty() {
                continue;
            }
            data_rows += 1;
            if data_rows <= self.offset {
                continue;
            }

            let mut found = 0;
            let token = line
                .split(self.delimiter)
                .inspect(|_| found += 1)
                .nth(self.column);
            let Some(token) = token else {
                return Err(RqaError::ColumnOutOfRange {
                    row,
                    column: self.column,
                    found,
                });
            };

            match parse_finite(token) {
                Some(v) => values.push(v),
                None if self.skip_invalid => skipped_rows += 1,
                None => {
                    return Err(RqaError::Parse {
                        row,
                        token: token.to_string(),
                    })
                }
            }
        }

        if values.is_empty() {
            return Err(RqaError::EmptySeries);
        }
        Ok(ColumnRead {
            series: TimeSeries {
                values: values.into(),
            },
            skipped_rows,
        })
    }
}

fn parse_finite(token: &str) -> Option<f64> {
    token.trim().parse::<f64>().ok().filter(|v| v.is_finite())
}

/// Reads `column` (zero-based) from a `delimiter`-separated file, skipping
/// the first `offset` data rows. Unparseable tokens are an error.
pub fn read_column(
    path: impl AsRef<Path>,
    delimiter: char,
    column: usize,
    offset: usize,
) -> Result<TimeSeries> {
    ColumnReader::new(delimiter, column)
        .offset(offset)
        .read_path(path)
        .map(|read| read.series)
}

/// `sin(x_k)` for `n` points linearly spaced over `[0, x_end]`, endpoint
/// included. Spacing follows `numpy.linspace`: `x_k = k * (x_end / (n - 1))`
/// with the last point pinned to `x_end`.
pub fn generate_sine(n: usize, x_end: f64) -> Result<TimeSeries> {
    if n < 2 {
        return Err(RqaError::InvalidArgument(format!(
            "sine generator needs at least 2 samples, got {n}"
        )));
    }
    if !x_end.is_finite() {
        return Err(RqaError::InvalidArgument(format!(
            "sine endpoint must be finite, got {x_end}"
        )));
    }
    let step = x_end / (n - 1) as f64;
    let values: Vec<f64> = (0..n)
        .map(|k| if k == n - 1 { x_end } else { k as f64 * step })
        .map(f64::sin)
        .collect();
    TimeSeries::new(values)
}

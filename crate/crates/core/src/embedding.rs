//! Time-delay embedding, norms and the fixed-radius neighbourhood test.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Result, RqaError};
use crate::ingest::TimeSeries;

/// Norm used to compare two state vectors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Metric {
    #[serde(rename = "l1")]
    Taxicab,
    #[serde(rename = "euclidean")]
    Euclidean,
    #[serde(rename = "linf")]
    Maximum,
}

impl Metric {
    pub const ALL: [Metric; 3] = [Metric::Taxicab, Metric::Euclidean, Metric::Maximum];

    pub fn name(self) -> &'static str {
        match self {
            Metric::Taxicab => "l1",
            Metric::Euclidean => "euclidean",
            Metric::Maximum => "linf",
        }
    }

    /// Distance between the embedded vectors starting at `i` and `j`.
    #[inline]
    pub(crate) fn strided(
        self,
        values: &[f64],
        i: usize,
        j: usize,
        dim: usize,
        delay: usize,
    ) -> f64 {
        match self {
            Metric::Taxicab => strided_distance::<Taxicab>(values, i, j, dim, delay),
            Metric::Euclidean => strided_distance::<Euclid>(values, i, j, dim, delay),
            Metric::Maximum => strided_distance::<Chebyshev>(values, i, j, dim, delay),
        }
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Metric {
    type Err = RqaError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "l1" | "taxicab" => Ok(Metric::Taxicab),
            "euclidean" | "l2" => Ok(Metric::Euclidean),
            "linf" | "maximum" => Ok(Metric::Maximum),
            other => Err(RqaError::InvalidArgument(format!(
                "unknown metric {other:?}"
            ))),
        }
    }
}

/// Accumulation rule of a norm over per-component differences.
///
/// Every distance evaluation in the crate goes through `step`/`finish` in
/// ascending component order, so specialised and generic loops produce
/// bit-identical results.
pub(crate) trait Norm {
    fn step(acc: f64, diff: f64) -> f64;
    fn finish(acc: f64) -> f64;
}

pub(crate) struct Taxicab;
pub(crate) struct Euclid;
pub(crate) struct Chebyshev;

impl Norm for Taxicab {
    #[inline(always)]
    fn step(acc: f64, diff: f64) -> f64 {
        acc + diff.abs()
    }
    #[inline(always)]
    fn finish(acc: f64) -> f64 {
        acc
    }
}

impl Norm for Euclid {
    #[inline(always)]
    fn step(acc: f64, diff: f64) -> f64 {
        acc + diff * diff
    }
    #[inline(always)]
    fn finish(acc: f64) -> f64 {
        acc.sqrt()
    }
}

impl Norm for Chebyshev {
    #[inline(always)]
    fn step(acc: f64, diff: f64) -> f64 {
        acc.max(diff.abs())
    }
    #[inline(always)]
    fn finish(acc: f64) -> f64 {
        acc
    }
}

#[inline(always)]
pub(crate) fn strided_distance<N: Norm>(
    values: &[f64],
    i: usize,
    j: usize,
    dim: usize,
    delay: usize,
) -> f64 {
    let mut acc = 0.0;
    for k in 0..dim {
        acc = N::step(acc, values[i + k * delay] - values[j + k * delay]);
    }
    N::finish(acc)
}

/// Same as [`strided_distance`] with the dimension known at compile time.
#[inline(always)]
pub(crate) fn strided_distance_fixed<N: Norm, const D: usize>(
    values: &[f64],
    i: usize,
    j: usize,
    delay: usize,
) -> f64 {
    let mut acc = 0.0;
    for k in 0..D {
        acc = N::step(acc, values[i + k * delay] - values[j + k * delay]);
    }
    N::finish(acc)
}

/// Distance between two explicit state vectors.
pub fn distance(a: &[f64], b: &[f64], metric: Metric) -> Result<f64> {
    if a.len() != b.len() {
        return Err(RqaError::DimensionMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    fn fold<N: Norm>(a: &[f64], b: &[f64]) -> f64 {
        N::finish(a.iter().zip(b).fold(0.0, |acc, (x, y)| N::step(acc, x - y)))
    }
    Ok(match metric {
        Metric::Taxicab => fold::<Taxicab>(a, b),
        Metric::Euclidean => fold::<Euclid>(a, b),
        Metric::Maximum => fold::<Chebyshev>(a, b),
    })
}

/// Fixed-radius neighbourhood test. The boundary is inclusive:
/// `distance <= radius` counts as a recurrence.
pub fn is_recurrent(a: &[f64], b: &[f64], metric: Metric, radius: f64) -> Result<bool> {
    Ok(distance(a, b, metric)? <= radius)
}

/// Parameters of one analysis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalysisSettings {
    pub embedding_dimension: usize,
    pub time_delay: usize,
    pub metric: Metric,
    pub radius: f64,
    pub min_diagonal_line_length: usize,
    pub min_vertical_line_length: usize,
    pub min_white_vertical_line_length: usize,
    /// When false the line of identity is treated as non-recurrent.
    pub include_main_diagonal: bool,
}

impl AnalysisSettings {
    /// Settings with the given radius, no embedding (m = 1, τ = 1), the
    /// Euclidean norm and all minimum line lengths set to 2.
    pub fn new(radius: f64) -> Self {
        Self {
            embedding_dimension: 1,
            time_delay: 1,
            metric: Metric::Euclidean,
            radius,
            min_diagonal_line_length: 2,
            min_vertical_line_length: 2,
            min_white_vertical_line_length: 2,
            include_main_diagonal: true,
        }
    }

    pub fn with_embedding(mut self, dimension: usize, delay: usize) -> Self {
        self.embedding_dimension = dimension;
        self.time_delay = delay;
        self
    }

    pub fn with_metric(mut self, metric: Metric) -> Self {
        self.metric = metric;
        self
    }

    pub fn with_min_lengths(
        mut self,
        diagonal: usize,
        vertical: usize,
        white_vertical: usize,
    ) -> Self {
        self.min_diagonal_line_length = diagonal;
        self.min_vertical_line_length = vertical;
        self.min_white_vertical_line_length = white_vertical;
        self
    }

    pub fn with_main_diagonal(mut self, include: bool) -> Self {
        self.include_main_diagonal = include;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let checks = [
            (
                self.embedding_dimension >= 1,
                "embedding dimension must be >= 1",
            ),
            (self.time_delay >= 1, "time delay must be >= 1"),
            (
                self.radius.is_finite() && self.radius >= 0.0,
                "radius must be finite and >= 0",
            ),
            (
                self.min_diagonal_line_length >= 1,
                "minimum diagonal line length must be >= 1",
            ),
            (
                self.min_vertical_line_length >= 1,
                "minimum vertical line length must be >= 1",
            ),
            (
                self.min_white_vertical_line_length >= 1,
                "minimum white vertical line length must be >= 1",
            ),
        ];
        match checks.iter().find(|(ok, _)| !ok) {
            Some((_, msg)) => Err(RqaError::InvalidArgument((*msg).to_string())),
            None => Ok(()),
        }
    }
}

/// State vectors reconstructed from a series by time-delay embedding.
///
/// Vector `i` is `(s[i], s[i + τ], ..., s[i + (m - 1)τ])`; vectors are not
/// materialised, only indexed.
#[derive(Debug, Clone)]
pub struct EmbeddedSeries {
    source: TimeSeries,
    dimension: usize,
    delay: usize,
    len: usize,
}

pub fn embed(series: &TimeSeries, dimension: usize, delay: usize) -> Result<EmbeddedSeries> {
    if dimension == 0 || delay == 0 {
        return Err(RqaError::InvalidArgument(
            "embedding dimension and delay must be >= 1".into(),
        ));
    }
    let span = (dimension - 1)
        .checked_mul(delay)
        .ok_or_else(|| RqaError::InvalidArgument("embedding span overflows".into()))?;
    if series.len() <= span {
        return Err(RqaError::SeriesTooShort {
            len: series.len(),
            dimension,
            delay,
        });
    }
    Ok(EmbeddedSeries {
        source: series.clone(),
        dimension,
        delay,
        len: series.len() - span,
    })
}

impl EmbeddedSeries {
    pub fn from_settings(series: &TimeSeries, settings: &AnalysisSettings) -> Result<Self> {
        embed(series, settings.embedding_dimension, settings.time_delay)
    }

    /// Number of state vectors N.
    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn delay(&self) -> usize {
        self.delay
    }

    pub fn source(&self) -> &TimeSeries {
        &self.source
    }

    pub(crate) fn values(&self) -> &[f64] {
        self.source.values()
    }

    /// Copies out state vector `i`.
    pub fn vector(&self, i: usize) -> Vec<f64> {
        assert!(
            i < self.len,
            "vector index {i} out of range (N = {})",
            self.len
        );
        (0..self.dimension)
            .map(|k| self.source.values()[i + k * self.delay])
            .collect()
    }

    /// Recurrence value R(i, j) under `settings`, honouring the main-diagonal
    /// policy. This is the single definition the engine, the plot renderer
    /// and the oracle share.
    #[inline]
    pub fn recurrence(&self, i: usize, j: usize, settings: &AnalysisSettings) -> bool {
        if i == j && !settings.include_main_diagonal {
            return false;
        }
        settings
            .metric
            .strided(self.values(), i, j, self.dimension, self.delay)
            <= settings.radius
    }

    pub(crate) fn check_settings(&self, settings: &AnalysisSettings) -> Result<()> {
        settings.validate()?;
        if settings.embedding_dimension != self.dimension || settings.time_delay != self.delay {
            return Err(RqaError::InvalidArgument(format!(
                "series embedded with m={}, τ={} but settings ask for m={}, τ={}",
                self.dimension, self.delay, settings.embedding_dimension, settings.time_delay
            )));
        }
        Ok(())
    }
}

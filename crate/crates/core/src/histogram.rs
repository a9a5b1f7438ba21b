//! Line-length frequency distributions.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Result, RqaError};

/// Sparse map from line length to number of lines of that length.
/// Zero counts are never stored.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Histogram(BTreeMap<usize, u64>);

impl Histogram {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, length: usize, count: u64) {
        if count > 0 {
            *self.0.entry(length).or_insert(0) += count;
        }
    }

    pub fn get(&self, length: usize) -> u64 {
        self.0.get(&length).copied().unwrap_or(0)
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `(length, count)` pairs in ascending length order.
    pub fn iter(&self) -> impl Iterator<Item = (usize, u64)> + '_ {
        self.0.iter().map(|(&l, &c)| (l, c))
    }

    /// Lines of length at least `min_length`, in ascending order.
    pub fn iter_from(&self, min_length: usize) -> impl Iterator<Item = (usize, u64)> + '_ {
        self.0.range(min_length..).map(|(&l, &c)| (l, c))
    }

    /// Number of lines with length >= `min_length`.
    pub fn count_from(&self, min_length: usize) -> u64 {
        self.iter_from(min_length).map(|(_, c)| c).sum()
    }

    /// Number of points covered by lines with length >= `min_length`.
    pub fn mass_from(&self, min_length: usize) -> u64 {
        self.iter_from(min_length).map(|(l, c)| l as u64 * c).sum()
    }

    pub fn max_length(&self) -> Option<usize> {
        self.0.keys().next_back().copied()
    }

    pub fn merge_from(&mut self, other: &Histogram) {
        for (l, c) in other.iter() {
            self.add(l, c);
        }
    }
}

impl FromIterator<(usize, u64)> for Histogram {
    fn from_iter<I: IntoIterator<Item = (usize, u64)>>(iter: I) -> Self {
        let mut h = Histogram::new();
        for (l, c) in iter {
            h.add(l, c);
        }
        h
    }
}

/// The three line histograms of one recurrence matrix plus its point count.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LineHistograms {
    pub n_vectors: usize,
    pub recurrence_points: u64,
    pub diagonal: Histogram,
    pub vertical: Histogram,
    pub white_vertical: Histogram,
}

impl LineHistograms {
    pub fn empty(n_vectors: usize) -> Self {
        Self {
            n_vectors,
            recurrence_points: 0,
            diagonal: Histogram::new(),
            vertical: Histogram::new(),
            white_vertical: Histogram::new(),
        }
    }

    /// Pointwise sum of two partial results over the same matrix size.
    pub fn merge(&self, other: &LineHistograms) -> Result<LineHistograms> {
        if self.n_vectors != other.n_vectors {
            return Err(RqaError::ShapeMismatch {
                left: self.n_vectors,
                right: other.n_vectors,
            });
        }
        let mut out = self.clone();
        out.recurrence_points += other.recurrence_points;
        out.diagonal.merge_from(&other.diagonal);
        out.vertical.merge_from(&other.vertical);
        out.white_vertical.merge_from(&other.white_vertical);
        Ok(out)
    }
}

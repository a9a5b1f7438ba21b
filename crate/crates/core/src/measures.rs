//! Quantitative RQA measures derived from line histograms.
//!
//! A measure whose denominator is zero is `None` rather than 0.

use serde::{Deserialize, Serialize};

use crate::embedding::AnalysisSettings;
use crate::histogram::{Histogram, LineHistograms};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Measures {
    /// Recurrence rate. Normalised by N² or, without the main diagonal,
    /// by N² − N.
    #[serde(rename = "RR")]
    pub recurrence_rate: Option<f64>,
    #[serde(rename = "DET")]
    pub determinism: Option<f64>,
    #[serde(rename = "L")]
    pub average_diagonal_line_length: Option<f64>,
    #[serde(rename = "L_max")]
    pub longest_diagonal_line_length: Option<usize>,
    #[serde(rename = "DIV")]
    pub divergence: Option<f64>,
    #[serde(rename = "L_entr")]
    pub entropy_diagonal_lines: Option<f64>,
    #[serde(rename = "LAM")]
    pub laminarity: Option<f64>,
    #[serde(rename = "TT")]
    pub trapping_time: Option<f64>,
    #[serde(rename = "V_max")]
    pub longest_vertical_line_length: Option<usize>,
    #[serde(rename = "V_entr")]
    pub entropy_vertical_lines: Option<f64>,
    #[serde(rename = "W")]
    pub average_white_vertical_line_length: Option<f64>,
    #[serde(rename = "W_max")]
    pub longest_white_vertical_line_length: Option<usize>,
    #[serde(rename = "W_entr")]
    pub entropy_white_vertical_lines: Option<f64>,
}

/// Measures together with the inputs they were derived from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RqaResult {
    pub settings: AnalysisSettings,
    pub histograms: LineHistograms,
    pub measures: Measures,
}

fn ratio(num: u64, den: u64) -> Option<f64> {
    (den > 0).then(|| num as f64 / den as f64)
}

fn average_length(h: &Histogram, min_length: usize) -> Option<f64> {
    ratio(h.mass_from(min_length), h.count_from(min_length))
}

/// Shannon entropy (natural log) of the length distribution restricted to
/// lines of at least `min_length`.
fn entropy(h: &Histogram, min_length: usize) -> Option<f64> {
    let total = h.count_from(min_length);
    if total == 0 {
        return None;
    }
    let total = total as f64;
    let sum: f64 = h
        .iter_from(min_length)
        .map(|(_, c)| {
            let p = c as f64 / total;
            p * p.ln()
        })
        .sum();
    // `+ 0.0` turns a negative zero (single length) into 0.
    Some(-sum + 0.0)
}

pub fn compute_measures(h: &LineHistograms, settings: &AnalysisSettings) -> RqaResult {
    let n = h.n_vectors as u64;
    let cells = if settings.include_main_diagonal {
        n * n
    } else {
        n * n - n
    };

    let l_min = settings.min_diagonal_line_length;
    let v_min = settings.min_vertical_line_length;
    let w_min = settings.min_white_vertical_line_length;

    let l_max = h.diagonal.max_length();
    let measures = Measures {
        recurrence_rate: ratio(h.recurrence_points, cells),
        determinism: ratio(h.diagonal.mass_from(l_min), h.diagonal.mass_from(1)),
        average_diagonal_line_length: average_length(&h.diagonal, l_min),
        longest_diagonal_line_length: l_max,
        divergence: l_max.map(|l| 1.0 / l as f64),
        entropy_diagonal_lines: entropy(&h.diagonal, l_min),
        laminarity: ratio(h.vertical.mass_from(v_min), h.vertical.mass_from(1)),
        trapping_time: average_length(&h.vertical, v_min),
        longest_vertical_line_length: h.vertical.max_length(),
        entropy_vertical_lines: entropy(&h.vertical, v_min),
        average_white_vertical_line_length: average_length(&h.white_vertical, w_min),
        longest_white_vertical_line_length: h.white_vertical.max_length(),
        entropy_white_vertical_lines: entropy(&h.white_vertical, w_min),
    };

    RqaResult {
        settings: settings.clone(),
        histograms: h.clone(),
        measures,
    }
}

//! Inputs shared by the benchmarks.

use tilerqa::{embed, generate_sine, AnalysisSettings, EmbeddedSeries, Metric, TimeSeries};

/// The synthetic benchmark series at `n` points, sampled as densely as the
/// million-point original (`x_end = n / 1000 · π`), embedded with m = 2, τ = 2.
pub fn sine(n: usize) -> (EmbeddedSeries, AnalysisSettings) {
    let x_end = (n - 1) as f64 / 1000.0 * std::f64::consts::PI;
    let series = generate_sine(n, x_end).expect("n >= 2");
    let settings = AnalysisSettings::new(1.0).with_embedding(2, 2);
    (embed(&series, 2, 2).expect("series long enough"), settings)
}

/// Logistic map at r = 4: chaotic, giving a sparse matrix with short lines.
pub fn logistic(n: usize, metric: Metric, radius: f64) -> (EmbeddedSeries, AnalysisSettings) {
    let mut x = 0.3141;
    let values = (0..n)
        .map(|_| {
            x = 4.0 * x * (1.0 - x);
            x
        })
        .collect();
    let series = TimeSeries::new(values).expect("finite");
    let settings = AnalysisSettings::new(radius)
        .with_embedding(3, 1)
        .with_metric(metric);
    (embed(&series, 3, 1).expect("series long enough"), settings)
}

//! Argument handling and output for the `tilerqa` binary.
//!
//! `rqa` prints a JSON document with settings, measures, line histograms and
//! operator timings; `plot` writes a binary PBM recurrence plot.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use tilerqa::{
    compute_measures, generate_sine, recurrence_plot, run_analysis, AnalysisSettings, ColumnReader,
    EmbeddedSeries, Histogram, Measures, Metric, OperatorTiming, Result, RqaError, TimeSeries,
    DEFAULT_TILE_SIZE,
};

#[derive(Debug, Parser)]
#[command(
    name = "tilerqa",
    version,
    about = "Tiled recurrence quantification analysis"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compute RQA measures and line histograms as JSON.
    Rqa(RqaArgs),
    /// Write the recurrence plot as a binary PBM (P4) image.
    Plot(PlotArgs),
}

#[derive(Debug, Args)]
pub struct RqaArgs {
    #[command(flatten)]
    pub run: RunArgs,
    /// JSON destination; stdout when absent.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct PlotArgs {
    #[command(flatten)]
    pub run: RunArgs,
    /// PBM destination.
    #[arg(long, short)]
    pub output: PathBuf,
    /// Each pixel is the OR of a b×b block of the matrix.
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    pub reduction: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MainDiagonal {
    Include,
    Exclude,
}

#[derive(Debug, Args)]
pub struct RunArgs {
    /// Delimited text file to read the series from.
    #[arg(long, group = "source", required = true)]
    pub input: Option<PathBuf>,
    /// Use sin(x) sampled at N evenly spaced points instead of a file.
    #[arg(long, value_name = "N", group = "source")]
    pub synthetic_sine: Option<usize>,
    /// Upper end of the sine domain in multiples of pi.
    #[arg(long, default_value_t = 1000.0, requires = "synthetic_sine")]
    pub x_end_pi_multiples: f64,

    #[arg(long, default_value_t = ',')]
    pub delimiter: char,
    /// Zero-based column index.
    #[arg(long, default_value_t = 0)]
    pub column: usize,
    /// Number of leading values to drop.
    #[arg(long, default_value_t = 0)]
    pub offset: usize,
    /// Drop rows whose field is not a number instead of failing.
    #[arg(long)]
    pub skip_invalid: bool,

    #[arg(long, default_value_t = 1)]
    pub embedding: usize,
    #[arg(long, default_value_t = 1)]
    pub delay: usize,
    /// l1, euclidean or linf (also taxicab, l2, maximum).
    #[arg(long, default_value = "euclidean", value_parser = parse_metric)]
    pub metric: Metric,
    /// Two vectors recur when their distance is at most this value.
    #[arg(long)]
    pub radius: f64,
    #[arg(long, default_value_t = 2)]
    pub min_diag: usize,
    #[arg(long, default_value_t = 2)]
    pub min_vert: usize,
    #[arg(long, default_value_t = 2)]
    pub min_white: usize,
    #[arg(long, value_enum, default_value_t = MainDiagonal::Include)]
    pub main_diagonal: MainDiagonal,

    #[arg(long, default_value_t = DEFAULT_TILE_SIZE)]
    pub tile_size: usize,
    /// Worker threads; defaults to the available parallelism.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub workers: Option<u64>,
}

fn parse_metric(s: &str) -> std::result::Result<Metric, String> {
    s.parse().map_err(|e: RqaError| e.to_string())
}

impl RunArgs {
    pub fn settings(&self) -> AnalysisSettings {
        AnalysisSettings::new(self.radius)
            .with_embedding(self.embedding, self.delay)
            .with_metric(self.metric)
            .with_min_lengths(self.min_diag, self.min_vert, self.min_white)
            .with_main_diagonal(self.main_diagonal == MainDiagonal::Include)
    }

    pub fn workers(&self) -> usize {
        match self.workers {
            Some(w) => w as usize,
            None => std::thread::available_parallelism().map_or(1, |n| n.get()),
        }
    }

    fn series(&self, diag: &mut dyn Write) -> Result<TimeSeries> {
        if let Some(n) = self.synthetic_sine {
            return generate_sine(n, self.x_end_pi_multiples * std::f64::consts::PI);
        }
        let path = self.input.as_ref().expect("clap enforces a source");
        let read = ColumnReader::new(self.delimiter, self.column)
            .offset(self.offset)
            .skip_invalid(self.skip_invalid)
            .read_path(path)?;
        if self.skip_invalid {
            let _ = writeln!(diag, "skipped {} invalid rows", read.skipped_rows);
        }
        Ok(read.series)
    }

    fn embedded(
        &self,
        settings: &AnalysisSettings,
        diag: &mut dyn Write,
    ) -> Result<EmbeddedSeries> {
        settings.validate()?;
        EmbeddedSeries::from_settings(&self.series(diag)?, settings)
    }
}

#[derive(Debug, Serialize)]
pub struct SettingsEcho {
    #[serde(flatten)]
    pub analysis: AnalysisSettings,
    pub tile_size: usize,
}

#[derive(Debug, Serialize)]
pub struct HistogramsJson {
    pub diagonal: Histogram,
    pub vertical: Histogram,
    pub white_vertical: Histogram,
}

/// Seconds per operator, summed over tiles, and the wall-clock total.
#[derive(Debug, Serialize)]
pub struct TimingJson {
    pub create_recurrence_matrix: f64,
    pub detect_diagonal_lines: f64,
    pub detect_vertical_lines: f64,
    pub total: f64,
}

impl From<OperatorTiming> for TimingJson {
    fn from(t: OperatorTiming) -> Self {
        let s = Duration::as_secs_f64;
        Self {
            create_recurrence_matrix: s(&t.create_recurrence_matrix),
            detect_diagonal_lines: s(&t.detect_diagonal_lines),
            detect_vertical_lines: s(&t.detect_vertical_lines),
            total: s(&t.total),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct Report {
    pub settings: SettingsEcho,
    pub n_vectors: usize,
    pub recurrence_points: u64,
    pub measures: Measures,
    pub histograms: HistogramsJson,
    pub timing: TimingJson,
}

pub fn analyze(args: &RunArgs, diag: &mut dyn Write) -> Result<Report> {
    let settings = args.settings();
    let embedded = args.embedded(&settings, diag)?;
    let output = run_analysis(&embedded, &settings, args.tile_size, args.workers())?;
    let result = compute_measures(&output.histograms, &settings);
    let h = result.histograms;
    Ok(Report {
        settings: SettingsEcho {
            analysis: result.settings,
            tile_size: args.tile_size,
        },
        n_vectors: h.n_vectors,
        recurrence_points: h.recurrence_points,
        measures: result.measures,
        histograms: HistogramsJson {
            diagonal: h.diagonal,
            vertical: h.vertical,
            white_vertical: h.white_vertical,
        },
        timing: output.timing.into(),
    })
}

fn write_json(report: &Report, out: &mut dyn Write) -> Result<()> {
    serde_json::to_writer_pretty(&mut *out, report)
        .map_err(|e| RqaError::Io(io::Error::other(e)))?;
    writeln!(out)?;
    out.flush()?;
    Ok(())
}

/// Runs a parsed command. `out` receives the JSON of `rqa` when no output
/// path is given; `diag` receives warnings.
pub fn execute(cli: &Cli, out: &mut dyn Write, diag: &mut dyn Write) -> Result<()> {
    match &cli.command {
        Command::Rqa(args) => {
            let report = analyze(&args.run, diag)?;
            match &args.output {
                Some(path) => write_json(&report, &mut BufWriter::new(File::create(path)?)),
                None => write_json(&report, out),
            }
        }
        Command::Plot(args) => {
            let b = args.reduction as usize;
            if b > 1 {
                let _ = writeln!(
                    diag,
                    "warning: reduction factor {b} merges {b}x{b} blocks into one pixel; \
                     line structure is not preserved"
                );
            }
            let settings = args.run.settings();
            let embedded = args.run.embedded(&settings, diag)?;
            let plot = recurrence_plot(
                &embedded,
                &settings,
                b,
                args.run.tile_size,
                args.run.workers(),
            )?;
            let mut file = BufWriter::new(File::create(&args.output)?);
            plot.write_pbm(&mut file)?;
            file.flush()?;
            Ok(())
        }
    }
}

/// Parses `args` and runs them; returns the process exit status.
pub fn run_cli<I, T>(args: I, out: &mut dyn Write, diag: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = if e.use_stderr() {
                write!(diag, "{}", e.render())
            } else {
                write!(out, "{}", e.render())
            };
            return e.exit_code();
        }
    };
    match execute(&cli, out, diag) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(diag, "error: {e}");
            1
        }
    }
}

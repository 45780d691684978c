//! Command-line front end: each subcommand builds a [`Table`] from the
//! `corrconc` routines and renders it as CSV, Markdown or JSON lines.

pub mod table;

use std::path::PathBuf;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use corrconc::approx::{mean_approx, var_approx, variance_bounds};
use corrconc::conc::{closed_form_half_width, invert_tail_numeric, tail_bound, TailBoundKind};
use corrconc::exactdist::{density_at, moment, moment_quadrature, SeriesConfig};
use corrconc::mcsim::{run_experiment_with_workers, SimConfig};
use corrconc::{Error, ModelParams};
use thiserror::Error as ThisError;

use table::col;
pub use table::{Cell, Format, Table};

pub const DEFAULT_SEED: u64 = 2023;
pub const TABLE_RHOS: [f64; 5] = [0.0, -0.25, 0.56, -0.75, 0.95];

#[derive(Debug, ThisError)]
pub enum CliError {
    #[error(transparent)]
    Numeric(#[from] Error),
    #[error("{0}")]
    Usage(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl CliError {
    /// 2 usage, 3 numeric failure, 4 infeasible, 1 anything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Numeric(e) => match e {
                Error::Domain(_) | Error::Degenerate { .. } => 2,
                Error::Truncation { .. } | Error::Quadrature { .. } | Error::UndefinedCorrelation => 3,
                Error::Infeasible { .. } => 4,
            },
            CliError::Io(_) | CliError::Csv(_) | CliError::Json(_) => 1,
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "corrconc",
    version,
    about = "Moments, bounds and coverage for the sample correlation coefficient"
)]
pub struct Cli {
    #[command(flatten)]
    pub output: OutputArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Decimal places for real-valued cells.
    #[arg(long, global = true, default_value_t = 3, value_parser = clap::value_parser!(u8).range(1..=15))]
    pub precision: u8,
    /// Write to this file instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct SeriesArgs {
    /// Relative tolerance of the moment series.
    #[arg(long, default_value_t = 1e-14)]
    pub tol: f64,
    #[arg(long, default_value_t = 100_000)]
    pub max_terms: usize,
}

impl SeriesArgs {
    fn config(&self) -> Result<SeriesConfig, CliError> {
        Ok(SeriesConfig::new(self.tol, self.max_terms)?)
    }
}

#[derive(Debug, Clone, Args)]
pub struct SimArgs {
    #[arg(long, default_value_t = 10)]
    pub n: u32,
    /// Comma-separated population correlations.
    #[arg(long = "rho", value_delimiter = ',', default_values_t = TABLE_RHOS)]
    pub rhos: Vec<f64>,
    #[arg(long, default_value_t = 10_000)]
    pub reps: usize,
    #[arg(long, env = "CORRCONC_SEED", default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Worker threads; the output does not depend on this.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub workers: Option<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum KindArg {
    Bernstein,
    C0,
    C1,
    C2,
}

impl From<KindArg> for TailBoundKind {
    fn from(k: KindArg) -> Self {
        match k {
            KindArg::Bernstein => TailBoundKind::Bernstein,
            KindArg::C0 => TailBoundKind::Conservative,
            KindArg::C1 => TailBoundKind::Aggressive,
            KindArg::C2 => TailBoundKind::MegaAggressive,
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Exact moments E(R^m) from the series, checked against quadrature.
    #[command(allow_negative_numbers = true)]
    Moments {
        #[arg(long)]
        rho: f64,
        #[arg(long)]
        n: u32,
        #[arg(long, default_value_t = 4)]
        m_max: u32,
        #[command(flatten)]
        series: SeriesArgs,
    },
    /// Closed-form mean, sd and upper bound next to simulated mean and sd.
    #[command(allow_negative_numbers = true)]
    Table1 {
        #[command(flatten)]
        sim: SimArgs,
    },
    /// Simulated coverage of the three sub-Gaussian intervals.
    #[command(allow_negative_numbers = true)]
    Coverage {
        #[command(flatten)]
        sim: SimArgs,
        #[arg(long, default_value_t = 0.05)]
        alpha: f64,
    },
    /// Tail bounds at a deviation t, or half-widths at a level alpha.
    #[command(allow_negative_numbers = true, group(ArgGroup::new("target").required(true).args(["t", "alpha"])))]
    Bounds {
        #[arg(long, default_value_t = 0.0)]
        rho: f64,
        #[arg(long)]
        n: u32,
        #[arg(long)]
        t: Option<f64>,
        #[arg(long)]
        alpha: Option<f64>,
        /// Restrict to one bound; all four by default.
        #[arg(long, value_enum)]
        kind: Option<KindArg>,
    },
    /// The density of R on an even grid over [-1, 1].
    #[command(allow_negative_numbers = true)]
    Density {
        #[arg(long)]
        rho: f64,
        #[arg(long)]
        n: u32,
        #[arg(long, default_value_t = 21, value_parser = clap::value_parser!(u32).range(2..))]
        points: u32,
        #[command(flatten)]
        series: SeriesArgs,
    },
}

pub fn cmd_moments(rho: f64, n: u32, m_max: u32, cfg: &SeriesConfig) -> Result<Table, CliError> {
    let params = ModelParams::new(rho, n)?;
    let mut table = Table::new(vec![
        col("m", "m"),
        col("series", "series"),
        col("quadrature", "quadrature"),
        col("terms_used", "terms_used"),
        col("truncation_estimate", "truncation_estimate"),
    ]);
    for m in 0..=m_max {
        let s = moment(m, &params, cfg)?;
        let q = if params.is_degenerate() {
            Cell::Missing
        } else {
            Cell::Num(moment_quadrature(m, &params, cfg)?)
        };
        table.push(vec![
            Cell::Int(m as u64),
            Cell::Num(s.value),
            q,
            Cell::Int(s.terms_used as u64),
            Cell::Num(s.truncation_estimate),
        ]);
    }
    Ok(table)
}

fn simulate(sim: &SimArgs, rho: f64, alpha: f64) -> Result<corrconc::mcsim::SimSummary, CliError> {
    let params = ModelParams::new(rho, sim.n)?;
    let cfg = SimConfig::new(params, sim.reps, sim.seed, alpha)?;
    Ok(run_experiment_with_workers(&cfg, sim.workers.map(|w| w as usize))?)
}

pub fn cmd_table1(sim: &SimArgs) -> Result<Table, CliError> {
    let mut table = Table::new(vec![
        col("rho", "rho"),
        col("E(R)", "mean_approx"),
        col("mean_r", "mean_r"),
        col("sd(R)", "sd_approx"),
        col("sd_r", "sd_r"),
        col("UB", "sd_upper"),
    ]);
    for &rho in &sim.rhos {
        let params = ModelParams::new(rho, sim.n)?;
        let s = simulate(sim, rho, 0.05)?;
        table.push(vec![
            Cell::Exact(rho),
            Cell::Num(mean_approx(&params)),
            Cell::Num(s.mean_r),
            Cell::Num(var_approx(&params).sqrt()),
            Cell::Num(s.sd_r),
            Cell::Num(variance_bounds(&params).upper_conservative.sqrt()),
        ]);
    }
    Ok(table)
}

pub fn cmd_coverage(sim: &SimArgs, alpha: f64) -> Result<Table, CliError> {
    let mut table = Table::new(vec![
        col("rho", "rho"),
        col("C0", "coverage_c0"),
        col("C1", "coverage_c1"),
        col("C2", "coverage_c2"),
        col("t_c0", "t_c0"),
        col("t_c1", "t_c1"),
        col("t_c2", "t_c2"),
        col("lower_c0", "lower_c0"),
        col("upper_c0", "upper_c0"),
        col("lower_c1", "lower_c1"),
        col("upper_c1", "upper_c1"),
        col("lower_c2", "lower_c2"),
        col("upper_c2", "upper_c2"),
        col("clipped_c0", "clipped_c0"),
        col("clipped_c1", "clipped_c1"),
        col("clipped_c2", "clipped_c2"),
    ]);
    for &rho in &sim.rhos {
        let s = simulate(sim, rho, alpha)?;
        let kinds = TailBoundKind::SUB_GAUSSIAN;
        let mut row = vec![Cell::Exact(rho)];
        row.extend(kinds.iter().map(|k| Cell::Num(100.0 * s.coverage[k])));
        row.extend(kinds.iter().map(|k| Cell::Num(s.intervals[k].half_width)));
        for k in &kinds {
            row.push(Cell::Num(s.intervals[k].lower));
            row.push(Cell::Num(s.intervals[k].upper));
        }
        row.extend(kinds.iter().map(|k| Cell::Bool(s.intervals[k].clipped)));
        table.push(row);
    }
    Ok(table)
}

fn selected(kind: Option<KindArg>) -> Vec<TailBoundKind> {
    match kind {
        Some(k) => vec![k.into()],
        None => TailBoundKind::ALL.to_vec(),
    }
}

pub fn cmd_bounds_at_t(rho: f64, n: u32, t: f64, kind: Option<KindArg>) -> Result<Table, CliError> {
    let params = ModelParams::new(rho, n)?;
    let mut table = Table::new(vec![
        col("kind", "kind"),
        col("t", "t"),
        col("raw", "raw"),
        col("clamped", "clamped"),
    ]);
    for k in selected(kind) {
        let b = tail_bound(k, &params, t)?;
        table.push(vec![
            Cell::Text(k.label().into()),
            Cell::Exact(t),
            Cell::Num(b.raw),
            Cell::Num(b.clamped),
        ]);
    }
    Ok(table)
}

pub fn cmd_bounds_at_alpha(rho: f64, n: u32, alpha: f64, kind: Option<KindArg>) -> Result<Table, CliError> {
    let params = ModelParams::new(rho, n)?;
    let mut table = Table::new(vec![
        col("kind", "kind"),
        col("alpha", "alpha"),
        col("t", "t"),
        col("lower", "lower"),
        col("upper", "upper"),
        col("clipped_lower", "clipped_lower"),
        col("clipped_upper", "clipped_upper"),
        col("clipped", "clipped"),
    ]);
    for k in selected(kind) {
        // Levels in [1, 2) are still invertible, so solve for t directly.
        let t = match closed_form_half_width(k, &params, alpha)? {
            Some(t) => t,
            None => invert_tail_numeric(k, &params, alpha)?,
        };
        let (lower, upper) = (rho - t, rho + t);
        table.push(vec![
            Cell::Text(k.label().into()),
            Cell::Exact(alpha),
            Cell::Num(t),
            Cell::Num(lower),
            Cell::Num(upper),
            Cell::Num(lower.max(-1.0)),
            Cell::Num(upper.min(1.0)),
            Cell::Bool(lower < -1.0 || upper > 1.0),
        ]);
    }
    Ok(table)
}

pub fn cmd_density(rho: f64, n: u32, points: u32, cfg: &SeriesConfig) -> Result<Table, CliError> {
    let params = ModelParams::new(rho, n)?;
    let mut table = Table::new(vec![col("r", "r"), col("density", "density")]);
    let step = 2.0 / (points - 1) as f64;
    for i in 0..points {
        let r = if i + 1 == points { 1.0 } else { -1.0 + i as f64 * step };
        table.push(vec![Cell::Num(r), Cell::Num(density_at(&params, r, cfg)?)]);
    }
    Ok(table)
}

/// Builds the table for a parsed command line.
pub fn build(command: &Command) -> Result<Table, CliError> {
    match command {
        Command::Moments { rho, n, m_max, series } => cmd_moments(*rho, *n, *m_max, &series.config()?),
        Command::Table1 { sim } => cmd_table1(sim),
        Command::Coverage { sim, alpha } => cmd_coverage(sim, *alpha),
        Command::Bounds { rho, n, t, alpha, kind } => match (t, alpha) {
            (Some(t), None) => cmd_bounds_at_t(*rho, *n, *t, *kind),
            (None, Some(a)) => cmd_bounds_at_alpha(*rho, *n, *a, *kind),
            _ => Err(CliError::Usage("give exactly one of --t and --alpha".into())),
        },
        Command::Density { rho, n, points, series } => cmd_density(*rho, *n, *points, &series.config()?),
    }
}

/// Builds and renders; the caller decides where the text goes.
pub fn render(cli: &Cli) -> Result<String, CliError> {
    build(&cli.command)?.render(cli.output.format, cli.output.precision as usize)
}

pub fn run(cli: &Cli) -> Result<(), CliError> {
    let text = render(cli)?;
    match &cli.output.out {
        Some(path) => std::fs::write(path, text)?,
        None => {
            use std::io::Write;
            std::io::stdout().lock().write_all(text.as_bytes())?;
        }
    }
    Ok(())
}

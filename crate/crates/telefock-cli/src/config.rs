//! Sweep configuration shared by the subcommands: q sampling, truncation,
//! grid shape and output target, with the preconditions each command needs.

use std::path::PathBuf;

use anyhow::{bail, Result};
use clap::{Args, ValueEnum};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Csv,
    Json,
}

impl OutputFormat {
    pub fn extension(&self) -> &'static str {
        match self {
            OutputFormat::Csv => "csv",
            OutputFormat::Json => "json",
        }
    }
}

/// Raw command-line knobs; `resolve` turns them into a [`SweepConfig`].
#[derive(Debug, Args)]
pub struct SweepArgs {
    /// First squeezing value of the sweep
    #[arg(long)]
    pub q_start: Option<f64>,
    /// Last squeezing value of the sweep
    #[arg(long)]
    pub q_end: Option<f64>,
    /// Number of sweep points
    #[arg(long)]
    pub q_steps: Option<usize>,
    /// Largest photon number reported
    #[arg(long)]
    pub nmax: Option<usize>,
    /// Fock-space truncation dimension
    #[arg(long)]
    pub dim: Option<usize>,
    /// Radial Gauss-Legendre nodes per outcome plane
    #[arg(long)]
    pub radial: Option<usize>,
    /// Uniform angular nodes per outcome plane
    #[arg(long)]
    pub angular: Option<usize>,
    /// Radius cut multiplier: R = mult / sqrt(1 - q^2)
    #[arg(long)]
    pub radius_mult: Option<f64>,
    /// Absolute tolerance for probability comparisons (means and fidelities
    /// get ten times this)
    #[arg(long)]
    pub tolerance: Option<f64>,
    /// Output format
    #[arg(long, value_enum, default_value = "csv")]
    pub format: OutputFormat,
    /// Output path (defaults to a file named after the command)
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone)]
pub struct SweepConfig {
    pub q_start: f64,
    pub q_end: f64,
    pub q_steps: usize,
    pub n_max: usize,
    pub dim: usize,
    pub radial: usize,
    pub angular: usize,
    pub radius_mult: f64,
    pub tolerance: f64,
    pub format: OutputFormat,
    pub output: PathBuf,
    /// Whether the q range was given explicitly.
    pub q_overridden: bool,
    /// Whether any grid knob was given explicitly.
    pub grid_overridden: bool,
}

pub const DEFAULT_VERIFY_Q: [f64; 5] = [0.0, 0.3, 0.5, 0.7, 0.9];

impl SweepArgs {
    pub fn resolve(&self, command: &str, default_n_max: usize) -> Result<SweepConfig> {
        let q_overridden =
            self.q_start.is_some() || self.q_end.is_some() || self.q_steps.is_some();
        let grid_overridden =
            self.radial.is_some() || self.angular.is_some() || self.radius_mult.is_some();
        let cfg = SweepConfig {
            q_start: self.q_start.unwrap_or(0.0),
            q_end: self.q_end.unwrap_or(1.0),
            q_steps: self.q_steps.unwrap_or(102),
            n_max: self.nmax.unwrap_or(default_n_max),
            dim: self.dim.unwrap_or(telefock::fock::DEFAULT_DIM),
            radial: self
                .radial
                .unwrap_or(telefock::quadrature::DEFAULT_RADIAL_NODES),
            angular: self
                .angular
                .unwrap_or(telefock::quadrature::DEFAULT_ANGULAR_NODES),
            radius_mult: self
                .radius_mult
                .unwrap_or(telefock::quadrature::DEFAULT_RADIUS_MULTIPLIER),
            tolerance: self.tolerance.unwrap_or(1e-6),
            format: self.format,
            output: self
                .output
                .clone()
                .unwrap_or_else(|| PathBuf::from(format!("{command}.{}", self.format.extension()))),
            q_overridden,
            grid_overridden,
        };
        if !(cfg.q_start.is_finite() && cfg.q_end.is_finite()) || cfg.q_start > cfg.q_end {
            bail!(
                "invalid q range [{}, {}]: need q_start <= q_end",
                cfg.q_start,
                cfg.q_end
            );
        }
        if cfg.q_start < 0.0 || cfg.q_end > 1.0 {
            bail!("q range [{}, {}] escapes [0, 1]", cfg.q_start, cfg.q_end);
        }
        if cfg.q_steps == 0 {
            bail!("q_steps must be positive");
        }
        if !(cfg.tolerance.is_finite() && cfg.tolerance > 0.0) {
            bail!("tolerance must be positive, got {}", cfg.tolerance);
        }
        Ok(cfg)
    }
}

impl SweepConfig {
    /// Reject ranges the default quadrature grid cannot resolve. Numeric
    /// commands accept q beyond 0.9 only with an explicit grid override,
    /// and never accept q = 1.
    pub fn check_numeric_range(&self, q_max: f64) -> Result<()> {
        if q_max >= 1.0 {
            bail!("numeric commands need q < 1 (closed-form figures accept q = 1)");
        }
        if q_max > 0.9 && !self.grid_overridden {
            bail!(
                "q = {q_max} beyond 0.9 needs an explicit grid override \
                 (--radial/--angular/--radius-mult)"
            );
        }
        Ok(())
    }

    /// Uniform sweep values for numeric commands.
    pub fn numeric_q_values(&self) -> Vec<f64> {
        if !self.q_overridden {
            return DEFAULT_VERIFY_Q.to_vec();
        }
        linspace(self.q_start, self.q_end.min(0.99), self.q_steps)
    }

    /// Sweep values for closed-form figures: uniform on [q_start, 0.99]
    /// plus the analytic q = 1 endpoint when the range reaches it.
    pub fn figure_q_values(&self) -> Vec<f64> {
        if self.q_end > 0.99 {
            let mut values = linspace(self.q_start, 0.99, self.q_steps.saturating_sub(1).max(1));
            values.push(1.0);
            values
        } else {
            linspace(self.q_start, self.q_end, self.q_steps)
        }
    }
}

pub fn linspace(start: f64, end: f64, steps: usize) -> Vec<f64> {
    if steps <= 1 {
        return vec![start];
    }
    let h = (end - start) / (steps - 1) as f64;
    (0..steps).map(|i| start + h * i as f64).collect()
}

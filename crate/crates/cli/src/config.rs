//! Command-line flags, the optional TOML run file, and their merge.
//! Flags win over the file; the file wins over per-command defaults.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Deserialize;

use crate::error::{CliError, CliResult};

#[derive(Debug, Parser)]
#[command(
    name = "teamgame",
    version,
    about = "Adaptive dynamics for the game of teams"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Integrate the dynamics from a preset or a strategy file.
    Simulate(RunArgs),
    /// Perturb the constant equilibrium by ±delta at index k and run both branches.
    Branch(RunArgs),
    /// Find a start that evolves to the constant equilibrium at time T.
    Reverse(RunArgs),
    /// Characteristic polynomial, eigenvalues and kernels of the discrete operators.
    Spectrum(RunArgs),
    /// One explicit gradient step on a sampled strategy.
    GradientDemo(RunArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Simulate(_) => "simulate",
            Command::Branch(_) => "branch",
            Command::Reverse(_) => "reverse",
            Command::Spectrum(_) => "spectrum",
            Command::GradientDemo(_) => "gradient-demo",
        }
    }

    pub fn args(&self) -> &RunArgs {
        match self {
            Command::Simulate(a)
            | Command::Branch(a)
            | Command::Reverse(a)
            | Command::Spectrum(a)
            | Command::GradientDemo(a) => a,
        }
    }
}

#[derive(Debug, Clone, Default, Args, Deserialize)]
#[serde(deny_unknown_fields)]
#[allow(non_snake_case)]
pub struct RunArgs {
    /// Discrete grid order (M + 1 components).
    #[arg(long = "M")]
    pub M: Option<usize>,
    /// Sampled grid resolution (N + 1 samples).
    #[arg(long = "N")]
    pub N: Option<usize>,
    #[arg(long)]
    pub preset: Option<String>,
    /// Strategy CSV with header `index,value` or `x,value`.
    #[arg(long)]
    pub file: Option<PathBuf>,
    /// Horizon.
    #[arg(long = "T")]
    pub T: Option<f64>,
    #[arg(long)]
    pub dt: Option<f64>,
    /// euler | rk4 | closed
    #[arg(long)]
    pub method: Option<String>,
    #[arg(long)]
    pub delta: Option<f64>,
    #[arg(long)]
    pub k: Option<usize>,
    /// Kink of the tent preset, in (1/2, 1).
    #[arg(long)]
    pub r: Option<f64>,
    #[arg(long)]
    pub epsilon: Option<f64>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub record_every: Option<usize>,
    /// Output directory.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
    /// Also write SVG plots.
    #[arg(long)]
    #[serde(default)]
    pub svg: bool,
}

macro_rules! prefer {
    ($a:expr, $b:expr, $($field:ident),*) => {
        RunArgs {
            $($field: $a.$field.clone().or_else(|| $b.$field.clone()),)*
            config: $a.config.clone(),
            svg: $a.svg || $b.svg,
        }
    };
}

impl RunArgs {
    /// Overlays these flags on a run file.
    pub fn over(&self, file: &RunArgs) -> RunArgs {
        prefer!(
            self,
            file,
            M,
            N,
            preset,
            file,
            T,
            dt,
            method,
            delta,
            k,
            r,
            epsilon,
            seed,
            record_every,
            out
        )
    }

    pub fn resolve(&self) -> CliResult<RunArgs> {
        let merged = match &self.config {
            Some(path) => self.over(&load_config(path)?),
            None => self.clone(),
        };
        merged.check_finite()?;
        Ok(merged)
    }

    fn check_finite(&self) -> CliResult<()> {
        for (name, v) in [
            ("T", self.T),
            ("dt", self.dt),
            ("delta", self.delta),
            ("r", self.r),
            ("epsilon", self.epsilon),
        ] {
            if let Some(x) = v {
                if !x.is_finite() {
                    return Err(CliError::Config(format!("{name} must be finite, got {x}")));
                }
            }
        }
        Ok(())
    }

    pub fn out_dir(&self) -> PathBuf {
        self.out.clone().unwrap_or_else(|| PathBuf::from("."))
    }
}

pub fn load_config(path: &Path) -> CliResult<RunArgs> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    toml::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
}

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use hyperlat::spectra::{Coupling, SpectralOptions, DEFAULT_CLUSTER_TOL, DEFAULT_FLAT_TOL, DEFAULT_MAX_DIM};

use crate::CliError;

pub const CLUSTER_TOL_ENV: &str = "HYPERLAT_CLUSTER_TOL";
pub const FLAT_TOL_ENV: &str = "HYPERLAT_FLAT_TOL";
pub const MIN_BINS: usize = 10;

#[derive(Debug, Parser)]
#[command(name = "hyperlat", version, about = "Layouts, line graphs and flat bands of {p,q} lattices")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write layout, line-graph and signed-line-graph JSON.
    Generate(GenerateArgs),
    /// Eigenvalue spectrum, histogram and optional physical spectrum.
    Spectrum(SpectrumArgs),
    /// Identities, bounds, flat-band counts and switching invariance.
    Verify(VerifyArgs),
    /// Ring counts, flat fractions and convergence table.
    Growth(GrowthArgs),
}

/// A layout given by symbol and ring count, or by catalog name.
#[derive(Debug, Clone, Args)]
pub struct LayoutSource {
    #[arg(long)]
    pub p: Option<u32>,
    #[arg(long)]
    pub q: Option<u32>,
    #[arg(long)]
    pub rings: Option<usize>,
    #[arg(long, conflicts_with_all = ["p", "q", "rings"])]
    pub catalog: Option<String>,
}

#[derive(Debug, Clone, Args)]
pub struct Tolerances {
    /// Overrides HYPERLAT_CLUSTER_TOL.
    #[arg(long)]
    pub cluster_tol: Option<f64>,
    /// Overrides HYPERLAT_FLAT_TOL.
    #[arg(long)]
    pub flat_tol: Option<f64>,
    #[arg(long, default_value_t = DEFAULT_MAX_DIM)]
    pub max_dim: usize,
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    #[command(flatten)]
    pub source: LayoutSource,
    /// Random orientation seed for the signed line graph; default orientation otherwise.
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, default_value = ".")]
    pub out_dir: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Full,
    Half,
}

impl Mode {
    pub fn coupling(self) -> Coupling {
        match self {
            Mode::Full => Coupling::FullWave,
            Mode::Half => Coupling::HalfWave,
        }
    }

    pub fn tag(self) -> &'static str {
        match self {
            Mode::Full => "full",
            Mode::Half => "half",
        }
    }
}

#[derive(Debug, Args)]
pub struct SpectrumArgs {
    /// Layout JSON written by `generate`.
    #[arg(long)]
    pub graph: PathBuf,
    #[arg(long, value_enum, default_value_t = Mode::Full)]
    pub mode: Mode,
    /// Signed-line-graph JSON whose orientation is used in half-wave mode.
    #[arg(long)]
    pub orientation: Option<PathBuf>,
    #[arg(long, default_value_t = 40)]
    pub bins: usize,
    #[arg(long, requires = "t")]
    pub omega0: Option<f64>,
    #[arg(long, requires = "omega0")]
    pub t: Option<f64>,
    /// Also write a flat-band basis.
    #[arg(long)]
    pub flat_states: bool,
    #[command(flatten)]
    pub tolerances: Tolerances,
    #[arg(long, default_value = ".")]
    pub out_dir: PathBuf,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub source: LayoutSource,
    /// Layout JSON instead of a symbol or catalog name.
    #[arg(long, conflicts_with_all = ["p", "q", "rings", "catalog", "matrix"])]
    pub graph: Option<PathBuf>,
    /// Every {p,q} with p in 4..=8, q in 3..=6, tau >= 4, rings <= 3, plus the dodecahedron.
    #[arg(long, conflicts_with_all = ["p", "q", "rings", "catalog"])]
    pub matrix: bool,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Random single-edge switches applied before the invariance check.
    #[arg(long, default_value_t = 20)]
    pub switches: usize,
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
    #[command(flatten)]
    pub tolerances: Tolerances,
    #[arg(long, default_value = ".")]
    pub out_dir: PathBuf,
}

#[derive(Debug, Args)]
pub struct GrowthArgs {
    #[arg(long)]
    pub p: u32,
    #[arg(long)]
    pub q: u32,
    #[arg(long)]
    pub lmax: usize,
    #[arg(long, default_value = ".")]
    pub out_dir: PathBuf,
}

impl Tolerances {
    /// Flag, then environment, then library default.
    pub fn resolve(&self) -> Result<SpectralOptions, CliError> {
        let cluster_tol = pick(self.cluster_tol, CLUSTER_TOL_ENV, DEFAULT_CLUSTER_TOL)?;
        let flat_tol = pick(self.flat_tol, FLAT_TOL_ENV, DEFAULT_FLAT_TOL)?;
        if self.max_dim == 0 {
            return Err(CliError::Input("--max-dim must be positive".into()));
        }
        Ok(SpectralOptions {
            cluster_tol,
            flat_tol,
            max_dim: self.max_dim,
            ..SpectralOptions::default()
        })
    }
}

fn pick(flag: Option<f64>, var: &str, default: f64) -> Result<f64, CliError> {
    let value = match flag {
        Some(v) => v,
        None => match std::env::var(var) {
            Ok(text) => text
                .trim()
                .parse()
                .map_err(|_| CliError::Input(format!("{var}={text} is not a number")))?,
            Err(_) => default,
        },
    };
    if !(value > 0.0 && value.is_finite()) {
        return Err(CliError::Input(format!("tolerance {var} must be positive, got {value}")));
    }
    Ok(value)
}

use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use skinlab::Boundary;

#[derive(Debug, Parser)]
#[command(
    name = "skinlab",
    version,
    about = "Spectra and eigenstates of chains with linearly graded non-reciprocal hopping"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Classified spectrum with residuals, block spectra and level spacings.
    Spectrum(SpectrumArgs),
    /// Spectrum class counts over a uniform gamma grid.
    Sweep(SweepArgs),
    /// Eigenstate profiles with localization metrics and envelope fits.
    States(StatesArgs),
    /// Winding of det(H(θ) − E_b) under flux insertion.
    Winding(WindingArgs),
    /// Data files for one of the preset figures.
    Figure(FigureArgs),
}

#[derive(Debug, Clone, Args)]
pub struct ChainArgs {
    /// Uniform hopping.
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub t: f64,
    /// Non-reciprocity gradient.
    #[arg(long, default_value_t = 0.01, allow_negative_numbers = true)]
    pub gamma: f64,
    /// Number of sites.
    #[arg(long, default_value_t = 100)]
    pub length: usize,
    #[arg(long, value_enum, default_value_t = BoundaryArg::Obc)]
    pub boundary: BoundaryArg,
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Main output file; auxiliary files are written next to it. Standard
    /// output when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Seed for inverse-iteration start vectors.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct SpectrumArgs {
    #[command(flatten)]
    pub chain: ChainArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub t: f64,
    #[arg(long, default_value_t = 100)]
    pub length: usize,
    #[arg(long, value_enum, default_value_t = BoundaryArg::Obc)]
    pub boundary: BoundaryArg,
    #[arg(long, allow_negative_numbers = true)]
    pub gamma_min: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub gamma_max: f64,
    /// Number of grid points, endpoints included.
    #[arg(long)]
    pub gamma_steps: usize,
    /// Worker threads; defaults to SKINLAB_WORKERS, then to the available parallelism.
    #[arg(long)]
    pub workers: Option<usize>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct StatesArgs {
    #[command(flatten)]
    pub chain: ChainArgs,
    /// real, imag, all, or nearest=RE,IM.
    #[arg(long, default_value = "all")]
    pub select: Selection,
    /// Fixed centre for the reference Gaussian of the global envelope.
    #[arg(long, allow_negative_numbers = true)]
    pub envelope_center: Option<f64>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct WindingArgs {
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub t: f64,
    #[arg(long, default_value_t = 0.01, allow_negative_numbers = true)]
    pub gamma: f64,
    #[arg(long, default_value_t = 100)]
    pub length: usize,
    /// Must be pbc; accepted for symmetry with the other commands.
    #[arg(long, value_enum, default_value_t = BoundaryArg::Pbc)]
    pub boundary: BoundaryArg,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub base_re: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub base_im: f64,
    #[arg(long, default_value_t = skinlab::analysis::DEFAULT_THETA_STEPS)]
    pub theta_steps: usize,
    /// Use the constant-nonreciprocity ring with hoppings t ∓ gamma instead.
    #[arg(long)]
    pub hatano_nelson: bool,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct FigureArgs {
    pub id: FigureId,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Output directory.
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub workers: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BoundaryArg {
    Obc,
    Pbc,
}

impl From<BoundaryArg> for Boundary {
    fn from(b: BoundaryArg) -> Self {
        match b {
            BoundaryArg::Obc => Boundary::Obc,
            BoundaryArg::Pbc => Boundary::Pbc,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FigureId {
    #[value(name = "1a")]
    F1a,
    #[value(name = "1b")]
    F1b,
    #[value(name = "1c")]
    F1c,
    #[value(name = "2a")]
    F2a,
    #[value(name = "2b")]
    F2b,
    #[value(name = "2c")]
    F2c,
    #[value(name = "2d")]
    F2d,
    #[value(name = "2e")]
    F2e,
    #[value(name = "2f")]
    F2f,
    #[value(name = "3a")]
    F3a,
    #[value(name = "3b")]
    F3b,
    #[value(name = "3c")]
    F3c,
    #[value(name = "4a")]
    F4a,
    #[value(name = "4b")]
    F4b,
    #[value(name = "5a")]
    F5a,
    #[value(name = "5b")]
    F5b,
}

impl FigureId {
    pub fn label(self) -> &'static str {
        use FigureId::*;
        match self {
            F1a => "1a",
            F1b => "1b",
            F1c => "1c",
            F2a => "2a",
            F2b => "2b",
            F2c => "2c",
            F2d => "2d",
            F2e => "2e",
            F2f => "2f",
            F3a => "3a",
            F3b => "3b",
            F3c => "3c",
            F4a => "4a",
            F4b => "4b",
            F5a => "5a",
            F5b => "5b",
        }
    }
}

/// Which eigenstates a states run reports.
#[derive(Debug, Clone, PartialEq)]
pub enum Selection {
    Real,
    Imaginary,
    All,
    /// For each target, the eigenvalue closest to it.
    Nearest(Vec<Complex64>),
}

impl FromStr for Selection {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "real" => return Ok(Selection::Real),
            "imag" => return Ok(Selection::Imaginary),
            "all" => return Ok(Selection::All),
            _ => {}
        }
        let bad = || format!("expected real, imag, all or nearest=RE,IM; got {s:?}");
        let (re, im) = s
            .strip_prefix("nearest=")
            .and_then(|rest| rest.split_once(','))
            .ok_or_else(bad)?;
        let re: f64 = re.trim().parse().map_err(|_| bad())?;
        let im: f64 = im.trim().parse().map_err(|_| bad())?;
        if !(re.is_finite() && im.is_finite()) {
            return Err(bad());
        }
        Ok(Selection::Nearest(vec![Complex64::new(re, im)]))
    }
}

impl Selection {
    pub fn describe(&self) -> String {
        match self {
            Selection::Real => "real".into(),
            Selection::Imaginary => "imag".into(),
            Selection::All => "all".into(),
            Selection::Nearest(targets) => targets
                .iter()
                .map(|z| format!("nearest={:?},{:?}", z.re, z.im))
                .collect::<Vec<_>>()
                .join(";"),
        }
    }
}

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(name = "isg", version, about = "Interlaced spin grating simulator")]
pub struct Cli {
    /// Suppress summaries on standard error.
    #[arg(long, short, global = true)]
    pub quiet: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Engrave a grating and write alpha(z, phi) as CSV.
    Engrave(SimArgs),
    /// Engrave, then probe: writes the efficiency as JSON.
    Probe(SimArgs),
    /// Efficiency against optical depth or drive, as CSV.
    Sweep(SweepArgs),
    /// Regenerate figure datasets (CSV files plus manifest.json).
    Figure(FigureArgs),
    /// Compare the closed-form steady state with the transient oracle.
    Oracle(OracleArgs),
    /// Run the invariant suite.
    Validate(ValidateArgs),
}

/// Flags shared by engrave, probe and sweep. Flags override the config file.
#[derive(Debug, Clone, Default, Args)]
pub struct SimArgs {
    /// JSON configuration file.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Level-scheme preset (tmyag-isg, tmyag-standard, tmyag-lambda).
    #[arg(long)]
    pub preset: Option<String>,
    /// Drive xi <r> of a lambda3 or tm5 scheme.
    #[arg(long, conflicts_with_all = ["zr", "r_avg"])]
    pub xr: Option<f64>,
    /// Drive zeta <r> of a standard scheme.
    #[arg(long, conflicts_with = "r_avg")]
    pub zr: Option<f64>,
    /// Reduced pumping rate <r>.
    #[arg(long)]
    pub r_avg: Option<f64>,
    /// Optical depth alpha0 L.
    #[arg(long)]
    pub od: Option<f64>,
    /// Absorption coefficient in m^-1.
    #[arg(long)]
    pub alpha0: Option<f64>,
    /// Crystal length in m.
    #[arg(long)]
    pub length: Option<f64>,
    /// small-angle or large-angle. Defaults to small-angle when no geometry is given.
    #[arg(long, conflicts_with = "angle")]
    pub regime: Option<String>,
    /// Full angle between the engraving beams in rad; picks the regime.
    #[arg(long)]
    pub angle: Option<f64>,
    /// Wavelength in m (default 793 nm), used with --angle.
    #[arg(long)]
    pub wavelength: Option<f64>,
    #[arg(long)]
    pub n_phi: Option<usize>,
    #[arg(long)]
    pub n_z: Option<usize>,
    /// Replace the engraved grating with an ideal one (sinusoidal, square).
    #[arg(long)]
    pub ideal: Option<String>,
    /// Output file; `-` writes to standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub sim: SimArgs,
    /// optical-depth or drive.
    #[arg(long)]
    pub over: Option<String>,
    #[arg(long)]
    pub step: Option<f64>,
    #[arg(long)]
    pub max: Option<f64>,
    /// Explicit comma-separated sample points.
    #[arg(long, value_delimiter = ',')]
    pub values: Option<Vec<f64>>,
}

#[derive(Debug, Clone, Args)]
pub struct FigureArgs {
    /// Figure ids (2, 3, 5, 6, 7, 8, 9-calc) or `all`.
    #[arg(required = true)]
    pub ids: Vec<String>,
    /// JSON configuration file; its scheme, drive, optical depth, grid and
    /// sweep step/max feed the figure overrides.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Drive xi <r> of the ISG curves.
    #[arg(long)]
    pub xr: Option<f64>,
    /// Drive zeta <r> of the standard curves.
    #[arg(long)]
    pub zr: Option<f64>,
    /// Optical depth of single-depth figures.
    #[arg(long)]
    pub od: Option<f64>,
    #[arg(long)]
    pub od_step: Option<f64>,
    #[arg(long)]
    pub od_max: Option<f64>,
    #[arg(long)]
    pub n_phi: Option<usize>,
    #[arg(long)]
    pub n_z: Option<usize>,
    /// Output directory; `-` streams a single CSV to standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct OracleArgs {
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub preset: Option<String>,
    /// Reduced rate r on the first transition.
    #[arg(long)]
    pub r: Option<f64>,
    /// Reduced rate r' on the second transition.
    #[arg(long)]
    pub r_prime: Option<f64>,
    /// Run the comparison at this many spread-out points instead of one.
    #[arg(long)]
    pub points: Option<usize>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct ValidateArgs {
    #[arg(long, default_value_t = 256)]
    pub n_phi: usize,
    #[arg(long, default_value_t = 400)]
    pub n_z: usize,
    /// Oracle comparison points.
    #[arg(long, default_value_t = 100)]
    pub points: usize,
    /// Report file; standard output by default.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

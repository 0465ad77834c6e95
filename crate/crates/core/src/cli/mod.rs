//! `spdc` command-line front end.
//!
//! Exit codes: 0 success, 2 invalid input, 3 no phase-matching solution.
//! Every command emits a CSV table plus a run manifest; with `--out FILE`
//! they go to `FILE` and `FILE.manifest`, otherwise to stdout with the
//! manifest inlined as comments.

mod commands;
mod config;
mod output;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::error::Error;

pub use config::{parse_angle, Resolver};
pub use output::{manifest_path, RunManifest, Table};

pub const EXIT_OK: u8 = 0;
pub const EXIT_INVALID: u8 = 2;
pub const EXIT_NO_SOLUTION: u8 = 3;

#[derive(Debug, Clone, PartialEq)]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl CliError {
    pub fn invalid(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_INVALID,
            message: message.into(),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::NoSolution { .. } => EXIT_NO_SOLUTION,
            _ => EXIT_INVALID,
        };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "spdc",
    version,
    about = "Phase matching and photon-pair simulation for SPDC"
)]
pub struct Cli {
    /// Built-in crystal name (BBO) or path to a coefficient file.
    #[arg(long, global = true)]
    pub crystal: Option<String>,
    /// `key = value` config file; flags override its values.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Output CSV path; the manifest is written to `<out>.manifest`.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Ordinary and extraordinary indices over a wavelength grid.
    Indices(IndicesArgs),
    /// Solve the phase-matching cut angle.
    Match(MatchArgs),
    /// Emission-cone cross-sections on a detection plane.
    Cones(ConesArgs),
    /// Second-harmonic intensity versus phase mismatch.
    Shg(ShgArgs),
    /// Parametric amplification trajectory (RK4).
    Gain(GainArgs),
    /// Photon-pair statistics, HOM and polarization correlations.
    Pairs(PairsArgs),
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct IndicesArgs {
    /// Pump wavelength (um) used for the n_e(theta, lp) = n_o(2 lp) crossing.
    #[arg(long)]
    pub lambda_p: Option<f64>,
    #[arg(long)]
    pub lambda_min: Option<f64>,
    #[arg(long)]
    pub lambda_max: Option<f64>,
    #[arg(long)]
    pub points: Option<usize>,
    /// Angle to the optic axis for the n_e_theta column (deg); defaults to
    /// the type-I crossing angle.
    #[arg(long)]
    pub theta: Option<f64>,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct MatchArgs {
    /// type1, type2-eo or type2-oe.
    #[arg(long = "type")]
    pub kind: Option<String>,
    #[arg(long)]
    pub lambda_p: Option<f64>,
    /// Signal wavelength (um); defaults to degenerate.
    #[arg(long)]
    pub lambda_s: Option<f64>,
    /// Internal signal angle from the pump (deg).
    #[arg(long)]
    pub signal_angle: Option<f64>,
    /// External signal angle (deg); alternative to --signal-angle.
    #[arg(long)]
    pub external_angle: Option<f64>,
    /// Signal azimuth from the optic-axis plane (deg).
    #[arg(long)]
    pub azimuth: Option<f64>,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct ConesArgs {
    #[arg(long = "type")]
    pub kind: Option<String>,
    #[arg(long)]
    pub lambda_p: Option<f64>,
    /// Central signal wavelength (um); defaults to degenerate.
    #[arg(long)]
    pub lambda_s: Option<f64>,
    /// Full width of the signal wavelength grid (nm).
    #[arg(long)]
    pub lambda_span: Option<f64>,
    #[arg(long)]
    pub lambda_points: Option<usize>,
    /// Cut angle (deg). Without it the cut is solved from --external-angle.
    #[arg(long)]
    pub theta_cut: Option<f64>,
    /// External signal angle at 90 deg azimuth used to solve the cut (deg).
    #[arg(long)]
    pub external_angle: Option<f64>,
    /// Crystal length (mm).
    #[arg(long)]
    pub length: Option<f64>,
    /// Crystal-to-detector distance (mm).
    #[arg(long)]
    pub distance: Option<f64>,
    #[arg(long)]
    pub azimuth_points: Option<usize>,
    /// Upper end of the internal angle search (deg).
    #[arg(long)]
    pub polar_max: Option<f64>,
    #[arg(long)]
    pub polar_steps: Option<usize>,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct ShgArgs {
    /// Fundamental wavelengths (um).
    #[arg(long)]
    pub lambda1: Option<f64>,
    #[arg(long)]
    pub lambda2: Option<f64>,
    /// Cut angle (deg) for the generated wave's index; defaults to the
    /// type-I match.
    #[arg(long)]
    pub theta: Option<f64>,
    #[arg(long)]
    pub n1: Option<f64>,
    #[arg(long)]
    pub n2: Option<f64>,
    #[arg(long)]
    pub n3: Option<f64>,
    /// Input intensities (W/m^2).
    #[arg(long)]
    pub i1: Option<f64>,
    #[arg(long)]
    pub i2: Option<f64>,
    /// Effective nonlinear coefficient (pm/V).
    #[arg(long)]
    pub d_eff: Option<f64>,
    /// Crystal length (mm).
    #[arg(long)]
    pub length: Option<f64>,
    /// Mismatch sweep bound (rad/m); the sweep is symmetric.
    #[arg(long)]
    pub dk_max: Option<f64>,
    #[arg(long)]
    pub points: Option<usize>,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct GainArgs {
    #[arg(long)]
    pub lambda_p: Option<f64>,
    #[arg(long)]
    pub lambda_s: Option<f64>,
    #[arg(long)]
    pub n1: Option<f64>,
    #[arg(long)]
    pub n2: Option<f64>,
    /// Effective nonlinear coefficient (pm/V).
    #[arg(long)]
    pub d_eff: Option<f64>,
    /// Pump amplitude (V/m).
    #[arg(long)]
    pub pump_field: Option<f64>,
    /// Initial signal and idler amplitudes (V/m).
    #[arg(long)]
    pub a1: Option<f64>,
    #[arg(long)]
    pub a2: Option<f64>,
    /// Phase mismatch (rad/m).
    #[arg(long)]
    pub dk: Option<f64>,
    /// Propagation length (mm).
    #[arg(long)]
    pub length: Option<f64>,
    #[arg(long)]
    pub steps: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PairsMode {
    Stats,
    G2,
    Hom,
    Chsh,
    Fringe,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct PairsArgs {
    pub mode: Option<PairsMode>,
    #[arg(long)]
    pub stats: bool,
    #[arg(long)]
    pub g2: bool,
    #[arg(long)]
    pub hom: bool,
    #[arg(long)]
    pub chsh: bool,
    #[arg(long)]
    pub fringe: bool,
    /// Comma-separated interaction parameters r.
    #[arg(long)]
    pub r_values: Option<String>,
    #[arg(long)]
    pub n_max: Option<usize>,
    #[arg(long)]
    pub order: Option<usize>,
    /// HOM coherence time (s).
    #[arg(long)]
    pub coherence_time: Option<f64>,
    #[arg(long)]
    pub visibility: Option<f64>,
    /// HOM delay range (s).
    #[arg(long)]
    pub tau_min: Option<f64>,
    #[arg(long)]
    pub tau_max: Option<f64>,
    #[arg(long)]
    pub points: Option<usize>,
    /// Relative phase of the polarization state (rad, accepts `pi`).
    #[arg(long)]
    pub phi: Option<String>,
    /// Analyzer angles (deg).
    #[arg(long)]
    pub a: Option<f64>,
    #[arg(long)]
    pub a_prime: Option<f64>,
    #[arg(long)]
    pub b: Option<f64>,
    #[arg(long)]
    pub b_prime: Option<f64>,
    /// Idler analyzer scan range for fringes (deg).
    #[arg(long)]
    pub b_min: Option<f64>,
    #[arg(long)]
    pub b_max: Option<f64>,
}

/// Output of a command before it is written anywhere.
#[derive(Debug)]
pub struct RunOutput {
    pub table: Table,
    pub manifest: RunManifest,
    /// Human-readable lines for stderr.
    pub summary: Vec<String>,
}

/// Parses arguments, runs the command and writes its outputs. Returns the
/// process exit code.
pub fn run_with<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(stderr, "{}", e.render());
            return if e.use_stderr() {
                EXIT_INVALID
            } else {
                EXIT_OK
            };
        }
    };
    match execute(&cli) {
        Ok(run) => {
            for line in &run.summary {
                let _ = writeln!(stderr, "{line}");
            }
            for w in &run.manifest.warnings {
                let _ = writeln!(stderr, "warning: {w}");
            }
            let written = match &cli.out {
                Some(path) => output::write_outputs(path, &run.table, &run.manifest),
                None => stdout
                    .write_all(output::render_csv_inline(&run.table, &run.manifest).as_bytes())
                    .map_err(|e| CliError::invalid(format!("stdout: {e}"))),
            };
            match written {
                Ok(()) => EXIT_OK,
                Err(e) => {
                    let _ = writeln!(stderr, "error: {}", e.message);
                    e.code
                }
            }
        }
        Err(e) => {
            let _ = writeln!(stderr, "error: {}", e.message);
            e.code
        }
    }
}

/// Runs the parsed command without touching the filesystem outputs.
pub fn execute(cli: &Cli) -> Result<RunOutput, CliError> {
    let mut res = Resolver::from_file(cli.config.as_deref())?;
    let crystal = commands::resolve_crystal(&mut res, cli.crystal.as_deref())?;
    let (name, mut run) = match &cli.command {
        Command::Indices(a) => ("indices", commands::indices(&mut res, &crystal, a)?),
        Command::Match(a) => ("match", commands::phase_match(&mut res, &crystal, a)?),
        Command::Cones(a) => ("cones", commands::cones(&mut res, &crystal, a)?),
        Command::Shg(a) => ("shg", commands::shg(&mut res, &crystal, a)?),
        Command::Gain(a) => ("gain", commands::gain(&mut res, &crystal, a)?),
        Command::Pairs(a) => ("pairs", commands::pairs(&mut res, a)?),
    };
    for key in res.unused_keys() {
        run.manifest
            .warnings
            .push(format!("config key `{key}` not used by this command"));
    }
    run.manifest.command = name.to_string();
    run.manifest.params = res.into_resolved();
    Ok(run)
}

//! `dma` — command-line front end for the DMA simulation toolkit.
//!
//! Exit codes: 0 success, 2 usage or configuration error, 3 numerical error
//! (below cutoff, rank deficiency, zero-beam code).

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

mod commands;
mod config;
mod output;

use commands::Method;
use config::RunConfig;

/// Classified CLI failure carrying its process exit code.
#[derive(Debug)]
pub struct CliError {
    code: u8,
    message: String,
}

impl CliError {
    pub fn usage(message: String) -> Self {
        Self { code: 2, message }
    }

    pub fn numerical(message: String) -> Self {
        Self { code: 3, message }
    }

    pub fn io(message: String) -> Self {
        Self { code: 1, message }
    }

    /// Core errors raised while validating configuration count as usage errors.
    pub fn from_config(err: dma_core::Error) -> Self {
        Self::usage(err.to_string())
    }

    pub fn message(&self) -> &str {
        &self.message
    }

    pub fn code(&self) -> u8 {
        self.code
    }
}

impl From<dma_core::Error> for CliError {
    fn from(err: dma_core::Error) -> Self {
        use dma_core::Error::*;
        let message = err.to_string();
        match err {
            BelowCutoff { .. } | RankDeficient { .. } | NoBeam | AllOffCode | ZeroNorm
            | NonPositiveFrequency(_) | EmptySpectrum => Self::numerical(message),
            InvalidParameter(_) | LengthMismatch { .. } | GridMismatch | GridTooCoarse(_)
            | InvalidDepletion(_) | TooManyElements(_) | InvalidCode(_) => Self::usage(message),
        }
    }
}

#[derive(Parser)]
#[command(
    name = "dma",
    version,
    about = "Binary-coded dynamic metasurface antenna simulator",
    long_about = "Models a 16-element binary-coded metasurface antenna on a dispersive \
guided-wave feed: dispersion indicators of the switched resonator, frequency-diverse \
beam patterns under binary hologram codes, holographic code synthesis, and a \
frequency-code-diverse computational imaging pipeline."
)]
struct Cli {
    /// JSON configuration file; an empty file means all defaults.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Output directory (created if missing).
    #[arg(long, global = true, default_value = "dma-out")]
    out: PathBuf,

    /// Seed override for the mask ensemble and measurement noise.
    #[arg(long, global = true)]
    seed: Option<u64>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Dispersion indicators of one meta-atom: S-parameters, unwrapped phase,
    /// group delay, refractive and group index, group velocity, permittivity,
    /// and anomalous-dispersion bands.
    Dispersion,
    /// Far-field pattern and beam metrics for one code at one frequency.
    Pattern {
        /// Hologram code, element nearest the feed first (e.g. 1010101010101010).
        #[arg(long)]
        code: String,
        /// Operating frequency in GHz.
        #[arg(long)]
        frequency_ghz: f64,
    },
    /// Beam metrics of one code swept over several frequencies.
    Scan {
        #[arg(long)]
        code: String,
        /// Comma-separated frequencies in GHz, strictly increasing.
        #[arg(long, value_delimiter = ',', default_values_t = [60.0, 61.0, 62.0])]
        frequencies_ghz: Vec<f64>,
    },
    /// The full code-by-frequency table of beam metrics.
    Table {
        /// Comma-separated code strings; defaults to the configured examples.
        #[arg(long, value_delimiter = ',')]
        codes: Option<Vec<String>>,
        #[arg(long, value_delimiter = ',', default_values_t = [60.0, 61.0, 62.0])]
        frequencies_ghz: Vec<f64>,
    },
    /// Synthesize a binary hologram steering toward a target angle.
    Design {
        /// Target angle in degrees, strictly inside (-90, 90).
        #[arg(long, allow_negative_numbers = true)]
        theta_deg: f64,
        #[arg(long)]
        frequency_ghz: f64,
        /// Also run the exhaustive 2^N search and report the gain gap.
        #[arg(long)]
        oracle: bool,
    },
    /// Simulate measurements of a scene and reconstruct it.
    Image {
        /// Scene CSV (theta_deg,re,im); mutually exclusive with --point.
        #[arg(long)]
        scene: Option<PathBuf>,
        /// Unit scatterer at this pixel of the default grid.
        #[arg(long)]
        point: Option<usize>,
        /// Per-component noise standard deviation.
        #[arg(long, default_value_t = 0.0)]
        noise: f64,
        /// Reconstruction method.
        #[arg(long, value_enum, default_value_t = Method::Mf)]
        method: Method,
        /// Tikhonov regularization, relative to sigma_1^2.
        #[arg(long, default_value_t = 1e-12)]
        lambda: f64,
    },
    /// Diversity metrics of the configured mask ensemble.
    Metrics,
    /// Aperture port model (S-parameters and radiated power) for one code.
    Port {
        #[arg(long)]
        code: String,
    },
}

fn run(cli: Cli) -> Result<(), CliError> {
    let mut cfg = match &cli.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    if let Some(seed) = cli.seed {
        cfg.seed = seed;
    }
    cfg.validate()?;

    std::fs::create_dir_all(&cli.out)
        .map_err(|e| CliError::io(format!("cannot create {}: {e}", cli.out.display())))?;
    output::write_json(&cli.out, "resolved_config.json", &cfg)?;

    let out = cli.out.as_path();
    match &cli.command {
        Command::Dispersion => commands::cmd_dispersion(&cfg, out),
        Command::Pattern {
            code,
            frequency_ghz,
        } => commands::cmd_pattern(&cfg, out, code, *frequency_ghz),
        Command::Scan {
            code,
            frequencies_ghz,
        } => commands::cmd_scan(&cfg, out, code, frequencies_ghz),
        Command::Table {
            codes,
            frequencies_ghz,
        } => commands::cmd_table(&cfg, out, codes.as_deref(), frequencies_ghz),
        Command::Design {
            theta_deg,
            frequency_ghz,
            oracle,
        } => commands::cmd_design(&cfg, out, *theta_deg, *frequency_ghz, *oracle),
        Command::Image {
            scene,
            point,
            noise,
            method,
            lambda,
        } => commands::cmd_image(&cfg, out, scene.as_deref(), *point, *noise, *method, *lambda),
        Command::Metrics => commands::cmd_metrics(&cfg, out),
        Command::Port { code } => commands::cmd_port(&cfg, out, code),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {}", err.message());
            ExitCode::from(err.code())
        }
    }
}

//! Run configuration: JSON file with full defaults, strict about unknown keys.
//! Every run echoes the fully resolved configuration next to its outputs, and
//! that echo can be fed back through `--config` to reproduce the run.

use serde::{Deserialize, Serialize};

use dma_core::{
    example_codes, ApertureConfig, FrequencyGrid, HologramCode, LorentzianParams, SiwParams,
    ThetaGrid, DEFAULT_SEED,
};

use crate::CliError;

/// Feed description; element positions are derived as `n * spacing_m`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct FeedConfig {
    pub eps_r: f64,
    pub tan_delta: f64,
    pub f_cutoff_hz: f64,
    pub n_elements: usize,
    pub spacing_m: f64,
}

impl Default for FeedConfig {
    fn default() -> Self {
        Self {
            eps_r: 3.0,
            tan_delta: 0.001,
            f_cutoff_hz: 45.0e9,
            n_elements: 16,
            spacing_m: 2.0e-3,
        }
    }
}

impl FeedConfig {
    pub fn to_siw(&self) -> SiwParams {
        SiwParams {
            eps_r: self.eps_r,
            tan_delta: self.tan_delta,
            f_cutoff_hz: self.f_cutoff_hz,
            positions_m: (0..self.n_elements)
                .map(|n| n as f64 * self.spacing_m)
                .collect(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ElementStateConfig {
    On,
    Off,
}

/// What the `dispersion` command analyses.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct DispersionConfig {
    pub state: ElementStateConfig,
    /// Effective slab thickness for the index retrieval (m).
    pub thickness_m: f64,
}

impl Default for DispersionConfig {
    fn default() -> Self {
        Self {
            state: ElementStateConfig::On,
            thickness_m: 2.0e-3,
        }
    }
}

/// Mask-ensemble specification for the imaging commands. Pixels are spaced
/// uniformly in sin(theta) over +/- `pixel_span_deg`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ImagingConfig {
    pub n_random_codes: usize,
    pub frequencies_hz: Vec<f64>,
    pub n_pixels: usize,
    pub pixel_span_deg: f64,
}

impl Default for ImagingConfig {
    fn default() -> Self {
        Self {
            n_random_codes: 10,
            frequencies_hz: dma_core::default_frequencies_hz(),
            n_pixels: 32,
            pixel_span_deg: 75.0,
        }
    }
}

/// The complete run configuration. An empty file (or no `--config`) resolves
/// to the documented defaults; unknown keys are rejected by name.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    pub seed: u64,
    pub meta: LorentzianParams,
    pub feed: FeedConfig,
    pub theta: ThetaGrid,
    /// Uniform power depletion per active element; `null` keeps radiation
    /// linear in the code.
    pub depletion: Option<f64>,
    pub grid: FrequencyGrid,
    pub dispersion: DispersionConfig,
    /// Example hologram codes used by `table`, `image`, and `metrics`.
    pub codes: Vec<String>,
    pub imaging: ImagingConfig,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            seed: DEFAULT_SEED,
            meta: LorentzianParams::default(),
            feed: FeedConfig::default(),
            theta: ThetaGrid::default(),
            depletion: None,
            grid: FrequencyGrid::default(),
            dispersion: DispersionConfig::default(),
            codes: example_codes().iter().map(|c| c.to_string()).collect(),
            imaging: ImagingConfig::default(),
        }
    }
}

impl RunConfig {
    /// Load from a JSON file; an empty file means "all defaults".
    pub fn load(path: &std::path::Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::usage(format!("cannot read config {}: {e}", path.display())))?;
        let trimmed = text.trim();
        if trimmed.is_empty() {
            return Ok(Self::default());
        }
        serde_json::from_str(trimmed)
            .map_err(|e| CliError::usage(format!("config {}: {e}", path.display())))
    }

    pub fn aperture(&self) -> ApertureConfig {
        ApertureConfig {
            meta: self.meta,
            feed: self.feed.to_siw(),
            theta: self.theta.clone(),
            depletion: self.depletion,
        }
    }

    /// Parse and validate one code string against the configured aperture.
    pub fn parse_code(&self, s: &str) -> Result<HologramCode, CliError> {
        let code: HologramCode = s
            .parse()
            .map_err(|e| CliError::usage(format!("code '{s}': {e}")))?;
        if code.len() != self.feed.n_elements {
            return Err(CliError::usage(format!(
                "code '{s}' has {} elements, aperture has {}",
                code.len(),
                self.feed.n_elements
            )));
        }
        Ok(code)
    }

    /// The configured example codes, parsed.
    pub fn code_list(&self) -> Result<Vec<HologramCode>, CliError> {
        self.codes.iter().map(|s| self.parse_code(s)).collect()
    }

    /// The imaging mask ensemble: configured codes plus seeded random ones.
    pub fn ensemble(&self) -> Result<Vec<HologramCode>, CliError> {
        let mut codes = self.code_list()?;
        codes.extend(dma_core::random_codes(
            self.imaging.n_random_codes,
            self.feed.n_elements,
            self.seed,
        ));
        Ok(codes)
    }

    /// Default pixel grid for imaging.
    pub fn pixel_angles(&self) -> Vec<f64> {
        dma_core::sin_spaced_pixels(self.imaging.pixel_span_deg, self.imaging.n_pixels)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        self.aperture().validate().map_err(CliError::from_config)?;
        self.grid.validate().map_err(CliError::from_config)?;
        if !(self.dispersion.thickness_m > 0.0) {
            return Err(CliError::usage(format!(
                "dispersion thickness must be positive (got {})",
                self.dispersion.thickness_m
            )));
        }
        if self.imaging.n_pixels < 2 {
            return Err(CliError::usage("imaging needs at least 2 pixels".into()));
        }
        if !(self.imaging.pixel_span_deg > 0.0 && self.imaging.pixel_span_deg < 90.0) {
            return Err(CliError::usage(format!(
                "pixel span must lie in (0, 90) deg (got {})",
                self.imaging.pixel_span_deg
            )));
        }
        if self.imaging.frequencies_hz.is_empty() {
            return Err(CliError::usage("imaging needs at least one frequency".into()));
        }
        self.code_list()?;
        Ok(())
    }
}

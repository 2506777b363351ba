//! Desk-scale simulator for a binary-coded dynamic metasurface antenna: a
//! Lorentzian meta-atom on a dispersive guided-wave feed, dispersion
//! indicator extraction, holographic binary beam synthesis, frequency-diverse
//! pattern families, and a computational-imaging pipeline built from the
//! resulting (code, frequency) masks.
//!
//! Conventions: time dependence `e^{+j omega t}`, forward guided propagation
//! `e^{-j beta x}`, angles in degrees at the API surface, frequencies in Hz,
//! angular frequencies in rad/s.

pub mod aperture;
pub mod dispersion;
pub mod error;
pub mod feedline;
pub mod holography;
pub mod imaging;
pub mod meta_atom;

pub use aperture::{
    beam_metrics, cascade_abcd, element_moments, far_field, far_field_at, pattern_correlation,
    port_response, port_response_at, ApertureConfig, BeamMetrics, HologramCode, Normalization,
    PortResponse, PortSample, RadiationPattern, ThetaGrid,
};
pub use dispersion::{
    anomalous_bands, effective_index, effective_permittivity, group_delay, group_index,
    group_velocity, unwrap_phase, Band, BandList, RealSpectrum,
};
pub use error::{Error, Result};
pub use feedline::{FeedExcitation, SiwParams};
pub use holography::{
    example_codes, exhaustive_best_code, frequency_scan, gain_at, hybrid_diversity_table,
    synthesize_code, BestCode, ScanResult, ScanRow, SteeringTarget,
};
pub use imaging::{
    build_measurement_matrix, default_frequencies_hz, default_pixel_angles, diversity_metrics,
    diversity_metrics_with_threshold, ensemble_codes, forward_measure, random_codes,
    reconstruct_matched_filter, reconstruct_tikhonov, sin_spaced_pixels, DiversityReport,
    MaskDescriptor, MatchedFilterEstimate, MeasurementMatrix, Scene, DEFAULT_SEED,
};
pub use meta_atom::{FrequencyGrid, LorentzianParams, OffState, TwoPortResponse, C0};

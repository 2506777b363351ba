//! Frequency-code-diverse computational imaging: measurement matrix assembly
//! from (code, frequency) masks, mask-diversity metrics, simulated
//! measurements, and matched-filter / regularized reconstructions.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::aperture::{element_moments, far_field_at, ApertureConfig, HologramCode};
use crate::error::{Error, Result};
use crate::holography::example_codes;

/// Relative singular-value threshold used for the effective rank.
pub const EFFECTIVE_RANK_THRESHOLD: f64 = 1e-3;

/// Default RNG seed for the documented mask ensemble; chosen once so that the
/// default ensemble's masks spread evenly enough for single-scatterer
/// localization across the whole default pixel grid.
pub const DEFAULT_SEED: u64 = 14;

/// 1-D angular reflectivity strip.
#[derive(Debug, Clone, PartialEq)]
pub struct Scene {
    pub pixel_angles_deg: Vec<f64>,
    pub reflectivity: Vec<Complex64>,
}

impl Scene {
    pub fn new(pixel_angles_deg: Vec<f64>, reflectivity: Vec<Complex64>) -> Result<Self> {
        if pixel_angles_deg.len() != reflectivity.len() {
            return Err(Error::LengthMismatch {
                expected: pixel_angles_deg.len(),
                actual: reflectivity.len(),
            });
        }
        validate_pixel_angles(&pixel_angles_deg)?;
        Ok(Self {
            pixel_angles_deg,
            reflectivity,
        })
    }

    /// Scene with a single unit scatterer at the given pixel.
    pub fn point(pixel_angles_deg: Vec<f64>, pixel: usize) -> Result<Self> {
        if pixel >= pixel_angles_deg.len() {
            return Err(Error::InvalidParameter(format!(
                "point scatterer index {pixel} out of range (P = {})",
                pixel_angles_deg.len()
            )));
        }
        let mut reflectivity = vec![Complex64::new(0.0, 0.0); pixel_angles_deg.len()];
        reflectivity[pixel] = Complex64::new(1.0, 0.0);
        Self::new(pixel_angles_deg, reflectivity)
    }

    pub fn len(&self) -> usize {
        self.reflectivity.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reflectivity.is_empty()
    }
}

fn validate_pixel_angles(angles: &[f64]) -> Result<()> {
    if angles.is_empty() {
        return Err(Error::InvalidParameter("scene has no pixels".into()));
    }
    if angles.iter().any(|&a| !(a.abs() < 90.0)) {
        return Err(Error::InvalidParameter(
            "pixel angles must lie strictly inside (-90, 90) deg".into(),
        ));
    }
    if angles.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidParameter(
            "pixel angles must be strictly increasing".into(),
        ));
    }
    Ok(())
}

/// The (code, frequency) pair that produced one measurement row.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MaskDescriptor {
    pub code: String,
    pub frequency_hz: f64,
}

/// Complex M x P sensing operator mapping pixel reflectivities to mask
/// measurements, with the masks that generated each row.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementMatrix {
    pub masks: Vec<MaskDescriptor>,
    pub pixel_angles_deg: Vec<f64>,
    pub entries: DMatrix<Complex64>,
}

impl MeasurementMatrix {
    pub fn m_rows(&self) -> usize {
        self.entries.nrows()
    }

    pub fn p_pixels(&self) -> usize {
        self.entries.ncols()
    }
}

/// Mask-diversity summary of a measurement matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiversityReport {
    /// Singular values, descending.
    pub singular_values: Vec<f64>,
    /// Count of singular values >= threshold * sigma_1.
    pub effective_rank: usize,
    /// Threshold used for the effective rank.
    pub effective_rank_threshold: f64,
    /// Mean |<row_i, row_j>| / (|row_i| |row_j|) over i < j.
    pub mean_row_correlation: f64,
    /// sigma_1 / sigma_min; `None` when sigma_min is exactly zero.
    pub condition_number: Option<f64>,
    pub m_rows: usize,
    pub p_pixels: usize,
}

/// Assemble the sensing operator: row (i, j) holds the far field of code i at
/// frequency j sampled at the pixel angles; frequencies vary fastest.
pub fn build_measurement_matrix(
    config: &ApertureConfig,
    codes: &[HologramCode],
    frequencies_hz: &[f64],
    pixel_angles_deg: &[f64],
) -> Result<MeasurementMatrix> {
    if codes.is_empty() || frequencies_hz.is_empty() {
        return Err(Error::InvalidParameter(
            "need at least one code and one frequency".into(),
        ));
    }
    validate_pixel_angles(pixel_angles_deg)?;
    if let Some(bad) = codes.iter().find(|c| c.is_all_off()) {
        let _ = bad;
        return Err(Error::AllOffCode);
    }
    let p = pixel_angles_deg.len();
    let m = codes.len() * frequencies_hz.len();
    let mut masks = Vec::with_capacity(m);
    let mut entries = DMatrix::<Complex64>::zeros(m, p);
    let mut row = 0;
    for code in codes {
        for &f in frequencies_hz {
            let omega = 2.0 * PI * f;
            let moments = element_moments(config, code, omega)?;
            let fields = far_field_at(&moments, &config.feed.positions_m, omega, pixel_angles_deg);
            for (col, value) in fields.into_iter().enumerate() {
                entries[(row, col)] = value;
            }
            masks.push(MaskDescriptor {
                code: code.to_string(),
                frequency_hz: f,
            });
            row += 1;
        }
    }
    Ok(MeasurementMatrix {
        masks,
        pixel_angles_deg: pixel_angles_deg.to_vec(),
        entries,
    })
}

/// Simulate measurements `g = H sigma + n` with circularly symmetric complex
/// noise of per-component standard deviation `noise_sigma`, drawn from a
/// seeded deterministic generator.
pub fn forward_measure(
    matrix: &MeasurementMatrix,
    scene: &Scene,
    noise_sigma: f64,
    seed: u64,
) -> Result<Vec<Complex64>> {
    if scene.len() != matrix.p_pixels() {
        return Err(Error::LengthMismatch {
            expected: matrix.p_pixels(),
            actual: scene.len(),
        });
    }
    if !(noise_sigma >= 0.0) {
        return Err(Error::InvalidParameter(format!(
            "noise sigma must be non-negative (got {noise_sigma})"
        )));
    }
    let m = matrix.m_rows();
    let mut g = vec![Complex64::new(0.0, 0.0); m];
    for i in 0..m {
        let mut acc = Complex64::new(0.0, 0.0);
        for j in 0..matrix.p_pixels() {
            acc += matrix.entries[(i, j)] * scene.reflectivity[j];
        }
        g[i] = acc;
    }
    if noise_sigma > 0.0 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for gi in &mut g {
            let re: f64 = StandardNormal.sample(&mut rng);
            let im: f64 = StandardNormal.sample(&mut rng);
            *gi += Complex64::new(re, im) * noise_sigma;
        }
    }
    Ok(g)
}

/// Matched-filter estimate with pixel indices whose sensing column had zero
/// norm (those estimates are forced to zero).
#[derive(Debug, Clone, PartialEq)]
pub struct MatchedFilterEstimate {
    pub values: Vec<Complex64>,
    pub zeroed_pixels: Vec<usize>,
}

/// Adjoint reconstruction `sigma_p = <H[:,p], g> / |H[:,p]|^2`.
pub fn reconstruct_matched_filter(
    matrix: &MeasurementMatrix,
    g: &[Complex64],
) -> Result<MatchedFilterEstimate> {
    if g.len() != matrix.m_rows() {
        return Err(Error::LengthMismatch {
            expected: matrix.m_rows(),
            actual: g.len(),
        });
    }
    let mut values = Vec::with_capacity(matrix.p_pixels());
    let mut zeroed = Vec::new();
    for p in 0..matrix.p_pixels() {
        let mut inner = Complex64::new(0.0, 0.0);
        let mut norm2 = 0.0;
        for i in 0..matrix.m_rows() {
            let h = matrix.entries[(i, p)];
            inner += h.conj() * g[i];
            norm2 += h.norm_sqr();
        }
        if norm2 == 0.0 {
            zeroed.push(p);
            values.push(Complex64::new(0.0, 0.0));
        } else {
            values.push(inner / norm2);
        }
    }
    Ok(MatchedFilterEstimate {
        values,
        zeroed_pixels: zeroed,
    })
}

struct SvdParts {
    u: DMatrix<Complex64>,
    v_t: DMatrix<Complex64>,
    singular_values: Vec<f64>,
}

fn svd_of(matrix: &MeasurementMatrix) -> SvdParts {
    let svd = matrix.entries.clone().svd(true, true);
    SvdParts {
        u: svd.u.expect("requested U"),
        v_t: svd.v_t.expect("requested V^T"),
        singular_values: svd.singular_values.iter().cloned().collect(),
    }
}

/// Tikhonov-regularized reconstruction via the SVD filter
/// `sigma = sum_k s_k / (s_k^2 + lambda) <u_k, g> v_k`. `lambda` is absolute;
/// `lambda = 0` demands a numerically full-rank matrix.
pub fn reconstruct_tikhonov(
    matrix: &MeasurementMatrix,
    g: &[Complex64],
    lambda: f64,
) -> Result<Vec<Complex64>> {
    if g.len() != matrix.m_rows() {
        return Err(Error::LengthMismatch {
            expected: matrix.m_rows(),
            actual: g.len(),
        });
    }
    if !(lambda >= 0.0) {
        return Err(Error::InvalidParameter(format!(
            "lambda must be non-negative (got {lambda})"
        )));
    }
    let svd = svd_of(matrix);
    let s = &svd.singular_values;
    let sigma_1 = s.first().copied().unwrap_or(0.0);
    let sigma_min = s.last().copied().unwrap_or(0.0);
    if lambda == 0.0 && sigma_min <= 1e-12 * sigma_1 {
        return Err(Error::RankDeficient {
            ratio: if sigma_1 > 0.0 { sigma_min / sigma_1 } else { 0.0 },
        });
    }
    let k = s.len();
    let mut estimate = vec![Complex64::new(0.0, 0.0); matrix.p_pixels()];
    for idx in 0..k {
        let filter = s[idx] / (s[idx] * s[idx] + lambda);
        if filter == 0.0 {
            continue;
        }
        // <u_k, g>
        let mut proj = Complex64::new(0.0, 0.0);
        for i in 0..matrix.m_rows() {
            proj += svd.u[(i, idx)].conj() * g[i];
        }
        let weight = proj * filter;
        for p in 0..matrix.p_pixels() {
            // v_k is the conjugate of row k of V^T
            estimate[p] += weight * svd.v_t[(idx, p)].conj();
        }
    }
    Ok(estimate)
}

/// Diversity metrics with an explicit effective-rank threshold.
pub fn diversity_metrics_with_threshold(
    matrix: &MeasurementMatrix,
    threshold: f64,
) -> DiversityReport {
    let svd = matrix.entries.clone().svd(false, false);
    let mut singular_values: Vec<f64> = svd.singular_values.iter().cloned().collect();
    singular_values.sort_by(|a, b| b.partial_cmp(a).unwrap());
    let sigma_1 = singular_values.first().copied().unwrap_or(0.0);
    let sigma_min = singular_values.last().copied().unwrap_or(0.0);
    let effective_rank = singular_values
        .iter()
        .filter(|&&s| s >= threshold * sigma_1 && s > 0.0)
        .count();

    let m = matrix.m_rows();
    let norms: Vec<f64> = (0..m)
        .map(|i| {
            (0..matrix.p_pixels())
                .map(|j| matrix.entries[(i, j)].norm_sqr())
                .sum::<f64>()
                .sqrt()
        })
        .collect();
    let mut corr_sum = 0.0;
    let mut pairs = 0usize;
    for i in 0..m {
        for j in i + 1..m {
            let mut inner = Complex64::new(0.0, 0.0);
            for p in 0..matrix.p_pixels() {
                inner += matrix.entries[(i, p)].conj() * matrix.entries[(j, p)];
            }
            if norms[i] > 0.0 && norms[j] > 0.0 {
                corr_sum += inner.norm() / (norms[i] * norms[j]);
            }
            pairs += 1;
        }
    }
    DiversityReport {
        singular_values,
        effective_rank,
        effective_rank_threshold: threshold,
        mean_row_correlation: if pairs > 0 { corr_sum / pairs as f64 } else { 0.0 },
        condition_number: (sigma_min > 0.0).then(|| sigma_1 / sigma_min),
        m_rows: m,
        p_pixels: matrix.p_pixels(),
    }
}

/// Diversity metrics at the default threshold.
pub fn diversity_metrics(matrix: &MeasurementMatrix) -> DiversityReport {
    diversity_metrics_with_threshold(matrix, EFFECTIVE_RANK_THRESHOLD)
}

/// Default mask frequencies (Hz).
pub fn default_frequencies_hz() -> Vec<f64> {
    vec![59.5e9, 60.5e9, 61.5e9, 62.5e9]
}

/// Pixel angles equally spaced in sin(theta) over +/- span_deg.
pub fn sin_spaced_pixels(span_deg: f64, n: usize) -> Vec<f64> {
    let s0 = span_deg.to_radians().sin();
    (0..n)
        .map(|i| {
            let s = -s0 + 2.0 * s0 * i as f64 / (n - 1) as f64;
            s.asin().to_degrees()
        })
        .collect()
}

/// Default 32-pixel scene grid, sin-spaced over +/- 75 deg.
pub fn default_pixel_angles() -> Vec<f64> {
    sin_spaced_pixels(75.0, 32)
}

/// Seeded random nonzero codes (each bit fair, all-off draws rejected).
pub fn random_codes(count: usize, n_elements: usize, seed: u64) -> Vec<HologramCode> {
    use rand::Rng;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let bits: Vec<bool> = (0..n_elements).map(|_| rng.gen_bool(0.5)).collect();
        let code = HologramCode::new(bits);
        if !code.is_all_off() {
            out.push(code);
        }
    }
    out
}

/// Default mask ensemble: the six documented example codes plus `n_random`
/// seeded random codes.
pub fn ensemble_codes(n_random: usize, n_elements: usize, seed: u64) -> Vec<HologramCode> {
    let mut codes = example_codes();
    codes.retain(|c| c.len() == n_elements);
    codes.extend(random_codes(n_random, n_elements, seed));
    codes
}

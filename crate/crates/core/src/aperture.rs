//! The coded aperture: per-element complex moments, far-field patterns by
//! superposition, beam metrics, pattern correlation, and a cascaded port
//! model with explicit energy bookkeeping.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::feedline::SiwParams;
use crate::meta_atom::{FrequencyGrid, LorentzianParams, TwoPortResponse, C0};
use crate::dispersion::RealSpectrum;

/// Ordered on/off states of the aperture elements; element nearest the feed
/// comes first. The canonical text form is a string of '0'/'1' in that order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct HologramCode {
    bits: Vec<bool>,
}

impl HologramCode {
    pub fn new(bits: Vec<bool>) -> Self {
        Self { bits }
    }

    /// Code from an unsigned integer; element 0 (nearest feed) is the LSB.
    pub fn from_int(value: u32, n_elements: usize) -> Self {
        Self {
            bits: (0..n_elements).map(|n| (value >> n) & 1 == 1).collect(),
        }
    }

    /// Integer form of the code; element 0 is the LSB. Valid for <= 32 elements.
    pub fn to_int(&self) -> u32 {
        self.bits
            .iter()
            .enumerate()
            .fold(0, |acc, (n, &b)| acc | (u32::from(b) << n))
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn bit(&self, n: usize) -> bool {
        self.bits[n]
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn is_all_off(&self) -> bool {
        self.bits.iter().all(|&b| !b)
    }

    pub fn n_active(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }
}

impl FromStr for HologramCode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bits = s
            .chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(Error::InvalidCode(format!(
                    "unexpected character '{other}' (only 0/1 allowed)"
                ))),
            })
            .collect::<Result<Vec<bool>>>()?;
        if bits.is_empty() {
            return Err(Error::InvalidCode("empty code string".into()));
        }
        Ok(Self { bits })
    }
}

impl fmt::Display for HologramCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.bits {
            write!(f, "{}", if b { '1' } else { '0' })?;
        }
        Ok(())
    }
}

/// Uniform observation-angle grid over the visible half-space, degrees.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ThetaGrid {
    pub start_deg: f64,
    pub stop_deg: f64,
    pub step_deg: f64,
}

impl Default for ThetaGrid {
    fn default() -> Self {
        Self {
            start_deg: -90.0,
            stop_deg: 90.0,
            step_deg: 0.1,
        }
    }
}

impl ThetaGrid {
    pub fn validate(&self) -> Result<()> {
        if !(self.start_deg < self.stop_deg) || !(self.step_deg > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "bad angle grid {}..{} step {}",
                self.start_deg, self.stop_deg, self.step_deg
            )));
        }
        if self.start_deg < -90.0 || self.stop_deg > 90.0 {
            return Err(Error::InvalidParameter(
                "angle grid must stay within [-90, 90] degrees".into(),
            ));
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        ((self.stop_deg - self.start_deg) / self.step_deg).round() as usize + 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Sampled angles; endpoints exact, step adjusted to divide the span.
    pub fn angles_deg(&self) -> Vec<f64> {
        let n = self.len();
        (0..n)
            .map(|i| {
                self.start_deg + (self.stop_deg - self.start_deg) * i as f64 / (n - 1) as f64
            })
            .collect()
    }
}

/// Everything needed to evaluate the aperture at one frequency and code.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ApertureConfig {
    pub meta: LorentzianParams,
    pub feed: SiwParams,
    pub theta: ThetaGrid,
    /// Per-active-element power coupling for depletion mode; `None` keeps the
    /// radiation model linear in the code.
    pub depletion: Option<f64>,
}

impl Default for ApertureConfig {
    fn default() -> Self {
        Self {
            meta: LorentzianParams::default(),
            feed: SiwParams::default(),
            theta: ThetaGrid::default(),
            depletion: None,
        }
    }
}

impl ApertureConfig {
    pub fn n_elements(&self) -> usize {
        self.feed.n_elements()
    }

    /// Element pitch (m); assumes the default uniform placement.
    pub fn spacing_m(&self) -> f64 {
        if self.feed.positions_m.len() >= 2 {
            self.feed.positions_m[1] - self.feed.positions_m[0]
        } else {
            0.0
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.meta.validate()?;
        self.feed.validate()?;
        self.theta.validate()?;
        if let Some(k) = self.depletion {
            if !(0.0..1.0).contains(&k) {
                return Err(Error::InvalidDepletion(k));
            }
        }
        Ok(())
    }
}

/// Far-field pattern at one frequency.
#[derive(Debug, Clone, PartialEq)]
pub struct RadiationPattern {
    pub frequency_hz: f64,
    pub theta_deg: Vec<f64>,
    pub field: Vec<Complex64>,
    pub normalization: Normalization,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Normalization {
    Absolute,
    Peak,
}

impl RadiationPattern {
    pub fn is_zero(&self) -> bool {
        self.field.iter().all(|e| e.norm_sqr() == 0.0)
    }

    /// Rescale so the peak magnitude is one.
    pub fn into_peak_normalized(mut self) -> Result<Self> {
        let peak = self.field.iter().map(|e| e.norm()).fold(0.0f64, f64::max);
        if peak == 0.0 {
            return Err(Error::NoBeam);
        }
        for e in &mut self.field {
            *e /= peak;
        }
        self.normalization = Normalization::Peak;
        Ok(self)
    }
}

/// Scalar descriptors of one beam pattern.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BeamMetrics {
    /// Beam direction (deg), refined below the grid step.
    pub peak_angle_deg: f64,
    /// Linear field magnitude at the refined peak.
    pub peak_magnitude: f64,
    /// Half-power beamwidth (deg); absent when a half-power crossing is
    /// missing on either side of the peak.
    pub hpbw_deg: Option<f64>,
    /// Highest lobe outside the main lobe, dB relative to the peak (<= 0);
    /// absent when the pattern has no secondary lobe.
    pub sll_db: Option<f64>,
    /// 1-D directivity proxy |E(peak)|^2 / ((1/pi) integral |E|^2 dtheta), dB.
    pub directivity_db: f64,
}

/// Per-element complex moments `m_n = b_n alpha(omega) h_n(omega)`.
pub fn element_moments(
    config: &ApertureConfig,
    code: &HologramCode,
    omega: f64,
) -> Result<Vec<Complex64>> {
    config.validate()?;
    if code.len() != config.n_elements() {
        return Err(Error::LengthMismatch {
            expected: config.n_elements(),
            actual: code.len(),
        });
    }
    // depletion applies only to elements that actually radiate
    let kappa: Option<Vec<f64>> = config.depletion.map(|k| {
        code.bits()
            .iter()
            .map(|&b| if b { k } else { 0.0 })
            .collect()
    });
    let field = config.feed.feed_field(omega, kappa.as_deref())?;
    code.bits()
        .iter()
        .zip(field.amplitudes.iter())
        .map(|(&b, &h)| Ok(config.meta.radiating_strength(omega, b)? * h))
        .collect()
}

/// Superposed far field at arbitrary angles: `E(theta) = sum_n m_n e^{+j k0 x_n sin theta}`.
pub fn far_field_at(
    moments: &[Complex64],
    positions_m: &[f64],
    omega: f64,
    angles_deg: &[f64],
) -> Vec<Complex64> {
    let k0 = omega / C0;
    angles_deg
        .iter()
        .map(|&theta| {
            let s = theta.to_radians().sin();
            moments
                .iter()
                .zip(positions_m.iter())
                .map(|(&m, &x)| m * Complex64::from_polar(1.0, k0 * x * s))
                .sum()
        })
        .collect()
}

/// Far field on the configured observation grid.
pub fn far_field(
    config: &ApertureConfig,
    moments: &[Complex64],
    omega: f64,
) -> Result<RadiationPattern> {
    if moments.len() != config.n_elements() {
        return Err(Error::LengthMismatch {
            expected: config.n_elements(),
            actual: moments.len(),
        });
    }
    let theta_deg = config.theta.angles_deg();
    let field = far_field_at(moments, &config.feed.positions_m, omega, &theta_deg);
    Ok(RadiationPattern {
        frequency_hz: omega / (2.0 * PI),
        theta_deg,
        field,
        normalization: Normalization::Absolute,
    })
}

/// Peak-angle refinement: parabola through three log-magnitude samples.
fn refine_peak(mags: &[f64], angles: &[f64], k: usize) -> (f64, f64) {
    if k == 0 || k + 1 >= mags.len() || mags[k - 1] <= 0.0 || mags[k + 1] <= 0.0 {
        return (angles[k], mags[k]);
    }
    let (l0, l1, l2) = (mags[k - 1].ln(), mags[k].ln(), mags[k + 1].ln());
    let denom = l0 - 2.0 * l1 + l2;
    if denom.abs() < 1e-300 {
        return (angles[k], mags[k]);
    }
    let delta = 0.5 * (l0 - l2) / denom;
    let step = angles[k + 1] - angles[k];
    let peak_log = l1 - 0.25 * (l0 - l2) * delta;
    (angles[k] + delta * step, peak_log.exp())
}

/// Extract beam metrics from a pattern. Ties between equal maxima resolve to
/// the smallest angle.
pub fn beam_metrics(pattern: &RadiationPattern) -> Result<BeamMetrics> {
    if pattern.is_zero() {
        return Err(Error::NoBeam);
    }
    let mags: Vec<f64> = pattern.field.iter().map(|e| e.norm()).collect();
    let angles = &pattern.theta_deg;
    let n = mags.len();

    let mut k = 0;
    for i in 1..n {
        if mags[i] > mags[k] {
            k = i;
        }
    }
    let (peak_angle, peak_mag) = refine_peak(&mags, angles, k);

    // half-power beamwidth, linear interpolation between samples
    let threshold = peak_mag / std::f64::consts::SQRT_2;
    let crossing = |i_in: usize, i_out: usize| -> f64 {
        let t = (mags[i_in] - threshold) / (mags[i_in] - mags[i_out]);
        angles[i_in] + t * (angles[i_out] - angles[i_in])
    };
    let mut left = None;
    let mut i = k;
    while i > 0 {
        if mags[i - 1] < threshold {
            left = Some(crossing(i, i - 1));
            break;
        }
        i -= 1;
    }
    let mut right = None;
    let mut i = k;
    while i + 1 < n {
        if mags[i + 1] < threshold {
            right = Some(crossing(i, i + 1));
            break;
        }
        i += 1;
    }
    let hpbw = match (left, right) {
        (Some(l), Some(r)) => Some(r - l),
        _ => None,
    };

    // main lobe extends to the first local minimum on each side of the peak
    let mut lo = k;
    while lo > 0 && mags[lo - 1] <= mags[lo] {
        lo -= 1;
    }
    let mut hi = k;
    while hi + 1 < n && mags[hi + 1] <= mags[hi] {
        hi += 1;
    }
    let outside_max = mags[..lo]
        .iter()
        .chain(mags[hi + 1..].iter())
        .fold(0.0f64, |m, &v| m.max(v));
    let sll = if outside_max > 0.0 {
        Some(20.0 * (outside_max / peak_mag).log10())
    } else {
        None
    };

    // trapezoid integral of |E|^2 over theta in radians
    let mut integral = 0.0;
    for i in 1..n {
        let dth = (angles[i] - angles[i - 1]).to_radians();
        integral += 0.5 * (mags[i] * mags[i] + mags[i - 1] * mags[i - 1]) * dth;
    }
    let directivity = peak_mag * peak_mag / (integral / PI);

    Ok(BeamMetrics {
        peak_angle_deg: peak_angle,
        peak_magnitude: peak_mag,
        hpbw_deg: hpbw,
        sll_db: sll,
        directivity_db: 10.0 * directivity.log10(),
    })
}

/// Normalized inner-product magnitude of two patterns on the same grid,
/// in [0, 1]; invariant under complex scaling of either pattern.
pub fn pattern_correlation(p1: &RadiationPattern, p2: &RadiationPattern) -> Result<f64> {
    if p1.theta_deg != p2.theta_deg {
        return Err(Error::GridMismatch);
    }
    let mut inner = Complex64::new(0.0, 0.0);
    let mut n1 = 0.0;
    let mut n2 = 0.0;
    for (a, b) in p1.field.iter().zip(p2.field.iter()) {
        inner += a.conj() * b;
        n1 += a.norm_sqr();
        n2 += b.norm_sqr();
    }
    if n1 == 0.0 || n2 == 0.0 {
        return Err(Error::ZeroNorm);
    }
    Ok(inner.norm() / (n1.sqrt() * n2.sqrt()))
}

/// One frequency sample of the aperture port model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PortSample {
    pub s11: Complex64,
    pub s21: Complex64,
    /// Fraction of the incident power radiated by the elements.
    pub radiated: f64,
    /// Fraction of the incident power lost in the dielectric.
    pub dielectric: f64,
}

/// Port model of the full aperture over a frequency grid.
#[derive(Debug, Clone, PartialEq)]
pub struct PortResponse {
    pub response: TwoPortResponse,
    pub radiated_fraction: RealSpectrum,
    pub dielectric_fraction: RealSpectrum,
}

#[derive(Debug, Clone, Copy)]
enum Stage {
    Shunt(Complex64),
    Line(Complex64), // complex electrical length beta * pitch
}

fn stages_for(config: &ApertureConfig, code: &HologramCode, omega: f64) -> Result<Vec<Stage>> {
    let beta = config.feed.guided_wavenumber(omega)?;
    let x = &config.feed.positions_m;
    let n = x.len();
    let mut stages = Vec::with_capacity(2 * n);
    for i in 0..n {
        let y = config.meta.shunt_admittance(omega, code.bit(i))?;
        if y != Complex64::new(0.0, 0.0) {
            stages.push(Stage::Shunt(y));
        }
        // the guide terminates one pitch past the last element
        let pitch = if i + 1 < n {
            x[i + 1] - x[i]
        } else if n >= 2 {
            x[n - 1] - x[n - 2]
        } else {
            0.0
        };
        stages.push(Stage::Line(beta * pitch));
    }
    Ok(stages)
}

fn abcd_of(stage: &Stage) -> [Complex64; 4] {
    match stage {
        Stage::Shunt(y) => [
            Complex64::new(1.0, 0.0),
            Complex64::new(0.0, 0.0),
            *y,
            Complex64::new(1.0, 0.0),
        ],
        Stage::Line(theta_e) => {
            let (c, s) = (theta_e.cos(), theta_e.sin());
            let j = Complex64::new(0.0, 1.0);
            [c, j * s, j * s, c]
        }
    }
}

fn mat_mul(a: &[Complex64; 4], b: &[Complex64; 4]) -> [Complex64; 4] {
    [
        a[0] * b[0] + a[1] * b[2],
        a[0] * b[1] + a[1] * b[3],
        a[2] * b[0] + a[3] * b[2],
        a[2] * b[1] + a[3] * b[3],
    ]
}

/// Normalized ABCD matrix of the whole cascade at one frequency.
pub fn cascade_abcd(
    config: &ApertureConfig,
    code: &HologramCode,
    omega: f64,
) -> Result<[Complex64; 4]> {
    let mut m = [
        Complex64::new(1.0, 0.0),
        Complex64::new(0.0, 0.0),
        Complex64::new(0.0, 0.0),
        Complex64::new(1.0, 0.0),
    ];
    for stage in stages_for(config, code, omega)? {
        m = mat_mul(&m, &abcd_of(&stage));
    }
    Ok(m)
}

/// Port model at one frequency with an explicit power partition: the incident
/// power splits into reflection, transmission, element radiation, and
/// dielectric loss. The last two are obtained by back-propagating the node
/// voltages from the matched output.
pub fn port_response_at(
    config: &ApertureConfig,
    code: &HologramCode,
    omega: f64,
) -> Result<PortSample> {
    if code.len() != config.n_elements() {
        return Err(Error::LengthMismatch {
            expected: config.n_elements(),
            actual: code.len(),
        });
    }
    let stages = stages_for(config, code, omega)?;
    let mut m = [
        Complex64::new(1.0, 0.0),
        Complex64::new(0.0, 0.0),
        Complex64::new(0.0, 0.0),
        Complex64::new(1.0, 0.0),
    ];
    for stage in &stages {
        m = mat_mul(&m, &abcd_of(stage));
    }
    let denom = m[0] + m[1] + m[2] + m[3];
    let s11 = (m[0] + m[1] - m[2] - m[3]) / denom;
    let s21 = Complex64::new(2.0, 0.0) / denom;

    // node voltages/currents walking back from the matched load (V = I = s21)
    let mut v = s21;
    let mut i_cur = s21;
    let mut radiated = 0.0;
    let mut dielectric = 0.0;
    for stage in stages.iter().rev() {
        match stage {
            Stage::Shunt(y) => {
                // same node voltage on both sides of a shunt
                radiated += y.re * v.norm_sqr();
                i_cur += *y * v;
            }
            Stage::Line(_) => {
                let p_right = (v * i_cur.conj()).re;
                let a = abcd_of(stage);
                let (v2, i2) = (v, i_cur);
                v = a[0] * v2 + a[1] * i2;
                i_cur = a[2] * v2 + a[3] * i2;
                dielectric += (v * i_cur.conj()).re - p_right;
            }
        }
    }
    // in these units the incident power is 1/2 and both accumulators already
    // carry twice the dissipated power, so they are fractions of the incident
    Ok(PortSample {
        s11,
        s21,
        radiated,
        dielectric,
    })
}

/// Port model over a frequency grid.
pub fn port_response(
    config: &ApertureConfig,
    code: &HologramCode,
    grid: &FrequencyGrid,
) -> Result<PortResponse> {
    grid.validate()?;
    let mut s11 = Vec::with_capacity(grid.len());
    let mut s21 = Vec::with_capacity(grid.len());
    let mut radiated = Vec::with_capacity(grid.len());
    let mut dielectric = Vec::with_capacity(grid.len());
    for i in 0..grid.len() {
        let sample = port_response_at(config, code, grid.omega(i))?;
        s11.push(sample.s11);
        s21.push(sample.s21);
        radiated.push(sample.radiated);
        dielectric.push(sample.dielectric);
    }
    Ok(PortResponse {
        response: TwoPortResponse {
            grid: grid.clone(),
            s11,
            s21,
        },
        radiated_fraction: RealSpectrum::new(grid.clone(), radiated)?,
        dielectric_fraction: RealSpectrum::new(grid.clone(), dielectric)?,
    })
}

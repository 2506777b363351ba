//! Dispersion indicators extracted from a complex transmission spectrum:
//! unwrapped phase, group delay, effective index, group index, group
//! velocity, effective permittivity, and anomalous-dispersion bands.
//!
//! Derivatives use central O(h^2) differences on interior points and
//! one-sided O(h^2) stencils at the two endpoints, so they are exact for
//! inputs that are polynomials of degree <= 2 in omega.

use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::meta_atom::{FrequencyGrid, TwoPortResponse, C0};

/// Real-valued quantity sampled on a frequency grid.
#[derive(Debug, Clone, PartialEq)]
pub struct RealSpectrum {
    pub grid: FrequencyGrid,
    pub values: Vec<f64>,
}

impl RealSpectrum {
    pub fn new(grid: FrequencyGrid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::LengthMismatch {
                expected: grid.len(),
                actual: values.len(),
            });
        }
        Ok(Self { grid, values })
    }
}

/// Closed frequency interval, in Hz.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Band {
    pub f_lo_hz: f64,
    pub f_hi_hz: f64,
}

/// Disjoint, ascending list of frequency bands.
pub type BandList = Vec<Band>;

/// Slope threshold below which dn/domega counts as anomalous (per rad/s).
pub const ANOMALOUS_SLOPE_TOL: f64 = 1e-18;

/// Group-index magnitude below which the group velocity is reported as a
/// signed infinity instead of overflowing.
pub const GROUP_INDEX_SINGULARITY: f64 = 1e-9;

/// Derivative with respect to omega on a uniform grid: central differences
/// inside, second-order one-sided stencils at the ends.
fn derivative_omega(values: &[f64], step_omega: f64) -> Vec<f64> {
    let n = values.len();
    debug_assert!(n >= 3);
    let mut out = vec![0.0; n];
    out[0] = (-3.0 * values[0] + 4.0 * values[1] - values[2]) / (2.0 * step_omega);
    for i in 1..n - 1 {
        out[i] = (values[i + 1] - values[i - 1]) / (2.0 * step_omega);
    }
    out[n - 1] = (3.0 * values[n - 1] - 4.0 * values[n - 2] + values[n - 3]) / (2.0 * step_omega);
    out
}

/// Continuous transmission phase, in radians. The first sample is the
/// principal-value phase of `s21[0]`; successive differences are mapped into
/// (-pi, pi]. The grid must be dense enough that the true inter-sample phase
/// change stays below pi.
pub fn unwrap_phase(response: &TwoPortResponse) -> Result<RealSpectrum> {
    if response.s21.is_empty() {
        return Err(Error::EmptySpectrum);
    }
    let mut out = Vec::with_capacity(response.s21.len());
    let mut prev_arg = response.s21[0].arg();
    let mut offset = 0.0;
    out.push(prev_arg);
    for s in &response.s21[1..] {
        let arg = s.arg();
        let mut delta = arg - prev_arg;
        // map the principal-value jump into (-pi, pi]
        delta -= 2.0 * PI * (delta / (2.0 * PI)).round();
        if delta <= -PI {
            delta += 2.0 * PI;
        }
        offset += delta;
        out.push(out[0] + offset);
        prev_arg = arg;
    }
    RealSpectrum::new(response.grid.clone(), out)
}

/// Group delay `tau_g = -d phi / d omega` (seconds) of an already-unwrapped phase.
pub fn group_delay(phase: &RealSpectrum) -> Result<RealSpectrum> {
    if phase.values.len() < 3 {
        return Err(Error::GridTooCoarse(phase.values.len()));
    }
    let d = derivative_omega(&phase.values, phase.grid.step_omega());
    RealSpectrum::new(phase.grid.clone(), d.into_iter().map(|v| -v).collect())
}

/// Phase-based effective refractive index `n = -phi c / (omega d)` for an
/// effective slab of thickness `thickness_m`. Multiple reflections are
/// ignored; the caller must keep `|n| omega d / c` below pi per sample for
/// the single-branch retrieval to hold.
pub fn effective_index(response: &TwoPortResponse, thickness_m: f64) -> Result<RealSpectrum> {
    if !(thickness_m > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "retrieval thickness must be positive (got {thickness_m} m)"
        )));
    }
    let phase = unwrap_phase(response)?;
    let values = phase
        .values
        .iter()
        .enumerate()
        .map(|(i, &phi)| -phi * C0 / (phase.grid.omega(i) * thickness_m))
        .collect();
    RealSpectrum::new(response.grid.clone(), values)
}

/// Group index `n_g = n + omega dn/domega`.
pub fn group_index(n: &RealSpectrum) -> Result<RealSpectrum> {
    if n.values.len() < 3 {
        return Err(Error::GridTooCoarse(n.values.len()));
    }
    let dn = derivative_omega(&n.values, n.grid.step_omega());
    let values = n
        .values
        .iter()
        .zip(dn.iter())
        .enumerate()
        .map(|(i, (&ni, &di))| ni + n.grid.omega(i) * di)
        .collect();
    RealSpectrum::new(n.grid.clone(), values)
}

/// Group velocity `v_g = c / n_g` (m/s). Where `|n_g|` falls below
/// [`GROUP_INDEX_SINGULARITY`] the output is a signed infinity.
pub fn group_velocity(n_g: &RealSpectrum) -> RealSpectrum {
    let values = n_g
        .values
        .iter()
        .map(|&ng| {
            if ng.abs() < GROUP_INDEX_SINGULARITY {
                f64::INFINITY.copysign(ng)
            } else {
                C0 / ng
            }
        })
        .collect();
    RealSpectrum {
        grid: n_g.grid.clone(),
        values,
    }
}

/// Effective permittivity reported as n^2 (non-magnetic convention).
pub fn effective_permittivity(n: &RealSpectrum) -> RealSpectrum {
    RealSpectrum {
        grid: n.grid.clone(),
        values: n.values.iter().map(|&v| v * v).collect(),
    }
}

/// Maximal intervals where `dn/domega < -`[`ANOMALOUS_SLOPE_TOL`]. Interval
/// endpoints are linearly interpolated between grid samples; intervals
/// touching the grid ends are clipped there.
pub fn anomalous_bands(n: &RealSpectrum) -> Result<BandList> {
    if n.values.len() < 3 {
        return Err(Error::GridTooCoarse(n.values.len()));
    }
    let dn = derivative_omega(&n.values, n.grid.step_omega());
    let neg: Vec<bool> = dn.iter().map(|&d| d < -ANOMALOUS_SLOPE_TOL).collect();

    // crossing of dn = -tol between samples i and i+1
    let edge = |i: usize| -> f64 {
        let t = (-ANOMALOUS_SLOPE_TOL - dn[i]) / (dn[i + 1] - dn[i]);
        n.grid.freq_hz(i) + t * n.grid.step_hz()
    };

    let mut bands = Vec::new();
    let mut i = 0;
    while i < neg.len() {
        if neg[i] {
            let start = i;
            while i + 1 < neg.len() && neg[i + 1] {
                i += 1;
            }
            let f_lo = if start == 0 {
                n.grid.freq_hz(0)
            } else {
                edge(start - 1)
            };
            let f_hi = if i == neg.len() - 1 {
                n.grid.freq_hz(i)
            } else {
                edge(i)
            };
            bands.push(Band {
                f_lo_hz: f_lo,
                f_hi_hz: f_hi,
            });
        }
        i += 1;
    }
    Ok(bands)
}

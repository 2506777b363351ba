//! Single meta-atom physics: Lorentzian polarizability, on/off switching,
//! and a two-port shunt-element model of the resonant transmission dip.
//!
//! Sign conventions used throughout the crate: time dependence `e^{+j omega t}`,
//! forward guided propagation `e^{-j beta x}`. Under this convention a lossy
//! resonator has `Im alpha < 0` and the transmission phase rises through the
//! resonance, giving a negative group delay there.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Speed of light in vacuum (m/s).
pub const C0: f64 = 299_792_458.0;

/// Off-state behaviour of a switched resonator.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case", deny_unknown_fields)]
pub enum OffState {
    /// Element vanishes entirely when switched off (zero coupling).
    Transparent,
    /// Element keeps a (detuned, weakly coupled) resonance when off.
    Detuned { f0_hz: f64, coupling: f64 },
}

impl OffState {
    /// Off-state coupling amplitude; zero for the transparent idealization.
    pub fn coupling(&self) -> f64 {
        match self {
            OffState::Transparent => 0.0,
            OffState::Detuned { coupling, .. } => *coupling,
        }
    }
}

/// Lorentzian resonator parameters for one meta-atom, covering both bias states.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct LorentzianParams {
    /// On-state resonance frequency (Hz).
    pub f0_hz: f64,
    /// Damping rate (rad/s), shared by both states.
    pub gamma_rad_s: f64,
    /// On-state coupling amplitude (dimensionless, >= 0).
    pub coupling: f64,
    /// Shunt normalization constant; `None` selects `gamma / omega0^2`,
    /// which places the on-resonance shunt admittance at exactly `coupling`.
    pub shunt_scale: Option<f64>,
    /// What the element does when switched off.
    pub off_state: OffState,
}

impl Default for LorentzianParams {
    fn default() -> Self {
        Self {
            f0_hz: 60.0e9,
            gamma_rad_s: 2.0 * PI * 1.5e9,
            coupling: 0.5,
            shunt_scale: None,
            off_state: OffState::Transparent,
        }
    }
}

impl LorentzianParams {
    /// On-state resonance in rad/s.
    pub fn omega0(&self) -> f64 {
        2.0 * PI * self.f0_hz
    }

    /// Effective shunt scale constant.
    pub fn shunt_scale_value(&self) -> f64 {
        self.shunt_scale
            .unwrap_or(self.gamma_rad_s / (self.omega0() * self.omega0()))
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.f0_hz > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "resonance frequency must be positive (got {} Hz)",
                self.f0_hz
            )));
        }
        if !(self.gamma_rad_s > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "damping rate must be positive (got {} rad/s)",
                self.gamma_rad_s
            )));
        }
        if !(self.coupling >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "coupling must be non-negative (got {})",
                self.coupling
            )));
        }
        if let OffState::Detuned { f0_hz, coupling } = self.off_state {
            if !(f0_hz > 0.0) || !(coupling >= 0.0) {
                return Err(Error::InvalidParameter(
                    "off-state resonance must be positive and coupling non-negative".into(),
                ));
            }
        }
        if let Some(scale) = self.shunt_scale {
            if !(scale > 0.0) {
                return Err(Error::InvalidParameter(format!(
                    "shunt scale must be positive (got {scale})"
                )));
            }
        }
        Ok(())
    }

    /// Complex polarizability `alpha(omega) = F omega^2 / (omega0^2 - omega^2 + j gamma omega)`
    /// for the requested bias state (`true` = on).
    pub fn polarizability(&self, omega: f64, state: bool) -> Result<Complex64> {
        if !(omega > 0.0) {
            return Err(Error::NonPositiveFrequency(omega));
        }
        let (omega0, coupling) = if state {
            (self.omega0(), self.coupling)
        } else {
            match self.off_state {
                OffState::Transparent => return Ok(Complex64::new(0.0, 0.0)),
                OffState::Detuned { f0_hz, coupling } => (2.0 * PI * f0_hz, coupling),
            }
        };
        let denom = Complex64::new(omega0 * omega0 - omega * omega, self.gamma_rad_s * omega);
        Ok(coupling * omega * omega / denom)
    }

    /// Complex radiating weight of the element in the given state; this is what
    /// the aperture model multiplies with the local feed amplitude.
    pub fn radiating_strength(&self, omega: f64, state: bool) -> Result<Complex64> {
        self.polarizability(omega, state)
    }

    /// Normalized shunt admittance `y(omega) = j c0 omega alpha(omega)` presented
    /// to the guide by the element in the given state.
    pub fn shunt_admittance(&self, omega: f64, state: bool) -> Result<Complex64> {
        let alpha = self.polarizability(omega, state)?;
        Ok(Complex64::new(0.0, self.shunt_scale_value() * omega) * alpha)
    }

    /// Two-port response of a single element as a shunt admittance on a matched
    /// line: `S21 = 2 / (2 + y)`, `S11 = -y / (2 + y)`. Reciprocal by
    /// construction (`S12 = S21`).
    pub fn shunt_s_params(&self, state: bool, grid: &FrequencyGrid) -> Result<TwoPortResponse> {
        self.validate()?;
        let mut s11 = Vec::with_capacity(grid.len());
        let mut s21 = Vec::with_capacity(grid.len());
        for i in 0..grid.len() {
            let y = self.shunt_admittance(grid.omega(i), state)?;
            let denom = Complex64::new(2.0, 0.0) + y;
            s21.push(Complex64::new(2.0, 0.0) / denom);
            s11.push(-y / denom);
        }
        Ok(TwoPortResponse {
            grid: grid.clone(),
            s11,
            s21,
        })
    }
}

/// Uniform frequency grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct FrequencyGrid {
    pub f_start_hz: f64,
    pub f_stop_hz: f64,
    pub n_points: usize,
}

impl Default for FrequencyGrid {
    fn default() -> Self {
        Self {
            f_start_hz: 59.0e9,
            f_stop_hz: 63.0e9,
            n_points: 2001,
        }
    }
}

impl FrequencyGrid {
    pub fn new(f_start_hz: f64, f_stop_hz: f64, n_points: usize) -> Result<Self> {
        let grid = Self {
            f_start_hz,
            f_stop_hz,
            n_points,
        };
        grid.validate()?;
        Ok(grid)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.f_start_hz > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "grid start must be positive (got {} Hz)",
                self.f_start_hz
            )));
        }
        if !(self.f_start_hz < self.f_stop_hz) {
            return Err(Error::InvalidParameter(format!(
                "grid start {} Hz must be below stop {} Hz",
                self.f_start_hz, self.f_stop_hz
            )));
        }
        if self.n_points < 2 {
            return Err(Error::InvalidParameter(format!(
                "grid needs at least 2 points (got {})",
                self.n_points
            )));
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.n_points
    }

    pub fn is_empty(&self) -> bool {
        self.n_points == 0
    }

    /// i-th frequency in Hz; endpoints are exact.
    pub fn freq_hz(&self, i: usize) -> f64 {
        self.f_start_hz
            + (self.f_stop_hz - self.f_start_hz) * i as f64 / (self.n_points - 1) as f64
    }

    /// i-th angular frequency in rad/s.
    pub fn omega(&self, i: usize) -> f64 {
        2.0 * PI * self.freq_hz(i)
    }

    /// Grid spacing in Hz.
    pub fn step_hz(&self) -> f64 {
        (self.f_stop_hz - self.f_start_hz) / (self.n_points - 1) as f64
    }

    /// Grid spacing in rad/s.
    pub fn step_omega(&self) -> f64 {
        2.0 * PI * self.step_hz()
    }

    pub fn frequencies_hz(&self) -> Vec<f64> {
        (0..self.n_points).map(|i| self.freq_hz(i)).collect()
    }
}

/// Frequency-sampled complex S11/S21 spectra of a two-port.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoPortResponse {
    pub grid: FrequencyGrid,
    pub s11: Vec<Complex64>,
    pub s21: Vec<Complex64>,
}

impl TwoPortResponse {
    /// Frequency of the minimum |S21| (the transmission dip), in Hz.
    pub fn dip_frequency_hz(&self) -> f64 {
        let mut best = 0;
        for (i, s) in self.s21.iter().enumerate() {
            if s.norm() < self.s21[best].norm() {
                best = i;
            }
        }
        self.grid.freq_hz(best)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn defaults() -> LorentzianParams {
        LorentzianParams::default()
    }

    #[test]
    fn on_resonance_polarizability_is_negative_imaginary() {
        let p = defaults();
        let a = p.polarizability(p.omega0(), true).unwrap();
        // alpha(omega0) = -j F omega0 / gamma
        let expected = Complex64::new(0.0, -p.coupling * p.omega0() / p.gamma_rad_s);
        assert!((a - expected).norm() < 1e-12 * expected.norm());
        assert!(a.re.abs() < 1e-9 * a.im.abs());
        assert!(a.im < 0.0);
    }

    #[test]
    fn polarizability_vanishes_at_low_frequency() {
        let p = defaults();
        let a = p.polarizability(1.0, true).unwrap();
        assert!(a.norm() < 1e-20);
    }

    #[test]
    fn polarizability_golden_value_at_61_ghz() {
        // Independent closed-form evaluation, frozen:
        // F w^2 / (w0^2 - w^2 + j gamma w) at f = 61 GHz, f0 = 60 GHz,
        // gamma = 2 pi 1.5e9, F = 0.5.
        let p = defaults();
        let a = p.polarizability(2.0 * PI * 61.0e9, true).unwrap();
        let golden = Complex64::new(-9.7822124211052195, -7.3972928638935791);
        assert!(
            (a - golden).norm() < 1e-12 * golden.norm(),
            "got {a}, want {golden}"
        );
    }

    #[test]
    fn off_state_transparent_returns_zero() {
        let p = defaults();
        let a = p.polarizability(2.0 * PI * 60.0e9, false).unwrap();
        assert_eq!(a, Complex64::new(0.0, 0.0));
        assert_eq!(
            p.radiating_strength(2.0 * PI * 60.0e9, false).unwrap(),
            Complex64::new(0.0, 0.0)
        );
    }

    #[test]
    fn off_state_leakage_golden_value() {
        let p = LorentzianParams {
            off_state: OffState::Detuned {
                f0_hz: 64.0e9,
                coupling: 0.05,
            },
            ..defaults()
        };
        let a = p.radiating_strength(2.0 * PI * 60.0e9, false).unwrap();
        // Closed form with the detuned parameters, frozen.
        let golden = Complex64::new(0.35133561050858642, -0.063750413197122477);
        assert!((a - golden).norm() < 1e-12 * golden.norm());
        assert!(a.norm() > 0.0);
    }

    #[test]
    fn radiating_strength_on_equals_polarizability() {
        let p = defaults();
        let w = 2.0 * PI * 61.3e9;
        assert_eq!(
            p.radiating_strength(w, true).unwrap(),
            p.polarizability(w, true).unwrap()
        );
    }

    #[test]
    fn non_positive_frequency_is_domain_error() {
        let p = defaults();
        assert!(matches!(
            p.polarizability(0.0, true),
            Err(Error::NonPositiveFrequency(_))
        ));
        assert!(matches!(
            p.polarizability(-1.0, false),
            Err(Error::NonPositiveFrequency(_))
        ));
    }

    #[test]
    fn off_transparent_gives_unit_transmission() {
        let p = defaults();
        let grid = FrequencyGrid::default();
        let resp = p.shunt_s_params(false, &grid).unwrap();
        for i in 0..grid.len() {
            assert_eq!(resp.s21[i], Complex64::new(1.0, 0.0));
            assert_eq!(resp.s11[i], Complex64::new(0.0, 0.0));
        }
    }

    #[test]
    fn transmission_dip_sits_near_resonance() {
        let p = defaults();
        let grid = FrequencyGrid::default();
        let resp = p.shunt_s_params(true, &grid).unwrap();
        let dip = resp.dip_frequency_hz();
        assert!(
            (dip - 60.0e9).abs() < 0.2e9,
            "dip at {} GHz",
            dip / 1e9
        );
    }

    #[test]
    fn on_resonance_dip_depth_matches_closed_form() {
        // |S21(omega0)| = 2 / |2 + c0 F omega0^2 / gamma|; with the default
        // scale c0 = gamma/omega0^2 this is 2/(2+F) = 0.8.
        let p = defaults();
        let grid = FrequencyGrid::new(p.f0_hz, p.f0_hz * 2.0, 2).unwrap();
        let resp = p.shunt_s_params(true, &grid).unwrap();
        let expected = 2.0 / (2.0 + p.shunt_scale_value() * p.coupling * p.omega0() * p.omega0()
            / p.gamma_rad_s);
        assert!((resp.s21[0].norm() - expected).abs() < 1e-12);
        assert!((expected - 0.8).abs() < 1e-12);
    }

    #[test]
    fn dip_local_to_resonance_for_moderate_damping() {
        for gamma_ghz in [0.5, 1.0, 1.5, 2.0] {
            let p = LorentzianParams {
                gamma_rad_s: 2.0 * PI * gamma_ghz * 1e9,
                ..defaults()
            };
            let grid = FrequencyGrid::new(55.0e9, 65.0e9, 4001).unwrap();
            let resp = p.shunt_s_params(true, &grid).unwrap();
            let dip = resp.dip_frequency_hz();
            assert!(
                (dip - p.f0_hz).abs() <= gamma_ghz * 1e9,
                "gamma/2pi = {gamma_ghz} GHz, dip at {} GHz",
                dip / 1e9
            );
        }
    }

    #[test]
    fn grid_endpoints_are_exact() {
        let grid = FrequencyGrid::new(59.0e9, 63.0e9, 2001).unwrap();
        assert_eq!(grid.freq_hz(0), 59.0e9);
        assert_eq!(grid.freq_hz(2000), 63.0e9);
        assert_eq!(grid.len(), 2001);
    }

    #[test]
    fn bad_grids_are_rejected() {
        assert!(FrequencyGrid::new(60e9, 59e9, 100).is_err());
        assert!(FrequencyGrid::new(59e9, 63e9, 1).is_err());
        assert!(FrequencyGrid::new(0.0, 63e9, 10).is_err());
    }

    proptest! {
        // Im alpha stays negative for any positive frequency and valid params.
        #[test]
        fn imaginary_part_of_polarizability_is_negative(
            f_ghz in 1.0f64..200.0,
            f0_ghz in 40.0f64..80.0,
            gamma_ghz in 0.1f64..5.0,
            coupling in 0.01f64..2.0,
        ) {
            let p = LorentzianParams {
                f0_hz: f0_ghz * 1e9,
                gamma_rad_s: 2.0 * PI * gamma_ghz * 1e9,
                coupling,
                ..LorentzianParams::default()
            };
            let a = p.polarizability(2.0 * PI * f_ghz * 1e9, true).unwrap();
            prop_assert!(a.im < 0.0);
        }

        // |S11|^2 + |S21|^2 <= 1 for every state and parameter draw.
        #[test]
        fn shunt_model_is_passive(
            f0_ghz in 40.0f64..80.0,
            gamma_ghz in 0.1f64..5.0,
            coupling in 0.0f64..2.0,
        ) {
            let p = LorentzianParams {
                f0_hz: f0_ghz * 1e9,
                gamma_rad_s: 2.0 * PI * gamma_ghz * 1e9,
                coupling,
                ..LorentzianParams::default()
            };
            let grid = FrequencyGrid::new(55.0e9, 65.0e9, 201).unwrap();
            let resp = p.shunt_s_params(true, &grid).unwrap();
            for i in 0..grid.len() {
                let total = resp.s11[i].norm_sqr() + resp.s21[i].norm_sqr();
                prop_assert!(total <= 1.0 + 1e-12, "power sum {total} at index {i}");
            }
        }
    }
}

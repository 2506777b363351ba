//! Dispersive guided-wave feed: TE10 wavenumber of a dielectric-filled
//! waveguide, dielectric loss, and the complex excitation sampled at each
//! element position, with optional energy depletion by radiating elements.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::meta_atom::C0;

/// Substrate-integrated waveguide feed parameters plus element positions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SiwParams {
    /// Relative permittivity of the fill dielectric.
    pub eps_r: f64,
    /// Dielectric loss tangent.
    pub tan_delta: f64,
    /// TE10 cutoff frequency (Hz).
    pub f_cutoff_hz: f64,
    /// Element coordinates along the guide (m), strictly increasing, >= 0.
    pub positions_m: Vec<f64>,
}

impl Default for SiwParams {
    fn default() -> Self {
        Self {
            eps_r: 3.0,
            tan_delta: 0.001,
            f_cutoff_hz: 45.0e9,
            positions_m: (0..16).map(|n| n as f64 * 2.0e-3).collect(),
        }
    }
}

/// Complex excitation amplitudes `h_n` at the element positions for one frequency.
#[derive(Debug, Clone, PartialEq)]
pub struct FeedExcitation {
    pub omega_rad_s: f64,
    pub amplitudes: Vec<Complex64>,
}

impl SiwParams {
    pub fn n_elements(&self) -> usize {
        self.positions_m.len()
    }

    /// Equivalent broad-wall width implied by the cutoff: `a_eff = c / (2 f_c sqrt(eps_r))`.
    pub fn a_eff(&self) -> f64 {
        C0 / (2.0 * self.f_cutoff_hz * self.eps_r.sqrt())
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.eps_r >= 1.0) {
            return Err(Error::InvalidParameter(format!(
                "relative permittivity must be >= 1 (got {})",
                self.eps_r
            )));
        }
        if !(self.tan_delta >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "loss tangent must be non-negative (got {})",
                self.tan_delta
            )));
        }
        if !(self.f_cutoff_hz > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "cutoff frequency must be positive (got {} Hz)",
                self.f_cutoff_hz
            )));
        }
        if self.positions_m.is_empty() {
            return Err(Error::InvalidParameter(
                "at least one element position is required".into(),
            ));
        }
        if self.positions_m[0] < 0.0 {
            return Err(Error::InvalidParameter(
                "element positions must be non-negative".into(),
            ));
        }
        if self.positions_m.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidParameter(
                "element positions must be strictly increasing".into(),
            ));
        }
        Ok(())
    }

    /// Complex guided wavenumber at `omega` (rad/m). The real part is the
    /// TE10 propagation constant `sqrt(eps_r (w/c)^2 - (pi/a_eff)^2)`; the
    /// imaginary part carries dielectric attenuation `-beta tan_delta / 2`
    /// so that `e^{-j beta x}` decays along +x.
    pub fn guided_wavenumber(&self, omega: f64) -> Result<Complex64> {
        if !(omega > 0.0) {
            return Err(Error::NonPositiveFrequency(omega));
        }
        let f_hz = omega / (2.0 * PI);
        if f_hz <= self.f_cutoff_hz {
            return Err(Error::BelowCutoff {
                f_hz,
                cutoff_hz: self.f_cutoff_hz,
            });
        }
        let omega_c = 2.0 * PI * self.f_cutoff_hz;
        let beta = self.eps_r.sqrt() / C0 * (omega * omega - omega_c * omega_c).sqrt();
        let atten = beta * self.tan_delta / 2.0;
        Ok(Complex64::new(beta, -atten))
    }

    /// Excitation of the elements by a unit forward wave launched at x = 0:
    /// `h_n = e^{-j beta x_n} prod_{m<n} sqrt(1 - kappa_m)`. `depletion`
    /// supplies the per-element power coupling `kappa_n in [0, 1)`; `None`
    /// disables depletion.
    pub fn feed_field(&self, omega: f64, depletion: Option<&[f64]>) -> Result<FeedExcitation> {
        self.validate()?;
        let beta = self.guided_wavenumber(omega)?;
        if let Some(kappa) = depletion {
            if kappa.len() != self.n_elements() {
                return Err(Error::LengthMismatch {
                    expected: self.n_elements(),
                    actual: kappa.len(),
                });
            }
            if let Some(&bad) = kappa.iter().find(|&&k| !(0.0..1.0).contains(&k)) {
                return Err(Error::InvalidDepletion(bad));
            }
        }
        let mut amplitudes = Vec::with_capacity(self.n_elements());
        let mut carried = 1.0; // amplitude factor surviving all upstream elements
        for (n, &x) in self.positions_m.iter().enumerate() {
            let phase = Complex64::new(0.0, -1.0) * beta * x;
            amplitudes.push(carried * phase.exp());
            if let Some(kappa) = depletion {
                carried *= (1.0 - kappa[n]).sqrt();
            }
        }
        Ok(FeedExcitation {
            omega_rad_s: omega,
            amplitudes,
        })
    }

    /// Idealized lossless, undepleted reference wave `e^{-j Re(beta) x_n}`
    /// used when recording holograms.
    pub fn reference_wave(&self, omega: f64) -> Result<Vec<Complex64>> {
        let beta = self.guided_wavenumber(omega)?.re;
        Ok(self
            .positions_m
            .iter()
            .map(|&x| Complex64::from_polar(1.0, -beta * x))
            .collect())
    }

    /// Residual forward amplitude just past the last element (includes that
    /// element's depletion), for energy bookkeeping.
    pub fn residual_amplitude(&self, omega: f64, depletion: Option<&[f64]>) -> Result<f64> {
        let field = self.feed_field(omega, depletion)?;
        let last = field.amplitudes.last().unwrap().norm();
        let k_last = depletion
            .map(|k| k[self.n_elements() - 1])
            .unwrap_or(0.0);
        Ok(last * (1.0 - k_last).sqrt())
    }
}

//! Browser bindings for the interactive demo page: dispersion curves of one
//! switched resonator, coded-aperture beam patterns, and holographic code
//! synthesis. Each export returns a JSON string the page plots directly.

use std::f64::consts::PI;

use serde::Serialize;
use wasm_bindgen::prelude::*;

use dma_core::{
    anomalous_bands, beam_metrics, effective_index, element_moments, exhaustive_best_code,
    far_field, gain_at, group_delay, group_index, synthesize_code, unwrap_phase, ApertureConfig,
    FrequencyGrid, HologramCode, LorentzianParams, SteeringTarget,
};

#[derive(Serialize)]
struct DispersionCurves {
    f_ghz: Vec<f64>,
    s21_db: Vec<f64>,
    phase_rad: Vec<f64>,
    tau_g_ps: Vec<f64>,
    n: Vec<f64>,
    n_g: Vec<f64>,
    bands_ghz: Vec<[f64; 2]>,
    dip_ghz: f64,
}

fn dispersion_curves(
    f0_ghz: f64,
    gamma_ghz: f64,
    coupling: f64,
    n_points: usize,
) -> Result<String, dma_core::Error> {
    let params = LorentzianParams {
        f0_hz: f0_ghz * 1e9,
        gamma_rad_s: 2.0 * PI * gamma_ghz * 1e9,
        coupling,
        ..LorentzianParams::default()
    };
    params.validate()?;
    let grid = FrequencyGrid::new(59.0e9, 63.0e9, n_points.clamp(16, 4001))?;
    let resp = params.shunt_s_params(true, &grid)?;
    let phase = unwrap_phase(&resp)?;
    let tau = group_delay(&phase)?;
    let n = effective_index(&resp, 2.0e-3)?;
    let ng = group_index(&n)?;
    let bands = anomalous_bands(&n)?;
    let curves = DispersionCurves {
        f_ghz: grid.frequencies_hz().iter().map(|f| f / 1e9).collect(),
        s21_db: resp.s21.iter().map(|s| 20.0 * s.norm().log10()).collect(),
        phase_rad: phase.values.clone(),
        tau_g_ps: tau.values.iter().map(|t| t * 1e12).collect(),
        n: n.values.clone(),
        n_g: ng.values.clone(),
        bands_ghz: bands
            .iter()
            .map(|b| [b.f_lo_hz / 1e9, b.f_hi_hz / 1e9])
            .collect(),
        dip_ghz: resp.dip_frequency_hz() / 1e9,
    };
    Ok(serde_json::to_string(&curves).expect("serializable"))
}

#[derive(Serialize)]
struct PatternCurve {
    theta_deg: Vec<f64>,
    mag_db: Vec<f64>,
    peak_angle_deg: f64,
    peak_db: f64,
    hpbw_deg: Option<f64>,
    sll_db: Option<f64>,
    directivity_db: f64,
}

fn pattern_curve(code_str: &str, freq_ghz: f64) -> Result<String, dma_core::Error> {
    let cfg = ApertureConfig::default();
    let code: HologramCode = code_str.trim().parse()?;
    if code.len() != cfg.n_elements() {
        return Err(dma_core::Error::LengthMismatch {
            expected: cfg.n_elements(),
            actual: code.len(),
        });
    }
    let omega = 2.0 * PI * freq_ghz * 1e9;
    let moments = element_moments(&cfg, &code, omega)?;
    let pattern = far_field(&cfg, &moments, omega)?;
    let metrics = beam_metrics(&pattern)?;
    let peak = metrics.peak_magnitude;
    let curve = PatternCurve {
        theta_deg: pattern.theta_deg.clone(),
        mag_db: pattern
            .field
            .iter()
            .map(|e| 20.0 * (e.norm() / peak).log10().max(-60.0))
            .collect(),
        peak_angle_deg: metrics.peak_angle_deg,
        peak_db: 20.0 * peak.log10(),
        hpbw_deg: metrics.hpbw_deg,
        sll_db: metrics.sll_db,
        directivity_db: metrics.directivity_db,
    };
    Ok(serde_json::to_string(&curve).expect("serializable"))
}

#[derive(Serialize)]
struct DesignResult {
    code: String,
    gain_db: f64,
    oracle_code: Option<String>,
    oracle_gain_db: Option<f64>,
    gap_db: Option<f64>,
}

fn design_result(theta_deg: f64, freq_ghz: f64, oracle: bool) -> Result<String, dma_core::Error> {
    let cfg = ApertureConfig::default();
    let target = SteeringTarget {
        theta_deg,
        frequency_hz: freq_ghz * 1e9,
    };
    let code = synthesize_code(&cfg, &target)?;
    let gain = gain_at(&cfg, &code, &target)?;
    let mut result = DesignResult {
        code: code.to_string(),
        gain_db: 20.0 * gain.log10(),
        oracle_code: None,
        oracle_gain_db: None,
        gap_db: None,
    };
    if oracle {
        let best = exhaustive_best_code(&cfg, &target)?;
        result.gap_db = Some(20.0 * (gain / best.gain).log10());
        result.oracle_gain_db = Some(20.0 * best.gain.log10());
        result.oracle_code = Some(best.code.to_string());
    }
    Ok(serde_json::to_string(&result).expect("serializable"))
}

fn to_js<T>(r: Result<T, dma_core::Error>) -> Result<T, JsValue> {
    r.map_err(|e| JsValue::from_str(&e.to_string()))
}

/// Dispersion indicators of the switched resonator over 59-63 GHz.
#[wasm_bindgen]
pub fn dispersion_json(
    f0_ghz: f64,
    gamma_ghz: f64,
    coupling: f64,
    n_points: usize,
) -> Result<String, JsValue> {
    to_js(dispersion_curves(f0_ghz, gamma_ghz, coupling, n_points))
}

/// Normalized far-field pattern and beam metrics for one 16-bit code.
#[wasm_bindgen]
pub fn pattern_json(code: &str, freq_ghz: f64) -> Result<String, JsValue> {
    to_js(pattern_curve(code, freq_ghz))
}

/// Holographic code synthesis toward a target angle, optionally compared
/// against the exhaustive 65536-code optimum.
#[wasm_bindgen]
pub fn design_json(theta_deg: f64, freq_ghz: f64, oracle: bool) -> Result<String, JsValue> {
    to_js(design_result(theta_deg, freq_ghz, oracle))
}

/// The six documented example codes, one per line.
#[wasm_bindgen]
pub fn example_code_list() -> String {
    dma_core::example_codes()
        .iter()
        .map(|c| c.to_string())
        .collect::<Vec<_>>()
        .join("\n")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dispersion_curves_carry_the_anomalous_band() {
        let json = dispersion_curves(60.0, 1.5, 0.5, 801).unwrap();
        let v: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert_eq!(v["f_ghz"].as_array().unwrap().len(), 801);
        assert_eq!(v["bands_ghz"].as_array().unwrap().len(), 1);
        let dip = v["dip_ghz"].as_f64().unwrap();
        assert!((dip - 60.0).abs() < 0.2);
        let tau_min = v["tau_g_ps"]
            .as_array()
            .unwrap()
            .iter()
            .map(|x| x.as_f64().unwrap())
            .fold(f64::INFINITY, f64::min);
        assert!(tau_min < 0.0);
    }

    #[test]
    fn pattern_curve_reports_the_alternating_beam() {
        let json = pattern_curve("1010101010101010", 60.0).unwrap();
        let v: serde_json::Value = serde_json::from_str(&json).unwrap();
        let peak = v["peak_angle_deg"].as_f64().unwrap();
        assert!((peak + 5.94).abs() < 0.05, "peak {peak}");
        assert_eq!(v["theta_deg"].as_array().unwrap().len(), 1801);
    }

    #[test]
    fn design_result_matches_the_library() {
        let json = design_result(30.0, 60.0, true).unwrap();
        let v: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert_eq!(v["code"], "1001100110011001");
        assert!(v["gap_db"].as_f64().unwrap() >= -3.0);
    }

    #[test]
    fn invalid_inputs_surface_as_errors() {
        assert!(pattern_curve("0000000000000000", 60.0).is_err()); // no beam
        assert!(pattern_curve("10", 60.0).is_err());
        assert!(pattern_curve("10a0101010101010", 60.0).is_err());
        assert!(design_result(95.0, 60.0, false).is_err());
        assert!(dispersion_curves(60.0, -1.0, 0.5, 801).is_err());
    }

    #[test]
    fn example_codes_are_exported() {
        let lines: Vec<&str> = example_code_list().lines().collect();
        assert_eq!(lines.len(), 6);
        assert!(lines.contains(&"1010101010101010"));
    }
}

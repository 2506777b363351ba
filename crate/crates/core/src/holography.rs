//! Binary hologram synthesis from the interference of the guided reference
//! wave with a desired object wave, an exhaustive-search steering oracle over
//! all 2^N codes, and frequency sweeps of beam metrics.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::aperture::{
    beam_metrics, element_moments, far_field, far_field_at, ApertureConfig, BeamMetrics,
    HologramCode,
};
use crate::error::{Error, Result};
use crate::meta_atom::C0;

/// Desired object-beam direction at a given operating frequency.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SteeringTarget {
    pub theta_deg: f64,
    pub frequency_hz: f64,
}

impl SteeringTarget {
    pub fn validate(&self) -> Result<()> {
        if !(self.theta_deg.abs() < 90.0) {
            return Err(Error::InvalidParameter(format!(
                "target angle must lie strictly inside (-90, 90) deg (got {})",
                self.theta_deg
            )));
        }
        if !(self.frequency_hz > 0.0) {
            return Err(Error::NonPositiveFrequency(2.0 * PI * self.frequency_hz));
        }
        Ok(())
    }
}

/// Best code found by exhaustive search, with its field gain at the target.
#[derive(Debug, Clone, PartialEq)]
pub struct BestCode {
    pub code: HologramCode,
    pub gain: f64,
}

/// One frequency row of a scan.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanRow {
    pub frequency_hz: f64,
    pub metrics: BeamMetrics,
}

/// Beam metrics of one code swept over frequency.
#[derive(Debug, Clone, PartialEq)]
pub struct ScanResult {
    pub code: HologramCode,
    pub rows: Vec<ScanRow>,
}

/// Record a binary hologram: element n switches on where the interference of
/// the (lossless, undepleted) reference wave with the object plane wave is
/// constructive, `Re[conj(h_n) e^{-j k0 x_n sin theta_t}] > 0`. Exact zeros
/// resolve to the on state.
pub fn synthesize_code(config: &ApertureConfig, target: &SteeringTarget) -> Result<HologramCode> {
    config.validate()?;
    target.validate()?;
    let omega = 2.0 * PI * target.frequency_hz;
    let reference = config.feed.reference_wave(omega)?;
    let k0 = omega / C0;
    let sin_t = target.theta_deg.to_radians().sin();
    let bits = reference
        .iter()
        .zip(config.feed.positions_m.iter())
        .map(|(h, &x)| {
            let object = Complex64::from_polar(1.0, -k0 * x * sin_t);
            (h.conj() * object).re >= 0.0
        })
        .collect();
    Ok(HologramCode::new(bits))
}

/// Field magnitude radiated toward the target by a given code.
pub fn gain_at(
    config: &ApertureConfig,
    code: &HologramCode,
    target: &SteeringTarget,
) -> Result<f64> {
    target.validate()?;
    let omega = 2.0 * PI * target.frequency_hz;
    let moments = element_moments(config, code, omega)?;
    let field = far_field_at(
        &moments,
        &config.feed.positions_m,
        omega,
        &[target.theta_deg],
    );
    Ok(field[0].norm())
}

/// Search all 2^N codes for the one maximizing |E(theta_t)|. Ties resolve to
/// the smallest code integer (element 0 = LSB). Refused above 24 elements.
pub fn exhaustive_best_code(
    config: &ApertureConfig,
    target: &SteeringTarget,
) -> Result<BestCode> {
    config.validate()?;
    target.validate()?;
    let n = config.n_elements();
    if n > 24 {
        return Err(Error::TooManyElements(n));
    }
    let omega = 2.0 * PI * target.frequency_hz;
    let k0 = omega / C0;
    let sin_t = target.theta_deg.to_radians().sin();

    // per-element contributions toward the target for both states
    let all_on = HologramCode::new(vec![true; n]);
    let all_off = HologramCode::new(vec![false; n]);
    let steer: Vec<Complex64> = config
        .feed
        .positions_m
        .iter()
        .map(|&x| Complex64::from_polar(1.0, k0 * x * sin_t))
        .collect();
    let w_on: Vec<Complex64> = element_moments(config, &all_on, omega)?
        .iter()
        .zip(steer.iter())
        .map(|(m, s)| m * s)
        .collect();
    let w_off: Vec<Complex64> = element_moments(config, &all_off, omega)?
        .iter()
        .zip(steer.iter())
        .map(|(m, s)| m * s)
        .collect();
    let base: Complex64 = w_off.iter().sum();
    let delta: Vec<Complex64> = w_on.iter().zip(w_off.iter()).map(|(a, b)| a - b).collect();

    let mut best_code = 0u32;
    let mut best_gain = base.norm();
    for value in 1u32..(1u32 << n) {
        let mut e = base;
        let mut v = value;
        while v != 0 {
            let bit = v.trailing_zeros() as usize;
            e += delta[bit];
            v &= v - 1;
        }
        let gain = e.norm();
        if gain > best_gain {
            best_gain = gain;
            best_code = value;
        }
    }
    Ok(BestCode {
        code: HologramCode::from_int(best_code, n),
        gain: best_gain,
    })
}

/// Beam metrics of one code at each requested frequency (strictly increasing).
pub fn frequency_scan(
    config: &ApertureConfig,
    code: &HologramCode,
    frequencies_hz: &[f64],
) -> Result<ScanResult> {
    if code.is_all_off() {
        return Err(Error::NoBeam);
    }
    if frequencies_hz.is_empty() {
        return Err(Error::InvalidParameter("no scan frequencies given".into()));
    }
    if frequencies_hz.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidParameter(
            "scan frequencies must be strictly increasing".into(),
        ));
    }
    let mut rows = Vec::with_capacity(frequencies_hz.len());
    for &f in frequencies_hz {
        let omega = 2.0 * PI * f;
        let moments = element_moments(config, code, omega)?;
        let pattern = far_field(config, &moments, omega)?;
        rows.push(ScanRow {
            frequency_hz: f,
            metrics: beam_metrics(&pattern)?,
        });
    }
    Ok(ScanResult {
        code: code.clone(),
        rows,
    })
}

/// The full code-by-frequency grid of beam metrics; row and column order
/// follow the inputs.
pub fn hybrid_diversity_table(
    config: &ApertureConfig,
    codes: &[HologramCode],
    frequencies_hz: &[f64],
) -> Result<Vec<Vec<BeamMetrics>>> {
    if codes.is_empty() || frequencies_hz.is_empty() {
        return Err(Error::InvalidParameter(
            "table needs at least one code and one frequency".into(),
        ));
    }
    codes
        .iter()
        .map(|code| {
            Ok(frequency_scan(config, code, frequencies_hz)?
                .rows
                .into_iter()
                .map(|row| row.metrics)
                .collect())
        })
        .collect()
}

/// Six documented 16-element example codes shipped with the toolkit: the
/// uniform aperture, two periodic gratings, and three holographically
/// synthesized steering codes (targets -30, 0, +30 deg at 60 GHz with the
/// default feed).
pub fn example_codes() -> Vec<HologramCode> {
    [
        "1111111111111111",
        "1010101010101010",
        "1100110011001100",
        "1001001001011011",
        "1010101101010101",
        "1001100110011001",
    ]
    .iter()
    .map(|s| s.parse().expect("static code strings are valid"))
    .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::feedline::SiwParams;

    fn defaults() -> ApertureConfig {
        ApertureConfig::default()
    }

    fn target(theta_deg: f64, f_ghz: f64) -> SteeringTarget {
        SteeringTarget {
            theta_deg,
            frequency_hz: f_ghz * 1e9,
        }
    }

    #[test]
    fn phase_locked_target_records_all_ones() {
        // At 50 GHz the guide is fast (beta < k0), so the reference can be
        // phase-locked by a real angle theta = asin(beta/k0).
        let cfg = defaults();
        let omega = 2.0 * PI * 50.0e9;
        let beta = cfg.feed.guided_wavenumber(omega).unwrap().re;
        let theta = (beta / (omega / C0)).asin().to_degrees();
        let code = synthesize_code(&cfg, &target(theta, 50.0)).unwrap();
        assert_eq!(code.to_string(), "1111111111111111");
    }

    #[test]
    fn half_period_offset_records_alternating_code() {
        // k0 sin(theta) - beta = -pi/d flips the interference sign per cell.
        let cfg = defaults();
        let omega = 2.0 * PI * 60.0e9;
        let beta = cfg.feed.guided_wavenumber(omega).unwrap().re;
        let theta = ((beta - PI / cfg.spacing_m()) / (omega / C0))
            .asin()
            .to_degrees();
        let code = synthesize_code(&cfg, &target(theta, 60.0)).unwrap();
        assert_eq!(code.to_string(), "1010101010101010");
    }

    #[test]
    fn synthesized_steering_codes_match_goldens() {
        let cfg = defaults();
        for (theta, golden) in [
            (-30.0, "1001001001011011"),
            (0.0, "1010101101010101"),
            (30.0, "1001100110011001"),
        ] {
            let code = synthesize_code(&cfg, &target(theta, 60.0)).unwrap();
            assert_eq!(code.to_string(), golden, "target {theta} deg");
        }
    }

    #[test]
    fn synthesis_is_deterministic() {
        let cfg = defaults();
        let t = target(17.3, 61.2);
        let a = synthesize_code(&cfg, &t).unwrap();
        let b = synthesize_code(&cfg, &t).unwrap();
        assert_eq!(a, b);
        let ea = exhaustive_best_code(&cfg, &target(10.0, 60.0)).unwrap();
        let eb = exhaustive_best_code(&cfg, &target(10.0, 60.0)).unwrap();
        assert_eq!(ea.code, eb.code);
        assert_eq!(ea.gain, eb.gain);
    }

    #[test]
    fn invalid_targets_are_rejected() {
        let cfg = defaults();
        assert!(synthesize_code(&cfg, &target(90.0, 60.0)).is_err());
        assert!(synthesize_code(&cfg, &target(-95.0, 60.0)).is_err());
        // below cutoff
        assert!(synthesize_code(&cfg, &target(10.0, 40.0)).is_err());
    }

    #[test]
    fn synthesized_beam_lands_within_half_beamwidth_of_target() {
        let cfg = defaults();
        let code = synthesize_code(&cfg, &target(30.0, 60.0)).unwrap();
        let omega = 2.0 * PI * 60.0e9;
        let moments = element_moments(&cfg, &code, omega).unwrap();
        let metrics = beam_metrics(&far_field(&cfg, &moments, omega).unwrap()).unwrap();
        let hpbw = metrics.hpbw_deg.expect("steered beam has a beamwidth");
        assert!(
            (metrics.peak_angle_deg - 30.0).abs() <= hpbw / 2.0,
            "peak {} deg, hpbw {hpbw}",
            metrics.peak_angle_deg
        );
    }

    #[test]
    fn single_element_aperture_prefers_on() {
        let cfg = ApertureConfig {
            feed: SiwParams {
                positions_m: vec![0.0],
                ..SiwParams::default()
            },
            ..defaults()
        };
        let best = exhaustive_best_code(&cfg, &target(0.0, 60.0)).unwrap();
        assert_eq!(best.code.to_string(), "1");
        assert!(best.gain > 0.0);
    }

    #[test]
    fn co_phased_pair_switches_both_on() {
        // at 50 GHz theta = asin(beta/k0) co-phases the two elements
        let cfg = ApertureConfig {
            feed: SiwParams {
                positions_m: vec![0.0, 2.0e-3],
                ..SiwParams::default()
            },
            ..defaults()
        };
        let omega = 2.0 * PI * 50.0e9;
        let beta = cfg.feed.guided_wavenumber(omega).unwrap().re;
        let theta = (beta / (omega / C0)).asin().to_degrees();
        let best = exhaustive_best_code(&cfg, &target(theta, 50.0)).unwrap();
        assert_eq!(best.code.to_string(), "11");
    }

    #[test]
    fn exhaustive_search_dominates_synthesis_within_three_db() {
        let cfg = defaults();
        for theta in [-30.0, 0.0, 30.0] {
            let t = target(theta, 60.0);
            let syn = synthesize_code(&cfg, &t).unwrap();
            let syn_gain = gain_at(&cfg, &syn, &t).unwrap();
            let best = exhaustive_best_code(&cfg, &t).unwrap();
            assert!(
                best.gain >= syn_gain,
                "oracle dominance violated at {theta}"
            );
            let gap_db = 20.0 * (syn_gain / best.gain).log10();
            assert!(gap_db >= -3.0, "gap {gap_db} dB at {theta} deg");
        }
    }

    #[test]
    fn exhaustive_matches_independent_enumeration_on_small_aperture() {
        // oracle-vs-oracle: nested-loop enumeration over all 2^8 codes
        let cfg = ApertureConfig {
            feed: SiwParams {
                positions_m: (0..8).map(|n| n as f64 * 2.0e-3).collect(),
                ..SiwParams::default()
            },
            ..defaults()
        };
        let t = target(20.0, 60.0);
        let best = exhaustive_best_code(&cfg, &t).unwrap();
        let mut brute_gain = -1.0;
        let mut brute_code = 0u32;
        for value in 0u32..256 {
            let code = HologramCode::from_int(value, 8);
            let gain = gain_at(&cfg, &code, &t).unwrap();
            if gain > brute_gain {
                brute_gain = gain;
                brute_code = value;
            }
        }
        assert_eq!(best.code.to_int(), brute_code);
        assert!((best.gain - brute_gain).abs() < 1e-12 * brute_gain);
    }

    #[test]
    fn oversized_aperture_is_refused() {
        let cfg = ApertureConfig {
            feed: SiwParams {
                positions_m: (0..25).map(|n| n as f64 * 2.0e-3).collect(),
                ..SiwParams::default()
            },
            ..defaults()
        };
        assert!(matches!(
            exhaustive_best_code(&cfg, &target(0.0, 60.0)),
            Err(Error::TooManyElements(25))
        ));
    }

    #[test]
    fn scan_of_single_frequency_equals_direct_metrics() {
        let cfg = defaults();
        let code: HologramCode = "1010101010101010".parse().unwrap();
        let scan = frequency_scan(&cfg, &code, &[60.0e9]).unwrap();
        assert_eq!(scan.rows.len(), 1);
        let omega = 2.0 * PI * 60.0e9;
        let moments = element_moments(&cfg, &code, omega).unwrap();
        let direct = beam_metrics(&far_field(&cfg, &moments, omega).unwrap()).unwrap();
        assert_eq!(scan.rows[0].metrics, direct);
    }

    #[test]
    fn scan_rejects_zero_code_and_unsorted_frequencies() {
        let cfg = defaults();
        let zero: HologramCode = "0000000000000000".parse().unwrap();
        assert!(matches!(
            frequency_scan(&cfg, &zero, &[60.0e9]),
            Err(Error::NoBeam)
        ));
        let code: HologramCode = "1010101010101010".parse().unwrap();
        assert!(frequency_scan(&cfg, &code, &[61.0e9, 60.0e9]).is_err());
        assert!(frequency_scan(&cfg, &code, &[]).is_err());
    }

    #[test]
    fn alternating_scan_peaks_separate_and_increase() {
        let cfg = defaults();
        let code: HologramCode = "1010101010101010".parse().unwrap();
        let scan = frequency_scan(&cfg, &code, &[60.0e9, 61.0e9, 62.0e9]).unwrap();
        let peaks: Vec<f64> = scan.rows.iter().map(|r| r.metrics.peak_angle_deg).collect();
        for i in 0..peaks.len() {
            for j in i + 1..peaks.len() {
                assert!(
                    (peaks[i] - peaks[j]).abs() >= 0.8,
                    "peaks {peaks:?} too close"
                );
            }
        }
        // nondecreasing at half-GHz steps over the band
        let freqs: Vec<f64> = (0..9).map(|i| 59.0e9 + i as f64 * 0.5e9).collect();
        let scan = frequency_scan(&cfg, &code, &freqs).unwrap();
        for w in scan.rows.windows(2) {
            assert!(w[1].metrics.peak_angle_deg >= w[0].metrics.peak_angle_deg);
        }
    }

    #[test]
    fn different_code_periods_alias_to_different_beams() {
        let cfg = defaults();
        let omega = 2.0 * PI * 60.0e9;
        let k0 = omega / C0;
        let beta = cfg.feed.guided_wavenumber(omega).unwrap().re;
        let d = cfg.spacing_m();
        let peak = |s: &str| {
            let code: HologramCode = s.parse().unwrap();
            let moments = element_moments(&cfg, &code, omega).unwrap();
            beam_metrics(&far_field(&cfg, &moments, omega).unwrap())
                .unwrap()
                .peak_angle_deg
        };
        let p2 = peak("1010101010101010");
        let p4 = peak("1100110011001100");
        assert!((p2 - p4).abs() > 1.0, "p2 {p2}, p4 {p4}");
        // spatial-harmonic oracle: sin(theta) = (beta - 2 pi m / (P d)) / k0
        let oracle2 = ((beta - PI / d) / k0).asin().to_degrees();
        assert!((p2 - oracle2).abs() < 0.05, "{p2} vs oracle {oracle2}");
        assert!((p2 + 5.940257).abs() < 0.01, "golden p2 {p2}");
        // the period-4 grating radiates its m = 1 and m = 3 harmonics (m = 2
        // has zero Fourier weight); the finite array tilts the twin lobes by
        // well under their width, so the peak lands near one harmonic
        let m1 = ((beta - 2.0 * PI / (4.0 * d)) / k0).asin().to_degrees();
        let m3 = ((beta - 3.0 * 2.0 * PI / (4.0 * d)) / k0).asin().to_degrees();
        assert!(
            (p4 - m1).abs() < 1.5 || (p4 - m3).abs() < 1.5,
            "p4 {p4} vs harmonics {m1}, {m3}"
        );
        assert!((p4 + 47.538817).abs() < 0.01, "golden p4 {p4}");
    }

    #[test]
    fn table_preserves_shape_and_determinism() {
        let cfg = defaults();
        let codes: Vec<HologramCode> = vec![
            "1010101010101010".parse().unwrap(),
            "1010101010101010".parse().unwrap(),
        ];
        let freqs = [60.0e9, 61.0e9, 62.0e9];
        let table = hybrid_diversity_table(&cfg, &codes, &freqs).unwrap();
        assert_eq!(table.len(), 2);
        assert_eq!(table[0].len(), 3);
        assert_eq!(table[0], table[1], "identical codes give identical rows");
        let single = hybrid_diversity_table(&cfg, &codes[..1], &freqs[..1]).unwrap();
        assert_eq!(single.len(), 1);
        assert_eq!(single[0].len(), 1);
    }

    #[test]
    fn example_code_table_widens_the_scan_range() {
        let cfg = defaults();
        let codes = example_codes();
        assert_eq!(codes.len(), 6);
        let freqs = [60.0e9, 61.0e9, 62.0e9];
        let table = hybrid_diversity_table(&cfg, &codes, &freqs).unwrap();
        let mut all_lo = f64::INFINITY;
        let mut all_hi = f64::NEG_INFINITY;
        let mut max_single = 0.0f64;
        for row in &table {
            let lo = row.iter().map(|m| m.peak_angle_deg).fold(f64::INFINITY, f64::min);
            let hi = row
                .iter()
                .map(|m| m.peak_angle_deg)
                .fold(f64::NEG_INFINITY, f64::max);
            all_lo = all_lo.min(lo);
            all_hi = all_hi.max(hi);
            max_single = max_single.max(hi - lo);
        }
        assert!(
            all_hi - all_lo > max_single,
            "table span {} vs best single {}",
            all_hi - all_lo,
            max_single
        );
    }
}

//! One function per subcommand. Every command writes its outputs plus a
//! `resolved_config.json` echo into the output directory, deterministically.

use std::path::Path;

use serde::Serialize;

use dma_core::{
    anomalous_bands, beam_metrics, build_measurement_matrix, diversity_metrics, effective_index,
    effective_permittivity, element_moments, far_field, forward_measure, frequency_scan, gain_at,
    group_delay, group_index, group_velocity, hybrid_diversity_table, port_response,
    reconstruct_matched_filter, reconstruct_tikhonov, synthesize_code, unwrap_phase, Band,
    BeamMetrics, DiversityReport, Scene, SteeringTarget, C0,
};

use crate::config::{ElementStateConfig, RunConfig};
use crate::output::{fmt_f64, fmt_opt, read_scene, write_csv, write_json};
use crate::CliError;

#[derive(Serialize)]
struct DispersionSummary {
    state: ElementStateConfig,
    thickness_m: f64,
    dip_frequency_hz: f64,
    s21_min_abs: f64,
    s21_min_db: f64,
    tau_g_min_s: f64,
    tau_g_min_frequency_hz: f64,
    n_g_min: f64,
    anomalous_bands_hz: Vec<Band>,
}

#[derive(Serialize)]
struct BandsFile {
    bands_hz: Vec<Band>,
}

pub fn cmd_dispersion(cfg: &RunConfig, out: &Path) -> Result<(), CliError> {
    let grid = &cfg.grid;
    if grid.n_points < 3 {
        return Err(CliError::usage(
            "grid too coarse for derivatives (need at least 3 points)".into(),
        ));
    }
    let state = cfg.dispersion.state == ElementStateConfig::On;
    let resp = cfg.meta.shunt_s_params(state, grid)?;
    let phase = unwrap_phase(&resp)?;
    let tau = group_delay(&phase)?;
    let n = effective_index(&resp, cfg.dispersion.thickness_m)?;
    let ng = group_index(&n)?;
    let vg = group_velocity(&ng);
    let eps = effective_permittivity(&n);
    let bands = anomalous_bands(&n)?;

    write_csv(
        out,
        "s_params.csv",
        "f_hz,s11_re,s11_im,s21_re,s21_im",
        (0..grid.len()).map(|i| {
            vec![
                fmt_f64(grid.freq_hz(i)),
                fmt_f64(resp.s11[i].re),
                fmt_f64(resp.s11[i].im),
                fmt_f64(resp.s21[i].re),
                fmt_f64(resp.s21[i].im),
            ]
        }),
    )?;
    write_csv(
        out,
        "phase.csv",
        "f_hz,phase_rad",
        (0..grid.len()).map(|i| vec![fmt_f64(grid.freq_hz(i)), fmt_f64(phase.values[i])]),
    )?;
    write_csv(
        out,
        "group_delay.csv",
        "f_hz,tau_g_s",
        (0..grid.len()).map(|i| vec![fmt_f64(grid.freq_hz(i)), fmt_f64(tau.values[i])]),
    )?;
    write_csv(
        out,
        "group_velocity.csv",
        "f_hz,v_g_m_per_s,v_g_over_c",
        (0..grid.len()).map(|i| {
            vec![
                fmt_f64(grid.freq_hz(i)),
                fmt_f64(vg.values[i]),
                fmt_f64(vg.values[i] / C0),
            ]
        }),
    )?;
    write_csv(
        out,
        "group_index.csv",
        "f_hz,n,n_g",
        (0..grid.len()).map(|i| {
            vec![
                fmt_f64(grid.freq_hz(i)),
                fmt_f64(n.values[i]),
                fmt_f64(ng.values[i]),
            ]
        }),
    )?;
    write_csv(
        out,
        "eps_eff.csv",
        "f_hz,eps_eff",
        (0..grid.len()).map(|i| vec![fmt_f64(grid.freq_hz(i)), fmt_f64(eps.values[i])]),
    )?;
    write_json(
        out,
        "anomalous_bands.json",
        &BandsFile {
            bands_hz: bands.clone(),
        },
    )?;

    let dip_i = (0..grid.len())
        .min_by(|&a, &b| resp.s21[a].norm().partial_cmp(&resp.s21[b].norm()).unwrap())
        .unwrap();
    let tau_i = (0..grid.len())
        .min_by(|&a, &b| tau.values[a].partial_cmp(&tau.values[b]).unwrap())
        .unwrap();
    let s21_min = resp.s21[dip_i].norm();
    write_json(
        out,
        "summary.json",
        &DispersionSummary {
            state: cfg.dispersion.state,
            thickness_m: cfg.dispersion.thickness_m,
            dip_frequency_hz: grid.freq_hz(dip_i),
            s21_min_abs: s21_min,
            s21_min_db: 20.0 * s21_min.log10(),
            tau_g_min_s: tau.values[tau_i],
            tau_g_min_frequency_hz: grid.freq_hz(tau_i),
            n_g_min: ng.values.iter().cloned().fold(f64::INFINITY, f64::min),
            anomalous_bands_hz: bands,
        },
    )?;
    Ok(())
}

#[derive(Serialize)]
struct PatternReport {
    code: String,
    frequency_hz: f64,
    metrics: BeamMetrics,
}

pub fn cmd_pattern(cfg: &RunConfig, out: &Path, code: &str, f_ghz: f64) -> Result<(), CliError> {
    let code = cfg.parse_code(code)?;
    if code.is_all_off() {
        return Err(CliError::from(dma_core::Error::NoBeam));
    }
    let aperture = cfg.aperture();
    let omega = 2.0 * std::f64::consts::PI * f_ghz * 1e9;
    let moments = element_moments(&aperture, &code, omega)?;
    let pattern = far_field(&aperture, &moments, omega)?;
    let metrics = beam_metrics(&pattern)?;
    write_csv(
        out,
        "pattern.csv",
        "theta_deg,e_re,e_im,mag_db",
        pattern.theta_deg.iter().zip(pattern.field.iter()).map(|(&t, e)| {
            vec![
                fmt_f64(t),
                fmt_f64(e.re),
                fmt_f64(e.im),
                fmt_f64(20.0 * e.norm().log10()),
            ]
        }),
    )?;
    write_json(
        out,
        "pattern_metrics.json",
        &PatternReport {
            code: code.to_string(),
            frequency_hz: f_ghz * 1e9,
            metrics,
        },
    )?;
    Ok(())
}

const SCAN_HEADER: &str =
    "code,f_hz,peak_angle_deg,peak_magnitude,hpbw_deg,sll_db,directivity_db";

fn scan_row(code: &str, f_hz: f64, m: &BeamMetrics) -> Vec<String> {
    vec![
        code.to_string(),
        fmt_f64(f_hz),
        fmt_f64(m.peak_angle_deg),
        fmt_f64(m.peak_magnitude),
        fmt_opt(m.hpbw_deg),
        fmt_opt(m.sll_db),
        fmt_f64(m.directivity_db),
    ]
}

pub fn cmd_scan(
    cfg: &RunConfig,
    out: &Path,
    code: &str,
    freqs_ghz: &[f64],
) -> Result<(), CliError> {
    let code = cfg.parse_code(code)?;
    let freqs: Vec<f64> = freqs_ghz.iter().map(|f| f * 1e9).collect();
    let scan = frequency_scan(&cfg.aperture(), &code, &freqs)?;
    write_csv(
        out,
        "scan.csv",
        SCAN_HEADER,
        scan.rows
            .iter()
            .map(|r| scan_row(&scan.code.to_string(), r.frequency_hz, &r.metrics)),
    )?;
    Ok(())
}

pub fn cmd_table(
    cfg: &RunConfig,
    out: &Path,
    codes: Option<&[String]>,
    freqs_ghz: &[f64],
) -> Result<(), CliError> {
    let codes: Vec<_> = match codes {
        Some(list) => list
            .iter()
            .map(|s| cfg.parse_code(s))
            .collect::<Result<_, _>>()?,
        None => cfg.code_list()?,
    };
    let freqs: Vec<f64> = freqs_ghz.iter().map(|f| f * 1e9).collect();
    let table = hybrid_diversity_table(&cfg.aperture(), &codes, &freqs)?;
    let mut rows = Vec::new();
    for (code, row) in codes.iter().zip(table.iter()) {
        for (f, metrics) in freqs.iter().zip(row.iter()) {
            rows.push(scan_row(&code.to_string(), *f, metrics));
        }
    }
    write_csv(out, "table.csv", SCAN_HEADER, rows)?;
    Ok(())
}

#[derive(Serialize)]
struct OracleReport {
    code: String,
    gain: f64,
    gain_db: f64,
    gap_db: f64,
}

#[derive(Serialize)]
struct DesignReport {
    theta_t_deg: f64,
    frequency_hz: f64,
    code: String,
    gain: f64,
    gain_db: f64,
    oracle: Option<OracleReport>,
}

pub fn cmd_design(
    cfg: &RunConfig,
    out: &Path,
    theta_deg: f64,
    f_ghz: f64,
    oracle: bool,
) -> Result<(), CliError> {
    let aperture = cfg.aperture();
    let target = SteeringTarget {
        theta_deg,
        frequency_hz: f_ghz * 1e9,
    };
    let code = synthesize_code(&aperture, &target)?;
    let gain = gain_at(&aperture, &code, &target)?;
    let oracle = if oracle {
        let best = dma_core::exhaustive_best_code(&aperture, &target)?;
        Some(OracleReport {
            code: best.code.to_string(),
            gain: best.gain,
            gain_db: 20.0 * best.gain.log10(),
            gap_db: 20.0 * (gain / best.gain).log10(),
        })
    } else {
        None
    };
    write_json(
        out,
        "design.json",
        &DesignReport {
            theta_t_deg: theta_deg,
            frequency_hz: f_ghz * 1e9,
            code: code.to_string(),
            gain,
            gain_db: 20.0 * gain.log10(),
            oracle,
        },
    )?;
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Method {
    /// Matched filter (adjoint with per-pixel normalization).
    Mf,
    /// Tikhonov-regularized least squares via the SVD.
    Tikhonov,
}

#[derive(Serialize)]
struct ImageReport {
    method: String,
    lambda_rel: Option<f64>,
    lambda_abs: Option<f64>,
    noise_sigma: f64,
    seed: u64,
    estimate_norm: f64,
    argmax_pixel: usize,
    zeroed_pixels: Vec<usize>,
    diversity: DiversityReport,
}

#[allow(clippy::too_many_arguments)]
pub fn cmd_image(
    cfg: &RunConfig,
    out: &Path,
    scene_path: Option<&Path>,
    point: Option<usize>,
    noise_sigma: f64,
    method: Method,
    lambda_rel: f64,
) -> Result<(), CliError> {
    if scene_path.is_some() == point.is_some() {
        return Err(CliError::usage(
            "give exactly one of --scene FILE or --point PIXEL".into(),
        ));
    }
    if noise_sigma < 0.0 {
        return Err(CliError::usage("--noise must be non-negative".into()));
    }
    if lambda_rel < 0.0 {
        return Err(CliError::usage("--lambda must be non-negative".into()));
    }
    let scene = match (scene_path, point) {
        (Some(path), None) => {
            let (angles, reflectivity) = read_scene(path)?;
            Scene::new(angles, reflectivity).map_err(CliError::from_config)?
        }
        (None, Some(p)) => {
            Scene::point(cfg.pixel_angles(), p).map_err(CliError::from_config)?
        }
        _ => unreachable!(),
    };
    let aperture = cfg.aperture();
    let codes = cfg.ensemble()?;
    let matrix = build_measurement_matrix(
        &aperture,
        &codes,
        &cfg.imaging.frequencies_hz,
        &scene.pixel_angles_deg,
    )?;
    let g = forward_measure(&matrix, &scene, noise_sigma, cfg.seed)?;
    let diversity = diversity_metrics(&matrix);

    let (estimate, zeroed, lambda_abs) = match method {
        Method::Mf => {
            let est = reconstruct_matched_filter(&matrix, &g)?;
            (est.values, est.zeroed_pixels, None)
        }
        Method::Tikhonov => {
            let sigma_1 = diversity.singular_values.first().copied().unwrap_or(0.0);
            let lambda = lambda_rel * sigma_1 * sigma_1;
            (reconstruct_tikhonov(&matrix, &g, lambda)?, Vec::new(), Some(lambda))
        }
    };

    write_csv(
        out,
        "estimate.csv",
        "pixel,theta_deg,sigma_re,sigma_im,sigma_abs",
        estimate.iter().enumerate().map(|(p, v)| {
            vec![
                p.to_string(),
                fmt_f64(scene.pixel_angles_deg[p]),
                fmt_f64(v.re),
                fmt_f64(v.im),
                fmt_f64(v.norm()),
            ]
        }),
    )?;
    let argmax = estimate
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.norm().partial_cmp(&b.1.norm()).unwrap())
        .map(|(p, _)| p)
        .unwrap_or(0);
    write_json(
        out,
        "image_report.json",
        &ImageReport {
            method: match method {
                Method::Mf => "mf".into(),
                Method::Tikhonov => "tikhonov".into(),
            },
            lambda_rel: matches!(method, Method::Tikhonov).then_some(lambda_rel),
            lambda_abs,
            noise_sigma,
            seed: cfg.seed,
            estimate_norm: estimate.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt(),
            argmax_pixel: argmax,
            zeroed_pixels: zeroed,
            diversity,
        },
    )?;
    Ok(())
}

pub fn cmd_metrics(cfg: &RunConfig, out: &Path) -> Result<(), CliError> {
    let matrix = build_measurement_matrix(
        &cfg.aperture(),
        &cfg.ensemble()?,
        &cfg.imaging.frequencies_hz,
        &cfg.pixel_angles(),
    )?;
    write_json(out, "diversity.json", &diversity_metrics(&matrix))?;
    Ok(())
}

/// Port-model export used by the pattern family analysis: S-parameters and
/// radiated power of the full aperture for one code over the config grid.
pub fn cmd_port(cfg: &RunConfig, out: &Path, code: &str) -> Result<(), CliError> {
    let code = cfg.parse_code(code)?;
    let resp = port_response(&cfg.aperture(), &code, &cfg.grid)?;
    let grid = &cfg.grid;
    write_csv(
        out,
        "port.csv",
        "f_hz,s11_re,s11_im,s21_re,s21_im,radiated_fraction,dielectric_fraction",
        (0..grid.len()).map(|i| {
            vec![
                fmt_f64(grid.freq_hz(i)),
                fmt_f64(resp.response.s11[i].re),
                fmt_f64(resp.response.s11[i].im),
                fmt_f64(resp.response.s21[i].re),
                fmt_f64(resp.response.s21[i].im),
                fmt_f64(resp.radiated_fraction.values[i]),
                fmt_f64(resp.dielectric_fraction.values[i]),
            ]
        }),
    )?;
    Ok(())
}


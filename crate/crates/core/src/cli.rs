//! Subcommand bodies. Each returns what goes to standard output.

use std::path::Path;

use serde::Serialize;

use elastica_core::closed::{close_directions, closing_projection, frame_from, grassmann_match, match_closed};
use elastica_core::config::Config;
use elastica_core::curves::{angle_lift, resample_arclength, sign_representation, TangentFunction};
use elastica_core::geodesic::{reconstruct_path, GeodesicPath, VALIDITY_TOL};
use elastica_core::io::{curve_csv, read_curve, read_function, to_json, write_file};
use elastica_core::kernel::{cost_field, energy, match_rotation_invariant, match_tangents, Diffeo, MatchResult};
use elastica_core::{Error, Result};

fn load(a: &Path, b: &Path, one_dim: bool, config: &Config) -> Result<(TangentFunction, TangentFunction)> {
    config.validate()?;
    if one_dim {
        if config.rotation || config.offset {
            return Err(Error::BadConfig("--one-dim excludes --rotation and --offset".into()));
        }
        let f0 = read_function(a)?;
        let f1 = read_function(b)?;
        return Ok((sign_representation(&f0, config.n)?, sign_representation(&f1, config.n)?));
    }
    let m0 = read_curve(a)?;
    let m1 = read_curve(b)?;
    if m0.dim() != m1.dim() {
        return Err(Error::DimensionMismatch {
            expected: m0.dim(),
            found: m1.dim(),
        });
    }
    if config.offset && !(m0.is_closed() && m1.is_closed()) {
        return Err(Error::NotClosed);
    }
    Ok((resample_arclength(&m0, config.n)?, resample_arclength(&m1, config.n)?))
}

fn best_match(a0: &TangentFunction, a1: &TangentFunction, config: &Config) -> Result<MatchResult> {
    let params = config.match_params()?;
    if config.offset {
        match_closed(a0, a1, &params, config.rotation)
    } else if config.rotation {
        match_rotation_invariant(a0, a1, &params)
    } else {
        match_tangents(a0, a1, &params)
    }
}

/// `a0` moved by the offset and rotation found in `result`.
fn aligned(a0: &TangentFunction, result: &MatchResult) -> TangentFunction {
    let mut a = a0.clone();
    if let Some(offset) = result.offset {
        a = a.shifted((offset * a.len() as f64).round() as usize);
    }
    if let Some(rotation) = &result.rotation {
        a = a.transformed(&rotation.matrix());
    }
    a
}

pub fn dist(a: &Path, b: &Path, one_dim: bool, config: &Config) -> Result<String> {
    let (a0, a1) = load(a, b, one_dim, config)?;
    to_json(&best_match(&a0, &a1, config)?)
}

pub fn matching(a: &Path, b: &Path, one_dim: bool, config: &Config, out: &Path) -> Result<String> {
    let (a0, a1) = load(a, b, one_dim, config)?;
    let result = best_match(&a0, &a1, config)?;
    let field = cost_field(&aligned(&a0, &result), &a1, config.sigma()?)?;
    std::fs::create_dir_all(out)?;
    write_file(&out.join("cost_field.csv"), &field.to_csv())?;
    write_file(&out.join("phi.json"), &to_json(&result.phi)?)?;
    let json = to_json(&result)?;
    write_file(&out.join("match.json"), &json)?;
    Ok(json)
}

#[derive(Serialize)]
struct PathReport<'a> {
    distance: f64,
    rho: f64,
    sigma: f64,
    energy: Option<f64>,
    time_steps: usize,
    lift: elastica_core::LiftMode,
    times: &'a [f64],
    gamma_norms: &'a [f64],
    end_angle_error: f64,
    phi: &'a Diffeo,
    rotation: &'a Option<elastica_core::Rotation>,
    offset: Option<f64>,
    frames: Vec<String>,
}

#[derive(Serialize)]
struct InvalidCell {
    time_index: usize,
    time: f64,
    piece: usize,
    cell: (usize, usize),
}

#[derive(Serialize)]
struct ValidityReport {
    valid: bool,
    tolerance: f64,
    cells: Vec<InvalidCell>,
}

#[derive(Serialize)]
struct GeodesicSummary {
    distance: f64,
    rho: f64,
    frames: usize,
    valid: bool,
    invalid_cells: usize,
}

/// Polyline of frame `k`, closed by the weighted closing projection if asked.
fn frame_points(path: &GeodesicPath, k: usize, close: bool) -> Result<Vec<Vec<f64>>> {
    if !close {
        return Ok(path.curves[k].clone());
    }
    let weights: Vec<f64> = path.dpsi[k].iter().zip(&path.widths).map(|(d, w)| d * w).collect();
    let dirs = close_directions(&path.alpha[k], &weights)?;
    let mut p = vec![0.0; path.dim];
    let mut pts = vec![p.clone()];
    for (a, w) in dirs.iter().zip(&weights) {
        p.iter_mut().zip(a).for_each(|(x, y)| *x += w * y);
        pts.push(p.clone());
    }
    // The last point returns to the first; a closed curve lists it once.
    pts.pop();
    Ok(pts)
}

pub fn geodesic(a: &Path, b: &Path, one_dim: bool, config: &Config, out: &Path) -> Result<String> {
    let (a0, a1) = load(a, b, one_dim, config)?;
    let result = best_match(&a0, &a1, config)?;
    let sigma = config.sigma()?;
    let path = reconstruct_path(
        &aligned(&a0, &result),
        &a1,
        &result.phi,
        sigma,
        config.time_steps,
        config.lift_mode,
    )?;
    std::fs::create_dir_all(out)?;
    let mut frames = Vec::with_capacity(path.times.len());
    for k in 0..path.times.len() {
        let name = format!("frame_{k:03}.csv");
        let pts = frame_points(&path, k, config.close_frames)?;
        write_file(&out.join(&name), &curve_csv(&pts, config.close_frames))?;
        frames.push(name);
    }
    let report = PathReport {
        distance: 2.0 * path.rho,
        rho: path.rho,
        sigma: path.sigma,
        energy: energy(&path, sigma).ok(),
        time_steps: path.time_steps(),
        lift: config.lift_mode,
        times: &path.times,
        gamma_norms: &path.gamma_norms,
        end_angle_error: path.end_angle_error,
        phi: &result.phi,
        rotation: &result.rotation,
        offset: result.offset,
        frames,
    };
    write_file(&out.join("path.json"), &to_json(&report)?)?;
    let validity = ValidityReport {
        valid: path.is_valid(),
        tolerance: VALIDITY_TOL,
        cells: path
            .validity
            .iter()
            .map(|&(k, piece)| InvalidCell {
                time_index: k,
                time: path.times[k],
                piece,
                cell: path.cells[piece],
            })
            .collect(),
    };
    write_file(&out.join("validity.json"), &to_json(&validity)?)?;
    to_json(&GeodesicSummary {
        distance: 2.0 * path.rho,
        rho: path.rho,
        frames: path.times.len(),
        valid: path.is_valid(),
        invalid_cells: path.validity.len(),
    })
}

#[derive(Serialize)]
struct GrassmannReport {
    distance: f64,
    gram: [[f64; 2]; 2],
    singular_values: [f64; 2],
    angles: [f64; 2],
    offset: Option<f64>,
}

/// Tangents are closed by the closing projection first: sampled outlines are
/// only closed up to discretization error, which the frame check would reject.
pub fn grassmann(a: &Path, b: &Path, config: &Config) -> Result<String> {
    config.validate()?;
    let m0 = read_curve(a)?;
    let m1 = read_curve(b)?;
    if !(m0.is_closed() && m1.is_closed()) {
        return Err(Error::NotClosed);
    }
    let a0 = closing_projection(&resample_arclength(&m0, config.n)?)?;
    let a1 = closing_projection(&resample_arclength(&m1, config.n)?)?;
    let id = Diffeo::identity(config.n);
    let f1 = frame_from(&id, &angle_lift(&a1)?);
    let shifts = if config.offset { config.n } else { 1 };
    let mut best: Option<GrassmannReport> = None;
    for k in 0..shifts {
        let f0 = frame_from(&id, &angle_lift(&a0.shifted(k))?);
        let r = grassmann_match(&f0, &f1)?;
        if best.as_ref().is_none_or(|b| r.distance < b.distance) {
            best = Some(GrassmannReport {
                distance: r.distance,
                gram: r.gram,
                singular_values: r.singular_values,
                angles: r.angles,
                offset: config.offset.then_some(k as f64 / config.n as f64),
            });
        }
    }
    to_json(&best.expect("at least one shift"))
}

/// Resamples, closes the tangents and rebuilds the outline at the input's
/// length and starting point.
pub fn close(a: &Path, config: &Config, out: Option<&Path>) -> Result<String> {
    config.validate()?;
    let m = read_curve(a)?;
    let closed = closing_projection(&resample_arclength(&m, config.n)?)?;
    let (length, start) = (m.length(), m.points()[0].clone());
    let mut pts = closed.reconstruct();
    pts.pop();
    for p in &mut pts {
        p.iter_mut().zip(&start).for_each(|(x, s)| *x = s + length * *x);
    }
    let csv = curve_csv(&pts, true);
    match out {
        Some(path) => {
            write_file(path, &csv)?;
            Ok(String::new())
        }
        None => Ok(csv),
    }
}

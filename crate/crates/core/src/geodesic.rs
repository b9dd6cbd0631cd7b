//! Explicit optimal paths for a fixed end reparametrization.
//!
//! For a matched pair `(a0, a1 o phi1)` the problem reduces to the great
//! circle between `q0 = (1, 0)` and `q1 = sqrt(dphi1) (cos eta1, sin eta1)`,
//! `eta1 = omega / (2 sigma)`, on the unit sphere of `L^2([0,1], R^2)`. Every
//! point `gamma(t)` of that circle maps back to a reparametrization density
//! `dpsi = |gamma|^2` and a tangent rotated by `tau = 2 sigma arg(gamma)` in
//! the plane of `a0` and `a1 o phi1`.
//!
//! Functions are discretized on the pieces of `phi1` clipped to grid cells,
//! so that `<q0, q1>` is exactly the DP objective of `phi1`.

use std::f64::consts::PI;

use serde::Serialize;

use crate::config::LiftMode;
use crate::curves::TangentFunction;
use crate::error::{Error, Result};
use crate::kernel::{kernel_value, Diffeo, PathPiece, Sigma};
use crate::vecmath::{default_perpendicular, dot, norm, perp2, unit_angle, wrap_angle};

/// Cells where `|gamma|` comes closer to zero than this are reported invalid.
pub const VALIDITY_TOL: f64 = 1e-6;
const END_ANGLE_WARN: f64 = 1e-6;
const END_ANGLE_FAIL: f64 = 1e-3;

/// Piecewise-constant map `[0, 1] -> R^2` on a partition with the given widths.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SphereFunction {
    pub widths: Vec<f64>,
    pub values: Vec<[f64; 2]>,
}

impl SphereFunction {
    /// Constant `(1, 0)` on the partition.
    pub fn unit_constant(widths: Vec<f64>) -> Self {
        let values = vec![[1.0, 0.0]; widths.len()];
        SphereFunction { widths, values }
    }

    pub fn inner(&self, other: &SphereFunction) -> f64 {
        self.widths
            .iter()
            .zip(self.values.iter().zip(&other.values))
            .map(|(w, (u, v))| w * (u[0] * v[0] + u[1] * v[1]))
            .sum()
    }

    pub fn norm(&self) -> f64 {
        self.inner(self).sqrt()
    }
}

/// Sphere endpoints together with the matched tangent frames they came from.
#[derive(Debug, Clone)]
pub struct SphereEndpoints {
    pub q0: SphereFunction,
    pub q1: SphereFunction,
    pub rho: f64,
    pub pieces: Vec<PathPiece>,
    /// Angle from `a0` to `a1 o phi1` per piece.
    pub omega: Vec<f64>,
    /// Unit vector completing `a0` to an orthonormal basis of their plane.
    pub perps: Vec<Vec<f64>>,
}

fn measurable_frame(u: &[f64], v: &[f64]) -> (f64, Vec<f64>) {
    let omega = unit_angle(u, v);
    let c = dot(u, v);
    let mut r: Vec<f64> = v.iter().zip(u).map(|(vi, ui)| vi - c * ui).collect();
    let nr = norm(&r);
    if nr > 1e-15 && omega > 0.0 && omega < PI {
        r.iter_mut().for_each(|x| *x /= nr);
        (omega, r)
    } else {
        (omega, default_perpendicular(u))
    }
}

/// Continuous lift of the matched angle along the pieces, starting in `[0, pi]`.
fn smooth_frames(a0: &TangentFunction, a1: &TangentFunction, pieces: &[PathPiece]) -> Result<(Vec<f64>, Vec<Vec<f64>>)> {
    let mut omega: Vec<f64> = Vec::with_capacity(pieces.len());
    let mut perps: Vec<Vec<f64>> = Vec::with_capacity(pieces.len());
    for (k, piece) in pieces.iter().enumerate() {
        let (u, v) = (a0.sample(piece.i), a1.sample(piece.j));
        let (mut w, mut p) = if a0.dim() == 2 {
            let cross = u[0] * v[1] - u[1] * v[0];
            (cross.atan2(dot(u, v)), perp2(u).to_vec())
        } else {
            let (w, p) = measurable_frame(u, v);
            match perps.last() {
                None => (w, p),
                Some(prev) => {
                    let mut r: Vec<f64> = v.iter().zip(u).map(|(vi, ui)| vi - dot(u, v) * ui).collect();
                    if norm(&r) > 1e-9 {
                        if dot(&p, prev) < 0.0 {
                            (-w, p.iter().map(|x| -x).collect())
                        } else {
                            (w, p)
                        }
                    } else {
                        // a1 is parallel to a0: carry the previous perpendicular over.
                        let c = dot(prev, u);
                        r = prev.iter().zip(u).map(|(pi, ui)| pi - c * ui).collect();
                        let nr = norm(&r);
                        if nr > 1e-9 {
                            r.iter_mut().for_each(|x| *x /= nr);
                            (w, r)
                        } else {
                            (w, p)
                        }
                    }
                }
            }
        };
        if let Some(&prev) = omega.last() {
            let delta = wrap_angle(w - prev);
            if delta.abs() >= PI - 1e-9 {
                return Err(Error::LiftJump { index: k - 1 });
            }
            w = prev + delta;
        }
        omega.push(w);
        p.shrink_to_fit();
        perps.push(p);
    }
    if omega.first().is_some_and(|&w| w < 0.0) {
        omega.iter_mut().for_each(|w| *w = -*w);
        perps
            .iter_mut()
            .for_each(|p| p.iter_mut().for_each(|x| *x = -*x));
    }
    Ok((omega, perps))
}

/// Builds `q0`, `q1` and `rho = acos <q0, q1>` for the end map `phi1`.
pub fn sphere_endpoints(
    a0: &TangentFunction,
    a1: &TangentFunction,
    phi1: &Diffeo,
    sigma: Sigma,
    lift: LiftMode,
) -> Result<SphereEndpoints> {
    if a0.dim() != a1.dim() {
        return Err(Error::DimensionMismatch {
            expected: a0.dim(),
            found: a1.dim(),
        });
    }
    if a0.len() != a1.len() {
        return Err(Error::GridMismatch(a0.len(), a1.len()));
    }
    let pieces = phi1.pieces(a0.len());
    let (omega, perps) = match lift {
        LiftMode::Measurable => pieces
            .iter()
            .map(|p| measurable_frame(a0.sample(p.i), a1.sample(p.j)))
            .unzip(),
        LiftMode::Smooth => smooth_frames(a0, a1, &pieces)?,
    };
    let widths: Vec<f64> = pieces.iter().map(|p| p.ds).collect();
    let two_sigma = 2.0 * sigma.get();
    let values = pieces
        .iter()
        .zip(&omega)
        .map(|(p, &w)| {
            let r = p.slope().sqrt();
            let eta = w / two_sigma;
            [r * eta.cos(), r * eta.sin()]
        })
        .collect();
    // <q0, q1> summed as sqrt(ds dst) f_sigma, the same terms the DP adds up.
    let inner: f64 = pieces
        .iter()
        .zip(&omega)
        .map(|(p, &w)| p.weight() * kernel_value(w, sigma))
        .sum();
    let q0 = SphereFunction::unit_constant(widths.clone());
    let q1 = SphereFunction { widths, values };
    Ok(SphereEndpoints {
        q0,
        q1,
        rho: inner.clamp(-1.0, 1.0).acos(),
        pieces,
        omega,
        perps,
    })
}

fn circle_coefficients(rho: f64, t: f64) -> (f64, f64) {
    let s = rho.sin();
    (((1.0 - t) * rho).sin() / s, (t * rho).sin() / s)
}

/// Point at time `t` on the great circle from `q0` to `q1`.
pub fn great_circle(q0: &SphereFunction, q1: &SphereFunction, rho: f64, t: f64) -> Result<SphereFunction> {
    if rho >= PI - 1e-9 {
        return Err(Error::DegenerateEndpoints { rho });
    }
    if rho < 1e-12 {
        let gap: f64 = q0
            .widths
            .iter()
            .zip(q0.values.iter().zip(&q1.values))
            .map(|(w, (u, v))| w * ((u[0] - v[0]).powi(2) + (u[1] - v[1]).powi(2)))
            .sum::<f64>()
            .sqrt();
        if gap > 1e-12 {
            return Err(Error::DegenerateEndpoints { rho });
        }
        return Ok(q0.clone());
    }
    let (a, b) = circle_coefficients(rho, t);
    let values = q0
        .values
        .iter()
        .zip(&q1.values)
        .map(|(u, v)| [a * u[0] + b * v[0], a * u[1] + b * v[1]])
        .collect();
    Ok(SphereFunction {
        widths: q0.widths.clone(),
        values,
    })
}

/// Point at time `t` on the shortest arc between unit vectors `a0s` and `a1s`.
pub fn pointwise_interpolant(a0s: &[f64], a1s: &[f64], t: f64) -> Result<Vec<f64>> {
    if a0s.len() != a1s.len() {
        return Err(Error::DimensionMismatch {
            expected: a0s.len(),
            found: a1s.len(),
        });
    }
    let omega = unit_angle(a0s, a1s);
    if omega < 1e-8 {
        return Ok(a0s.to_vec());
    }
    if omega > PI - 1e-8 {
        return Err(Error::AntipodalPair);
    }
    let s = omega.sin();
    let (a, b) = (((1.0 - t) * omega).sin() / s, (t * omega).sin() / s);
    Ok(a0s.iter().zip(a1s).map(|(x, y)| a * x + b * y).collect())
}

/// A sampled optimal metamorphosis.
#[derive(Debug, Clone)]
pub struct GeodesicPath {
    pub sigma: f64,
    pub rho: f64,
    pub dim: usize,
    pub times: Vec<f64>,
    /// Piece widths along the first curve's parameter `s`.
    pub widths: Vec<f64>,
    /// Grid cell `(i, j)` of each piece.
    pub cells: Vec<(usize, usize)>,
    /// `psi(t, .)` at the piece boundaries (`pieces + 1` values per time).
    pub psi: Vec<Vec<f64>>,
    pub dpsi: Vec<Vec<f64>>,
    /// Time-continuous angle of `gamma(t, s)`.
    pub eta: Vec<Vec<f64>>,
    pub alpha: Vec<Vec<Vec<f64>>>,
    /// `||gamma(t)||_{L^2}` before normalization.
    pub gamma_norms: Vec<f64>,
    /// Length-one polylines, one vertex per piece boundary.
    pub curves: Vec<Vec<Vec<f64>>>,
    /// `(time index, piece index)` where `|gamma|` nearly vanishes.
    pub validity: Vec<(usize, usize)>,
    /// Largest `|eta(1, s) - omega(s) / (2 sigma)|`.
    pub end_angle_error: f64,
}

impl GeodesicPath {
    pub fn time_steps(&self) -> usize {
        self.times.len() - 1
    }

    pub fn pieces(&self) -> usize {
        self.widths.len()
    }

    pub fn is_valid(&self) -> bool {
        self.validity.is_empty()
    }
}

fn min_gamma_norm(rho: f64, q1: [f64; 2]) -> (f64, f64) {
    let eval = |t: f64| {
        let (a, b) = circle_coefficients(rho, t);
        ((a + b * q1[0]).powi(2) + (b * q1[1]).powi(2)).sqrt()
    };
    let scan = 64;
    let (mut best_t, mut best) = (0.0, eval(0.0));
    for k in 1..=scan {
        let t = k as f64 / scan as f64;
        let v = eval(t);
        if v < best {
            best = v;
            best_t = t;
        }
    }
    let h = 1.0 / scan as f64;
    let (mut lo, mut hi) = ((best_t - h).max(0.0), (best_t + h).min(1.0));
    let g = (5f64.sqrt() - 1.0) / 2.0;
    for _ in 0..80 {
        let x1 = hi - g * (hi - lo);
        let x2 = lo + g * (hi - lo);
        if eval(x1) <= eval(x2) {
            hi = x2;
        } else {
            lo = x1;
        }
    }
    let t = 0.5 * (lo + hi);
    let v = eval(t);
    if v < best {
        (t, v)
    } else {
        (best_t, best)
    }
}

/// Reconstructs the optimal path from `a0` to `a1 o phi1` at `time_steps + 1`
/// uniform times.
pub fn reconstruct_path(
    a0: &TangentFunction,
    a1: &TangentFunction,
    phi1: &Diffeo,
    sigma: Sigma,
    time_steps: usize,
    lift: LiftMode,
) -> Result<GeodesicPath> {
    if time_steps < 2 {
        return Err(Error::BadConfig(format!(
            "time steps must be at least 2, got {time_steps}"
        )));
    }
    let ends = sphere_endpoints(a0, a1, phi1, sigma, lift)?;
    let SphereEndpoints {
        q0,
        q1,
        rho,
        pieces,
        omega,
        perps,
    } = ends;
    let two_sigma = 2.0 * sigma.get();
    let m = pieces.len();
    let dim = a0.dim();
    let times: Vec<f64> = (0..=time_steps)
        .map(|k| k as f64 / time_steps as f64)
        .collect();

    let mut path = GeodesicPath {
        sigma: sigma.get(),
        rho,
        dim,
        times: times.clone(),
        widths: q0.widths.clone(),
        cells: pieces.iter().map(|p| (p.i, p.j)).collect(),
        psi: Vec::with_capacity(times.len()),
        dpsi: Vec::with_capacity(times.len()),
        eta: Vec::with_capacity(times.len()),
        alpha: Vec::with_capacity(times.len()),
        gamma_norms: Vec::with_capacity(times.len()),
        curves: Vec::with_capacity(times.len()),
        validity: Vec::new(),
        end_angle_error: 0.0,
    };

    for (k, &t) in times.iter().enumerate() {
        let gamma = great_circle(&q0, &q1, rho, t)?;
        let norm2 = gamma.inner(&gamma);
        path.gamma_norms.push(norm2.sqrt());

        let mut dpsi = Vec::with_capacity(m);
        let mut eta = Vec::with_capacity(m);
        let mut alpha = Vec::with_capacity(m);
        for (idx, g) in gamma.values.iter().enumerate() {
            let mag2 = g[0] * g[0] + g[1] * g[1];
            if mag2.sqrt() < VALIDITY_TOL {
                path.validity.push((k, idx));
            }
            dpsi.push(mag2 / norm2);
            // gamma stays in the cone spanned by q0 and q1, so atan2 already
            // is the time-continuous angle starting from 0.
            let e = g[1].atan2(g[0]);
            eta.push(e);
            let tau = two_sigma * e;
            let (st, ct) = tau.sin_cos();
            let u = a0.sample(pieces[idx].i);
            alpha.push(
                u.iter()
                    .zip(&perps[idx])
                    .map(|(x, p)| ct * x + st * p)
                    .collect::<Vec<f64>>(),
            );
        }

        let mut psi = Vec::with_capacity(m + 1);
        let mut curve = Vec::with_capacity(m + 1);
        let mut acc = 0.0;
        let mut point = vec![0.0; dim];
        psi.push(0.0);
        curve.push(point.clone());
        for idx in 0..m {
            let mass = dpsi[idx] * path.widths[idx];
            acc += mass;
            psi.push(acc);
            point
                .iter_mut()
                .zip(&alpha[idx])
                .for_each(|(p, a)| *p += mass * a);
            curve.push(point.clone());
        }
        if let Some(last) = psi.last_mut() {
            *last = 1.0;
        }
        path.psi.push(psi);
        path.dpsi.push(dpsi);
        path.eta.push(eta);
        path.alpha.push(alpha);
        path.curves.push(curve);
    }

    let end_eta = path.eta.last().expect("at least two times");
    for (idx, (&e, &w)) in end_eta.iter().zip(&omega).enumerate() {
        let dev = (e - w / two_sigma).abs();
        if dev > path.end_angle_error {
            path.end_angle_error = dev;
        }
        if dev > END_ANGLE_FAIL {
            return Err(Error::InvalidLift {
                piece: idx,
                deviation: dev,
            });
        }
    }
    debug_assert!(path.end_angle_error <= END_ANGLE_WARN || lift == LiftMode::Smooth);

    // Zeros of gamma between sampled times: only pieces whose q1 points away
    // from q0 can pass near the origin.
    for (idx, v) in q1.values.iter().enumerate() {
        if v[0] >= 0.0 {
            continue;
        }
        let (t, g) = min_gamma_norm(rho, *v);
        if g < VALIDITY_TOL {
            let k = (t * time_steps as f64).round() as usize;
            path.validity.push((k, idx));
        }
    }
    path.validity.sort_unstable();
    path.validity.dedup();
    Ok(path)
}

//! Closed curves: starting-point search, orthonormal frames and the
//! Grassmann distance at `sigma = 1`, and the closing projection.

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;
use serde::Serialize;

use crate::curves::{resample_arclength, AngleFunction, Curve, TangentFunction};
use crate::error::{Error, Result};
use crate::kernel::{match_rotation_invariant, match_tangents, Diffeo, MatchParams, MatchResult};

const FRAME_TOL: f64 = 1e-6;
const CLOSING_ITERS: usize = 200;
const CLOSING_TARGET: f64 = 1e-12;
const CLOSING_ACCEPT: f64 = 1e-8;

/// Pair of functions `(f, g)` on the midpoint grid, meant to be orthonormal in
/// `L^2([0, 1])`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Frame2 {
    pub f: Vec<f64>,
    pub g: Vec<f64>,
}

fn inner(u: &[f64], v: &[f64]) -> f64 {
    u.iter().zip(v).map(|(x, y)| x * y).sum::<f64>() / u.len() as f64
}

impl Frame2 {
    pub fn len(&self) -> usize {
        self.f.len()
    }

    pub fn is_empty(&self) -> bool {
        self.f.is_empty()
    }

    /// `(|f|^2, |g|^2, <f, g>)`.
    pub fn gram(&self) -> (f64, f64, f64) {
        (inner(&self.f, &self.f), inner(&self.g, &self.g), inner(&self.f, &self.g))
    }

    pub fn validate(&self) -> Result<()> {
        let (ff, gg, fg) = self.gram();
        if (ff - 1.0).abs() > FRAME_TOL || (gg - 1.0).abs() > FRAME_TOL || fg.abs() > FRAME_TOL {
            return Err(Error::BadFrame { ff, gg, fg });
        }
        Ok(())
    }

    /// `(-f, -g)`: the constant sign change of the square root.
    pub fn negated(&self) -> Frame2 {
        Frame2 {
            f: self.f.iter().map(|x| -x).collect(),
            g: self.g.iter().map(|x| -x).collect(),
        }
    }
}

/// `f = sqrt(2 dphi) cos(theta o phi / 2)`, `g = sqrt(2 dphi) sin(theta o phi / 2)`
/// on the midpoint grid of `theta`.
pub fn frame_from(phi: &Diffeo, theta: &AngleFunction) -> Frame2 {
    let n = theta.values.len();
    let mut f = Vec::with_capacity(n);
    let mut g = Vec::with_capacity(n);
    for i in 0..n {
        let s = (i as f64 + 0.5) / n as f64;
        let cell = ((phi.eval(s) * n as f64).floor() as usize).min(n - 1);
        let r = (2.0 * phi.derivative(s)).sqrt();
        let (sn, cs) = (0.5 * theta.values[cell]).sin_cos();
        f.push(r * cs);
        g.push(r * sn);
    }
    Frame2 { f, g }
}

/// Grassmann distance with its ingredients.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GrassmannResult {
    pub distance: f64,
    /// `[[<f0,f1>, <f0,g1>], [<g0,f1>, <g0,g1>]]`.
    pub gram: [[f64; 2]; 2],
    /// Singular values of `gram`, clamped to `[0, 1]`, largest first.
    pub singular_values: [f64; 2],
    /// Principal angles in `[0, pi/2]`, smallest first.
    pub angles: [f64; 2],
}

fn sym2_eigen(a: f64, b: f64, d: f64) -> (f64, f64) {
    let mean = 0.5 * (a + d);
    let rad = (0.25 * (a - d) * (a - d) + b * b).sqrt();
    (mean + rad, mean - rad)
}

/// Principal-angle distance `sqrt(theta_1^2 + theta_2^2)` between the planes
/// spanned by two frames.
///
/// Cosines are the singular values of the 2 x 2 inner-product matrix; sines
/// come from the component of `F1` orthogonal to `F0`, and each angle is
/// `atan2(sin, cos)` so that nearly equal planes give nearly zero.
pub fn grassmann_match(f0: &Frame2, f1: &Frame2) -> Result<GrassmannResult> {
    if f0.len() != f1.len() {
        return Err(Error::GridMismatch(f0.len(), f1.len()));
    }
    f0.validate()?;
    f1.validate()?;
    let m = [
        [inner(&f0.f, &f1.f), inner(&f0.f, &f1.g)],
        [inner(&f0.g, &f1.f), inner(&f0.g, &f1.g)],
    ];
    let [[a, b], [c, d]] = m;
    let p = ((a + d).powi(2) + (b - c).powi(2)).sqrt();
    let q = ((a - d).powi(2) + (b + c).powi(2)).sqrt();
    let cos = [(0.5 * (p + q)).clamp(0.0, 1.0), (0.5 * (p - q).abs()).clamp(0.0, 1.0)];

    let rf: Vec<f64> = (0..f1.len())
        .map(|k| f1.f[k] - a * f0.f[k] - c * f0.g[k])
        .collect();
    let rg: Vec<f64> = (0..f1.len())
        .map(|k| f1.g[k] - b * f0.f[k] - d * f0.g[k])
        .collect();
    let (hi, lo) = sym2_eigen(inner(&rf, &rf), inner(&rf, &rg), inner(&rg, &rg));
    let sin = [lo.max(0.0).sqrt().min(1.0), hi.max(0.0).sqrt().min(1.0)];

    let angles = [sin[0].atan2(cos[0]), sin[1].atan2(cos[1])];
    Ok(GrassmannResult {
        distance: angles[0].hypot(angles[1]),
        gram: m,
        singular_values: cos,
        angles,
    })
}

/// Grassmann distance, minimized over the constant signs `eps = +-1` of the
/// second frame.
pub fn grassmann_distance(f0: &Frame2, f1: &Frame2) -> Result<f64> {
    let plus = grassmann_match(f0, f1)?.distance;
    let minus = grassmann_match(f0, &f1.negated())?.distance;
    Ok(plus.min(minus))
}

/// Joint search over the `n` grid shifts of the first curve's starting
/// point and, if `rotation` is set, over rotations.
pub fn distance_closed_with(m0: &Curve, m1: &Curve, params: &MatchParams, rotation: bool) -> Result<MatchResult> {
    if !m0.is_closed() || !m1.is_closed() {
        return Err(Error::NotClosed);
    }
    let a0 = resample_arclength(m0, params.grid)?;
    let a1 = resample_arclength(m1, params.grid)?;
    match_closed(&a0, &a1, params, rotation)
}

/// Distance invariant to rotation and starting point; `offset` in the result
/// is the shift `k / n` of the first curve's start.
pub fn distance_closed(m0: &Curve, m1: &Curve, params: &MatchParams) -> Result<MatchResult> {
    distance_closed_with(m0, m1, params, true)
}

/// Offset (and optionally rotation) search on tangent functions of closed curves.
pub fn match_closed(
    a0: &TangentFunction,
    a1: &TangentFunction,
    params: &MatchParams,
    rotation: bool,
) -> Result<MatchResult> {
    let n = a0.len();
    let results = (0..n)
        .into_par_iter()
        .map(|k| {
            let shifted = a0.shifted(k);
            let mut r = if rotation {
                match_rotation_invariant(&shifted, a1, params)?
            } else {
                match_tangents(&shifted, a1, params)?
            };
            r.offset = Some(k as f64 / n as f64);
            Ok(r)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(results
        .into_iter()
        .reduce(|a, b| if b.distance < a.distance { b } else { a })
        .expect("at least two offsets"))
}

/// Makes the samples integrate to zero: `a -> (a - lambda) / |a - lambda|`
/// with `lambda` the point where the mean vanishes.
pub fn closing_projection(a: &TangentFunction) -> Result<TangentFunction> {
    let dirs = a.to_vecs();
    let weights = vec![1.0; dirs.len()];
    let closed = close_directions(&dirs, &weights)?;
    TangentFunction::new(closed, a.is_closed())
}

/// Weighted closing projection: finds `lambda` with
/// `sum w (a - lambda) / |a - lambda| = 0` by damped Newton steps on the
/// convex function `sum w |a - lambda|`, whose gradient that sum negates.
pub fn close_directions(dirs: &[Vec<f64>], weights: &[f64]) -> Result<Vec<Vec<f64>>> {
    let d = dirs.first().map_or(2, Vec::len);
    let total: f64 = weights.iter().sum();
    if dirs.is_empty() || total.is_nan() || total <= 0.0 {
        return Err(Error::BadConfig("closing projection needs positive weights".into()));
    }

    // Returns (objective, mean residual direction, hessian).
    let eval = |lam: &DVector<f64>| -> Option<(f64, DVector<f64>, DMatrix<f64>)> {
        let mut obj = 0.0;
        let mut grad = DVector::zeros(d);
        let mut hess = DMatrix::zeros(d, d);
        for (a, &w) in dirs.iter().zip(weights) {
            if w == 0.0 {
                continue;
            }
            let diff = DVector::from_iterator(d, a.iter().zip(lam.iter()).map(|(x, l)| x - l));
            let r = diff.norm();
            if r.is_nan() || r <= 1e-12 {
                return None;
            }
            let u = diff / r;
            obj += w * r;
            grad.axpy(w / total, &u, 1.0);
            hess += (DMatrix::identity(d, d) - &u * u.transpose()) * (w / (total * r));
        }
        Some((obj / total, grad, hess))
    };

    let mut lam = DVector::zeros(d);
    for (a, &w) in dirs.iter().zip(weights) {
        for (l, x) in lam.iter_mut().zip(a) {
            *l += w * x / total;
        }
    }
    let Some((mut obj, mut grad, mut hess)) = eval(&lam) else {
        return Err(Error::NoConvergence(0));
    };
    let mut iters = 0;
    while grad.norm() > CLOSING_TARGET && iters < CLOSING_ITERS {
        iters += 1;
        let step = match hess.clone().cholesky() {
            Some(ch) => ch.solve(&grad),
            None => grad.clone(),
        };
        let mut t = 1.0;
        let mut accepted = None;
        for _ in 0..60 {
            let trial = &lam + &step * t;
            if let Some(next) = eval(&trial) {
                if next.0 < obj || next.1.norm() < grad.norm() {
                    accepted = Some((trial, next));
                    break;
                }
            }
            t *= 0.5;
        }
        match accepted {
            Some((trial, next)) => {
                lam = trial;
                (obj, grad, hess) = next;
            }
            None => break,
        }
    }
    if grad.norm() > CLOSING_ACCEPT {
        return Err(Error::NoConvergence(iters));
    }
    Ok(dirs
        .iter()
        .map(|a| {
            let diff: Vec<f64> = a.iter().zip(lam.iter()).map(|(x, l)| x - l).collect();
            let r = diff.iter().map(|x| x * x).sum::<f64>().sqrt();
            diff.into_iter().map(|x| x / r).collect()
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curves::angle_lift;
    use std::f64::consts::PI;

    fn polygon(n: usize) -> Curve {
        let pts = (0..n)
            .map(|k| {
                let t = 2.0 * PI * k as f64 / n as f64;
                vec![t.cos(), t.sin()]
            })
            .collect();
        Curve::new(pts, true).unwrap()
    }

    fn circle_frame(n: usize) -> Frame2 {
        let a = resample_arclength(&polygon(n), n).unwrap();
        frame_from(&Diffeo::identity(n), &angle_lift(&a).unwrap())
    }

    #[test]
    fn circle_frame_is_orthonormal() {
        let fr = circle_frame(64);
        let (ff, gg, fg) = fr.gram();
        assert!((ff - 1.0).abs() < 1e-12 && (gg - 1.0).abs() < 1e-12 && fg.abs() < 1e-12);
        assert!((ff + gg - 2.0).abs() < 1e-14);
    }

    #[test]
    fn open_segment_frame_fails_validation() {
        let seg = Curve::new(vec![vec![0.0, 0.0], vec![1.0, 0.0]], false).unwrap();
        let a = resample_arclength(&seg, 8).unwrap();
        let fr = frame_from(&Diffeo::identity(8), &angle_lift(&a).unwrap());
        assert!(fr.f.iter().all(|&v| (v - 2f64.sqrt()).abs() < 1e-15));
        assert!(fr.g.iter().all(|&v| v == 0.0));
        assert!(matches!(fr.validate(), Err(Error::BadFrame { .. })));
    }

    #[test]
    fn grassmann_quotients_in_plane_rotation() {
        let f0 = circle_frame(32);
        assert!(grassmann_distance(&f0, &f0).unwrap() < 1e-12);
        let (s, c) = 0.8f64.sin_cos();
        let f1 = Frame2 {
            f: f0.f.iter().zip(&f0.g).map(|(f, g)| c * f + s * g).collect(),
            g: f0.f.iter().zip(&f0.g).map(|(f, g)| -s * f + c * g).collect(),
        };
        assert!(grassmann_distance(&f0, &f1).unwrap() < 1e-9);
    }

    #[test]
    fn orthogonal_planes_are_maximally_apart() {
        let n = 8;
        let unit = |k: usize| (0..n).map(|i| if i == k { (n as f64).sqrt() } else { 0.0 }).collect::<Vec<f64>>();
        let f0 = Frame2 { f: unit(0), g: unit(1) };
        let f1 = Frame2 { f: unit(2), g: unit(3) };
        let d = grassmann_distance(&f0, &f1).unwrap();
        assert!((d - PI / 2.0 * 2f64.sqrt()).abs() < 1e-15);
        let f2 = Frame2 { f: unit(0), g: unit(3) };
        assert!((grassmann_distance(&f0, &f2).unwrap() - PI / 2.0).abs() < 1e-15);
    }

    #[test]
    fn closing_projection_fixed_point() {
        let a = resample_arclength(&polygon(40), 40).unwrap();
        let closed = closing_projection(&a).unwrap();
        for (u, v) in a.samples().zip(closed.samples()) {
            assert!((u[0] - v[0]).abs() < 1e-10 && (u[1] - v[1]).abs() < 1e-10);
        }
    }

    #[test]
    fn closing_projection_removes_bias() {
        let n = 64;
        let dirs: Vec<Vec<f64>> = (0..n)
            .map(|k| {
                let t = 2.0 * PI * (k as f64 + 0.5) / n as f64;
                vec![t.cos() + 0.05, t.sin() - 0.03]
            })
            .collect();
        let a = TangentFunction::from_directions(dirs, true).unwrap();
        let closed = closing_projection(&a).unwrap();
        let mean = closed.mean();
        assert!(mean[0].hypot(mean[1]) < 1e-8);
        for (k, v) in closed.samples().enumerate() {
            let t = 2.0 * PI * (k as f64 + 0.5) / n as f64;
            assert!((v[0] - t.cos()).hypot(v[1] - t.sin()) < 0.1);
        }
    }

    #[test]
    fn concentrated_directions_do_not_close() {
        let dirs: Vec<Vec<f64>> = (0..20)
            .map(|k| {
                let t = 0.14 * (k as f64 / 19.0 - 0.5);
                vec![t.cos(), t.sin()]
            })
            .collect();
        let a = TangentFunction::new(dirs, false).unwrap();
        let m = a.mean();
        assert!(m[0].hypot(m[1]) > 0.99);
        match closing_projection(&a) {
            Err(Error::NoConvergence(_)) => {}
            Ok(closed) => {
                let worst = a
                    .samples()
                    .zip(closed.samples())
                    .map(|(u, v)| (u[0] - v[0]).hypot(u[1] - v[1]))
                    .fold(0.0, f64::max);
                assert!(worst > 1.0, "{worst}");
            }
            Err(e) => panic!("{e:?}"),
        }
    }

    #[test]
    fn offset_search_finds_shifted_start() {
        let n = 32;
        let m0 = polygon(n);
        let p = MatchParams::new(1.0, n).unwrap();
        let r = distance_closed_with(&m0, &m0.start_at(5), &p, false).unwrap();
        assert!(r.distance < 1e-6, "{}", r.distance);
        assert_eq!(r.offset, Some(5.0 / n as f64));
        let open = Curve::new(m0.points().to_vec(), false).unwrap();
        assert_eq!(distance_closed(&open, &m0, &p).unwrap_err(), Error::NotClosed);
    }
}

//! Rotation-invariant matching.
//!
//! Planar curves: a 64-angle grid over `[0, 2 pi)` followed by golden-section
//! refinement around the best grid angle. Higher dimensions alternate a
//! weighted Procrustes fit on the matched tangents with the DP. Neither search
//! certifies a global optimum; both always include the unrotated match.

use std::f64::consts::TAU;

use nalgebra::DMatrix;
use rayon::prelude::*;

use super::distance::match_tangents;
use super::{Diffeo, MatchParams, MatchResult, Rotation};
use crate::curves::{resample_arclength, Curve, TangentFunction};
use crate::error::{Error, Result};

pub const COARSE_ANGLES: usize = 64;
const GOLDEN_WIDTH: f64 = 1e-10;
const PROCRUSTES_ITERS: usize = 50;
const PROCRUSTES_TOL: f64 = 1e-8;

/// Minimizes the distance over rotations `R a0` of the first tangent function.
pub fn match_rotation_invariant(
    a0: &TangentFunction,
    a1: &TangentFunction,
    params: &MatchParams,
) -> Result<MatchResult> {
    if a0.dim() != a1.dim() {
        return Err(Error::DimensionMismatch {
            expected: a0.dim(),
            found: a1.dim(),
        });
    }
    if a0.dim() == 2 {
        planar_search(a0, a1, params)
    } else {
        procrustes_search(a0, a1, params)
    }
}

/// Rotation-invariant distance between two curves; the returned rotation acts
/// on `m0`.
pub fn distance_rotation_invariant(
    m0: &Curve,
    m1: &Curve,
    params: &MatchParams,
) -> Result<MatchResult> {
    let a0 = resample_arclength(m0, params.grid)?;
    let a1 = resample_arclength(m1, params.grid)?;
    match_rotation_invariant(&a0, &a1, params)
}

fn at_angle(
    a0: &TangentFunction,
    a1: &TangentFunction,
    params: &MatchParams,
    angle: f64,
) -> Result<MatchResult> {
    let mut r = match_tangents(&a0.rotated(angle), a1, params)?;
    r.rotation = Some(Rotation::Angle(angle.rem_euclid(TAU)));
    Ok(r)
}

fn planar_search(
    a0: &TangentFunction,
    a1: &TangentFunction,
    params: &MatchParams,
) -> Result<MatchResult> {
    let h = TAU / COARSE_ANGLES as f64;
    let coarse = (0..COARSE_ANGLES)
        .into_par_iter()
        .map(|k| at_angle(a0, a1, params, k as f64 * h))
        .collect::<Result<Vec<_>>>()?;
    let mut best = coarse
        .into_iter()
        .reduce(|a, b| if b.distance < a.distance { b } else { a })
        .expect("non-empty grid");
    let center = match best.rotation {
        Some(Rotation::Angle(c)) => c,
        _ => unreachable!(),
    };

    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let (mut lo, mut hi) = (center - h, center + h);
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let mut r1 = at_angle(a0, a1, params, x1)?;
    let mut r2 = at_angle(a0, a1, params, x2)?;
    while hi - lo > GOLDEN_WIDTH {
        if r1.distance <= r2.distance {
            hi = x2;
            x2 = x1;
            r2 = r1;
            x1 = hi - inv_phi * (hi - lo);
            r1 = at_angle(a0, a1, params, x1)?;
        } else {
            lo = x1;
            x1 = x2;
            r1 = r2;
            x2 = lo + inv_phi * (hi - lo);
            r2 = at_angle(a0, a1, params, x2)?;
        }
    }
    for r in [r1, r2] {
        if r.distance < best.distance {
            best = r;
        }
    }
    Ok(best)
}

fn identity_matrix(d: usize) -> Vec<Vec<f64>> {
    (0..d)
        .map(|i| (0..d).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
        .collect()
}

/// Rotation `R` maximizing `sum w a1(phi(s))^T R a0(s)` over matched pieces,
/// with weights `sqrt(ds dst)`.
pub(crate) fn fit_rotation(a0: &TangentFunction, a1: &TangentFunction, phi: &Diffeo) -> Vec<Vec<f64>> {
    let d = a0.dim();
    let mut m = DMatrix::<f64>::zeros(d, d);
    for piece in phi.pieces(a0.len()) {
        let w = piece.weight();
        let (u, v) = (a0.sample(piece.i), a1.sample(piece.j));
        for r in 0..d {
            for c in 0..d {
                m[(r, c)] += w * u[r] * v[c];
            }
        }
    }
    let svd = m.svd(true, true);
    let u = svd.u.expect("requested U");
    let v = svd.v_t.expect("requested V^T").transpose();
    let mut rot = &v * u.transpose();
    if rot.determinant() < 0.0 {
        let mut v_fixed = v.clone();
        for r in 0..d {
            v_fixed[(r, d - 1)] = -v_fixed[(r, d - 1)];
        }
        rot = v_fixed * u.transpose();
    }
    (0..d).map(|r| (0..d).map(|c| rot[(r, c)]).collect()).collect()
}

fn procrustes_search(
    a0: &TangentFunction,
    a1: &TangentFunction,
    params: &MatchParams,
) -> Result<MatchResult> {
    let mut best = match_tangents(a0, a1, params)?;
    best.rotation = Some(Rotation::Matrix(identity_matrix(a0.dim())));
    let mut current = best.clone();
    for _ in 0..PROCRUSTES_ITERS {
        let rot = fit_rotation(a0, a1, &current.phi);
        let mut next = match_tangents(&a0.transformed(&rot), a1, params)?;
        next.rotation = Some(Rotation::Matrix(rot));
        let improvement = best.distance - next.distance;
        if next.distance < best.distance {
            best = next.clone();
        }
        current = next;
        if improvement < PROCRUSTES_TOL {
            break;
        }
    }
    Ok(best)
}

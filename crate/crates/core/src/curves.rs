//! Curve ingestion and the tangent-function representation.
//!
//! All tangent functions live on the cell-centered grid `s_i = (i + 1/2) / n`
//! of `[0, 1]`, so integrals over the parameter domain become plain averages.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::vecmath::{dot, norm};

const UNIT_TOL: f64 = 1e-12;

/// An ordered polyline in R^d (d >= 2).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Curve {
    points: Vec<Vec<f64>>,
    closed: bool,
}

impl Curve {
    pub fn new(points: Vec<Vec<f64>>, closed: bool) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::ZeroLength);
        }
        let dim = points[0].len();
        if dim < 2 {
            return Err(Error::DimensionMismatch {
                expected: 2,
                found: dim,
            });
        }
        if let Some(p) = points.iter().find(|p| p.len() != dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: p.len(),
            });
        }
        let curve = Curve { points, closed };
        if curve.length() <= 0.0 {
            return Err(Error::ZeroLength);
        }
        Ok(curve)
    }

    pub fn points(&self) -> &[Vec<f64>] {
        &self.points
    }

    pub fn dim(&self) -> usize {
        self.points[0].len()
    }

    pub fn is_closed(&self) -> bool {
        self.closed
    }

    /// Segment vectors of the polyline, including the closing segment of a
    /// closed curve.
    fn segments(&self) -> Vec<Vec<f64>> {
        let mut segs: Vec<Vec<f64>> = self
            .points
            .windows(2)
            .map(|w| w[1].iter().zip(&w[0]).map(|(b, a)| b - a).collect())
            .collect();
        if self.closed {
            let first = &self.points[0];
            let last = &self.points[self.points.len() - 1];
            segs.push(first.iter().zip(last).map(|(b, a)| b - a).collect());
        }
        segs
    }

    pub fn length(&self) -> f64 {
        self.segments().iter().map(|v| norm(v)).sum()
    }

    /// Applies `x -> R x` to every point (`matrix` is row-major d x d).
    pub fn transformed(&self, matrix: &[Vec<f64>]) -> Curve {
        let points = self
            .points
            .iter()
            .map(|p| matrix.iter().map(|row| dot(row, p)).collect())
            .collect();
        Curve {
            points,
            closed: self.closed,
        }
    }

    /// Planar rotation by `angle` radians (d = 2 only).
    pub fn rotated(&self, angle: f64) -> Curve {
        let (s, c) = angle.sin_cos();
        self.transformed(&[vec![c, -s], vec![s, c]])
    }

    /// Re-indexes a closed curve so that it starts at vertex `k`.
    pub fn start_at(&self, k: usize) -> Curve {
        let mut points = self.points.clone();
        points.rotate_left(k % self.points.len());
        Curve {
            points,
            closed: self.closed,
        }
    }
}

/// Unit tangent samples on the midpoint grid of `[0, 1]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TangentFunction {
    samples: Vec<f64>,
    dim: usize,
    closed: bool,
}

impl TangentFunction {
    /// Builds a tangent function from unit vectors; each must have norm 1
    /// within `1e-12`.
    pub fn new(samples: Vec<Vec<f64>>, closed: bool) -> Result<Self> {
        if samples.len() < 2 {
            return Err(Error::BadGrid(samples.len()));
        }
        let dim = samples[0].len();
        let mut flat = Vec::with_capacity(samples.len() * dim);
        for (index, v) in samples.iter().enumerate() {
            if v.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: v.len(),
                });
            }
            let nv = norm(v);
            if (nv - 1.0).abs() > UNIT_TOL {
                return Err(Error::NotUnit { index, norm: nv });
            }
            flat.extend_from_slice(v);
        }
        Ok(TangentFunction {
            samples: flat,
            dim,
            closed,
        })
    }

    /// Normalizes arbitrary nonzero directions into a tangent function.
    pub fn from_directions(directions: Vec<Vec<f64>>, closed: bool) -> Result<Self> {
        let normalized = directions
            .into_iter()
            .enumerate()
            .map(|(index, v)| {
                let nv = norm(&v);
                if nv == 0.0 || !nv.is_finite() {
                    Err(Error::NotUnit { index, norm: nv })
                } else {
                    Ok(v.into_iter().map(|x| x / nv).collect())
                }
            })
            .collect::<Result<Vec<Vec<f64>>>>()?;
        Self::new(normalized, closed)
    }

    pub(crate) fn from_flat(samples: Vec<f64>, dim: usize, closed: bool) -> Self {
        debug_assert_eq!(samples.len() % dim, 0);
        TangentFunction {
            samples,
            dim,
            closed,
        }
    }

    pub fn len(&self) -> usize {
        self.samples.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_closed(&self) -> bool {
        self.closed
    }

    pub fn sample(&self, i: usize) -> &[f64] {
        &self.samples[i * self.dim..(i + 1) * self.dim]
    }

    pub fn samples(&self) -> impl Iterator<Item = &[f64]> {
        self.samples.chunks_exact(self.dim)
    }

    pub fn to_vecs(&self) -> Vec<Vec<f64>> {
        self.samples().map(<[f64]>::to_vec).collect()
    }

    /// Grid midpoint `s_i`.
    pub fn grid_point(&self, i: usize) -> f64 {
        (i as f64 + 0.5) / self.len() as f64
    }

    /// Mean of the samples, i.e. the end-to-start displacement of the curve.
    pub fn mean(&self) -> Vec<f64> {
        let n = self.len() as f64;
        let mut m = vec![0.0; self.dim];
        for v in self.samples() {
            m.iter_mut().zip(v).for_each(|(a, b)| *a += b);
        }
        m.iter_mut().for_each(|a| *a /= n);
        m
    }

    /// Length-one polyline obtained by integrating the samples from the origin
    /// (`n + 1` points).
    pub fn reconstruct(&self) -> Vec<Vec<f64>> {
        let n = self.len() as f64;
        let mut out = Vec::with_capacity(self.len() + 1);
        let mut p = vec![0.0; self.dim];
        out.push(p.clone());
        for v in self.samples() {
            p.iter_mut().zip(v).for_each(|(a, b)| *a += b / n);
            out.push(p.clone());
        }
        out
    }

    /// Applies a d x d matrix to every sample.
    pub fn transformed(&self, matrix: &[Vec<f64>]) -> TangentFunction {
        let mut samples = Vec::with_capacity(self.samples.len());
        for v in self.samples() {
            samples.extend(matrix.iter().map(|row| dot(row, v)));
        }
        TangentFunction::from_flat(samples, self.dim, self.closed)
    }

    /// Planar rotation of every sample by `angle` (d = 2).
    pub fn rotated(&self, angle: f64) -> TangentFunction {
        let (s, c) = angle.sin_cos();
        let mut samples = Vec::with_capacity(self.samples.len());
        for v in self.samples() {
            samples.push(c * v[0] - s * v[1]);
            samples.push(s * v[0] + c * v[1]);
        }
        TangentFunction::from_flat(samples, 2, self.closed)
    }

    /// Cyclic shift: sample `i` of the result is sample `(i + k) mod n`.
    pub fn shifted(&self, k: usize) -> TangentFunction {
        let mut samples = self.samples.clone();
        samples.rotate_left((k % self.len()) * self.dim);
        TangentFunction::from_flat(samples, self.dim, self.closed)
    }
}

/// Tangent angle in radians on the midpoint grid (planar curves).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AngleFunction {
    pub values: Vec<f64>,
}

impl AngleFunction {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// Scalar samples of a function on a uniform grid of `[0, 1]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampledFunction {
    values: Vec<f64>,
}

impl SampledFunction {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.len() < 2 {
            return Err(Error::BadGrid(values.len()));
        }
        Ok(SampledFunction { values })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn total_variation(&self) -> f64 {
        self.values.windows(2).map(|w| (w[1] - w[0]).abs()).sum()
    }
}

/// Unit tangent of the length-normalized polyline sampled at `n` midpoints.
///
/// Each polygon segment owns the arc-length interval it spans; a grid cell
/// takes the direction of the segment containing its midpoint. Zero-length
/// segments are dropped.
pub fn resample_arclength(curve: &Curve, n: usize) -> Result<TangentFunction> {
    if n < 2 {
        return Err(Error::BadGrid(n));
    }
    let segments = curve.segments();
    let lengths: Vec<f64> = segments.iter().map(|v| norm(v)).collect();
    let total: f64 = lengths.iter().sum();
    if !total.is_finite() || total <= 0.0 {
        return Err(Error::ZeroLength);
    }
    let floor = total * 1e-14;
    let mut directions = Vec::with_capacity(segments.len());
    let mut ends = Vec::with_capacity(segments.len());
    let mut acc = 0.0;
    for (v, &len) in segments.iter().zip(&lengths) {
        if len <= floor {
            continue;
        }
        acc += len;
        ends.push(acc / total);
        directions.push(v.iter().map(|x| x / len).collect::<Vec<f64>>());
    }

    let dim = curve.dim();
    let mut samples = Vec::with_capacity(n * dim);
    let mut k = 0;
    for i in 0..n {
        let s = (i as f64 + 0.5) / n as f64;
        while k + 1 < ends.len() && ends[k] <= s {
            k += 1;
        }
        samples.extend_from_slice(&directions[k]);
    }
    Ok(TangentFunction::from_flat(samples, dim, curve.is_closed()))
}

/// Continuous angle lift of a planar tangent function.
///
/// `values[0]` lies in `(-pi, pi]` and consecutive values differ by the signed
/// turning angle between samples, which must stay below `pi - 1e-9`.
pub fn angle_lift(a: &TangentFunction) -> Result<AngleFunction> {
    if a.dim() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            found: a.dim(),
        });
    }
    let mut values = Vec::with_capacity(a.len());
    let first = a.sample(0);
    values.push(first[1].atan2(first[0]));
    for i in 1..a.len() {
        let (u, v) = (a.sample(i - 1), a.sample(i));
        let turn = (u[0] * v[1] - u[1] * v[0]).atan2(u[0] * v[0] + u[1] * v[1]);
        if turn.abs() >= PI - 1e-9 {
            return Err(Error::LiftJump { index: i - 1 });
        }
        values.push(values[i - 1] + turn);
    }
    Ok(AngleFunction { values })
}

/// Sign of `df` re-sampled in the total-variation parameter, embedded in the
/// plane as `(+-1, 0)`.
///
/// This is the tangent of the horizontal curve `u -> (f(u), 0)`; flat
/// stretches carry no variation and are skipped.
pub fn sign_representation(f: &SampledFunction, n: usize) -> Result<TangentFunction> {
    if f.total_variation() <= 0.0 {
        return Err(Error::ZeroVariation);
    }
    let points = f.values().iter().map(|&v| vec![v, 0.0]).collect();
    let curve = Curve {
        points,
        closed: false,
    };
    resample_arclength(&curve, n).map_err(|e| match e {
        Error::ZeroLength => Error::ZeroVariation,
        other => other,
    })
}

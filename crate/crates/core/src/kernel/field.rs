use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::Sigma;
use crate::curves::TangentFunction;
use crate::error::{Error, Result};
use crate::io::fmt_f64;
use crate::vecmath::{dot, unit_angle};

/// Pointwise angles `omega[i][j]` between `a0(s_i)` and `a1(s_j)`, in `[0, pi]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OmegaField {
    pub n: usize,
    pub values: Vec<f64>,
}

impl OmegaField {
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.n + j]
    }
}

/// `max(f_sigma, 0)` on the n x n cell grid; row `i` follows the first curve,
/// column `j` the second.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CostField {
    pub n: usize,
    pub sigma: f64,
    pub values: Vec<f64>,
}

impl CostField {
    /// Wraps precomputed values, clamping negatives to zero.
    pub fn from_values(n: usize, sigma: Sigma, mut values: Vec<f64>) -> Result<Self> {
        if values.len() != n * n {
            return Err(Error::GridMismatch(values.len(), n * n));
        }
        values.iter_mut().for_each(|v| *v = v.max(0.0));
        Ok(CostField {
            n,
            sigma: sigma.get(),
            values,
        })
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.n + j]
    }

    /// Heatmap CSV: `n` rows of `n` comma-separated values.
    pub fn to_csv(&self) -> String {
        let mut out = String::with_capacity(self.n * self.n * 24);
        for row in self.values.chunks_exact(self.n) {
            for (k, v) in row.iter().enumerate() {
                if k > 0 {
                    out.push(',');
                }
                let _ = write!(out, "{}", fmt_f64(*v));
            }
            out.push('\n');
        }
        out
    }
}

/// `f_sigma = cos(omega / (2 sigma))` before clamping.
#[inline]
pub fn kernel_value(omega: f64, sigma: Sigma) -> f64 {
    (omega / (2.0 * sigma.get())).cos()
}

fn check_pair(a0: &TangentFunction, a1: &TangentFunction) -> Result<()> {
    if a0.dim() != a1.dim() {
        return Err(Error::DimensionMismatch {
            expected: a0.dim(),
            found: a1.dim(),
        });
    }
    if a0.len() != a1.len() {
        return Err(Error::GridMismatch(a0.len(), a1.len()));
    }
    Ok(())
}

pub fn omega_field(a0: &TangentFunction, a1: &TangentFunction) -> Result<OmegaField> {
    check_pair(a0, a1)?;
    let n = a0.len();
    let mut values = Vec::with_capacity(n * n);
    for u in a0.samples() {
        values.extend(a1.samples().map(|v| unit_angle(u, v)));
    }
    Ok(OmegaField { n, values })
}

/// `max(f_sigma, 0)` for one pair of unit vectors. At sigma = 1/2 and 1 the
/// closed forms `a . b` and `|a + b| / 2` avoid the trigonometric round trip.
#[inline]
fn clamped_kernel(u: &[f64], v: &[f64], sigma: Sigma) -> f64 {
    let s = sigma.get();
    if s == 0.5 {
        dot(u, v).clamp(0.0, 1.0)
    } else if s == 1.0 {
        let sum2: f64 = u.iter().zip(v).map(|(x, y)| (x + y) * (x + y)).sum();
        (0.5 * sum2.sqrt()).min(1.0)
    } else {
        kernel_value(unit_angle(u, v), sigma).max(0.0)
    }
}

pub fn cost_field(a0: &TangentFunction, a1: &TangentFunction, sigma: Sigma) -> Result<CostField> {
    check_pair(a0, a1)?;
    let n = a0.len();
    let mut values = Vec::with_capacity(n * n);
    for u in a0.samples() {
        values.extend(a1.samples().map(|v| clamped_kernel(u, v, sigma)));
    }
    Ok(CostField {
        n,
        sigma: sigma.get(),
        values,
    })
}

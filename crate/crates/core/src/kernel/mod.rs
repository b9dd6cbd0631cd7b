//! Cost fields, the dynamic-programming matcher and curve distances.

mod diffeo;
mod distance;
mod dp;
mod energy;
mod field;
mod rotation;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use diffeo::{clip_segment, Diffeo, PathPiece};
pub use distance::{distance_1d, distance_open, match_tangents};
pub use dp::{dp_match, StepSet};
pub use energy::energy;
pub use field::{cost_field, kernel_value, omega_field, CostField, OmegaField};
pub use rotation::{distance_rotation_invariant, match_rotation_invariant, COARSE_ANGLES};

/// Weight balancing reparametrization against tangent rotation.
///
/// Only values with `2 sigma >= 1` define a distance.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct Sigma(f64);

impl Sigma {
    pub fn new(value: f64) -> Result<Self> {
        if value.is_finite() && 2.0 * value >= 1.0 {
            Ok(Sigma(value))
        } else {
            Err(Error::BadSigma(value))
        }
    }

    pub fn get(self) -> f64 {
        self.0
    }
}

impl TryFrom<f64> for Sigma {
    type Error = Error;

    fn try_from(value: f64) -> Result<Self> {
        Sigma::new(value)
    }
}

impl From<Sigma> for f64 {
    fn from(s: Sigma) -> f64 {
        s.0
    }
}

/// Everything a matcher needs besides the two curves.
#[derive(Debug, Clone)]
pub struct MatchParams {
    pub sigma: Sigma,
    pub grid: usize,
    pub steps: StepSet,
}

impl MatchParams {
    pub const DEFAULT_GRID: usize = 256;
    pub const DEFAULT_K_MAX: usize = 4;

    pub fn new(sigma: f64, grid: usize) -> Result<Self> {
        if grid < 2 {
            return Err(Error::BadGrid(grid));
        }
        Ok(MatchParams {
            sigma: Sigma::new(sigma)?,
            grid,
            steps: StepSet::coprime(Self::DEFAULT_K_MAX),
        })
    }

    pub fn with_k_max(mut self, k_max: usize) -> Self {
        self.steps = StepSet::coprime(k_max);
        self
    }

    pub fn with_steps(mut self, steps: StepSet) -> Self {
        self.steps = steps;
        self
    }
}

/// Rotation applied to the first curve before matching.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Rotation {
    /// Planar counterclockwise angle `c` in radians.
    Angle(f64),
    /// Row-major d x d orthogonal matrix.
    Matrix(Vec<Vec<f64>>),
}

impl Rotation {
    pub fn matrix(&self) -> Vec<Vec<f64>> {
        match self {
            Rotation::Angle(c) => {
                let (s, co) = c.sin_cos();
                vec![vec![co, -s], vec![s, co]]
            }
            Rotation::Matrix(m) => m.clone(),
        }
    }
}

/// Outcome of a distance computation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatchResult {
    pub distance: f64,
    pub score: f64,
    pub sigma: f64,
    pub phi: Diffeo,
    pub rotation: Option<Rotation>,
    pub offset: Option<f64>,
}

impl MatchResult {
    pub(crate) fn from_score(score: f64, sigma: Sigma, phi: Diffeo) -> Self {
        let score = score.clamp(0.0, 1.0);
        MatchResult {
            distance: 2.0 * score.acos(),
            score,
            sigma: sigma.get(),
            phi,
            rotation: None,
            offset: None,
        }
    }
}

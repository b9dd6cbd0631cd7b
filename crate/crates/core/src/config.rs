//! Run configuration shared by the command-line front end and the bindings.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernel::{MatchParams, Sigma};

/// How the matched angle `omega(s)` is chosen along the path.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum LiftMode {
    /// Pointwise angle in `[0, pi]`; always defined.
    #[default]
    Measurable,
    /// Continuous lift along `s`, starting in `[0, pi]`; fails on ambiguous jumps.
    Smooth,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Config {
    pub sigma: f64,
    pub n: usize,
    pub k_max: usize,
    pub time_steps: usize,
    pub lift_mode: LiftMode,
    pub rotation: bool,
    pub offset: bool,
    pub close_frames: bool,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            sigma: 1.0,
            n: MatchParams::DEFAULT_GRID,
            k_max: MatchParams::DEFAULT_K_MAX,
            time_steps: 16,
            lift_mode: LiftMode::Measurable,
            rotation: false,
            offset: false,
            close_frames: false,
        }
    }
}

impl Config {
    pub fn validate(&self) -> Result<()> {
        Sigma::new(self.sigma)?;
        if self.n < 8 {
            return Err(Error::BadConfig(format!("grid size must be at least 8, got {}", self.n)));
        }
        if self.k_max < 1 {
            return Err(Error::BadConfig("k_max must be at least 1".into()));
        }
        if self.k_max > 16 {
            return Err(Error::BadConfig(format!("k_max must be at most 16, got {}", self.k_max)));
        }
        if self.time_steps < 2 {
            return Err(Error::BadConfig(format!(
                "time steps must be at least 2, got {}",
                self.time_steps
            )));
        }
        Ok(())
    }

    pub fn sigma(&self) -> Result<Sigma> {
        Sigma::new(self.sigma)
    }

    pub fn match_params(&self) -> Result<MatchParams> {
        self.validate()?;
        Ok(MatchParams::new(self.sigma, self.n)?.with_k_max(self.k_max))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_valid() {
        let c = Config::default();
        c.validate().unwrap();
        assert_eq!(c.match_params().unwrap().steps.pairs().len(), 11);
    }

    #[test]
    fn rejects_out_of_range() {
        let bad = |f: fn(&mut Config)| {
            let mut c = Config::default();
            f(&mut c);
            c.validate().unwrap_err()
        };
        assert_eq!(bad(|c| c.sigma = 0.25), Error::BadSigma(0.25));
        assert!(matches!(bad(|c| c.n = 7), Error::BadConfig(_)));
        assert!(matches!(bad(|c| c.k_max = 0), Error::BadConfig(_)));
        assert!(matches!(bad(|c| c.time_steps = 1), Error::BadConfig(_)));
        assert!(matches!(bad(|c| c.sigma = f64::NAN), Error::BadSigma(_)));
    }
}

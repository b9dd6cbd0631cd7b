use super::dp::dp_match;
use super::field::cost_field;
use super::{MatchParams, MatchResult};
use crate::curves::{resample_arclength, sign_representation, Curve, SampledFunction, TangentFunction};
use crate::error::Result;

/// Distance between two tangent functions on the same grid, without any
/// rotation or offset search.
pub fn match_tangents(
    a0: &TangentFunction,
    a1: &TangentFunction,
    params: &MatchParams,
) -> Result<MatchResult> {
    let field = cost_field(a0, a1, params.sigma)?;
    let (phi, score) = dp_match(&field, &params.steps);
    Ok(MatchResult::from_score(score, params.sigma, phi))
}

/// `d_sigma(m0, m1) = 2 acos(max_phi sum sqrt(dphi) f_sigma)` on the
/// resampled unit tangents.
pub fn distance_open(m0: &Curve, m1: &Curve, params: &MatchParams) -> Result<MatchResult> {
    let a0 = resample_arclength(m0, params.grid)?;
    let a1 = resample_arclength(m1, params.grid)?;
    match_tangents(&a0, &a1, params)
}

/// Distance between functions modulo increasing reparametrization, through
/// their total-variation sign representations.
pub fn distance_1d(
    f0: &SampledFunction,
    f1: &SampledFunction,
    params: &MatchParams,
) -> Result<MatchResult> {
    let a0 = sign_representation(f0, params.grid)?;
    let a1 = sign_representation(f1, params.grid)?;
    match_tangents(&a0, &a1, params)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;
    use std::f64::consts::PI;

    fn segment(dx: f64, dy: f64) -> Curve {
        Curve::new(vec![vec![0.0, 0.0], vec![dx, dy]], false).unwrap()
    }

    #[test]
    fn identical_curves_have_zero_distance() {
        let m = Curve::new(
            vec![vec![0.0, 0.0], vec![1.0, 0.2], vec![1.5, 1.0], vec![0.7, 1.9]],
            false,
        )
        .unwrap();
        let r = distance_open(&m, &m, &MatchParams::new(1.0, 64).unwrap()).unwrap();
        assert!(r.distance < 1e-6);
        assert!(r.phi.max_deviation_from_identity() < 1e-12);
    }

    #[test]
    fn antipodal_segments() {
        let (a, b) = (segment(1.0, 0.0), segment(-1.0, 0.0));
        let r = distance_open(&a, &b, &MatchParams::new(1.0, 32).unwrap()).unwrap();
        assert!((r.distance - PI).abs() < 1e-6);
        let r = distance_open(&a, &b, &MatchParams::new(2.0, 32).unwrap()).unwrap();
        assert!((r.distance - PI / 2.0).abs() < 1e-6);
    }

    #[test]
    fn zero_length_propagates() {
        let z = Curve::new(vec![vec![0.0, 0.0], vec![0.0, 0.0], vec![1.0, 0.0]], false).unwrap();
        assert!(distance_open(&z, &z, &MatchParams::new(1.0, 8).unwrap()).is_ok());
        assert_eq!(MatchParams::new(0.4, 8).unwrap_err(), Error::BadSigma(0.4));
    }

    #[test]
    fn one_dimensional_reversal() {
        let up = SampledFunction::new((0..10).map(f64::from).collect()).unwrap();
        let down = SampledFunction::new((0..10).rev().map(f64::from).collect()).unwrap();
        let r = distance_1d(&up, &down, &MatchParams::new(1.0, 32).unwrap()).unwrap();
        assert!((r.distance - PI).abs() < 1e-6);
        let flat = SampledFunction::new(vec![1.0; 4]).unwrap();
        assert_eq!(
            distance_1d(&up, &flat, &MatchParams::new(1.0, 32).unwrap()).unwrap_err(),
            Error::ZeroVariation
        );
    }
}

//! Elastic distances between length-normalized curves.
//!
//! Curves are compared through their unit tangents expressed as functions of
//! normalized arc length. A metamorphosis metric (reparametrization plus a
//! pointwise rotation of the tangent, weighted by `1/sigma^2`) reduces, for a
//! fixed end reparametrization, to a great circle on the unit sphere of
//! `L^2([0,1], R^2)`. The remaining optimization over reparametrizations is a
//! dynamic program over a piecewise-constant cost field.
//!
//! Module map:
//! - [`curves`]: ingestion, arc-length resampling, angle lifts, 1D sign
//!   representations.
//! - [`kernel`]: cost fields, the DP matcher, distances (open, rotation
//!   invariant, 1D) and the discrete path energy.
//! - [`geodesic`]: explicit optimal paths between two curves.
//! - [`closed`]: offset/rotation invariant distances for closed curves,
//!   Grassmann frames and the closing projection.
//! - [`io`] and [`config`]: file formats and CLI configuration.

pub mod closed;
pub mod config;
pub mod curves;
mod error;
pub mod geodesic;
pub mod io;
pub mod kernel;
pub(crate) mod vecmath;

pub use closed::{
    close_directions, closing_projection, distance_closed, distance_closed_with, frame_from,
    grassmann_distance, grassmann_match, match_closed, Frame2, GrassmannResult,
};
pub use config::{Config, LiftMode};
pub use curves::{
    angle_lift, resample_arclength, sign_representation, AngleFunction, Curve, SampledFunction,
    TangentFunction,
};
pub use error::{Error, Result};
pub use geodesic::{
    great_circle, pointwise_interpolant, reconstruct_path, sphere_endpoints, GeodesicPath,
    SphereEndpoints, SphereFunction,
};
pub use kernel::{
    cost_field, distance_1d, distance_open, distance_rotation_invariant, dp_match, energy,
    match_rotation_invariant, match_tangents, CostField, Diffeo, MatchParams, MatchResult,
    Rotation, Sigma, StepSet,
};

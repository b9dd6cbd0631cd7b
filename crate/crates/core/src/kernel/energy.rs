use super::Sigma;
use crate::error::{Error, Result};
use crate::geodesic::GeodesicPath;
use crate::vecmath::unit_angle;

/// Discrete path energy, the time sum of
/// `sum_s 4 [|d sqrt(dpsi)|^2 + 4 sqrt(dpsi_0 dpsi_1) sin^2(theta / 4 sigma)] ds / dt`
/// with `theta` the angle between consecutive tangents.
///
/// Per piece this is the squared chord between the polar points
/// `(sqrt(dpsi), theta / 2 sigma)` of consecutive frames. It tends to
/// `4 |d sqrt(dpsi)|^2 + |d alpha|^2 dpsi / sigma^2` as `dt` shrinks and
/// stays accurate where `dpsi` passes close to zero and the tangent turns
/// abruptly.
pub fn energy(path: &GeodesicPath, sigma: Sigma) -> Result<f64> {
    let quarter = 0.25 / sigma.get();
    for (k, row) in path.dpsi.iter().enumerate() {
        if let Some(piece) = row.iter().position(|&v| !v.is_finite() || v < 0.0) {
            return Err(Error::DegeneratePath { time_index: k, piece });
        }
    }
    let mut total = 0.0;
    for k in 0..path.times.len() - 1 {
        let dt = path.times[k + 1] - path.times[k];
        let (d0, d1) = (&path.dpsi[k], &path.dpsi[k + 1]);
        let (a0, a1) = (&path.alpha[k], &path.alpha[k + 1]);
        let mut step = 0.0;
        for m in 0..path.widths.len() {
            let (r0, r1) = (d0[m].sqrt(), d1[m].sqrt());
            let stretch = 4.0 * (r1 - r0).powi(2);
            let half = (unit_angle(&a0[m], &a1[m]) * quarter).sin();
            step += (stretch + 16.0 * r0 * r1 * half * half) * path.widths[m];
        }
        total += step / dt;
    }
    Ok(total)
}

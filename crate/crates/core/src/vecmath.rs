//! Slice helpers for small vectors in R^d.

#[inline]
pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[inline]
pub fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// Angle in `[0, pi]` between two unit vectors.
///
/// Uses `2 atan2(|a - b|, |a + b|)` (and `atan2(|cross|, dot)` in the plane),
/// which stays accurate near 0 and near pi where `acos(dot)` does not.
#[inline]
pub fn unit_angle(a: &[f64], b: &[f64]) -> f64 {
    if a.len() == 2 {
        let cross = a[0] * b[1] - a[1] * b[0];
        let d = a[0] * b[0] + a[1] * b[1];
        return cross.abs().atan2(d);
    }
    let mut diff = 0.0;
    let mut sum = 0.0;
    for (x, y) in a.iter().zip(b) {
        diff += (x - y) * (x - y);
        sum += (x + y) * (x + y);
    }
    2.0 * diff.sqrt().atan2(sum.sqrt())
}

/// Rotates a planar vector counterclockwise by 90 degrees.
#[inline]
pub fn perp2(a: &[f64]) -> [f64; 2] {
    [-a[1], a[0]]
}

/// A deterministic unit vector orthogonal to `a` (`a` unit, any dimension >= 2).
pub fn default_perpendicular(a: &[f64]) -> Vec<f64> {
    let d = a.len();
    if d == 2 {
        return perp2(a).to_vec();
    }
    let threshold = 0.5 / (d as f64).sqrt();
    for k in 0..d {
        let mut v: Vec<f64> = a.iter().map(|x| -x * a[k]).collect();
        v[k] += 1.0;
        let nv = norm(&v);
        if nv > threshold {
            v.iter_mut().for_each(|x| *x /= nv);
            return v;
        }
    }
    unreachable!("some basis projection has norm^2 >= (d-1)/d")
}

/// Wraps an angle into `(-pi, pi]`.
#[inline]
pub fn wrap_angle(x: f64) -> f64 {
    use std::f64::consts::{PI, TAU};
    let mut y = x % TAU;
    if y > PI {
        y -= TAU;
    } else if y <= -PI {
        y += TAU;
    }
    y
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn unit_angle_is_accurate_near_the_ends() {
        let a = [1.0, 0.0, 0.0];
        let eps: f64 = 1e-10;
        let b = [eps.cos(), eps.sin(), 0.0];
        assert!((unit_angle(&a, &b) - eps).abs() < 1e-20);
        let c = [-(eps.cos()), eps.sin(), 0.0];
        assert!((unit_angle(&a, &c) - (PI - eps)).abs() < 1e-15);
        let a2 = [0.0, 1.0];
        let b2 = [-1.0, 0.0];
        assert!((unit_angle(&a2, &b2) - PI / 2.0).abs() < 1e-15);
    }

    #[test]
    fn default_perpendicular_is_orthonormal() {
        for a in [[1.0, 0.0, 0.0], [0.0, 0.6, 0.8], [0.5773502691896258; 3]] {
            let p = default_perpendicular(&a);
            assert!(dot(&a, &p).abs() < 1e-15);
            assert!((norm(&p) - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn wrap_angle_range() {
        assert_eq!(wrap_angle(PI), PI);
        assert!((wrap_angle(-PI) - PI).abs() < 1e-15);
        assert!((wrap_angle(3.0 * PI / 2.0) + PI / 2.0).abs() < 1e-15);
    }
}

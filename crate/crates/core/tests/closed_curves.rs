mod common;

use std::f64::consts::PI;

use elastica_core::closed::{closing_projection, distance_closed, distance_closed_with, frame_from, grassmann_distance, grassmann_match, Frame2};
use elastica_core::curves::{angle_lift, resample_arclength};
use elastica_core::kernel::{match_tangents, Diffeo, MatchParams};
use elastica_core::{Error, TangentFunction};
use nalgebra::Matrix2;
use rand::Rng;

fn svd_oracle(f0: &Frame2, f1: &Frame2) -> f64 {
    let ip = |u: &[f64], v: &[f64]| u.iter().zip(v).map(|(x, y)| x * y).sum::<f64>() / u.len() as f64;
    let m = Matrix2::new(ip(&f0.f, &f1.f), ip(&f0.f, &f1.g), ip(&f0.g, &f1.f), ip(&f0.g, &f1.g));
    let sv = m.svd(false, false).singular_values;
    sv.iter().map(|s| s.clamp(0.0, 1.0).acos().powi(2)).sum::<f64>().sqrt()
}

fn random_frame(rng: &mut impl Rng, n: usize) -> Frame2 {
    let ip = |u: &[f64], v: &[f64]| u.iter().zip(v).map(|(x, y)| x * y).sum::<f64>() / u.len() as f64;
    let mut f: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
    let mut g: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
    let nf = ip(&f, &f).sqrt();
    f.iter_mut().for_each(|x| *x /= nf);
    let c = ip(&f, &g);
    g.iter_mut().zip(&f).for_each(|(y, x)| *y -= c * x);
    let ng = ip(&g, &g).sqrt();
    g.iter_mut().for_each(|x| *x /= ng);
    Frame2 { f, g }
}

fn frame_of(name: &str, n: usize) -> Frame2 {
    let a = resample_arclength(&common::curve(name), n).unwrap();
    frame_from(&Diffeo::identity(n), &angle_lift(&a).unwrap())
}

#[test]
fn shifted_start_gives_zero() {
    let n = 64;
    let p = MatchParams::new(1.0, n).unwrap();
    for name in ["hand1.csv", "horse2.csv", "square.csv"] {
        let m = common::grid_polygon(name, n);
        let r = distance_closed_with(&m, &m.start_at(17), &p, false).unwrap();
        assert!(r.distance < 1e-4, "{name}: {}", r.distance);
        assert_eq!(r.offset, Some(17.0 / 64.0));
        let r = distance_closed(&m, &m.start_at(40).rotated(2.0), &p).unwrap();
        assert!(r.distance < 1e-4, "{name}: {}", r.distance);
    }
}

#[test]
fn offset_equivariance_is_exact_on_grid_shifts() {
    let n = 48;
    let p = MatchParams::new(1.0, n).unwrap();
    let m0 = common::grid_polygon("hand1.csv", n);
    let m1 = common::grid_polygon("hand2.csv", n);
    for rotation in [false, true] {
        let base = distance_closed_with(&m0, &m1, &p, rotation).unwrap().distance;
        for k in [1, 7, 30] {
            let d = distance_closed_with(&m0.start_at(k), &m1, &p, rotation).unwrap().distance;
            assert_eq!(d, base, "shift {k}, rotation {rotation}");
        }
    }
}

#[test]
fn open_curves_are_rejected() {
    let p = MatchParams::new(1.0, 16).unwrap();
    let err = distance_closed(&common::curve("arc.csv"), &common::curve("circle.csv"), &p).unwrap_err();
    assert_eq!(err, Error::NotClosed);
    assert_eq!(err.exit_code(), 3);
}

/// Every one of the n offsets crossed with 1024 rotation angles.
#[test]
fn square_against_circle_matches_dense_joint_grid() {
    let n = 32;
    let p = MatchParams::new(1.0, n).unwrap();
    let (square, circle) = (common::curve("square.csv"), common::curve("circle.csv"));
    let found = distance_closed(&square, &circle, &p).unwrap().distance;
    let a0 = resample_arclength(&square, n).unwrap();
    let a1 = resample_arclength(&circle, n).unwrap();
    let mut oracle = f64::INFINITY;
    for k in 0..n {
        let shifted = a0.shifted(k);
        for j in 0..1024 {
            let c = 2.0 * PI * j as f64 / 1024.0;
            oracle = oracle.min(match_tangents(&shifted.rotated(c), &a1, &p).unwrap().distance);
        }
    }
    assert!((found - oracle).abs() < 1e-3, "search {found} vs grid {oracle}");
}

#[test]
fn frames_of_closed_outlines_are_orthonormal() {
    for (name, n) in [("circle.csv", 64), ("square.csv", 256), ("hand1.csv", 256)] {
        let fr = frame_of(name, n);
        let (ff, gg, fg) = fr.gram();
        assert!((ff + gg - 2.0).abs() < 1e-12);
        if name == "hand1.csv" {
            // Sampling leaves a small closing gap; the projection removes it.
            let a = closing_projection(&resample_arclength(&common::curve(name), n).unwrap()).unwrap();
            let fr = frame_from(&Diffeo::identity(n), &angle_lift(&a).unwrap());
            let (ff, gg, fg) = fr.gram();
            assert!((ff - 1.0).abs() < 1e-6 && (gg - 1.0).abs() < 1e-6 && fg.abs() < 1e-6);
        } else {
            assert!((ff - 1.0).abs() < 1e-6 && (gg - 1.0).abs() < 1e-6 && fg.abs() < 1e-6, "{name}");
        }
    }
}

#[test]
fn open_segment_frame_is_rejected() {
    let fr = frame_of("seg_x.csv", 32);
    assert!(matches!(fr.validate(), Err(Error::BadFrame { .. })));
    assert!(matches!(grassmann_distance(&fr, &fr), Err(Error::BadFrame { .. })));
}

#[test]
fn grassmann_examples() {
    let f0 = frame_of("circle.csv", 64);
    assert!(grassmann_distance(&f0, &f0).unwrap() < 1e-9);
    for a in [0.3, 1.7, -2.5] {
        let (s, c) = f64::sin_cos(a);
        let f1 = Frame2 {
            f: f0.f.iter().zip(&f0.g).map(|(f, g)| c * f + s * g).collect(),
            g: f0.f.iter().zip(&f0.g).map(|(f, g)| -s * f + c * g).collect(),
        };
        assert!(grassmann_distance(&f0, &f1).unwrap() < 1e-9);
    }
    let (c, s) = (frame_of("circle.csv", 256), frame_of("square.csv", 256));
    let d = grassmann_distance(&c, &s).unwrap();
    assert!((d - svd_oracle(&c, &s)).abs() < 1e-9);
    assert!(d > 0.0);
}

#[test]
fn grassmann_random_frames() {
    let mut rng = common::rng(5);
    for _ in 0..100 {
        let n = rng.random_range(4..80);
        let (f0, f1) = (random_frame(&mut rng, n), random_frame(&mut rng, n));
        let r = grassmann_match(&f0, &f1).unwrap();
        let d = grassmann_distance(&f0, &f1).unwrap();
        assert!((d - svd_oracle(&f0, &f1)).abs() < 1e-9);
        assert!((d - grassmann_distance(&f1, &f0).unwrap()).abs() < 1e-12);
        assert!(d <= 2f64.sqrt() * PI / 2.0 + 1e-12);
        assert!(r.singular_values.iter().all(|s| (0.0..=1.0).contains(s)));
        assert!(r.singular_values[0] >= r.singular_values[1]);
    }
}

#[test]
fn closing_projection_examples() {
    let circle = resample_arclength(&common::curve("circle.csv"), 64).unwrap();
    let same = closing_projection(&circle).unwrap();
    for (u, v) in circle.samples().zip(same.samples()) {
        assert!((u[0] - v[0]).abs() < 1e-10 && (u[1] - v[1]).abs() < 1e-10);
    }
    let biased = TangentFunction::from_directions(circle.samples().map(|v| vec![v[0] + 0.08, v[1] + 0.05]).collect(), true).unwrap();
    let fixed = closing_projection(&biased).unwrap();
    let mean = fixed.mean();
    assert!(mean[0].hypot(mean[1]) < 1e-8);
    for (u, v) in circle.samples().zip(fixed.samples()) {
        assert!((u[0] - v[0]).hypot(u[1] - v[1]) < 0.1);
    }
    for name in ["hand1.csv", "horse1.csv", "spiral.csv", "wave.csv"] {
        let a = resample_arclength(&common::curve(name), 256).unwrap();
        let m = closing_projection(&a).unwrap().mean();
        assert!(m[0].hypot(m[1]) < 1e-8, "{name}");
    }
}

#![allow(dead_code)]

use std::path::PathBuf;

use elastica_core::io::{read_curve, read_function};
use elastica_core::{Curve, SampledFunction};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn fixture_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

pub fn curve(name: &str) -> Curve {
    read_curve(&fixture_path(name)).unwrap_or_else(|e| panic!("{name}: {e}"))
}

pub fn function(name: &str) -> SampledFunction {
    read_function(&fixture_path(name)).unwrap_or_else(|e| panic!("{name}: {e}"))
}

pub const OPEN_2D: [&str; 8] = [
    "seg_x.csv",
    "seg_minus_x.csv",
    "seg_y.csv",
    "arc.csv",
    "spiral.csv",
    "wave.csv",
    "zigzag.csv",
    "square.csv",
];

pub const CLOSED_2D: [&str; 6] = [
    "circle.csv",
    "square.csv",
    "hand1.csv",
    "hand2.csv",
    "horse1.csv",
    "horse2.csv",
];

/// Every planar curve fixture, opened or closed as stored.
pub const ALL_2D: [&str; 12] = [
    "seg_x.csv",
    "seg_minus_x.csv",
    "seg_y.csv",
    "arc.csv",
    "spiral.csv",
    "wave.csv",
    "zigzag.csv",
    "circle.csv",
    "square.csv",
    "hand1.csv",
    "hand2.csv",
    "horse1.csv",
];

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Same polygon with extra vertices at arc-length positions `warp(k / count)`,
/// i.e. a reparametrization of the point sequence by an increasing map.
pub fn reparametrize(c: &Curve, count: usize, warp: impl Fn(f64) -> f64) -> Curve {
    let mut pts = c.points().to_vec();
    if c.is_closed() {
        pts.push(pts[0].clone());
    }
    let mut cum = vec![0.0];
    for w in pts.windows(2) {
        let len = w[0].iter().zip(&w[1]).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt();
        cum.push(cum.last().unwrap() + len);
    }
    let total = *cum.last().unwrap();
    let mut params: Vec<f64> = cum.iter().map(|c| c / total).collect();
    params.extend((1..count).map(|k| warp(k as f64 / count as f64)));
    params.sort_by(f64::total_cmp);
    let at = |u: f64| {
        let k = (cum.partition_point(|&c| c / total <= u)).clamp(1, pts.len() - 1) - 1;
        let seg = cum[k + 1] - cum[k];
        let t = if seg > 0.0 { ((u * total - cum[k]) / seg).clamp(0.0, 1.0) } else { 0.0 };
        pts[k].iter().zip(&pts[k + 1]).map(|(x, y)| x + t * (y - x)).collect::<Vec<f64>>()
    };
    let mut out: Vec<Vec<f64>> = params.into_iter().map(at).collect();
    if c.is_closed() {
        out.pop();
    }
    Curve::new(out, c.is_closed()).unwrap()
}

/// Value of the lattice step `(x0, y0) -> (x0 + p, y0 + q)`: the segment is
/// cut at the grid lines it crosses, located exactly as multiples of
/// `1 / (p q)`, and each piece is charged `f` of the cell holding its midpoint.
pub fn step_value(f: &[f64], n: usize, (x0, y0): (usize, usize), (p, q): (usize, usize)) -> f64 {
    let pq = p * q;
    let mut cuts: Vec<usize> = (0..=p).map(|k| k * q).chain((0..=q).map(|k| k * p)).collect();
    cuts.sort_unstable();
    cuts.dedup();
    let mut total = 0.0;
    for w in cuts.windows(2) {
        // Midpoint parameter (w0 + w1) / (2 pq); cell index floor(p t) and floor(q t).
        let twice = w[0] + w[1];
        let cx = x0 + (p * twice) / (2 * pq);
        let cy = y0 + (q * twice) / (2 * pq);
        total += (w[1] - w[0]) as f64 / pq as f64 * f[cx * n + cy];
    }
    ((p * q) as f64).sqrt() / n as f64 * total
}

/// Best total over every monotone lattice path, by plain enumeration.
pub fn brute_force_score(f: &[f64], n: usize, steps: &[(usize, usize)]) -> f64 {
    fn walk(f: &[f64], n: usize, steps: &[(usize, usize)], at: (usize, usize), acc: f64, best: &mut f64) {
        if at == (n, n) {
            *best = best.max(acc);
            return;
        }
        for &(p, q) in steps {
            if at.0 + p <= n && at.1 + q <= n {
                let v = step_value(f, n, at, (p, q));
                walk(f, n, steps, (at.0 + p, at.1 + q), acc + v, best);
            }
        }
    }
    let mut best = f64::NEG_INFINITY;
    walk(f, n, steps, (0, 0), 0.0, &mut best);
    best
}

/// Plain lattice DP built on [`step_value`], independent of the library's
/// step tables; returns the best score.
pub fn lattice_dp(f: &[f64], n: usize, steps: &[(usize, usize)]) -> f64 {
    let idx = |i: usize, j: usize| i * (n + 1) + j;
    let mut best = vec![f64::NEG_INFINITY; (n + 1) * (n + 1)];
    best[0] = 0.0;
    for i in 0..=n {
        for j in 0..=n {
            let from = best[idx(i, j)];
            if from == f64::NEG_INFINITY {
                continue;
            }
            for &(p, q) in steps {
                if i + p <= n && j + q <= n {
                    let v = from + step_value(f, n, (i, j), (p, q));
                    let slot = &mut best[idx(i + p, j + q)];
                    if v > *slot {
                        *slot = v;
                    }
                }
            }
        }
    }
    best[idx(n, n)]
}

/// Counterclockwise planar rotation.
pub fn rotate(c: &Curve, angle: f64) -> Curve {
    c.rotated(angle)
}

/// Closed polygon whose vertices sit exactly on the arc-length grid of size
/// `n`, so that moving its start by one vertex shifts the tangent grid by one.
pub fn grid_polygon(name: &str, n: usize) -> Curve {
    let a = elastica_core::resample_arclength(&curve(name), n).unwrap();
    let closed = elastica_core::closing_projection(&a).unwrap();
    let mut pts = closed.reconstruct();
    pts.pop();
    Curve::new(pts, true).unwrap()
}

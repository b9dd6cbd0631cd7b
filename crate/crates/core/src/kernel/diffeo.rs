use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Piecewise-linear increasing map of `[0, 1]` onto itself, given by knots
/// `(s, phi(s))` from `(0, 0)` to `(1, 1)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Diffeo {
    knots: Vec<[f64; 2]>,
}

/// Portion of a linear piece of `phi` inside one cell `(i, j)` of the grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PathPiece {
    pub i: usize,
    pub j: usize,
    /// Extent along the first curve's parameter.
    pub ds: f64,
    /// Extent along the second curve's parameter.
    pub dst: f64,
}

impl PathPiece {
    pub fn slope(&self) -> f64 {
        self.dst / self.ds
    }

    /// `sqrt(ds * dst)`, i.e. the integral of `sqrt(dphi)` over the piece.
    pub fn weight(&self) -> f64 {
        (self.ds * self.dst).sqrt()
    }
}

const SNAP: f64 = 1e-9;

/// Splits the segment `(x0, y0) -> (x1, y1)`, given in cell units, at every
/// integer grid line it crosses. Returns `(cell_x, cell_y, fraction)` where
/// `fraction` is the share of the segment's parameter inside that cell.
///
/// Requires `x1 > x0` and `y1 > y0`.
pub fn clip_segment(x0: f64, y0: f64, x1: f64, y1: f64) -> Vec<(usize, usize, f64)> {
    let (dx, dy) = (x1 - x0, y1 - y0);
    let mut ts = vec![0.0, 1.0];
    let interior = |a: f64, b: f64| {
        let lo = (a + SNAP).floor() as i64 + 1;
        let hi = (b - SNAP).ceil() as i64 - 1;
        lo..=hi
    };
    for k in interior(x0, x1) {
        ts.push((k as f64 - x0) / dx);
    }
    for k in interior(y0, y1) {
        ts.push((k as f64 - y0) / dy);
    }
    ts.sort_by(|a, b| a.total_cmp(b));
    let mut out = Vec::with_capacity(ts.len());
    for w in ts.windows(2) {
        let len = w[1] - w[0];
        if len <= 1e-12 {
            continue;
        }
        let mid = 0.5 * (w[0] + w[1]);
        let cx = (x0 + mid * dx).floor().max(0.0) as usize;
        let cy = (y0 + mid * dy).floor().max(0.0) as usize;
        out.push((cx, cy, len));
    }
    out
}

impl Diffeo {
    pub fn new(knots: Vec<[f64; 2]>) -> Result<Self> {
        if knots.len() < 2 {
            return Err(Error::BadDiffeo("need at least two knots".into()));
        }
        if knots[0] != [0.0, 0.0] {
            return Err(Error::BadDiffeo("first knot must be (0, 0)".into()));
        }
        if knots[knots.len() - 1] != [1.0, 1.0] {
            return Err(Error::BadDiffeo("last knot must be (1, 1)".into()));
        }
        for w in knots.windows(2) {
            if !(w[1][0] > w[0][0] && w[1][1] > w[0][1]) {
                return Err(Error::BadDiffeo(format!(
                    "knots {:?} -> {:?} are not strictly increasing",
                    w[0], w[1]
                )));
            }
        }
        Ok(Diffeo { knots })
    }

    /// The identity with knots on every grid line `k / n`.
    pub fn identity(n: usize) -> Self {
        let knots = (0..=n)
            .map(|k| {
                let s = if k == n { 1.0 } else { k as f64 / n as f64 };
                [s, s]
            })
            .collect();
        Diffeo { knots }
    }

    /// Builds the diffeomorphism through integer lattice knots on an n x n grid.
    pub(crate) fn from_lattice(path: &[(usize, usize)], n: usize) -> Self {
        let scale = |k: usize| if k == n { 1.0 } else { k as f64 / n as f64 };
        Diffeo {
            knots: path.iter().map(|&(i, j)| [scale(i), scale(j)]).collect(),
        }
    }

    pub fn knots(&self) -> &[[f64; 2]] {
        &self.knots
    }

    fn segment_at(&self, s: f64) -> usize {
        let k = self.knots.partition_point(|kn| kn[0] <= s);
        k.clamp(1, self.knots.len() - 1) - 1
    }

    /// `phi(s)` by linear interpolation.
    pub fn eval(&self, s: f64) -> f64 {
        let k = self.segment_at(s);
        let ([s0, p0], [s1, p1]) = (self.knots[k], self.knots[k + 1]);
        p0 + (s - s0) * (p1 - p0) / (s1 - s0)
    }

    /// Slope of the linear piece containing `s`.
    pub fn derivative(&self, s: f64) -> f64 {
        let k = self.segment_at(s);
        let ([s0, p0], [s1, p1]) = (self.knots[k], self.knots[k + 1]);
        (p1 - p0) / (s1 - s0)
    }

    /// Clips every linear piece against the n x n cell grid, in order of `s`.
    pub fn pieces(&self, n: usize) -> Vec<PathPiece> {
        let nf = n as f64;
        let mut out = Vec::with_capacity(2 * n + self.knots.len());
        for w in self.knots.windows(2) {
            let (x0, y0) = (w[0][0] * nf, w[0][1] * nf);
            let (x1, y1) = (w[1][0] * nf, w[1][1] * nf);
            let (ds, dst) = (w[1][0] - w[0][0], w[1][1] - w[0][1]);
            for (i, j, frac) in clip_segment(x0, y0, x1, y1) {
                out.push(PathPiece {
                    i: i.min(n - 1),
                    j: j.min(n - 1),
                    ds: ds * frac,
                    dst: dst * frac,
                });
            }
        }
        out
    }

    /// Largest knot distance from the diagonal.
    pub fn max_deviation_from_identity(&self) -> f64 {
        self.knots
            .iter()
            .map(|k| (k[1] - k[0]).abs())
            .fold(0.0, f64::max)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation() {
        assert!(Diffeo::new(vec![[0.0, 0.0], [1.0, 1.0]]).is_ok());
        assert!(Diffeo::new(vec![[0.0, 0.0], [0.5, 0.5], [0.5, 0.7], [1.0, 1.0]]).is_err());
        assert!(Diffeo::new(vec![[0.1, 0.0], [1.0, 1.0]]).is_err());
        assert!(Diffeo::new(vec![[0.0, 0.0], [1.0, 0.9]]).is_err());
    }

    #[test]
    fn clip_diagonal_step() {
        let cells = clip_segment(0.0, 0.0, 1.0, 1.0);
        assert_eq!(cells, vec![(0, 0, 1.0)]);
    }

    #[test]
    fn clip_two_by_three() {
        // Crosses x = 1 at t = 1/2 and y = 1, 2 at t = 1/3, 2/3.
        let cells = clip_segment(0.0, 0.0, 2.0, 3.0);
        let expect = [(0, 0, 1.0 / 3.0), (0, 1, 1.0 / 6.0), (1, 1, 1.0 / 6.0), (1, 2, 1.0 / 3.0)];
        assert_eq!(cells.len(), expect.len());
        for (c, e) in cells.iter().zip(&expect) {
            assert_eq!((c.0, c.1), (e.0, e.1));
            assert!((c.2 - e.2).abs() < 1e-15);
        }
    }

    #[test]
    fn eval_and_derivative() {
        let phi = Diffeo::new(vec![[0.0, 0.0], [0.5, 0.25], [1.0, 1.0]]).unwrap();
        assert!((phi.eval(0.25) - 0.125).abs() < 1e-15);
        assert!((phi.eval(0.75) - 0.625).abs() < 1e-15);
        assert!((phi.derivative(0.1) - 0.5).abs() < 1e-15);
        assert!((phi.derivative(0.9) - 1.5).abs() < 1e-15);
        assert_eq!(phi.eval(1.0), 1.0);
    }

    #[test]
    fn pieces_partition_both_axes() {
        let phi = Diffeo::new(vec![[0.0, 0.0], [0.3, 0.6], [0.7, 0.65], [1.0, 1.0]]).unwrap();
        let pieces = phi.pieces(10);
        let ds: f64 = pieces.iter().map(|p| p.ds).sum();
        let dst: f64 = pieces.iter().map(|p| p.dst).sum();
        assert!((ds - 1.0).abs() < 1e-14 && (dst - 1.0).abs() < 1e-14);
        assert!(pieces.windows(2).all(|w| w[1].i >= w[0].i && w[1].j >= w[0].j));
    }

    #[test]
    fn identity_pieces_are_cells() {
        let pieces = Diffeo::identity(7).pieces(7);
        assert_eq!(pieces.len(), 7);
        for (k, p) in pieces.iter().enumerate() {
            assert_eq!((p.i, p.j), (k, k));
            assert!((p.ds - 1.0 / 7.0).abs() < 1e-15);
        }
    }
}

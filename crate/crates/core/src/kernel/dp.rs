use super::diffeo::{clip_segment, Diffeo};
use super::field::CostField;

/// Scores within this margin count as ties.
const TIE_EPS: f64 = 1e-14;

#[derive(Debug, Clone, PartialEq)]
struct Step {
    p: usize,
    q: usize,
    /// `sqrt(p q)`; divided by `n` this is `sqrt(ds dst)` per unit fraction.
    root: f64,
    /// Cells crossed relative to the step origin, with segment fractions.
    cells: Vec<(usize, usize, f64)>,
}

/// Admissible lattice moves `(p, q)`: `p` cells along the first curve, `q`
/// along the second.
#[derive(Debug, Clone, PartialEq)]
pub struct StepSet {
    /// Sorted by tie-break preference: closest to slope 1 first, then larger `q`.
    steps: Vec<Step>,
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

impl StepSet {
    /// All coprime `(p, q)` with `1 <= p, q <= k_max`.
    pub fn coprime(k_max: usize) -> Self {
        let k_max = k_max.max(1);
        let pairs = (1..=k_max)
            .flat_map(|p| (1..=k_max).map(move |q| (p, q)))
            .filter(|&(p, q)| gcd(p, q) == 1);
        Self::from_pairs(pairs)
    }

    /// Arbitrary step list; zero components and duplicates are ignored.
    pub fn from_pairs(pairs: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let mut steps: Vec<Step> = Vec::new();
        for (p, q) in pairs {
            if p == 0 || q == 0 || steps.iter().any(|s| s.p == p && s.q == q) {
                continue;
            }
            steps.push(Step {
                p,
                q,
                root: ((p * q) as f64).sqrt(),
                cells: clip_segment(0.0, 0.0, p as f64, q as f64),
            });
        }
        let key = |s: &Step| ((s.q as f64 / s.p as f64) - 1.0).abs();
        steps.sort_by(|a, b| key(a).total_cmp(&key(b)).then(b.q.cmp(&a.q)));
        StepSet { steps }
    }

    pub fn pairs(&self) -> Vec<(usize, usize)> {
        self.steps.iter().map(|s| (s.p, s.q)).collect()
    }

    /// Largest slope available, `max q / p`.
    pub fn slope_cap(&self) -> f64 {
        self.steps
            .iter()
            .map(|s| s.q as f64 / s.p as f64)
            .fold(0.0, f64::max)
    }
}

/// Maximizes `sum f_cell sqrt(ds dst)` over monotone lattice paths from
/// `(0, 0)` to `(n, n)` built from `steps`.
///
/// Returns the optimal path as a [`Diffeo`] and its score. Ties prefer the
/// step closest to slope 1, then the predecessor with the smaller second
/// coordinate.
pub fn dp_match(field: &CostField, steps: &StepSet) -> (Diffeo, f64) {
    let n = field.n;
    let stride = n + 1;
    let inv_n = 1.0 / n as f64;
    let f = &field.values;

    // Flattened per-step tables: field offset of each crossed cell relative
    // to the step origin, and its weight fraction * sqrt(p q) / n.
    let mut offsets: Vec<usize> = Vec::new();
    let mut coefs: Vec<f64> = Vec::new();
    let mut ranges: Vec<(usize, usize)> = Vec::with_capacity(steps.steps.len());
    for step in &steps.steps {
        let start = offsets.len();
        for &(di, dj, frac) in &step.cells {
            offsets.push(di * n + dj);
            coefs.push(frac * step.root * inv_n);
        }
        ranges.push((start, offsets.len()));
    }

    let mut best = vec![f64::NEG_INFINITY; stride * stride];
    let mut back = vec![u16::MAX; stride * stride];
    best[0] = 0.0;

    for i in 0..=n {
        for j in 0..=n {
            if i == 0 && j == 0 {
                continue;
            }
            let mut value = f64::NEG_INFINITY;
            let mut choice = u16::MAX;
            for (k, (step, &(lo, hi))) in steps.steps.iter().zip(&ranges).enumerate() {
                if step.p > i || step.q > j {
                    continue;
                }
                let (pi, pj) = (i - step.p, j - step.q);
                let prev = best[pi * stride + pj];
                if prev == f64::NEG_INFINITY {
                    continue;
                }
                let base = pi * n + pj;
                let mut w = 0.0;
                for (off, c) in offsets[lo..hi].iter().zip(&coefs[lo..hi]) {
                    w += c * f[base + off];
                }
                let cand = prev + w;
                // Steps are visited in preference order, so only strict
                // improvements displace an earlier choice.
                if cand > value + TIE_EPS || value == f64::NEG_INFINITY {
                    value = cand;
                    choice = k as u16;
                }
            }
            best[i * stride + j] = value;
            back[i * stride + j] = choice;
        }
    }

    let mut path = vec![(n, n)];
    let (mut i, mut j) = (n, n);
    while i > 0 || j > 0 {
        let step = &steps.steps[back[i * stride + j] as usize];
        i -= step.p;
        j -= step.q;
        path.push((i, j));
    }
    path.reverse();
    (Diffeo::from_lattice(&path, n), best[stride * stride - 1])
}

impl CostField {
    /// `sum f_cell sqrt(ds dst)` along an arbitrary diffeomorphism.
    pub fn path_value(&self, phi: &Diffeo) -> f64 {
        phi.pieces(self.n)
            .iter()
            .map(|p| self.get(p.i, p.j) * p.weight())
            .sum()
    }
}

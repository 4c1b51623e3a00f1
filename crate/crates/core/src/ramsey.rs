//! Monte Carlo estimates of how often a vertex is padded by the random
//! hierarchical partition, plus simulations of the two probabilistic
//! lemmas behind the padding bound.
//!
//! A trial draws a permutation and `beta = 2^U`. Level `i` has radius
//! `R_i = beta * D * 2^-i` for the metric diameter `D`; the center of `x`
//! at level `i` is its highest-priority vertex within `R_i`, and `x`, `y`
//! share the level-`i` cluster when their centers agree on every level up
//! to `i`. Vertex `x` is padded when, for every level, the ball of radius
//! `(1 - 2^(-1/(2a))) R_i` around `x` stays inside its cluster. The bound
//! to compare against is `n^(-2/a) / 2`.

use std::collections::HashMap;

use rand::seq::SliceRandom;
use rand::Rng as _;
use thiserror::Error;

use crate::graph::{all_pairs, Graph, INF};
use crate::{par, rng};

#[derive(Debug, Error)]
pub enum RamseyError {
    #[error("parameter a must be at least 2, got {0}")]
    BadA(u32),
    #[error("epsilon {eps} must be i/{a} for some 1 <= i < {a}")]
    BadEps { eps: f64, a: u32 },
    #[error("invalid metric: {0}")]
    BadMetric(String),
    #[error("value {value} outside buckets 1..={a}")]
    ValueOutOfRange { value: u32, a: u32 },
    #[error("probability {p} at position {i} must lie in [0, 1/{}]", i + 1)]
    BadProbability { i: usize, p: f64 },
    #[error("point {0} outside [0, 1)")]
    PointOutOfRange(f64),
    #[error("at least one trial is required")]
    NoTrials,
}

/// Exact finite metric stored as a dense matrix, each row also sorted by
/// distance.
pub struct MetricView {
    n: usize,
    d: Vec<u64>,
    diameter: u64,
    by_dist: Vec<Vec<u32>>,
}

impl MetricView {
    pub fn from_graph(g: &Graph) -> Result<MetricView, RamseyError> {
        let rows = all_pairs(g);
        if rows.iter().flatten().any(|&x| x == INF) {
            return Err(RamseyError::BadMetric("graph is disconnected".into()));
        }
        Ok(Self::from_rows_unchecked(g.n(), rows.concat()))
    }

    /// Validates a row-major matrix: zero diagonal, positive symmetric
    /// off-diagonal entries and the triangle inequality.
    pub fn from_matrix(n: usize, d: Vec<u64>) -> Result<MetricView, RamseyError> {
        if d.len() != n * n {
            return Err(RamseyError::BadMetric(format!("expected {} entries, got {}", n * n, d.len())));
        }
        for x in 0..n {
            if d[x * n + x] != 0 {
                return Err(RamseyError::BadMetric(format!("d({x}, {x}) is not 0")));
            }
            for y in 0..n {
                if d[x * n + y] != d[y * n + x] {
                    return Err(RamseyError::BadMetric(format!("d({x}, {y}) is not symmetric")));
                }
                if x != y && d[x * n + y] == 0 {
                    return Err(RamseyError::BadMetric(format!("d({x}, {y}) is 0")));
                }
                for z in 0..n {
                    if d[x * n + z] as u128 > d[x * n + y] as u128 + d[y * n + z] as u128 {
                        return Err(RamseyError::BadMetric(format!("triangle ({x}, {y}, {z}) violated")));
                    }
                }
            }
        }
        Ok(Self::from_rows_unchecked(n, d))
    }

    fn from_rows_unchecked(n: usize, d: Vec<u64>) -> MetricView {
        let diameter = d.iter().copied().max().unwrap_or(0);
        let by_dist = (0..n)
            .map(|x| {
                let mut row: Vec<u32> = (0..n as u32).collect();
                row.sort_by_key(|&y| (d[x * n + y as usize], y));
                row
            })
            .collect();
        MetricView { n, d, diameter, by_dist }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dist(&self, x: usize, y: usize) -> u64 {
        self.d[x * self.n + y]
    }

    pub fn diameter(&self) -> u64 {
        self.diameter
    }

    /// Number of vertices within `r` of `x`.
    fn ball_size(&self, x: usize, r: f64) -> usize {
        let row = &self.by_dist[x];
        row.partition_point(|&y| self.dist(x, y as usize) as f64 <= r)
    }
}

/// Padding fraction `1 - 2^(-1/(2a))`.
pub fn padding_alpha(a: u32) -> f64 {
    1.0 - (-1.0 / (2.0 * a as f64)).exp2()
}

/// Lower bound `n^(-2/a) / 2` on the padding probability.
pub fn padding_bound(n: usize, a: u32) -> f64 {
    0.5 * (n as f64).powf(-2.0 / a as f64)
}

/// Default split `eps`: 1/2 for even `a`, `(a - 1) / (2a)` for odd `a`.
pub fn default_eps(a: u32) -> f64 {
    if a.is_multiple_of(2) {
        0.5
    } else {
        (a - 1) as f64 / (2 * a) as f64
    }
}

/// Cluster ids per level for one permutation and radius scale. Level `i`
/// has radius `beta * D * 2^-i`; levels continue until the radius drops
/// below 1, where every cluster is a singleton. `rank[v]` is the priority
/// of `v` (smaller is higher).
pub fn partition_levels(mv: &MetricView, rank: &[u32], beta: f64) -> Vec<Vec<u32>> {
    let n = mv.n;
    // prefix_min[x][j]: highest-priority vertex among the j + 1 closest.
    let prefix_min: Vec<Vec<u32>> = (0..n)
        .map(|x| {
            let mut best = u32::MAX;
            let mut out = Vec::with_capacity(n);
            for &y in &mv.by_dist[x] {
                if best == u32::MAX || rank[y as usize] < rank[best as usize] {
                    best = y;
                }
                out.push(best);
            }
            out
        })
        .collect();
    let mut levels = Vec::new();
    let mut prev = vec![0u32; n];
    let mut radius = beta * mv.diameter.max(1) as f64;
    loop {
        let mut ids: HashMap<(u32, u32), u32> = HashMap::new();
        let cur: Vec<u32> = (0..n)
            .map(|x| {
                let center = prefix_min[x][mv.ball_size(x, radius) - 1];
                let next = ids.len() as u32;
                *ids.entry((prev[x], center)).or_insert(next)
            })
            .collect();
        levels.push(cur.clone());
        if radius < 1.0 {
            break;
        }
        prev = cur;
        radius /= 2.0;
    }
    levels
}

fn trial_padded(mv: &MetricView, a: u32, with_beta: bool, r: &mut rng::Rng, hits: &mut [u64]) {
    let n = mv.n;
    let mut order: Vec<u32> = (0..n as u32).collect();
    order.shuffle(r);
    let mut rank = vec![0u32; n];
    for (i, &v) in order.iter().enumerate() {
        rank[v as usize] = i as u32;
    }
    let beta = if with_beta { (r.gen::<f64>()).exp2() } else { 1.0 };
    let levels = partition_levels(mv, &rank, beta);
    let alpha = padding_alpha(a);
    for x in 0..n {
        let mut radius = beta * mv.diameter.max(1) as f64;
        let mut ok = true;
        for ids in &levels {
            let pad = alpha * radius;
            if pad < 1.0 {
                break;
            }
            let ball = mv.ball_size(x, pad);
            if mv.by_dist[x][..ball].iter().any(|&y| ids[y as usize] != ids[x]) {
                ok = false;
                break;
            }
            radius /= 2.0;
        }
        if ok {
            hits[x] += 1;
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PaddingRow {
    pub vertex: usize,
    pub frequency: f64,
    pub stderr: f64,
    pub bound: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PaddingReport {
    pub a: u32,
    pub trials: usize,
    pub rows: Vec<PaddingRow>,
}

impl PaddingReport {
    pub fn mean_frequency(&self) -> f64 {
        self.rows.iter().map(|r| r.frequency).sum::<f64>() / self.rows.len().max(1) as f64
    }

    /// Row with the lowest frequency.
    pub fn weakest(&self) -> &PaddingRow {
        self.rows.iter().min_by(|p, q| p.frequency.total_cmp(&q.frequency)).unwrap()
    }
}

const TRIAL_CHUNKS: usize = 64;

/// Per-vertex padding frequency over `trials` random partitions. With
/// `with_beta = false` the radii use `beta = 1`.
pub fn estimate_padding(
    mv: &MetricView,
    a: u32,
    trials: usize,
    seed: u64,
    with_beta: bool,
) -> Result<PaddingReport, RamseyError> {
    if a < 2 {
        return Err(RamseyError::BadA(a));
    }
    if trials == 0 {
        return Err(RamseyError::NoTrials);
    }
    let n = mv.n;
    let chunks: Vec<usize> = (0..TRIAL_CHUNKS.min(trials)).collect();
    let per = par::map(chunks, |c| {
        let mut hits = vec![0u64; n];
        let mut t = c;
        while t < trials {
            trial_padded(mv, a, with_beta, &mut rng::stream(seed, t as u64), &mut hits);
            t += TRIAL_CHUNKS;
        }
        hits
    });
    let mut hits = vec![0u64; n];
    for h in per {
        for (x, c) in h.into_iter().enumerate() {
            hits[x] += c;
        }
    }
    let bound = padding_bound(n, a);
    let rows = hits
        .into_iter()
        .enumerate()
        .map(|(vertex, h)| {
            let f = h as f64 / trials as f64;
            PaddingRow { vertex, frequency: f, stderr: (f * (1.0 - f) / trials as f64).sqrt(), bound }
        })
        .collect();
    Ok(PaddingReport { a, trials, rows })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LemmaEstimate {
    pub estimate: f64,
    pub stderr: f64,
    pub bound: f64,
    pub trials: usize,
}

fn estimate(successes: usize, trials: usize, bound: f64) -> LemmaEstimate {
    let f = successes as f64 / trials as f64;
    LemmaEstimate { estimate: f, stderr: (f * (1.0 - f) / trials as f64).sqrt(), bound, trials }
}

/// `eps * n^(-1 / (a (1 - eps)))`.
pub fn lemma_bound(n: usize, a: u32, eps: f64) -> f64 {
    eps * (n as f64).powf(-1.0 / (a as f64 * (1.0 - eps)))
}

fn check_probs(probs: Option<&[f64]>, len: usize) -> Result<Vec<f64>, RamseyError> {
    let p: Vec<f64> = match probs {
        Some(p) => p.to_vec(),
        None => (1..=len).map(|i| 1.0 / (i + 1) as f64).collect(),
    };
    for (k, &x) in p.iter().enumerate() {
        let i = k + 1;
        if !(0.0..=1.0 / (i + 1) as f64 + 1e-12).contains(&x) || p.len() != len {
            return Err(RamseyError::BadProbability { i, p: x });
        }
    }
    Ok(p)
}

/// Probability that a uniform bucket in `1..=a` holds no selected value,
/// when value `i` (1-based) is selected independently with probability
/// `p_i <= 1/(i+1)` (default exactly `1/(i+1)`). The bound uses
/// `n = values + 1`; `eps` must be a multiple of `1/a`.
pub fn simulate_bucket_lemma(
    values: &[u32],
    probs: Option<&[f64]>,
    a: u32,
    eps: f64,
    trials: usize,
    seed: u64,
) -> Result<LemmaEstimate, RamseyError> {
    if a < 2 {
        return Err(RamseyError::BadA(a));
    }
    if trials == 0 {
        return Err(RamseyError::NoTrials);
    }
    check_eps_fraction(eps, a)?;
    let p = check_probs(probs, values.len())?;
    let mut buckets: Vec<Vec<f64>> = vec![Vec::new(); a as usize + 1];
    for (i, &v) in values.iter().enumerate() {
        if v == 0 || v > a {
            return Err(RamseyError::ValueOutOfRange { value: v, a });
        }
        buckets[v as usize].push(p[i]);
    }
    let mut r = rng::seeded(seed);
    let mut ok = 0;
    for _ in 0..trials {
        let b = r.gen_range(1..=a as usize);
        if buckets[b].iter().all(|&q| r.gen::<f64>() >= q) {
            ok += 1;
        }
    }
    Ok(estimate(ok, trials, lemma_bound(values.len() + 1, a, eps)))
}

fn check_eps_fraction(eps: f64, a: u32) -> Result<(), RamseyError> {
    let i = (eps * a as f64).round();
    if (eps * a as f64 - i).abs() > 1e-9 || i < 1.0 || i > (a - 1) as f64 {
        return Err(RamseyError::BadEps { eps, a });
    }
    Ok(())
}

/// Probability that the wrapped window `[b - 1/(2a), b + 1/(2a))`, with `b`
/// uniform on the unit circle, contains no selected point. Selection
/// probabilities and `eps` are as in [`simulate_bucket_lemma`].
pub fn simulate_range_lemma(
    points: &[f64],
    probs: Option<&[f64]>,
    a: u32,
    eps: f64,
    trials: usize,
    seed: u64,
) -> Result<LemmaEstimate, RamseyError> {
    if a < 2 {
        return Err(RamseyError::BadA(a));
    }
    if trials == 0 {
        return Err(RamseyError::NoTrials);
    }
    check_eps_fraction(eps, a)?;
    for &x in points {
        if !(0.0..1.0).contains(&x) {
            return Err(RamseyError::PointOutOfRange(x));
        }
    }
    let p = check_probs(probs, points.len())?;
    let half = 0.5 / a as f64;
    let mut r = rng::seeded(seed);
    let mut ok = 0;
    for _ in 0..trials {
        let b: f64 = r.gen();
        let hit = points.iter().zip(&p).any(|(&x, &q)| {
            let inside = (x - b + half).rem_euclid(1.0) < 2.0 * half;
            // Draw for every point so the stream does not depend on b.
            let chosen = r.gen::<f64>() < q;
            inside && chosen
        });
        if !hit {
            ok += 1;
        }
    }
    Ok(estimate(ok, trials, lemma_bound(points.len() + 1, a, eps)))
}

//! Approximate single-source shortest paths on a bucket tree.
//!
//! Buckets are the nodes of an infinite in-order binary tree over the
//! nonnegative integers: label `c` sits at level `tz(c + 1) + 1`, so level
//! `r` holds the labels `2^(r-1) - 1 + j * 2^r` and consecutive buckets on
//! one level are `2^r` apart. A vertex in bucket `c` has tentative distance
//! `c`. The frontier bucket of a level is its smallest label above the
//! current one; only frontier buckets (and the current bucket) are ever
//! non-empty, so each level stores at most one list.
//!
//! Relaxing an edge of weight `w` from the current bucket inserts the head
//! into the frontier bucket chosen by [`find_insert_level`], which lies
//! between `w/4` and `w` above the current distance. Distances therefore
//! satisfy `d_G / 4 <= d <= d_G`.

use thiserror::Error;

use crate::graph::{Graph, INF};

/// Labels must stay below 2^MAX_LEVELS.
pub const MAX_LEVELS: u32 = 62;

const NIL: u32 = u32::MAX;

#[derive(Debug, Error, PartialEq)]
pub enum SsspError {
    #[error("edge weight {weight} outside [1, {max}]")]
    WeightOutOfRange { weight: u64, max: u64 },
    #[error("weight class {r} exceeds the {levels} levels of the bucket tree")]
    LevelOutOfRange { r: u32, levels: u32 },
    #[error("bucket tree would need more than {MAX_LEVELS} levels")]
    TooManyLevels,
    #[error("source {0} out of range")]
    SourceOutOfRange(usize),
    #[error("epsilon {0} must lie in (0, 1)")]
    BadEpsilon(f64),
}

/// Smallest `l` with `2^l >= n^(k+1)`, that is `ceil((1 + k) log2 n)`,
/// and at least 1.
pub fn levels_for(n: usize, k: u32) -> Result<u32, SsspError> {
    let mut bound: u128 = 1;
    for _ in 0..=k {
        bound = bound.checked_mul(n.max(1) as u128).ok_or(SsspError::TooManyLevels)?;
        if bound > 1u128 << MAX_LEVELS {
            return Err(SsspError::TooManyLevels);
        }
    }
    Ok(ceil_log2(bound).max(1))
}

/// Levels needed so that every label up to `max_label` fits.
pub fn levels_for_max_label(max_label: u64) -> Result<u32, SsspError> {
    let l = 64 - (max_label.saturating_add(1)).leading_zeros();
    if l > MAX_LEVELS {
        return Err(SsspError::TooManyLevels);
    }
    Ok(l.max(1))
}

fn ceil_log2(x: u128) -> u32 {
    if x <= 1 {
        0
    } else {
        128 - (x - 1).leading_zeros()
    }
}

/// Weight class `r = floor(log2(w + 1))`; edges of class `r` are treated as
/// if they weighed `2^r - 1`.
pub fn weight_class(w: u64) -> u32 {
    63 - (w + 1).leading_zeros()
}

/// Level of bucket `label`.
pub fn level_of_label(label: u64) -> u32 {
    (label + 1).trailing_zeros() + 1
}

/// Smallest label on `level` strictly above `current`.
pub fn frontier_label(current: u64, level: u32) -> u64 {
    let x = current + 1;
    let full = 1u64 << level;
    let half = full >> 1;
    let mut base = (x & !(full - 1)) | half;
    if base <= x {
        base += full;
    }
    base - 1
}

fn bit(path: u64, level: u32) -> bool {
    level < 64 && (path >> level) & 1 == 1
}

/// Picks the level whose frontier bucket receives an edge of class `r`
/// relaxed from a current bucket on level `b`.
///
/// `path` is the path word of the current bucket: for every level `j >= b`,
/// bit `j` is 1 when the level-`j` ancestor is a right child. It equals
/// `current + 1`. Bits above the top level read as 0, so the root behaves
/// as the left child of a virtual parent.
pub fn find_insert_level(b: u32, r: u32, path: u64, levels: u32) -> Result<u32, SsspError> {
    if r == 0 || r > levels {
        return Err(SsspError::LevelOutOfRange { r, levels });
    }
    // Lowest ancestor strictly above level r that is a left child.
    let left_above = |r: u32| (r + 1..).find(|&j| !bit(path, j)).unwrap_or(64);
    let level = if b > r {
        r
    } else if b == r {
        if bit(path, r) {
            left_above(r) + 1
        } else {
            r + 1
        }
    } else {
        match (bit(path, r), bit(path, r - 1)) {
            (_, true) => r,
            (false, false) => r + 1,
            (true, false) => left_above(r) + 1,
        }
    };
    Ok(level)
}

/// Operation counters, used as the machine-independent cost measure.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct OpCounts {
    pub decrease_key: u64,
    pub extract_min: u64,
}

impl OpCounts {
    pub fn total(&self) -> u64 {
        self.decrease_key + self.extract_min
    }

    pub fn add(&mut self, other: OpCounts) {
        self.decrease_key += other.decrease_key;
        self.extract_min += other.extract_min;
    }
}

/// Bucket-tree priority queue over vertices `0..capacity`.
///
/// Buckets are intrusive doubly linked FIFO lists; `level_of[v]` is the
/// position handle of a queued vertex. `reset` only touches vertices used
/// since the last reset, so one tree can serve many pruned searches.
pub struct BucketTree {
    levels: u32,
    current: u64,
    cur_level: u32,
    nonempty: u64,
    label: [u64; 64],
    head: [u32; 64],
    tail: [u32; 64],
    level_of: Vec<u8>,
    prev: Vec<u32>,
    next: Vec<u32>,
    tent: Vec<u64>,
    touched: Vec<u32>,
    ops: OpCounts,
}

impl BucketTree {
    pub fn new(capacity: usize, levels: u32) -> Result<BucketTree, SsspError> {
        if levels == 0 || levels > MAX_LEVELS {
            return Err(SsspError::TooManyLevels);
        }
        Ok(BucketTree {
            levels,
            current: 0,
            cur_level: 1,
            nonempty: 0,
            label: [0; 64],
            head: [NIL; 64],
            tail: [NIL; 64],
            level_of: vec![0; capacity],
            prev: vec![NIL; capacity],
            next: vec![NIL; capacity],
            tent: vec![INF; capacity],
            touched: Vec::new(),
            ops: OpCounts::default(),
        })
    }

    /// Tree for `n` vertices and weights in `[1, n^k]`.
    pub fn for_graph(n: usize, k: u32) -> Result<BucketTree, SsspError> {
        BucketTree::new(n, levels_for(n, k)?)
    }

    pub fn levels(&self) -> u32 {
        self.levels
    }

    pub fn current_distance(&self) -> u64 {
        self.current
    }

    pub fn current_level(&self) -> u32 {
        self.cur_level
    }

    /// Path word of the current bucket, see [`find_insert_level`].
    pub fn path_string(&self) -> u64 {
        self.current + 1
    }

    pub fn ops(&self) -> OpCounts {
        self.ops
    }

    pub fn tentative(&self, v: usize) -> u64 {
        self.tent[v]
    }

    pub fn is_queued(&self, v: usize) -> bool {
        self.level_of[v] != 0
    }

    pub fn is_empty(&self) -> bool {
        self.nonempty == 0
    }

    pub fn reset(&mut self) {
        for &v in &self.touched {
            let v = v as usize;
            self.level_of[v] = 0;
            self.prev[v] = NIL;
            self.next[v] = NIL;
            self.tent[v] = INF;
        }
        self.touched.clear();
        self.current = 0;
        self.cur_level = 1;
        self.nonempty = 0;
        self.head = [NIL; 64];
        self.tail = [NIL; 64];
    }

    /// Places `v` in the current bucket at distance 0. Requires a fresh or
    /// reset tree.
    pub fn insert_source(&mut self, v: usize) {
        debug_assert_eq!(self.current, 0);
        self.place(v, self.cur_level, self.current);
    }

    /// Bucket `(level, label)` that an edge of weight `w` from the current
    /// bucket lands in. Weight 0 maps to the current bucket.
    pub fn target(&self, w: u64) -> Result<(u32, u64), SsspError> {
        if w == 0 {
            return Ok((self.cur_level, self.current));
        }
        let r = weight_class(w);
        let level = find_insert_level(self.cur_level, r, self.path_string(), self.levels)?;
        let label = frontier_label(self.current, level);
        debug_assert!({
            let off = label - self.current;
            let wr = (1u64 << r) - 1;
            off * 2 >= wr && off <= wr && off * 4 >= w && off <= w
        });
        Ok((level, label))
    }

    /// Relaxes an edge of weight `w` into `v`. Moves `v` and returns its
    /// new tentative distance when that is smaller than the stored one.
    pub fn decrease_key(&mut self, v: usize, w: u64) -> Result<Option<u64>, SsspError> {
        let (level, label) = self.target(w)?;
        if label < self.tent[v] {
            self.place(v, level, label);
            Ok(Some(label))
        } else {
            Ok(None)
        }
    }

    /// Moves `v` to bucket `(level, label)`, which must be the current
    /// bucket or the frontier bucket of `level`.
    pub fn place(&mut self, v: usize, level: u32, label: u64) {
        debug_assert!(label >= self.current);
        debug_assert!(label == self.current || label == frontier_label(self.current, level));
        if self.level_of[v] != 0 {
            self.unlink(v);
        } else if self.tent[v] == INF {
            self.touched.push(v as u32);
        }
        let l = level as usize;
        if self.nonempty & (1 << l) == 0 {
            self.label[l] = label;
            self.nonempty |= 1 << l;
        } else {
            debug_assert_eq!(self.label[l], label);
        }
        self.prev[v] = self.tail[l];
        self.next[v] = NIL;
        if self.tail[l] == NIL {
            self.head[l] = v as u32;
        } else {
            self.next[self.tail[l] as usize] = v as u32;
        }
        self.tail[l] = v as u32;
        self.level_of[v] = level as u8;
        self.tent[v] = label;
        self.ops.decrease_key += 1;
    }

    fn unlink(&mut self, v: usize) {
        let l = self.level_of[v] as usize;
        let (p, nx) = (self.prev[v], self.next[v]);
        if p == NIL {
            self.head[l] = nx;
        } else {
            self.next[p as usize] = nx;
        }
        if nx == NIL {
            self.tail[l] = p;
        } else {
            self.prev[nx as usize] = p;
        }
        if self.head[l] == NIL {
            self.nonempty &= !(1 << l);
        }
        self.level_of[v] = 0;
        self.prev[v] = NIL;
        self.next[v] = NIL;
    }

    /// Removes the oldest vertex of the current bucket, first advancing to
    /// the nearest non-empty frontier bucket if the current one is drained.
    pub fn extract_min(&mut self) -> Option<(usize, u64)> {
        let b = self.cur_level as usize;
        if self.nonempty & (1 << b) == 0 || self.label[b] != self.current {
            if self.nonempty == 0 {
                return None;
            }
            let mut bits = self.nonempty;
            let mut best = (u64::MAX, 0u32);
            while bits != 0 {
                let l = bits.trailing_zeros();
                bits &= bits - 1;
                if self.label[l as usize] < best.0 {
                    best = (self.label[l as usize], l);
                }
            }
            self.current = best.0;
            self.cur_level = best.1;
        }
        let l = self.cur_level as usize;
        let v = self.head[l] as usize;
        self.unlink(v);
        self.ops.extract_min += 1;
        Some((v, self.tent[v]))
    }
}

/// Output of an approximate search.
#[derive(Clone, Debug)]
pub struct ApproxDistances {
    pub source: usize,
    pub dist: Vec<u64>,
    /// Vertices in extraction order; their distances are nondecreasing.
    pub order: Vec<usize>,
    pub ops: OpCounts,
}

fn search(adj: &[Vec<(usize, u64)>], s: usize, tree: &mut BucketTree) -> Result<ApproxDistances, SsspError> {
    let n = adj.len();
    let mut dist = vec![INF; n];
    let mut order = Vec::with_capacity(n);
    tree.insert_source(s);
    while let Some((u, d)) = tree.extract_min() {
        dist[u] = d;
        order.push(u);
        for &(v, w) in &adj[u] {
            if dist[v] == INF {
                tree.decrease_key(v, w)?;
            }
        }
    }
    Ok(ApproxDistances { source: s, dist, order, ops: tree.ops() })
}

/// Approximate distances from `s` over a directed adjacency list whose
/// weights lie in `[1, n^k]`.
pub fn approx_sssp(adj: &[Vec<(usize, u64)>], s: usize, k: u32) -> Result<ApproxDistances, SsspError> {
    let n = adj.len();
    if s >= n {
        return Err(SsspError::SourceOutOfRange(s));
    }
    let max = (n.max(1) as u128).checked_pow(k).map_or(u64::MAX, |b| b.min(u64::MAX as u128) as u64);
    for list in adj {
        for &(_, w) in list {
            if w == 0 || w > max {
                return Err(SsspError::WeightOutOfRange { weight: w, max });
            }
        }
    }
    let mut tree = BucketTree::for_graph(n, k)?;
    search(adj, s, &mut tree)
}

/// Smallest `k >= 1` with every weight of `g` at most `n^k`.
pub fn weight_exponent(g: &Graph) -> u32 {
    let n = g.n().max(2) as u128;
    let w = g.max_weight() as u128;
    let mut k = 1;
    let mut p = n;
    while p < w {
        p *= n;
        k += 1;
    }
    k
}

/// [`approx_sssp`] with the smallest exponent that admits the weights.
pub fn approx_sssp_graph(g: &Graph, s: usize) -> Result<ApproxDistances, SsspError> {
    approx_sssp(g.adj(), s, weight_exponent(g))
}

/// Rounds needed so that `(3/4)^rounds <= eps`.
pub fn gabow_rounds(eps: f64) -> Result<u32, SsspError> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(SsspError::BadEpsilon(eps));
    }
    let mut rounds = 1;
    let mut left = 0.75f64;
    while left > eps {
        left *= 0.75;
        rounds += 1;
    }
    Ok(rounds)
}

#[derive(Clone, Debug)]
pub struct RefinedDistances {
    pub source: usize,
    /// Sum of the per-round distances; within `(1 - eps)` of exact.
    pub dist: Vec<u64>,
    /// Distances found in each round on the reweighted graph.
    pub rounds: Vec<Vec<u64>>,
    pub ops: OpCounts,
}

/// Repeats the approximate search on reduced costs
/// `w + P(u) - P(v)`, where `P` accumulates the distances of earlier rounds.
/// Each round recovers at least a quarter of the remaining gap.
pub fn refine_gabow(g: &Graph, s: usize, eps: f64) -> Result<RefinedDistances, SsspError> {
    let n = g.n();
    if s >= n {
        return Err(SsspError::SourceOutOfRange(s));
    }
    let rounds = gabow_rounds(eps)?;
    let max_label = (n as u64).saturating_mul(g.max_weight().max(1));
    let mut tree = BucketTree::new(n, levels_for_max_label(max_label)?)?;
    let mut pot = vec![0u64; n];
    let mut per_round = Vec::with_capacity(rounds as usize);
    let mut ops = OpCounts::default();
    let mut reach: Option<Vec<bool>> = None;
    for _ in 0..rounds {
        let adj: Vec<Vec<(usize, u64)>> = (0..n)
            .map(|u| {
                if reach.as_ref().is_some_and(|r| !r[u]) {
                    return Vec::new();
                }
                g.neighbors(u)
                    .iter()
                    .filter(|&&(v, _)| reach.as_ref().is_none_or(|r| r[v]))
                    .map(|&(v, w)| {
                        let rw = w as i128 + pot[u] as i128 - pot[v] as i128;
                        debug_assert!(rw >= 0);
                        (v, rw as u64)
                    })
                    .collect()
            })
            .collect();
        tree.reset();
        let before = tree.ops();
        let out = search(&adj, s, &mut tree)?;
        let after = tree.ops();
        ops.add(OpCounts {
            decrease_key: after.decrease_key - before.decrease_key,
            extract_min: after.extract_min - before.extract_min,
        });
        if reach.is_none() {
            reach = Some(out.dist.iter().map(|&d| d != INF).collect());
        }
        for v in 0..n {
            if out.dist[v] != INF {
                pot[v] += out.dist[v];
            }
        }
        per_round.push(out.dist);
    }
    let reach = reach.unwrap_or_default();
    let dist = (0..n).map(|v| if reach[v] { pot[v] } else { INF }).collect();
    Ok(RefinedDistances { source: s, dist, rounds: per_round, ops })
}

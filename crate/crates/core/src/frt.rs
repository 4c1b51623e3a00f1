//! Tree embeddings from dominance sequences.
//!
//! For a radius scale `beta` in `[1, 2)` and depth `delta`, the partition
//! sequence of `x` names, for each level `i < delta`, the highest-priority
//! vertex within `beta * 2^(delta - i)` of `x`, and `x` itself at level
//! `delta`. Vertices sharing a prefix share the tree path down to the end
//! of that prefix. Each sequence is stored compressed as runs
//! `(dominator, last level)` and inserted into a compressed trie whose
//! nodes are branching points.
//!
//! Two edge weightings are supported. In level mode the tree edge from
//! level `i` to `i + 1` weighs `beta * 2^(delta - i)`, the radius of the
//! upper cluster; two leaves whose paths split below level `b` are
//! `4 beta (2^(delta - b) - 1)` apart, which is at least the graph
//! distance. In actual mode the distance is `d(w, u) + d(w, v)` for the
//! dominator `w` labelling the split node, read from the stored sequences.

use std::collections::HashMap;

use rand::Rng as _;
use thiserror::Error;

use crate::bucket_sssp::OpCounts;
use crate::domseq::{build_domseq, DominanceSequences, DomseqError, Entry, SeqKind};
use crate::graph::{Graph, GraphError, Permutation};
use crate::lca::Lca;
use crate::rng::Rng;

/// Fractional bits of the fixed-point radius scale.
pub const BETA_FRAC_BITS: u32 = 52;

/// Deepest supported tree; keeps level weights inside `u64`.
pub const MAX_DELTA: u32 = 60;

#[derive(Debug, Error)]
pub enum FrtError {
    #[error("stored distance {dist} exceeds the top radius beta * 2^{delta}")]
    DistanceTooLarge { dist: u64, delta: u32 },
    #[error("partition sequences disagree on beta or delta")]
    ParameterMismatch,
    #[error("sequence of {0} does not end with itself at distance 0")]
    BadSequence(usize),
    #[error("vertices {0} and {1} have different top-level dominators; is the graph connected?")]
    RootMismatch(usize, usize),
    #[error("vertex {0} out of range")]
    VertexOutOfRange(usize),
    #[error("delta {0} exceeds {MAX_DELTA}")]
    DeltaTooLarge(u32),
    #[error("corrupt tree: {0}")]
    Corrupt(String),
    #[error(transparent)]
    Domseq(#[from] DomseqError),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Radius scale `beta = num / 2^52`, with `num` in `[2^52, 2^53)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Beta(u64);

impl Beta {
    pub const ONE: Beta = Beta(1 << BETA_FRAC_BITS);

    pub fn from_num(num: u64) -> Option<Beta> {
        (1 << BETA_FRAC_BITS..1 << (BETA_FRAC_BITS + 1)).contains(&num).then_some(Beta(num))
    }

    /// `2^u` for `u` in `[0, 1)`.
    pub fn from_exponent(u: f64) -> Beta {
        let x = libm::exp2(u.clamp(0.0, 1.0)) * (1u64 << BETA_FRAC_BITS) as f64;
        let num = (x.round() as u64).clamp(1 << BETA_FRAC_BITS, (1 << (BETA_FRAC_BITS + 1)) - 1);
        Beta(num)
    }

    pub fn num(self) -> u64 {
        self.0
    }

    pub fn value(self) -> f64 {
        self.0 as f64 / (1u64 << BETA_FRAC_BITS) as f64
    }

    /// Whether `d <= beta * 2^e`, exactly.
    pub fn covers(self, d: u64, e: u32) -> bool {
        ((d as u128) << BETA_FRAC_BITS) <= (self.0 as u128) << e
    }
}

/// Draws `beta = 2^U` with `U` uniform on `[0, 1)`; `beta` has density
/// `1 / (x ln 2)` on `[1, 2)`.
pub fn sample_beta(rng: &mut Rng) -> Beta {
    Beta::from_exponent(rng.gen::<f64>())
}

/// `ceil(log2(max_dist))`, at least 1.
pub fn delta_for(max_dist: u64) -> u32 {
    if max_dist <= 2 {
        1
    } else {
        64 - (max_dist - 1).leading_zeros()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CpsEntry {
    pub dominator: usize,
    /// Last level at which `dominator` is the partition center.
    pub level: u32,
    pub dist: u64,
}

/// Compressed partition sequence of one vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cps {
    pub beta: Beta,
    pub delta: u32,
    pub entries: Vec<CpsEntry>,
}

impl Cps {
    /// Center at `level`.
    pub fn at(&self, level: u32) -> &CpsEntry {
        let k = self.entries.partition_point(|e| e.level < level);
        &self.entries[k]
    }

    /// Centers for levels `0..=delta`.
    pub fn expand(&self) -> Vec<usize> {
        (0..=self.delta).map(|i| self.at(i).dominator).collect()
    }
}

/// Last level whose radius covers `dist`: the largest `i <= delta - 1` with
/// `dist <= beta * 2^(delta - i)`, or `delta` for distance 0.
fn last_level(dist: u64, beta: Beta, delta: u32) -> Result<u32, FrtError> {
    if dist == 0 {
        return Ok(delta);
    }
    if !beta.covers(dist, delta) {
        return Err(FrtError::DistanceTooLarge { dist, delta });
    }
    // Predicate holds on a prefix of 0..delta.
    let (mut lo, mut hi) = (0u32, delta);
    while hi - lo > 1 {
        let mid = (lo + hi) / 2;
        if beta.covers(dist, delta - mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(lo)
}

/// Keeps the entries that are the center of at least one level.
pub fn domseq_to_cps(seq: &[Entry], beta: Beta, delta: u32) -> Result<Cps, FrtError> {
    if delta == 0 || delta > MAX_DELTA {
        return Err(FrtError::DeltaTooLarge(delta));
    }
    let mut entries = Vec::new();
    let mut prev: i64 = -1;
    for e in seq {
        let m = last_level(e.dist, beta, delta)?;
        if m as i64 > prev {
            entries.push(CpsEntry { dominator: e.dominator, level: m, dist: e.dist });
            prev = m as i64;
        }
    }
    Ok(Cps { beta, delta, entries })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WeightMode {
    Level,
    Actual,
}

impl WeightMode {
    pub fn name(self) -> &'static str {
        match self {
            WeightMode::Level => "level",
            WeightMode::Actual => "actual",
        }
    }
}

pub const NO_PARENT: u32 = u32::MAX;

/// Root-to-level path length in units of `beta`:
/// `sum_{i < b} 2^(delta - i) = 2^(delta + 1) - 2^(delta - b + 1)`.
pub fn level_depth(delta: u32, b: u32) -> u64 {
    (1u64 << (delta + 1)) - (1u64 << (delta - b + 1))
}

/// Compressed tree. Node 0 is the root at level 0; every vertex owns one
/// leaf at level `delta`.
pub struct FrtTree {
    pub beta: Beta,
    pub delta: u32,
    pub mode: WeightMode,
    pub parent: Vec<u32>,
    pub label: Vec<u32>,
    pub end_level: Vec<u32>,
    /// Edge to the parent in units of `beta`.
    pub weight: Vec<u64>,
    pub leaf: Vec<u32>,
    /// Actual mode: each leaf's compressed sequence as `(level, dist)`.
    pub leaf_dist: Vec<Vec<(u32, u64)>>,
    lca: Lca,
}

#[derive(Default)]
struct Trie {
    parent: Vec<u32>,
    label: Vec<u32>,
    end_level: Vec<u32>,
    /// A vertex whose sequence runs through the node.
    origin: Vec<usize>,
}

impl Trie {
    fn add(&mut self, parent: u32, label: usize, end: u32, origin: usize) -> u32 {
        self.parent.push(parent);
        self.label.push(label as u32);
        self.end_level.push(end);
        self.origin.push(origin);
        (self.parent.len() - 1) as u32
    }
}

fn first_divergence(a: &Cps, b: &Cps, from: u32, to: u32) -> Option<u32> {
    let mut j = from;
    while j <= to {
        let (x, y) = (a.at(j), b.at(j));
        if x.dominator != y.dominator {
            return Some(j);
        }
        j = x.level.min(y.level) + 1;
    }
    None
}

impl FrtTree {
    /// Inserts every vertex's sequence into a compressed trie. Children are
    /// found through a hash map keyed by `(node, center at the next level)`;
    /// an edge whose run diverges partway is split at the divergence level.
    pub fn build(cps: &[Cps], mode: WeightMode) -> Result<FrtTree, FrtError> {
        let n = cps.len();
        if n == 0 {
            return Err(FrtError::Corrupt("no vertices".into()));
        }
        let (beta, delta) = (cps[0].beta, cps[0].delta);
        for (x, c) in cps.iter().enumerate() {
            if c.beta != beta || c.delta != delta {
                return Err(FrtError::ParameterMismatch);
            }
            match c.entries.last() {
                Some(e) if e.dominator == x && e.level == delta && e.dist == 0 => {}
                _ => return Err(FrtError::BadSequence(x)),
            }
            if c.entries[0].dominator != cps[0].entries[0].dominator {
                return Err(FrtError::RootMismatch(0, x));
            }
        }
        let mut t = Trie::default();
        t.add(NO_PARENT, cps[0].entries[0].dominator, 0, 0);
        let mut leaf = vec![0u32; n];
        let mut child: HashMap<(u32, u32), u32> = HashMap::with_capacity(2 * n);
        for (x, cx) in cps.iter().enumerate() {
            let mut cur = 0u32;
            leaf[x] = loop {
                let a = t.end_level[cur as usize];
                if a == delta {
                    return Err(FrtError::Corrupt(format!("vertex {x} repeats an existing leaf")));
                }
                let key = (cur, cx.at(a + 1).dominator as u32);
                let Some(&ch) = child.get(&key) else {
                    let node = t.add(cur, x, delta, x);
                    child.insert(key, node);
                    break node;
                };
                let b = t.end_level[ch as usize];
                let o = t.origin[ch as usize];
                let co = &cps[o];
                if let Some(j) = first_divergence(cx, co, a + 1, b) {
                    let mid = t.add(cur, co.at(j - 1).dominator, j - 1, o);
                    child.insert(key, mid);
                    t.parent[ch as usize] = mid;
                    child.insert((mid, co.at(j).dominator as u32), ch);
                    let node = t.add(mid, x, delta, x);
                    child.insert((mid, cx.at(j).dominator as u32), node);
                    break node;
                }
                cur = ch;
            };
        }
        let Trie { parent, label, end_level, .. } = t;
        let weight = (0..parent.len())
            .map(|v| match parent[v] {
                NO_PARENT => 0,
                p => level_depth(delta, end_level[v]) - level_depth(delta, end_level[p as usize]),
            })
            .collect();
        let leaf_dist = match mode {
            WeightMode::Actual => cps.iter().map(|c| c.entries.iter().map(|e| (e.level, e.dist)).collect()).collect(),
            WeightMode::Level => Vec::new(),
        };
        FrtTree::assemble(beta, delta, mode, parent, label, end_level, weight, leaf, leaf_dist)
    }

    #[allow(clippy::too_many_arguments)]
    pub(crate) fn assemble(
        beta: Beta,
        delta: u32,
        mode: WeightMode,
        parent: Vec<u32>,
        label: Vec<u32>,
        end_level: Vec<u32>,
        weight: Vec<u64>,
        leaf: Vec<u32>,
        leaf_dist: Vec<Vec<(u32, u64)>>,
    ) -> Result<FrtTree, FrtError> {
        if delta == 0 || delta > MAX_DELTA {
            return Err(FrtError::DeltaTooLarge(delta));
        }
        let nodes = parent.len();
        if label.len() != nodes || end_level.len() != nodes || weight.len() != nodes {
            return Err(FrtError::Corrupt("node arrays differ in length".into()));
        }
        let roots = parent.iter().filter(|&&p| p == NO_PARENT).count();
        if roots != 1 || parent[0] != NO_PARENT {
            return Err(FrtError::Corrupt("node 0 must be the only root".into()));
        }
        if end_level[0] != 0 {
            return Err(FrtError::Corrupt("root must sit at level 0".into()));
        }
        for v in 1..nodes {
            let p = parent[v] as usize;
            if p >= nodes {
                return Err(FrtError::Corrupt(format!("node {v} has parent {p}")));
            }
            if end_level[v] <= end_level[p] || end_level[v] > delta {
                return Err(FrtError::Corrupt(format!("node {v} does not descend in level")));
            }
        }
        if leaf.iter().any(|&l| l as usize >= nodes || end_level[l as usize] != delta) {
            return Err(FrtError::Corrupt("leaf table points at a non-leaf".into()));
        }
        if mode == WeightMode::Actual && leaf_dist.len() != leaf.len() {
            return Err(FrtError::Corrupt("missing leaf distance tables".into()));
        }
        let parents: Vec<Option<usize>> =
            parent.iter().map(|&p| if p == NO_PARENT { None } else { Some(p as usize) }).collect();
        let lca = Lca::new(&parents);
        Ok(FrtTree { beta, delta, mode, parent, label, end_level, weight, leaf, leaf_dist, lca })
    }

    pub fn n(&self) -> usize {
        self.leaf.len()
    }

    pub fn node_count(&self) -> usize {
        self.parent.len()
    }

    /// Level at which the paths of `u` and `v` separate.
    pub fn split_level(&self, u: usize, v: usize) -> Result<u32, FrtError> {
        let n = self.n();
        for x in [u, v] {
            if x >= n {
                return Err(FrtError::VertexOutOfRange(x));
            }
        }
        let l = self.lca.lca(self.leaf[u] as usize, self.leaf[v] as usize);
        Ok(self.end_level[l])
    }

    /// Tree distance between the leaves of `u` and `v`.
    pub fn distance(&self, u: usize, v: usize) -> Result<f64, FrtError> {
        let b = self.split_level(u, v)?;
        if u == v {
            return Ok(0.0);
        }
        Ok(match self.mode {
            WeightMode::Level => {
                let units = 2 * (level_depth(self.delta, self.delta) - level_depth(self.delta, b));
                units as f64 * self.beta.value()
            }
            WeightMode::Actual => (self.ancestor_dist(u, b) + self.ancestor_dist(v, b)) as f64,
        })
    }

    fn ancestor_dist(&self, x: usize, level: u32) -> u64 {
        let t = &self.leaf_dist[x];
        t[t.partition_point(|&(l, _)| l < level)].1
    }

    /// Dominator labelling the node where the paths of `u` and `v` split.
    pub fn split_label(&self, u: usize, v: usize) -> usize {
        let l = self.lca.lca(self.leaf[u] as usize, self.leaf[v] as usize);
        self.label[l] as usize
    }
}

/// Partition sequences for all vertices from their dominance sequences.
pub fn cps_all(seqs: &DominanceSequences, beta: Beta) -> Result<Vec<Cps>, FrtError> {
    let delta = delta_for(seqs.max_dist());
    if delta > MAX_DELTA {
        return Err(FrtError::DeltaTooLarge(delta));
    }
    seqs.lists.iter().map(|l| domseq_to_cps(l, beta, delta)).collect()
}

pub fn build_frt_tree(seqs: &DominanceSequences, beta: Beta, mode: WeightMode) -> Result<FrtTree, FrtError> {
    FrtTree::build(&cps_all(seqs, beta)?, mode)
}

/// One full sample: permutation and `beta` from `rng`, then sequences,
/// partition sequences and the tree.
pub fn sample_tree(g: &Graph, kind: SeqKind, mode: WeightMode, rng: &mut Rng) -> Result<FrtTree, FrtError> {
    sample_tree_counted(g, kind, mode, rng).map(|(t, _)| t)
}

/// [`sample_tree`] that also reports the sequence builder's queue
/// operations.
pub fn sample_tree_counted(
    g: &Graph,
    kind: SeqKind,
    mode: WeightMode,
    rng: &mut Rng,
) -> Result<(FrtTree, OpCounts), FrtError> {
    let perm = crate::graph::random_permutation(g.n(), rng)?;
    let beta = sample_beta(rng);
    let seqs = build_domseq(g, &perm, kind)?;
    Ok((build_frt_tree(&seqs, beta, mode)?, seqs.ops))
}

pub fn tree_for(
    g: &Graph,
    perm: &Permutation,
    beta: Beta,
    kind: SeqKind,
    mode: WeightMode,
) -> Result<FrtTree, FrtError> {
    let seqs = build_domseq(g, perm, kind)?;
    build_frt_tree(&seqs, beta, mode)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domseq::build_domseq_exact;
    use crate::graph::{all_pairs, gen_random, random_permutation};
    use crate::rng;

    fn e(dominator: usize, dist: u64) -> Entry {
        Entry { dominator, dist }
    }

    fn levels(c: &Cps) -> Vec<(usize, u32)> {
        c.entries.iter().map(|x| (x.dominator, x.level)).collect()
    }

    #[test]
    fn beta_fixed_point() {
        assert_eq!(Beta::from_exponent(0.0), Beta::ONE);
        assert!((Beta::from_exponent(0.5).value() - 2f64.sqrt()).abs() < 1e-15);
        assert!(Beta::from_exponent(0.999_999_999).num() < 1 << 53);
        assert!(Beta::from_num(1 << 53).is_none());
    }

    #[test]
    fn beta_log_is_uniform() {
        let mut r = rng::seeded(3);
        let k = 100_000;
        let mut xs: Vec<f64> = (0..k).map(|_| sample_beta(&mut r).value().log2()).collect();
        xs.sort_by(f64::total_cmp);
        let worst = xs.iter().enumerate().map(|(i, &x)| ((i + 1) as f64 / k as f64 - x).abs()).fold(0.0, f64::max);
        assert!(worst <= 0.02, "ECDF gap {worst}");
    }

    #[test]
    fn delta_values() {
        assert_eq!(delta_for(0), 1);
        assert_eq!(delta_for(2), 1);
        assert_eq!(delta_for(3), 2);
        assert_eq!(delta_for(4), 2);
        assert_eq!(delta_for(12), 4);
        assert_eq!(delta_for(1 << 40), 40);
    }

    #[test]
    fn cps_examples() {
        let c = domseq_to_cps(&[e(7, 0)], Beta::ONE, 3).unwrap();
        assert_eq!(levels(&c), vec![(7, 3)]);
        let c = domseq_to_cps(&[e(1, 12), e(7, 0)], Beta::ONE, 4).unwrap();
        assert_eq!(levels(&c), vec![(1, 0), (7, 4)]);
        let c = domseq_to_cps(&[e(1, 3), e(2, 2), e(7, 0)], Beta::ONE, 2).unwrap();
        assert_eq!(levels(&c), vec![(1, 0), (2, 1), (7, 2)]);
        // Nearby entries never displace the vertex at the bottom level.
        let c = domseq_to_cps(&[e(1, 3), e(2, 1), e(7, 0)], Beta::ONE, 2).unwrap();
        assert_eq!(levels(&c), vec![(1, 0), (2, 1), (7, 2)]);
        assert!(matches!(domseq_to_cps(&[e(1, 17), e(7, 0)], Beta::ONE, 4), Err(FrtError::DistanceTooLarge { .. })));
    }

    #[test]
    fn level_distance_formula() {
        // beta = 1, delta = 2, split at the root: 4 (2^2 - 1) = 12.
        assert_eq!(2 * (level_depth(2, 2) - level_depth(2, 0)), 12);
        assert_eq!(level_depth(3, 0), 0);
        assert_eq!(level_depth(3, 1), 8);
    }

    #[test]
    fn expanded_cps_matches_definition() {
        for seed in 0..30 {
            let n = 5 + seed as usize;
            let g = gen_random(n, 2 * n, true, seed).unwrap();
            let mut r = rng::seeded(seed + 100);
            let p = random_permutation(n, &mut r).unwrap();
            let beta = sample_beta(&mut r);
            let seqs = build_domseq_exact(&g, &p).unwrap();
            let cps = cps_all(&seqs, beta).unwrap();
            let d = all_pairs(&g);
            let delta = cps[0].delta;
            for x in 0..n {
                let sigma = cps[x].expand();
                for i in 0..delta {
                    let best = (0..n).filter(|&y| beta.covers(d[x][y], delta - i)).min_by_key(|&y| p.rank(y)).unwrap();
                    assert_eq!(sigma[i as usize], best);
                }
                assert_eq!(sigma[delta as usize], x);
            }
        }
    }

    #[test]
    fn tree_paths_follow_shared_prefixes() {
        let g = gen_random(40, 90, true, 5).unwrap();
        let mut r = rng::seeded(6);
        let p = random_permutation(40, &mut r).unwrap();
        let seqs = build_domseq_exact(&g, &p).unwrap();
        let cps = cps_all(&seqs, sample_beta(&mut r)).unwrap();
        let t = FrtTree::build(&cps, WeightMode::Actual).unwrap();
        assert!(t.node_count() < 2 * 40);
        for u in 0..40 {
            for v in 0..40 {
                let (a, b) = (cps[u].expand(), cps[v].expand());
                let common = a.iter().zip(&b).take_while(|(x, y)| x == y).count() as u32;
                if u != v {
                    assert_eq!(t.split_level(u, v).unwrap(), common - 1);
                    assert_eq!(t.split_label(u, v), a[common as usize - 1]);
                }
            }
        }
    }

    #[test]
    fn distance_edge_cases() {
        let g = Graph::from_edges(3, [(0, 1, 2), (1, 2, 2)]).unwrap();
        let p = Permutation::from_order(vec![1, 2, 0]).unwrap();
        let seqs = build_domseq_exact(&g, &p).unwrap();
        let lvl = build_frt_tree(&seqs, Beta::ONE, WeightMode::Level).unwrap();
        assert_eq!(lvl.distance(1, 1).unwrap(), 0.0);
        assert!(lvl.distance(0, 3).is_err());
        // Center 1 covers both ends at the root (radius 2); level mode must
        // still dominate the distance 4 between them.
        assert_eq!(lvl.split_level(0, 2).unwrap(), 0);
        assert_eq!(lvl.distance(0, 2).unwrap(), 4.0);
        let act = build_frt_tree(&seqs, Beta::ONE, WeightMode::Actual).unwrap();
        assert_eq!(act.distance(0, 2).unwrap(), 4.0);
    }

    #[test]
    fn mismatched_parameters_are_rejected() {
        let a = domseq_to_cps(&[e(0, 0)], Beta::ONE, 2).unwrap();
        let b = domseq_to_cps(&[e(0, 1), e(1, 0)], Beta::ONE, 3).unwrap();
        assert!(matches!(FrtTree::build(&[a, b], WeightMode::Level), Err(FrtError::ParameterMismatch)));
    }
}

//! Dominance sequences.
//!
//! Under a priority permutation `pi`, `p` dominates `x` when no vertex at
//! least as close to `x` has higher priority. The dominance sequence of `x`
//! lists its dominators by increasing rank; their distances strictly
//! decrease and the list ends with `(x, 0)`. Sequences feed the tree
//! construction in [`crate::frt`].

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use thiserror::Error;

use crate::bucket_sssp::{levels_for_max_label, BucketTree, OpCounts, SsspError};
use crate::graph::{all_pairs, Graph, Permutation, INF};

#[derive(Debug, Error)]
pub enum DomseqError {
    #[error("permutation has {perm} entries but the graph has {n} vertices")]
    SizeMismatch { n: usize, perm: usize },
    #[error(transparent)]
    Sssp(#[from] SsspError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Entry {
    pub dominator: usize,
    pub dist: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SeqKind {
    /// Stored distances are exact.
    Exact,
    /// Stored distances `d` satisfy `d_G <= d <= 8 d_G`.
    Approx,
}

impl SeqKind {
    pub fn name(self) -> &'static str {
        match self {
            SeqKind::Exact => "exact",
            SeqKind::Approx => "approx",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DominanceSequences {
    pub kind: SeqKind,
    pub lists: Vec<Vec<Entry>>,
    pub ops: OpCounts,
}

impl DominanceSequences {
    pub fn n(&self) -> usize {
        self.lists.len()
    }

    pub fn list(&self, x: usize) -> &[Entry] {
        &self.lists[x]
    }

    pub fn total_len(&self) -> usize {
        self.lists.iter().map(Vec::len).sum()
    }

    pub fn mean_len(&self) -> f64 {
        self.total_len() as f64 / self.n().max(1) as f64
    }

    pub fn max_dist(&self) -> u64 {
        self.lists.iter().flat_map(|l| l.iter().map(|e| e.dist)).max().unwrap_or(0)
    }

    /// Checks the ordering invariants every sequence must satisfy.
    pub fn check_shape(&self, perm: &Permutation) -> Result<(), String> {
        for (x, list) in self.lists.iter().enumerate() {
            match list.last() {
                Some(e) if e.dominator == x && e.dist == 0 => {}
                _ => return Err(format!("sequence of {x} does not end with ({x}, 0)")),
            }
            for w in list.windows(2) {
                if perm.rank(w[0].dominator) >= perm.rank(w[1].dominator) {
                    return Err(format!("sequence of {x}: ranks not increasing"));
                }
                if w[0].dist <= w[1].dist {
                    return Err(format!("sequence of {x}: distances not decreasing"));
                }
            }
        }
        Ok(())
    }
}

fn check_sizes(g: &Graph, perm: &Permutation) -> Result<(), DomseqError> {
    if g.n() != perm.len() {
        return Err(DomseqError::SizeMismatch { n: g.n(), perm: perm.len() });
    }
    Ok(())
}

/// Sequences straight from the definition over all-pairs distances.
/// Unreachable vertices never dominate.
pub fn brute_force_domseq(g: &Graph, perm: &Permutation) -> Result<DominanceSequences, DomseqError> {
    check_sizes(g, perm)?;
    let dist = all_pairs(g);
    let lists = (0..g.n())
        .map(|x| {
            let mut by_dist: Vec<(u64, usize)> =
                (0..g.n()).filter(|&y| dist[x][y] != INF).map(|y| (dist[x][y], perm.rank(y))).collect();
            by_dist.sort_unstable();
            let mut out = Vec::new();
            let mut best = usize::MAX;
            let mut i = 0;
            while i < by_dist.len() {
                let d = by_dist[i].0;
                let group_min = by_dist[i].1;
                while i < by_dist.len() && by_dist[i].0 == d {
                    i += 1;
                }
                if group_min < best {
                    best = group_min;
                    out.push(Entry { dominator: perm.vertex(group_min), dist: d });
                }
            }
            out.reverse();
            out
        })
        .collect();
    Ok(DominanceSequences { kind: SeqKind::Exact, lists, ops: OpCounts::default() })
}

/// Exact sequences by pruned Dijkstra searches in priority order over one
/// shared tentative array that is never reset: a search only enters `v`
/// while it strictly improves on every earlier source.
pub fn build_domseq_exact(g: &Graph, perm: &Permutation) -> Result<DominanceSequences, DomseqError> {
    check_sizes(g, perm)?;
    let n = g.n();
    let mut delta = vec![INF; n];
    let mut lists: Vec<Vec<Entry>> = vec![Vec::new(); n];
    let mut heap = BinaryHeap::new();
    let mut ops = OpCounts::default();
    for &u in perm.order() {
        delta[u] = 0;
        heap.push(Reverse((0u64, u)));
        ops.decrease_key += 1;
        while let Some(Reverse((d, v))) = heap.pop() {
            if d > delta[v] {
                continue;
            }
            ops.extract_min += 1;
            lists[v].push(Entry { dominator: u, dist: d });
            for &(w, l) in g.neighbors(v) {
                if d + l < delta[w] {
                    delta[w] = d + l;
                    heap.push(Reverse((d + l, w)));
                    ops.decrease_key += 1;
                }
            }
        }
    }
    Ok(DominanceSequences { kind: SeqKind::Exact, lists, ops })
}

const ROOT: u32 = u32::MAX;

/// Union-find keyed by subproblem index.
///
/// Union by rank without path compression, so the forest is persistent:
/// every link carries the smallest subproblem index at which its endpoints
/// are contracted, tags never decrease towards the root, and
/// [`component_of`](Self::component_of) recovers the component of any
/// earlier index by stopping at the first link tagged above it. Roots keep
/// a history of their highest-priority member.
pub struct PriorityUnionFind {
    parent: Vec<u32>,
    tag: Vec<u32>,
    rank: Vec<u8>,
    children: Vec<Vec<(u32, u32)>>,
    best: Vec<Vec<(u32, u32)>>,
    prio: Vec<u32>,
    last_tag: u32,
}

impl PriorityUnionFind {
    pub fn new(perm: &Permutation) -> PriorityUnionFind {
        let n = perm.len();
        PriorityUnionFind {
            parent: vec![ROOT; n],
            tag: vec![u32::MAX; n],
            rank: vec![0; n],
            children: vec![Vec::new(); n],
            best: (0..n as u32).map(|v| vec![(0, v)]).collect(),
            prio: (0..n).map(|v| perm.rank(v) as u32).collect(),
            last_tag: 0,
        }
    }

    pub fn find(&self, mut v: usize) -> usize {
        while self.parent[v] != ROOT {
            v = self.parent[v] as usize;
        }
        v
    }

    /// Joins the components of `u` and `v` from subproblem `tag` on. Tags
    /// must be supplied in nondecreasing order. Returns whether a link was
    /// added.
    pub fn union(&mut self, u: usize, v: usize, tag: u32) -> bool {
        assert!(tag >= self.last_tag, "union tags must not decrease");
        self.last_tag = tag;
        let (a, b) = (self.find(u), self.find(v));
        if a == b {
            return false;
        }
        let (root, child) = if self.rank[a] >= self.rank[b] { (a, b) } else { (b, a) };
        if self.rank[root] == self.rank[child] {
            self.rank[root] += 1;
        }
        self.parent[child] = root as u32;
        self.tag[child] = tag;
        self.children[root].push((child as u32, tag));
        let cb = self.best[child].last().unwrap().1;
        let rb = self.best[root].last().unwrap().1;
        if self.prio[cb as usize] < self.prio[rb as usize] {
            self.best[root].push((tag, cb));
        }
        true
    }

    /// Root of the component of `v` in subproblem `i`.
    pub fn component_of(&self, mut v: usize, i: u32) -> usize {
        while self.parent[v] != ROOT && self.tag[v] <= i {
            v = self.parent[v] as usize;
        }
        v
    }

    /// Number of links followed by [`component_of`](Self::component_of).
    pub fn walk_len(&self, mut v: usize, i: u32) -> usize {
        let mut steps = 0;
        while self.parent[v] != ROOT && self.tag[v] <= i {
            v = self.parent[v] as usize;
            steps += 1;
        }
        steps
    }

    /// Highest-priority member of the subproblem-`i` component rooted at
    /// `root`.
    pub fn leader(&self, root: usize, i: u32) -> usize {
        let h = &self.best[root];
        let k = h.partition_point(|&(t, _)| t <= i);
        h[k.max(1) - 1].1 as usize
    }

    /// Members of the subproblem-`i` component rooted at `root`, in time
    /// linear in their number.
    pub fn component_members(&self, root: usize, i: u32, out: &mut Vec<usize>) {
        out.clear();
        out.push(root);
        let mut k = 0;
        while k < out.len() {
            let v = out[k];
            for &(c, t) in &self.children[v] {
                if t > i {
                    break;
                }
                out.push(c as usize);
            }
            k += 1;
        }
    }
}

/// One non-empty subproblem: the slice of weight-sorted edges it searches
/// and the window of stored distances it may emit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subproblem {
    pub index: u32,
    pub edges: std::ops::Range<usize>,
    /// Emitted distances lie in `[lower, upper)`.
    pub lower: u64,
    pub upper: u64,
}

/// Partition of the weight range into overlapping subproblems.
///
/// With base `B = 2n`, subproblem `i >= 1` contracts edges lighter than
/// `8 B^(i-1)`, searches edges in `[8 B^(i-1), 8 B^(i+1))` and emits
/// distances in `[B^i, 8 B^(i+1))`; subproblem 0 contracts nothing and
/// emits every positive distance below `8 B`. The top subproblem has no
/// upper limit. Each edge falls in at most two subproblems. Thresholds use
/// only comparisons and multiplications.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubproblemPlan {
    pub base: u64,
    /// Non-empty subproblems in decreasing index order.
    pub subproblems: Vec<Subproblem>,
    /// Index ranges with no edges, skipped entirely.
    pub gaps: Vec<std::ops::Range<u32>>,
    /// Per sorted edge, the first subproblem in which it is contracted.
    pub merge_tags: Vec<u32>,
}

fn sat_mul(a: u64, b: u64) -> u64 {
    a.saturating_mul(b)
}

impl SubproblemPlan {
    /// `weights` must be sorted in nondecreasing order.
    pub fn new(n: usize, weights: &[u64]) -> SubproblemPlan {
        debug_assert!(weights.windows(2).all(|w| w[0] <= w[1]));
        let base = 2 * n.max(1) as u64;
        let max_w = weights.last().copied().unwrap_or(0);
        // pow[j] = B^j until saturation.
        let mut pow = vec![1u64];
        while *pow.last().unwrap() != u64::MAX && sat_mul(8, *pow.last().unwrap()) <= max_w.max(1) {
            let next = sat_mul(*pow.last().unwrap(), base);
            pow.push(next);
        }
        let pw = |j: u32| pow.get(j as usize).copied().unwrap_or(u64::MAX);
        let contract = |i: u32| if i == 0 { 0 } else { sat_mul(8, pw(i - 1)) };
        let search_hi = |i: u32| sat_mul(8, pw(i + 1));
        let mut top = 0;
        while search_hi(top) <= max_w {
            top += 1;
        }
        let mut subproblems = Vec::new();
        let mut gaps = Vec::new();
        let mut gap_hi: Option<u32> = None;
        for i in (0..=top).rev() {
            let lo = weights.partition_point(|&w| w < contract(i));
            let hi = if i == top { weights.len() } else { weights.partition_point(|&w| w < search_hi(i)) };
            if lo < hi {
                if let Some(h) = gap_hi.take() {
                    gaps.push(i + 1..h + 1);
                }
                let lower = if i == 0 { 1 } else { pw(i) };
                let upper = if i == top { u64::MAX } else { search_hi(i) };
                subproblems.push(Subproblem { index: i, edges: lo..hi, lower, upper });
            } else if gap_hi.is_none() {
                gap_hi = Some(i);
            }
        }
        let mut merge_tags = Vec::with_capacity(weights.len());
        let mut t = 1;
        for &w in weights {
            while w >= contract(t) {
                t += 1;
            }
            merge_tags.push(t);
        }
        SubproblemPlan { base, subproblems, gaps, merge_tags }
    }
}

fn guarded_push(list: &mut Vec<Entry>, perm: &Permutation, p: usize, dist: u64) -> bool {
    let ok = match list.last() {
        None => true,
        Some(last) => perm.rank(p) > perm.rank(last.dominator) && dist < last.dist,
    };
    if ok {
        list.push(Entry { dominator: p, dist });
    }
    ok
}

/// Approximate sequences via contracted subproblems and bucket-tree
/// searches.
///
/// Subproblems run from the heaviest down. In each, components of the
/// contracted edges become super-vertices, and their leaders run pruned
/// approximate searches in priority order with a tentative array reset per
/// subproblem. A component reached at distance `d` inside the emit window
/// receives `(leader, 8 d)` in every member's list when that keeps the list
/// ordered. Every list finally gets `(x, 0)`.
///
/// Stored distances satisfy `d_G <= stored <= 8 d_G`: a search distance is
/// at least a quarter of its contracted path, contraction loses less than
/// `4 B^i <= 4 d`, and pruning never lets a distance exceed the contracted
/// distance, which the emit window keeps below `d_G`.
pub fn build_domseq_approx(g: &Graph, perm: &Permutation) -> Result<DominanceSequences, DomseqError> {
    check_sizes(g, perm)?;
    let n = g.n();
    let mut sorted: Vec<(u64, usize, usize)> = g.edges().iter().map(|&(u, v, w)| (w, u, v)).collect();
    sorted.sort_unstable();
    let weights: Vec<u64> = sorted.iter().map(|e| e.0).collect();
    let plan = SubproblemPlan::new(n, &weights);
    let mut uf = PriorityUnionFind::new(perm);
    for (e, &(_, u, v)) in sorted.iter().enumerate() {
        uf.union(u, v, plan.merge_tags[e]);
    }

    let mut lists: Vec<Vec<Entry>> = vec![Vec::new(); n];
    let mut ops = OpCounts::default();
    let mut local = vec![u32::MAX; n];
    let mut comps: Vec<usize> = Vec::new();
    let mut members = Vec::new();
    for sp in &plan.subproblems {
        let i = sp.index;
        comps.clear();
        let mut arcs: Vec<(u32, u32, u64)> = Vec::with_capacity(2 * sp.edges.len());
        let mut weight_sum: u64 = 0;
        for &(w, u, v) in &sorted[sp.edges.clone()] {
            let (cu, cv) = (uf.component_of(u, i), uf.component_of(v, i));
            if cu == cv {
                continue;
            }
            for c in [cu, cv] {
                if local[c] == u32::MAX {
                    local[c] = comps.len() as u32;
                    comps.push(c);
                }
            }
            arcs.push((local[cu], local[cv], w));
            arcs.push((local[cv], local[cu], w));
            weight_sum = weight_sum.saturating_add(w);
        }
        if comps.is_empty() {
            continue;
        }
        let k = comps.len();
        arcs.sort_unstable();
        let mut start = vec![0usize; k + 1];
        for a in &arcs {
            start[a.0 as usize + 1] += 1;
        }
        for j in 0..k {
            start[j + 1] += start[j];
        }
        let leaders: Vec<usize> = comps.iter().map(|&c| uf.leader(c, i)).collect();
        let mut by_prio: Vec<usize> = (0..k).collect();
        by_prio.sort_unstable_by_key(|&j| perm.rank(leaders[j]));

        let mut delta = vec![INF; k];
        let mut tree = BucketTree::new(k, levels_for_max_label(weight_sum)?)?;
        for &src in &by_prio {
            let p = leaders[src];
            tree.reset();
            tree.insert_source(src);
            while let Some((x, d)) = tree.extract_min() {
                delta[x] = d;
                if d >= sp.lower && d < sp.upper {
                    uf.component_members(comps[x], i, &mut members);
                    let stored = d.saturating_mul(8);
                    for &y in &members {
                        guarded_push(&mut lists[y], perm, p, stored);
                    }
                }
                for a in &arcs[start[x]..start[x + 1]] {
                    let z = a.1 as usize;
                    let (level, label) = tree.target(a.2)?;
                    if label < delta[z] && label < tree.tentative(z) {
                        tree.place(z, level, label);
                    }
                }
            }
        }
        ops.add(tree.ops());
        for &c in &comps {
            local[c] = u32::MAX;
        }
    }
    for (x, list) in lists.iter_mut().enumerate() {
        let pushed = guarded_push(list, perm, x, 0);
        debug_assert!(pushed, "self entry rejected for {x}");
    }
    Ok(DominanceSequences { kind: SeqKind::Approx, lists, ops })
}

/// Builds sequences of either kind.
pub fn build_domseq(g: &Graph, perm: &Permutation, kind: SeqKind) -> Result<DominanceSequences, DomseqError> {
    match kind {
        SeqKind::Exact => build_domseq_exact(g, perm),
        SeqKind::Approx => build_domseq_approx(g, perm),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{dijkstra_exact, gen_grid, gen_random, random_permutation};
    use crate::rng;
    use proptest::prelude::*;

    fn e(dominator: usize, dist: u64) -> Entry {
        Entry { dominator, dist }
    }

    #[test]
    fn path_example() {
        let g = Graph::from_edges(3, [(0, 1, 1), (1, 2, 1)]).unwrap();
        let p = Permutation::identity(3);
        let bf = brute_force_domseq(&g, &p).unwrap();
        assert_eq!(bf.list(2), &[e(0, 2), e(1, 1), e(2, 0)]);
        assert_eq!(build_domseq_exact(&g, &p).unwrap().lists, bf.lists);
    }

    #[test]
    fn ties_go_to_the_higher_priority() {
        // 1 and 2 are both at distance 1 from 0; rank order 1, 0, 2.
        let g = Graph::from_edges(3, [(0, 1, 1), (0, 2, 1)]).unwrap();
        let p = Permutation::from_order(vec![1, 0, 2]).unwrap();
        let bf = brute_force_domseq(&g, &p).unwrap();
        assert_eq!(bf.list(0), &[e(1, 1), e(0, 0)]);
        assert_eq!(bf.list(2), &[e(1, 2), e(0, 1), e(2, 0)]);
        assert_eq!(build_domseq_exact(&g, &p).unwrap().lists, bf.lists);
    }

    #[test]
    fn single_edge_approx() {
        let g = Graph::from_edges(2, [(0, 1, 1)]).unwrap();
        let p = Permutation::identity(2);
        let s = build_domseq_approx(&g, &p).unwrap();
        assert_eq!(s.list(0), &[e(0, 0)]);
        assert_eq!(s.list(1).len(), 2);
        assert_eq!(s.list(1)[0].dominator, 0);
        assert!((1..=8).contains(&s.list(1)[0].dist));
    }

    #[test]
    fn union_find_tags_and_walks() {
        let n = 8;
        let p = Permutation::from_order(vec![5, 3, 0, 1, 2, 4, 6, 7]).unwrap();
        let mut uf = PriorityUnionFind::new(&p);
        // Triangle with weights 1, 1, n^3: the light edges merge at the
        // first contracting subproblem, the heavy edge merges nothing.
        let w = [1u64, 1, 512];
        let plan = SubproblemPlan::new(n, &w);
        assert_eq!(plan.merge_tags, vec![1, 1, 3]);
        assert!(uf.union(0, 1, plan.merge_tags[0]));
        assert!(uf.union(1, 2, plan.merge_tags[1]));
        assert!(!uf.union(0, 2, plan.merge_tags[2]));
        assert_eq!(uf.component_of(0, 0), 0);
        assert_eq!(uf.component_of(0, 1), uf.component_of(2, 1));
        let root = uf.component_of(2, 1);
        assert_eq!(uf.leader(root, 1), 0);
        assert_eq!(uf.leader(root, 0), root);
        let mut m = Vec::new();
        uf.component_members(root, 1, &mut m);
        m.sort();
        assert_eq!(m, vec![0, 1, 2]);
        uf.component_members(root, 0, &mut m);
        assert_eq!(m, vec![root]);
    }

    #[test]
    fn leader_history_respects_tags() {
        let p = Permutation::from_order(vec![3, 2, 1, 0]).unwrap();
        let mut uf = PriorityUnionFind::new(&p);
        uf.union(0, 1, 1);
        uf.union(1, 2, 2);
        uf.union(2, 3, 4);
        let r = uf.find(0);
        assert_eq!(uf.leader(uf.component_of(0, 1), 1), 1);
        assert_eq!(uf.leader(r, 2), 2);
        assert_eq!(uf.leader(r, 3), 2);
        assert_eq!(uf.leader(r, 4), 3);
    }

    #[test]
    fn walks_are_logarithmic() {
        let n = 1024;
        let p = random_permutation(n, &mut rng::seeded(1)).unwrap();
        let mut uf = PriorityUnionFind::new(&p);
        let mut r = rng::seeded(2);
        use rand::Rng as _;
        for t in 1..4000u32 {
            uf.union(r.gen_range(0..n), r.gen_range(0..n), t / 100);
        }
        let bound = 10;
        for v in 0..n {
            for i in [0, 5, 20, 39, 100] {
                assert!(uf.walk_len(v, i) <= bound);
            }
        }
    }

    #[test]
    fn plan_detects_weight_gaps() {
        let n = 16;
        let plan = SubproblemPlan::new(n, &[1, 16u64.pow(5)]);
        let idx: Vec<u32> = plan.subproblems.iter().map(|s| s.index).collect();
        assert_eq!(idx, vec![3, 0]);
        assert_eq!(plan.gaps, vec![1..3]);
        assert_eq!(plan.subproblems[0].upper, u64::MAX);
        assert_eq!(plan.subproblems[1].lower, 1);
    }

    #[test]
    fn plan_edges_sit_in_at_most_two_subproblems() {
        let mut w: Vec<u64> = (0..60).map(|i| 1 + (1u64 << (i / 2)) + i).collect();
        w.sort();
        for n in [2, 5, 64, 1000] {
            let plan = SubproblemPlan::new(n, &w);
            for e in 0..w.len() {
                let c = plan.subproblems.iter().filter(|s| s.edges.contains(&e)).count();
                assert!((1..=2).contains(&c), "n={n} w={} in {c}", w[e]);
            }
        }
    }

    #[test]
    fn exact_lengths_are_logarithmic() {
        let n = 4096;
        let g = gen_random(n, 8 * n, true, 7).unwrap();
        let p = random_permutation(n, &mut rng::seeded(8)).unwrap();
        let s = build_domseq_exact(&g, &p).unwrap();
        let h: f64 = (1..=n).map(|i| 1.0 / i as f64).sum();
        let mean = s.mean_len();
        assert!(mean >= 0.6 * h && mean <= 1.6 * h, "mean {mean}, H_n {h}");
        s.check_shape(&p).unwrap();
        assert!(s.lists.iter().all(|l| l[0].dominator == p.vertex(1)));
    }

    #[test]
    fn approx_on_a_weighted_grid() {
        let g = gen_grid(&[12, 12], true, 3).unwrap();
        let p = random_permutation(g.n(), &mut rng::seeded(4)).unwrap();
        let s = build_domseq_approx(&g, &p).unwrap();
        s.check_shape(&p).unwrap();
        for x in 0..g.n() {
            let d = dijkstra_exact(&g, x);
            assert_eq!(s.list(x)[0].dominator, p.vertex(1));
            for en in s.list(x) {
                let t = d[en.dominator];
                assert!(t <= en.dist && en.dist <= 8 * t);
            }
        }
    }

    proptest! {
        #[test]
        fn exact_matches_brute_force(n in 1usize..40, extra in 0usize..80, wmax in 1u64..50, seed in any::<u64>()) {
            let m = (n - 1 + extra).min(n * (n - 1) / 2);
            let base = gen_random(n, m, false, seed).unwrap();
            let mut r = rng::seeded(seed ^ 1);
            use rand::Rng as _;
            let g = Graph::from_edges(n, base.edges().iter().map(|&(u, v, _)| (u, v, r.gen_range(1..=wmax)))).unwrap();
            let p = random_permutation(n, &mut r).unwrap();
            let ex = build_domseq_exact(&g, &p).unwrap();
            prop_assert_eq!(&ex.lists, &brute_force_domseq(&g, &p).unwrap().lists);
            prop_assert!(ex.check_shape(&p).is_ok());
        }

        #[test]
        fn approx_brackets_truth(n in 1usize..50, extra in 0usize..100, wexp in 0u32..6, seed in any::<u64>()) {
            let m = (n - 1 + extra).min(n * (n - 1) / 2);
            let base = gen_random(n, m, false, seed).unwrap();
            let mut r = rng::seeded(seed ^ 2);
            use rand::Rng as _;
            let wmax = 10u64.pow(wexp);
            let g = Graph::from_edges(n, base.edges().iter().map(|&(u, v, _)| (u, v, r.gen_range(1..=wmax)))).unwrap();
            let p = random_permutation(n, &mut r).unwrap();
            let s = build_domseq_approx(&g, &p).unwrap();
            prop_assert!(s.check_shape(&p).is_ok());
            for x in 0..n {
                let d = dijkstra_exact(&g, x);
                prop_assert_eq!(s.list(x)[0].dominator, p.vertex(1));
                for en in s.list(x) {
                    let t = d[en.dominator];
                    prop_assert!(t <= en.dist && en.dist <= 8 * t, "x={} {:?} true {}", x, en, t);
                }
            }
        }
    }
}

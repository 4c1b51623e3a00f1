//! Weighted undirected graphs, priority permutations, generators and exact
//! shortest paths.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashSet};
use std::fmt::Write as _;

use rand::seq::SliceRandom;
use rand::Rng as _;
use thiserror::Error;

use crate::rng::{self, Rng};

/// Distance sentinel for unreachable vertices.
pub const INF: u64 = u64::MAX;

/// Largest accepted edge weight. Keeps every path length far below 2^62.
pub const MAX_WEIGHT: u64 = 1_000_000_000;

/// Upper end of the uniform weight range used by weighted generators.
pub const GEN_WEIGHT_MAX: u64 = 1000;

#[derive(Debug, Error)]
pub enum GraphError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("{0}")]
    Argument(String),
}

fn parse_err(line: usize, msg: impl Into<String>) -> GraphError {
    GraphError::Parse { line, msg: msg.into() }
}

fn arg_err(msg: impl Into<String>) -> GraphError {
    GraphError::Argument(msg.into())
}

/// Undirected graph with positive integer weights.
///
/// `edges` holds each edge once as `(u, v, w)` with `u < v`, sorted by
/// `(u, v)`. Parallel edges are collapsed to their minimum weight and
/// self-loops are rejected, so `adj` is symmetric and simple.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: Vec<(usize, usize, u64)>,
    adj: Vec<Vec<(usize, u64)>>,
}

impl Graph {
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Graph, GraphError>
    where
        I: IntoIterator<Item = (usize, usize, u64)>,
    {
        let mut list = Vec::new();
        for (u, v, w) in edges {
            if u >= n || v >= n {
                return Err(arg_err(format!("edge ({u}, {v}) has an endpoint outside 0..{n}")));
            }
            if u == v {
                return Err(arg_err(format!("self-loop at {u}")));
            }
            if w == 0 || w > MAX_WEIGHT {
                return Err(arg_err(format!("weight {w} outside [1, {MAX_WEIGHT}]")));
            }
            list.push((u.min(v), u.max(v), w));
        }
        Ok(Self::from_normalized(n, list))
    }

    fn from_normalized(n: usize, mut list: Vec<(usize, usize, u64)>) -> Graph {
        list.sort_unstable();
        list.dedup_by(|later, first| later.0 == first.0 && later.1 == first.1);
        let mut adj = vec![Vec::new(); n];
        for &(u, v, w) in &list {
            adj[u].push((v, w));
            adj[v].push((u, w));
        }
        Graph { n, edges: list, adj }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize, u64)] {
        &self.edges
    }

    pub fn adj(&self) -> &[Vec<(usize, u64)>] {
        &self.adj
    }

    pub fn neighbors(&self, v: usize) -> &[(usize, u64)] {
        &self.adj[v]
    }

    pub fn max_weight(&self) -> u64 {
        self.edges.iter().map(|e| e.2).max().unwrap_or(0)
    }

    pub fn is_unweighted(&self) -> bool {
        self.edges.iter().all(|e| e.2 == 1)
    }

    pub fn is_connected(&self) -> bool {
        if self.n == 0 {
            return true;
        }
        let mut seen = vec![false; self.n];
        let mut stack = vec![0];
        seen[0] = true;
        let mut count = 1;
        while let Some(u) = stack.pop() {
            for &(v, _) in &self.adj[u] {
                if !seen[v] {
                    seen[v] = true;
                    count += 1;
                    stack.push(v);
                }
            }
        }
        count == self.n
    }

    /// Stable 64-bit fingerprint of the vertex count and edge list.
    pub fn fingerprint(&self) -> u64 {
        let mut h = rng::fnv1a(&(self.n as u64).to_le_bytes(), rng::FNV_OFFSET);
        for &(u, v, w) in &self.edges {
            h = rng::fnv1a(&(u as u64).to_le_bytes(), h);
            h = rng::fnv1a(&(v as u64).to_le_bytes(), h);
            h = rng::fnv1a(&w.to_le_bytes(), h);
        }
        h
    }
}

/// Reads the text format: a header line `n m`, then `m` lines `u v w`.
/// Blank lines and lines starting with `#` are ignored.
pub fn parse_graph(text: &str) -> Result<Graph, GraphError> {
    let mut lines =
        text.lines().enumerate().map(|(i, l)| (i + 1, l.trim())).filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let (hline, header) = lines.next().ok_or_else(|| parse_err(1, "missing header line"))?;
    let head: Vec<&str> = header.split_whitespace().collect();
    if head.len() != 2 {
        return Err(parse_err(hline, "header must be `n m`"));
    }
    let n: usize = head[0].parse().map_err(|_| parse_err(hline, "bad vertex count"))?;
    let m: usize = head[1].parse().map_err(|_| parse_err(hline, "bad edge count"))?;
    let mut list = Vec::with_capacity(m);
    let mut last_line = hline;
    for (line, body) in lines {
        last_line = line;
        if list.len() == m {
            return Err(parse_err(line, format!("more than {m} edge lines")));
        }
        let f: Vec<&str> = body.split_whitespace().collect();
        if f.len() != 3 {
            return Err(parse_err(line, "edge line must be `u v w`"));
        }
        let u: usize = f[0].parse().map_err(|_| parse_err(line, "bad vertex id"))?;
        let v: usize = f[1].parse().map_err(|_| parse_err(line, "bad vertex id"))?;
        let w: i128 = f[2].parse().map_err(|_| parse_err(line, "bad weight"))?;
        if u >= n || v >= n {
            return Err(parse_err(line, format!("vertex id out of range 0..{n}")));
        }
        if u == v {
            return Err(parse_err(line, "self-loop"));
        }
        if w < 1 {
            return Err(parse_err(line, "weight must be at least 1"));
        }
        if w > MAX_WEIGHT as i128 {
            return Err(parse_err(line, format!("weight exceeds {MAX_WEIGHT}")));
        }
        list.push((u.min(v), u.max(v), w as u64));
    }
    if list.len() < m {
        return Err(parse_err(last_line, format!("expected {m} edges, found {}", list.len())));
    }
    Ok(Graph::from_normalized(n, list))
}

/// Writes the text format with edges sorted by `(u, v)`.
pub fn write_graph(g: &Graph) -> String {
    let mut out = String::with_capacity(16 * (g.m() + 1));
    let _ = writeln!(out, "{} {}", g.n, g.m());
    for &(u, v, w) in &g.edges {
        let _ = writeln!(out, "{u} {v} {w}");
    }
    out
}

/// Random priority order. `rank(v)` is in `1..=n` (1 is the highest
/// priority) and `vertex(r)` inverts it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Permutation {
    rank: Vec<usize>,
    order: Vec<usize>,
}

impl Permutation {
    /// Builds from the vertex order, highest priority first.
    pub fn from_order(order: Vec<usize>) -> Result<Permutation, GraphError> {
        let n = order.len();
        let mut rank = vec![0; n];
        for (i, &v) in order.iter().enumerate() {
            if v >= n || rank[v] != 0 {
                return Err(arg_err("order is not a permutation of 0..n"));
            }
            rank[v] = i + 1;
        }
        Ok(Permutation { rank, order })
    }

    pub fn identity(n: usize) -> Permutation {
        Permutation { rank: (1..=n).collect(), order: (0..n).collect() }
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    pub fn rank(&self, v: usize) -> usize {
        self.rank[v]
    }

    pub fn vertex(&self, rank: usize) -> usize {
        self.order[rank - 1]
    }

    /// Vertices from highest to lowest priority.
    pub fn order(&self) -> &[usize] {
        &self.order
    }
}

/// Uniform permutation by Fisher-Yates shuffling.
pub fn random_permutation(n: usize, rng: &mut Rng) -> Result<Permutation, GraphError> {
    if n == 0 {
        return Err(arg_err("permutation of zero elements"));
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    Permutation::from_order(order)
}

fn draw_weight(weighted: bool, rng: &mut Rng) -> u64 {
    if weighted {
        rng.gen_range(1..=GEN_WEIGHT_MAX)
    } else {
        1
    }
}

/// Axis-aligned grid with 1 to 3 dimensions, vertices numbered row-major.
pub fn gen_grid(dims: &[usize], weighted: bool, seed: u64) -> Result<Graph, GraphError> {
    if dims.is_empty() || dims.len() > 3 {
        return Err(arg_err("grid needs 1 to 3 dimensions"));
    }
    if dims.contains(&0) {
        return Err(arg_err("grid extent must be positive"));
    }
    let n = dims.iter().try_fold(1usize, |acc, &d| acc.checked_mul(d)).ok_or_else(|| arg_err("grid too large"))?;
    let mut rng = rng::seeded(seed);
    let mut strides = vec![1usize; dims.len()];
    for a in (0..dims.len().saturating_sub(1)).rev() {
        strides[a] = strides[a + 1] * dims[a + 1];
    }
    let mut list = Vec::new();
    for v in 0..n {
        for a in 0..dims.len() {
            let coord = (v / strides[a]) % dims[a];
            if coord + 1 < dims[a] {
                let u = v + strides[a];
                list.push((v, u, draw_weight(weighted, &mut rng)));
            }
        }
    }
    Ok(Graph::from_normalized(n, list))
}

/// Preferential attachment. Vertex `v` attaches `ceil(m / n)` edges to
/// distinct earlier vertices chosen with probability proportional to
/// their current degree, so the result is connected with roughly `m` edges.
pub fn gen_power_law(n: usize, m: usize, weighted: bool, seed: u64) -> Result<Graph, GraphError> {
    if n == 0 {
        return Err(arg_err("graph needs at least one vertex"));
    }
    if m + 1 < n {
        return Err(arg_err(format!("{m} edges cannot connect {n} vertices")));
    }
    let arity = m.div_ceil(n).max(1);
    let mut rng = rng::seeded(seed);
    let mut ends: Vec<usize> = Vec::with_capacity(2 * arity * n);
    let mut list = Vec::with_capacity(arity * n);
    let mut picked: Vec<usize> = Vec::with_capacity(arity);
    for v in 1..n {
        picked.clear();
        let k = arity.min(v);
        if k == v {
            picked.extend(0..v);
        } else {
            while picked.len() < k {
                let t = if ends.is_empty() { rng.gen_range(0..v) } else { ends[rng.gen_range(0..ends.len())] };
                if !picked.contains(&t) {
                    picked.push(t);
                }
            }
        }
        for &t in &picked {
            list.push((t, v, draw_weight(weighted, &mut rng)));
            ends.push(t);
            ends.push(v);
        }
    }
    Ok(Graph::from_normalized(n, list))
}

/// Connected graph with hop diameter close to `diameter`.
///
/// A backbone path `0..=diameter` fixes the diameter. Every other vertex
/// hangs off a random backbone vertex, and extra edges only join vertices
/// whose backbone positions differ by at most one, so no edge shortcuts the
/// backbone and the hop diameter stays within `[diameter, diameter + 2]`.
pub fn gen_slim(n: usize, m: usize, diameter: usize, weighted: bool, seed: u64) -> Result<Graph, GraphError> {
    if diameter >= n {
        return Err(arg_err("diameter must be below n"));
    }
    if diameter == 0 && n > 1 {
        return Err(arg_err("diameter 0 only fits a single vertex"));
    }
    if m + 1 < n {
        return Err(arg_err(format!("{m} edges cannot connect {n} vertices")));
    }
    let mut rng = rng::seeded(seed);
    let mut pos = vec![0usize; n];
    let mut members: Vec<Vec<usize>> = vec![Vec::new(); diameter + 1];
    let mut present: HashSet<(usize, usize)> = HashSet::new();
    let mut list = Vec::with_capacity(m);
    for (v, slot) in pos.iter_mut().enumerate().take(diameter + 1) {
        *slot = v;
        members[v].push(v);
    }
    for v in 1..=diameter {
        list.push((v - 1, v, draw_weight(weighted, &mut rng)));
        present.insert((v - 1, v));
    }
    for v in diameter + 1..n {
        let p = rng.gen_range(0..=diameter);
        pos[v] = p;
        members[p].push(v);
        list.push((p, v, draw_weight(weighted, &mut rng)));
        present.insert((p, v));
    }
    let extra = m - (n - 1);
    if extra == 0 {
        return Ok(Graph::from_normalized(n, list));
    }
    let sizes: Vec<u128> = members.iter().map(|s| s.len() as u128).collect();
    let mut capacity: u128 = sizes.iter().map(|&c| c * c.saturating_sub(1) / 2).sum();
    capacity += sizes.windows(2).map(|w| w[0] * w[1]).sum::<u128>();
    let free = capacity - (n as u128 - 1);
    if extra as u128 > free {
        return Err(arg_err(format!("at most {} edges fit diameter {diameter}", capacity)));
    }
    // Windows are sampled proportionally to their pair count.
    let window_pairs: Vec<u64> = (0..diameter.max(1))
        .map(|j| {
            let c = (sizes[j] + sizes.get(j + 1).copied().unwrap_or(0)) as u64;
            c * c.saturating_sub(1) / 2
        })
        .collect();
    let total_pairs: u64 = window_pairs.iter().sum();
    if 2 * extra as u128 > free {
        let mut cand = Vec::new();
        for j in 0..=diameter {
            for (a, &u) in members[j].iter().enumerate() {
                for &v in &members[j][a + 1..] {
                    cand.push((u.min(v), u.max(v)));
                }
                if j < diameter {
                    for &v in &members[j + 1] {
                        cand.push((u.min(v), u.max(v)));
                    }
                }
            }
        }
        cand.retain(|e| !present.contains(e));
        let (chosen, _) = cand.partial_shuffle(&mut rng, extra);
        for &(u, v) in chosen.iter() {
            list.push((u, v, draw_weight(weighted, &mut rng)));
        }
        return Ok(Graph::from_normalized(n, list));
    }
    let mut added = 0;
    while added < extra {
        let mut t = rng.gen_range(0..total_pairs);
        let mut j = 0;
        while t >= window_pairs[j] {
            t -= window_pairs[j];
            j += 1;
        }
        let pool_len = members[j].len() + members.get(j + 1).map_or(0, Vec::len);
        let pick = |i: usize| if i < members[j].len() { members[j][i] } else { members[j + 1][i - members[j].len()] };
        let a = pick(rng.gen_range(0..pool_len));
        let b = pick(rng.gen_range(0..pool_len));
        if a == b {
            continue;
        }
        let e = (a.min(b), a.max(b));
        if present.insert(e) {
            list.push((e.0, e.1, draw_weight(weighted, &mut rng)));
            added += 1;
        }
    }
    Ok(Graph::from_normalized(n, list))
}

/// Connected random graph with exactly `m` edges: a random recursive tree
/// on shuffled labels plus uniform extra edges.
pub fn gen_random(n: usize, m: usize, weighted: bool, seed: u64) -> Result<Graph, GraphError> {
    if n == 0 {
        return Err(arg_err("graph needs at least one vertex"));
    }
    if m + 1 < n {
        return Err(arg_err(format!("{m} edges cannot connect {n} vertices")));
    }
    if m as u128 > (n as u128) * (n as u128 - 1) / 2 {
        return Err(arg_err(format!("{m} edges exceed a complete graph on {n} vertices")));
    }
    let mut rng = rng::seeded(seed);
    let mut label: Vec<usize> = (0..n).collect();
    label.shuffle(&mut rng);
    let mut present = HashSet::with_capacity(m);
    let mut list = Vec::with_capacity(m);
    for i in 1..n {
        let j = rng.gen_range(0..i);
        let (a, b) = (label[i].min(label[j]), label[i].max(label[j]));
        present.insert((a, b));
        list.push((a, b, draw_weight(weighted, &mut rng)));
    }
    if 2 * m as u128 > (n as u128) * (n as u128 - 1) / 2 {
        let mut cand = Vec::new();
        for a in 0..n {
            for b in a + 1..n {
                if !present.contains(&(a, b)) {
                    cand.push((a, b));
                }
            }
        }
        let (chosen, _) = cand.partial_shuffle(&mut rng, m - list.len());
        for &(a, b) in chosen.iter() {
            list.push((a, b, draw_weight(weighted, &mut rng)));
        }
    } else {
        while list.len() < m {
            let a = rng.gen_range(0..n);
            let b = rng.gen_range(0..n);
            if a == b {
                continue;
            }
            let e = (a.min(b), a.max(b));
            if present.insert(e) {
                list.push((e.0, e.1, draw_weight(weighted, &mut rng)));
            }
        }
    }
    Ok(Graph::from_normalized(n, list))
}

/// Exact single-source distances on a directed adjacency list.
pub fn dijkstra_adj(adj: &[Vec<(usize, u64)>], s: usize) -> Vec<u64> {
    let mut dist = vec![INF; adj.len()];
    let mut heap = BinaryHeap::new();
    dist[s] = 0;
    heap.push(Reverse((0u64, s)));
    while let Some(Reverse((d, u))) = heap.pop() {
        if d > dist[u] {
            continue;
        }
        for &(v, w) in &adj[u] {
            let nd = d + w;
            if nd < dist[v] {
                dist[v] = nd;
                heap.push(Reverse((nd, v)));
            }
        }
    }
    dist
}

/// Exact single-source distances; [`INF`] marks unreachable vertices.
pub fn dijkstra_exact(g: &Graph, s: usize) -> Vec<u64> {
    dijkstra_adj(&g.adj, s)
}

/// All-pairs exact distances, one Dijkstra per source.
pub fn all_pairs(g: &Graph) -> Vec<Vec<u64>> {
    crate::par::map((0..g.n).collect(), |s| dijkstra_exact(g, s))
}

/// Unweighted eccentricity maximum, ignoring weights.
pub fn hop_diameter(g: &Graph) -> usize {
    let unit: Vec<Vec<(usize, u64)>> = g.adj.iter().map(|l| l.iter().map(|&(v, _)| (v, 1)).collect()).collect();
    (0..g.n)
        .map(|s| dijkstra_adj(&unit, s).into_iter().filter(|&d| d != INF).max().unwrap_or(0) as usize)
        .max()
        .unwrap_or(0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn bellman_ford(g: &Graph, s: usize) -> Vec<u64> {
        let mut d = vec![INF; g.n()];
        d[s] = 0;
        for _ in 0..g.n() {
            let mut changed = false;
            for &(u, v, w) in g.edges() {
                for (a, b) in [(u, v), (v, u)] {
                    if d[a] != INF && d[a] + w < d[b] {
                        d[b] = d[a] + w;
                        changed = true;
                    }
                }
            }
            if !changed {
                break;
            }
        }
        d
    }

    #[test]
    fn path_distances() {
        let g = Graph::from_edges(3, [(0, 1, 2), (1, 2, 3)]).unwrap();
        assert_eq!(dijkstra_exact(&g, 0), vec![0, 2, 5]);
    }

    #[test]
    fn parallel_edges_collapse_to_minimum() {
        let g = parse_graph("3 3\n0 1 5\n1 0 2\n1 2 1\n").unwrap();
        assert_eq!(g.m(), 2);
        assert_eq!(g.edges()[0], (0, 1, 2));
    }

    #[test]
    fn parse_errors_name_the_line() {
        let cases = [
            ("2 1\n# c\n0 1 0\n", 3, "weight"),
            ("2 1\n0 2 4\n", 2, "out of range"),
            ("2 1\n1 1 4\n", 2, "self-loop"),
            ("2 1\n0 x 4\n", 2, "bad vertex"),
            ("2 1\n0 1\n", 2, "u v w"),
        ];
        for (text, line, needle) in cases {
            match parse_graph(text) {
                Err(GraphError::Parse { line: l, msg }) => {
                    assert_eq!(l, line, "{text:?}");
                    assert!(msg.contains(needle), "{msg}");
                }
                other => panic!("{text:?} gave {other:?}"),
            }
        }
        assert!(parse_graph("").is_err());
        assert!(parse_graph("3 2\n0 1 1\n").is_err());
    }

    #[test]
    fn writer_sorts_and_round_trips() {
        let g = Graph::from_edges(4, [(3, 2, 7), (1, 0, 1), (2, 0, 4)]).unwrap();
        let text = write_graph(&g);
        assert_eq!(text, "4 3\n0 1 1\n0 2 4\n2 3 7\n");
        assert_eq!(parse_graph(&text).unwrap(), g);
    }

    #[test]
    fn grid_shapes() {
        let g = gen_grid(&[100, 100], false, 1).unwrap();
        assert_eq!((g.n(), g.m()), (10_000, 19_800));
        let c = gen_grid(&[2, 2], false, 1).unwrap();
        assert_eq!(c.edges(), &[(0, 1, 1), (0, 2, 1), (1, 3, 1), (2, 3, 1)]);
        let cube = gen_grid(&[3, 3, 3], true, 4).unwrap();
        assert_eq!(cube.m(), 3 * 3 * 2 * 3);
        assert!(cube.edges().iter().all(|e| (1..=GEN_WEIGHT_MAX).contains(&e.2)));
        assert!(gen_grid(&[3, 0], false, 1).is_err());
        assert!(gen_grid(&[1, 1, 1, 1], false, 1).is_err());
    }

    #[test]
    fn power_law_is_connected_and_skewed() {
        let g = gen_power_law(2000, 10_000, false, 3).unwrap();
        assert!(g.is_connected());
        assert!(g.m().abs_diff(10_000) < 2000);
        let max_deg = (0..g.n()).map(|v| g.neighbors(v).len()).max().unwrap();
        assert!(max_deg > 50, "max degree {max_deg}");
        assert!(gen_power_law(10, 8, false, 1).is_err());
        assert_eq!(gen_power_law(2, 1, false, 1).unwrap().m(), 1);
    }

    #[test]
    fn slim_graph_keeps_its_diameter() {
        let p = gen_slim(3, 2, 2, false, 9).unwrap();
        assert_eq!(p.edges(), &[(0, 1, 1), (1, 2, 1)]);
        let g = gen_slim(600, 3000, 60, false, 5).unwrap();
        assert_eq!(g.m(), 3000);
        assert!(g.is_connected());
        let h = hop_diameter(&g);
        assert!((30..=120).contains(&h), "hop diameter {h}");
        let dense = gen_slim(40, 150, 4, true, 2).unwrap();
        assert_eq!(dense.m(), 150);
        assert!(gen_slim(40, 5000, 4, false, 2).is_err());
        assert!(gen_slim(5, 4, 5, false, 2).is_err());
    }

    #[test]
    fn random_graph_has_exact_edge_count() {
        for (n, m) in [(50, 49), (50, 300), (20, 190)] {
            let g = gen_random(n, m, true, 11).unwrap();
            assert_eq!(g.m(), m);
            assert!(g.is_connected());
        }
        assert!(gen_random(5, 11, false, 1).is_err());
    }

    #[test]
    fn permutation_frequencies() {
        let mut rng = rng::seeded(42);
        let mut first = 0;
        for _ in 0..10_000 {
            if random_permutation(2, &mut rng).unwrap().order()[0] == 0 {
                first += 1;
            }
        }
        assert!((first as f64 / 10_000.0 - 0.5).abs() <= 0.02);

        // Each of the 8 positions of vertex 0 is equally likely.
        let trials = 40_000;
        let mut counts = [0usize; 8];
        for _ in 0..trials {
            counts[random_permutation(8, &mut rng).unwrap().rank(0) - 1] += 1;
        }
        let expect = trials as f64 / 8.0;
        let chi2: f64 = counts.iter().map(|&c| (c as f64 - expect).powi(2) / expect).sum();
        // 7 degrees of freedom: mean 7, standard deviation sqrt(14).
        assert!(chi2 < 7.0 + 5.0 * 14f64.sqrt(), "chi-square {chi2}");
    }

    #[test]
    fn prefix_minima_count_is_harmonic() {
        let n = 10_000;
        let h: f64 = (1..=n).map(|i| 1.0 / i as f64).sum();
        let mut rng = rng::seeded(5);
        let reps = 200;
        let mut total = 0usize;
        for _ in 0..reps {
            let p = random_permutation(n, &mut rng).unwrap();
            let mut best = usize::MAX;
            for v in 0..n {
                if p.rank(v) < best {
                    best = p.rank(v);
                    total += 1;
                }
            }
        }
        let mean = total as f64 / reps as f64;
        assert!((mean - h).abs() <= 0.2 * h, "mean {mean} vs {h}");
    }

    #[test]
    fn zero_length_permutation_is_rejected() {
        assert!(random_permutation(0, &mut rng::seeded(1)).is_err());
        assert!(Permutation::from_order(vec![0, 0]).is_err());
    }

    proptest! {
        #[test]
        fn permutation_is_a_bijection(n in 1usize..200, seed in any::<u64>()) {
            let p = random_permutation(n, &mut rng::seeded(seed)).unwrap();
            for v in 0..n {
                prop_assert!((1..=n).contains(&p.rank(v)));
                prop_assert_eq!(p.vertex(p.rank(v)), v);
            }
        }

        #[test]
        fn dijkstra_matches_bellman_ford(n in 2usize..40, extra in 0usize..60, seed in any::<u64>()) {
            let m = (n - 1 + extra).min(n * (n - 1) / 2);
            let g = gen_random(n, m, true, seed).unwrap();
            for s in [0, n / 2, n - 1] {
                prop_assert_eq!(dijkstra_exact(&g, s), bellman_ford(&g, s));
            }
        }
    }
}

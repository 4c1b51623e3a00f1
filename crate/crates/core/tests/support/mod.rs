//! Helpers shared by integration tests and the acceptance harness.

#![allow(dead_code)]

use std::collections::HashMap;

use rand::Rng as _;
use treembed_core::frt::{Beta, WeightMode};
use treembed_core::graph::Graph;
use treembed_core::rng::Rng;
use treembed_core::Permutation;

/// Connected graph: vertex `i > 0` hangs below a uniform earlier vertex,
/// then `extra` uniform edges are added. Weights are uniform in `1..=wmax`.
pub fn random_connected(r: &mut Rng, n: usize, extra: usize, wmax: u64) -> Graph {
    let mut edges = Vec::with_capacity(n + extra);
    for i in 1..n {
        edges.push((r.gen_range(0..i), i, r.gen_range(1..=wmax)));
    }
    if n > 1 {
        for _ in 0..extra {
            let u = r.gen_range(0..n);
            let v = r.gen_range(0..n);
            if u != v {
                edges.push((u, v, r.gen_range(1..=wmax)));
            }
        }
    }
    Graph::from_edges(n, edges).unwrap()
}

/// Center of `x` at every level `0..=delta`, straight from the definition:
/// the highest-priority vertex within `beta * 2^(delta - i)`, and `x`
/// itself at level `delta`.
pub fn expanded_labels(d: &[Vec<u64>], perm: &Permutation, beta: Beta, delta: u32) -> Vec<Vec<usize>> {
    let n = d.len();
    (0..n)
        .map(|x| {
            let mut out: Vec<usize> = (0..delta)
                .map(|i| perm.order().iter().copied().find(|&y| beta.covers(d[x][y], delta - i)).unwrap())
                .collect();
            out.push(x);
            out
        })
        .collect()
}

/// Uncompressed trie with one node per distinct label prefix.
pub struct ExpandedTrie {
    delta: u32,
    beta: Beta,
    labels: Vec<Vec<usize>>,
    /// `node[x][i]`: node of the length-`i + 1` prefix of `x`.
    node: Vec<Vec<usize>>,
    nodes: usize,
}

impl ExpandedTrie {
    pub fn new(labels: Vec<Vec<usize>>, beta: Beta, delta: u32) -> ExpandedTrie {
        let mut ids: HashMap<(usize, usize), usize> = HashMap::new();
        let node = labels
            .iter()
            .map(|seq| {
                let mut parent = usize::MAX;
                seq.iter()
                    .map(|&l| {
                        let next = ids.len();
                        parent = *ids.entry((parent, l)).or_insert(next);
                        parent
                    })
                    .collect()
            })
            .collect();
        ExpandedTrie { delta, beta, labels, node, nodes: ids.len() }
    }

    pub fn node_count(&self) -> usize {
        self.nodes
    }

    /// Deepest level whose node `u` and `v` share.
    pub fn split_level(&self, u: usize, v: usize) -> u32 {
        (0..=self.delta as usize).rev().find(|&i| self.node[u][i] == self.node[v][i]).unwrap() as u32
    }

    pub fn distance(&self, u: usize, v: usize, mode: WeightMode, d: &[Vec<u64>]) -> f64 {
        if u == v {
            return 0.0;
        }
        let b = self.split_level(u, v);
        match mode {
            WeightMode::Level => {
                // Edge from level i down to i + 1 weighs 2^(delta - i) beta.
                let units: u64 = (b..self.delta).map(|i| 1u64 << (self.delta - i)).sum();
                (2 * units) as f64 * self.beta.value()
            }
            WeightMode::Actual => {
                let w = self.labels[u][b as usize];
                (d[w][u] + d[w][v]) as f64
            }
        }
    }
}

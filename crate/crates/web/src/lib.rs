//! Browser bindings: generate a graph, build an oracle over it, then query
//! pairs and inspect dominance sequences. Every method returns plain
//! numbers or strings so the same code runs in native tests.

use treembed_core::domseq::{build_domseq, SeqKind};
use treembed_core::frt::WeightMode;
use treembed_core::graph::{dijkstra_exact, gen_grid, gen_random, parse_graph, random_permutation, Graph};
use treembed_core::oracle::{build_oracle, DistanceOracle};
use treembed_core::rng;
use wasm_bindgen::prelude::*;

#[wasm_bindgen]
pub struct Demo {
    graph: Graph,
    /// Column count for grid layouts, 0 otherwise.
    columns: usize,
    oracle: Option<DistanceOracle>,
}

fn kind(approx: bool) -> SeqKind {
    if approx {
        SeqKind::Approx
    } else {
        SeqKind::Exact
    }
}

#[wasm_bindgen]
impl Demo {
    pub fn grid(width: usize, height: usize, weighted: bool, seed: u64) -> Result<Demo, String> {
        let graph = gen_grid(&[height, width], weighted, seed).map_err(|e| e.to_string())?;
        Ok(Demo { graph, columns: width, oracle: None })
    }

    pub fn random(n: usize, m: usize, weighted: bool, seed: u64) -> Result<Demo, String> {
        let graph = gen_random(n, m, weighted, seed).map_err(|e| e.to_string())?;
        Ok(Demo { graph, columns: 0, oracle: None })
    }

    /// Graph in the `n m` header plus `u v w` lines format.
    pub fn parse(text: &str) -> Result<Demo, String> {
        let graph = parse_graph(text).map_err(|e| e.to_string())?;
        Ok(Demo { graph, columns: 0, oracle: None })
    }

    pub fn n(&self) -> usize {
        self.graph.n()
    }

    pub fn columns(&self) -> usize {
        self.columns
    }

    /// Edges flattened as `u, v, w` triples.
    pub fn edges(&self) -> Vec<u32> {
        self.graph.edges().iter().flat_map(|&(u, v, w)| [u as u32, v as u32, w as u32]).collect()
    }

    /// Samples `trees` trees; returns the total number of tree nodes.
    pub fn build(&mut self, trees: usize, actual: bool, approx: bool, seed: u64) -> Result<usize, String> {
        let mode = if actual { WeightMode::Actual } else { WeightMode::Level };
        let o = build_oracle(&self.graph, trees, mode, kind(approx), seed).map_err(|e| e.to_string())?;
        let nodes = o.trees.iter().map(|t| t.node_count()).sum();
        self.oracle = Some(o);
        Ok(nodes)
    }

    /// Exact distance followed by the oracle estimate using the first
    /// 1, 2, ..., k trees.
    pub fn query(&self, u: usize, v: usize) -> Result<Vec<f64>, String> {
        let o = self.oracle.as_ref().ok_or("build an oracle first")?;
        if u >= self.n() || v >= self.n() {
            return Err(format!("vertices must be below {}", self.n()));
        }
        let mut out = vec![dijkstra_exact(&self.graph, u)[v] as f64];
        for k in 1..=o.k() {
            out.push(o.query_prefix(u, v, k).map_err(|e| e.to_string())?);
        }
        Ok(out)
    }

    /// Dominance sequence of `x` under the permutation drawn from `seed`,
    /// flattened as `dominator, distance` pairs.
    pub fn sequence(&self, x: usize, seed: u64, approx: bool) -> Result<Vec<f64>, String> {
        if x >= self.n() {
            return Err(format!("vertex must be below {}", self.n()));
        }
        let perm = random_permutation(self.n(), &mut rng::seeded(seed)).map_err(|e| e.to_string())?;
        let seqs = build_domseq(&self.graph, &perm, kind(approx)).map_err(|e| e.to_string())?;
        Ok(seqs.list(x).iter().flat_map(|e| [e.dominator as f64, e.dist as f64]).collect())
    }
}

//! Oracle stretch sweeps over tree counts and operation-count scaling of
//! the approximate sequence builder.

use std::time::Instant;

use treembed_core::bucket_sssp::OpCounts;
use treembed_core::csv::{f6, Table};
use treembed_core::domseq::{build_domseq_approx, SeqKind};
use treembed_core::frt::WeightMode;
use treembed_core::graph::random_permutation;
use treembed_core::oracle::{build_oracle_counted, exact_pair_distances, sample_pairs, stretch_report};
use treembed_core::rng;

use crate::family::Family;
use crate::CliError;

#[derive(Clone, Debug)]
pub struct BenchConfig {
    pub family: Family,
    pub weighted: bool,
    /// Strictly ascending and positive.
    pub trees: Vec<usize>,
    pub pairs: usize,
    pub seed: u64,
    pub mode: WeightMode,
    pub kind: SeqKind,
}

impl BenchConfig {
    pub fn new(family: Family, seed: u64) -> BenchConfig {
        BenchConfig {
            family,
            weighted: false,
            trees: vec![1, 2, 4, 8, 16, 32],
            pairs: 10_000,
            seed,
            mode: WeightMode::Actual,
            kind: SeqKind::Exact,
        }
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if self.trees.is_empty() || self.trees[0] == 0 || self.trees.windows(2).any(|w| w[0] >= w[1]) {
            return Err(CliError::Arg("tree counts must be positive and strictly ascending".into()));
        }
        if self.pairs == 0 {
            return Err(CliError::Arg("pair count must be at least 1".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BenchRow {
    pub k: usize,
    pub average: f64,
    pub worst: f64,
    pub geomean: f64,
    /// Summed over the first `k` trees.
    pub ops: OpCounts,
}

pub struct BenchReport {
    pub graph: String,
    pub n: usize,
    pub m: usize,
    pub rows: Vec<BenchRow>,
    /// `(stage, seconds)`; kept apart from the rows so reports stay
    /// reproducible.
    pub timings: Vec<(String, f64)>,
}

impl BenchReport {
    pub fn csv(&self) -> String {
        let mut t = Table::new(
            "bench",
            &["graph", "n", "m", "k", "average", "worst", "geomean", "decrease_key", "extract_min"],
        );
        for r in &self.rows {
            t.row(&[
                &self.graph,
                &self.n,
                &self.m,
                &r.k,
                &f6(r.average),
                &f6(r.worst),
                &f6(r.geomean),
                &r.ops.decrease_key,
                &r.ops.extract_min,
            ]);
        }
        t.finish()
    }

    pub fn timing_csv(&self) -> String {
        let mut t = Table::new("bench-timing", &["graph", "stage", "seconds"]);
        for (stage, s) in &self.timings {
            t.row(&[&self.graph, stage, &f6(*s)]);
        }
        t.finish()
    }
}

/// Builds the largest oracle once and evaluates every requested tree count
/// on its prefix, all against the same sampled pairs.
pub fn run_bench(cfg: &BenchConfig) -> Result<BenchReport, CliError> {
    cfg.validate()?;
    let mut timings = Vec::new();
    let mut clock = Instant::now();
    let mut lap = |name: &str, timings: &mut Vec<(String, f64)>| {
        timings.push((name.to_string(), clock.elapsed().as_secs_f64()));
        clock = Instant::now();
    };
    let g = cfg.family.generate(cfg.weighted, cfg.seed)?;
    lap("generate", &mut timings);
    let k_max = *cfg.trees.last().unwrap();
    let (oracle, ops) = build_oracle_counted(&g, k_max, cfg.mode, cfg.kind, cfg.seed)?;
    lap("build", &mut timings);
    let pairs = sample_pairs(g.n(), cfg.pairs, cfg.seed)?;
    let exact = exact_pair_distances(&g, &pairs);
    lap("exact", &mut timings);
    let mut rows = Vec::new();
    for &k in &cfg.trees {
        let rep = stretch_report(&oracle, &pairs, &exact, k)?;
        let mut sum = OpCounts::default();
        for o in &ops[..k] {
            sum.add(*o);
        }
        rows.push(BenchRow { k, average: rep.average, worst: rep.worst, geomean: rep.geomean, ops: sum });
        lap(&format!("eval_k{k}"), &mut timings);
    }
    let suffix = if cfg.weighted { ":weighted" } else { "" };
    Ok(BenchReport { graph: format!("{}{suffix}", cfg.family), n: g.n(), m: g.m(), rows, timings })
}

#[derive(Clone, Debug, PartialEq)]
pub struct ScalingRow {
    pub n: usize,
    pub m: usize,
    pub ops: OpCounts,
    /// `ops / (m log2 n)`.
    pub normalized: f64,
}

/// Approximate-sequence operation counts across `sizes`, each graph drawn
/// from `family` resized to `density * n` edges.
pub fn run_scaling(
    family: &Family,
    sizes: &[usize],
    density: usize,
    weighted: bool,
    seed: u64,
) -> Result<Vec<ScalingRow>, CliError> {
    if sizes.is_empty() || sizes.windows(2).any(|w| w[0] >= w[1]) {
        return Err(CliError::Arg("sizes must be strictly ascending".into()));
    }
    let mut out = Vec::new();
    for &n in sizes {
        let g = family.resized(n, density).generate(weighted, seed)?;
        let perm = random_permutation(g.n(), &mut rng::seeded(seed))?;
        let seqs = build_domseq_approx(&g, &perm)?;
        let ops = seqs.ops;
        let normalized = ops.total() as f64 / (g.m() as f64 * (g.n() as f64).log2());
        eprintln!("scaling n={} m={} ops={} normalized={normalized:.4}", g.n(), g.m(), ops.total());
        out.push(ScalingRow { n: g.n(), m: g.m(), ops, normalized });
    }
    Ok(out)
}

pub fn scaling_csv(rows: &[ScalingRow]) -> String {
    let mut t = Table::new("scaling", &["n", "m", "decrease_key", "extract_min", "ops", "normalized"]);
    for r in rows {
        t.row(&[&r.n, &r.m, &r.ops.decrease_key, &r.ops.extract_min, &r.ops.total(), &f6(r.normalized)]);
    }
    t.finish()
}

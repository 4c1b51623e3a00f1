//! Acceptance suite: one PASS/FAIL line per criterion. Pass criterion
//! numbers as arguments to run a subset, e.g.
//! `cargo test -p treembed --test acceptance -- 6 11`.

#[path = "../../core/tests/support/mod.rs"]
mod support;

use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::Instant;

use rand::Rng as _;
use support::{expanded_labels, random_connected, ExpandedTrie};
use treembed::bench::{run_bench, run_scaling, BenchConfig};
use treembed::family::Family;
use treembed_core::bucket_sssp::{approx_sssp_graph, refine_gabow};
use treembed_core::domseq::{brute_force_domseq, build_domseq_approx, build_domseq_exact, SeqKind};
use treembed_core::frt::{build_frt_tree, delta_for, sample_beta, WeightMode};
use treembed_core::graph::{all_pairs, dijkstra_exact, gen_random, random_permutation};
use treembed_core::oracle::build_oracle;
use treembed_core::ramsey::{estimate_padding, padding_bound, simulate_range_lemma, MetricView};
use treembed_core::rng;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn domseq_exactness() -> Outcome {
    let mut r = rng::seeded(101);
    let mut mismatches = 0;
    for _ in 0..500 {
        let n = r.gen_range(1..=120);
        let extra = r.gen_range(0..=2 * n);
        let g = random_connected(&mut r, n, extra, 10_000);
        let perm = random_permutation(n, &mut r).unwrap();
        if build_domseq_exact(&g, &perm).unwrap().lists != brute_force_domseq(&g, &perm).unwrap().lists {
            mismatches += 1;
        }
    }
    outcome(mismatches == 0, format!("500 instances, {mismatches} mismatches"))
}

fn sssp_preservation() -> Outcome {
    let mut r = rng::seeded(102);
    let mut violations = 0;
    let mut worst = 1.0f64;
    for _ in 0..200 {
        let n = r.gen_range(2..=200);
        let extra = r.gen_range(0..=3 * n);
        let g = random_connected(&mut r, n, extra, (n * n) as u64);
        let s = r.gen_range(0..n);
        let a = approx_sssp_graph(&g, s).unwrap();
        let exact = dijkstra_exact(&g, s);
        for v in 0..n {
            if a.dist[v] > exact[v] || 4 * a.dist[v] < exact[v] {
                violations += 1;
            }
            if exact[v] > 0 {
                worst = worst.min(a.dist[v] as f64 / exact[v] as f64);
            }
        }
        for &(u, v, w) in g.edges() {
            if a.dist[v] > a.dist[u] + w || a.dist[u] > a.dist[v] + w {
                violations += 1;
            }
        }
        if a.order.len() != n || a.order.windows(2).any(|p| a.dist[p[0]] > a.dist[p[1]]) {
            violations += 1;
        }
    }
    outcome(violations == 0, format!("200 graphs, {violations} violations, smallest ratio {worst:.4}"))
}

fn gabow_refinement() -> Outcome {
    let mut r = rng::seeded(103);
    let mut violations = 0;
    let mut rounds = 0;
    for _ in 0..50 {
        let n = r.gen_range(2..=200);
        let g = random_connected(&mut r, n, 2 * n, (n * n) as u64);
        let s = r.gen_range(0..n);
        let res = refine_gabow(&g, s, 0.01).unwrap();
        rounds = res.rounds.len();
        let exact = dijkstra_exact(&g, s);
        for v in 0..n {
            if 100 * res.dist[v] < 99 * exact[v] || res.dist[v] > exact[v] {
                violations += 1;
            }
        }
        if rounds != 17 {
            violations += 1;
        }
    }
    outcome(violations == 0, format!("50 graphs, {rounds} rounds, {violations} violations"))
}

fn approx_bracket() -> Outcome {
    let mut r = rng::seeded(104);
    let mut violations = 0;
    let mut entries = 0;
    let mut widest = 1.0f64;
    for i in 0..300 {
        let n = r.gen_range(1..=100);
        let wmax = [1, 100, 10_000, 1_000_000][i % 4];
        let extra = r.gen_range(0..=3 * n);
        let g = random_connected(&mut r, n, extra, wmax);
        let d = all_pairs(&g);
        let perm = random_permutation(n, &mut r).unwrap();
        let seqs = build_domseq_approx(&g, &perm).unwrap();
        for x in 0..n {
            for e in seqs.list(x) {
                let truth = d[x][e.dominator];
                entries += 1;
                if e.dist < truth || e.dist > 8 * truth {
                    violations += 1;
                }
                if truth > 0 {
                    widest = widest.max(e.dist as f64 / truth as f64);
                }
            }
        }
    }
    outcome(violations == 0, format!("{entries} entries, {violations} violations, largest ratio {widest:.3}"))
}

fn dominating() -> Outcome {
    let mut r = rng::seeded(105);
    let mut violations = 0;
    let mut trees = 0;
    for g_index in 0..10u64 {
        let n = r.gen_range(256..=512);
        let g = random_connected(&mut r, n, 3 * n, 1000);
        let d = all_pairs(&g);
        for mode in [WeightMode::Level, WeightMode::Actual] {
            let o = build_oracle(&g, 10, mode, SeqKind::Exact, g_index).unwrap();
            for t in &o.trees {
                trees += 1;
                for _ in 0..1000 {
                    let (u, v) = (r.gen_range(0..n), r.gen_range(0..n));
                    if t.distance(u, v).unwrap() < d[u][v] as f64 {
                        violations += 1;
                    }
                }
            }
        }
    }
    outcome(violations == 0, format!("{trees} trees x 1000 pairs, {violations} violations"))
}

fn table_one() -> Outcome {
    let targets = [("grid:100x100", 1.15, 4.5), ("grid:10000", 1.05, 2.5), ("powerlaw:10000,100000", 1.70, 5.0)];
    let mut pass = true;
    let mut parts = Vec::new();
    for (family, max_avg, max_worst) in targets {
        let (mut avg, mut worst) = (0.0, 0.0);
        for seed in 1..=3 {
            let mut cfg = BenchConfig::new(family.parse::<Family>().unwrap(), seed);
            cfg.trees = vec![32];
            let row = run_bench(&cfg).unwrap().rows.pop().unwrap();
            avg += row.average / 3.0;
            worst += row.worst / 3.0;
        }
        pass &= avg <= max_avg && worst <= max_worst;
        parts.push(format!("{family} avg {avg:.3}<={max_avg} worst {worst:.3}<={max_worst}"));
    }
    outcome(pass, parts.join("; "))
}

fn sequence_length() -> Outcome {
    let n = 4096;
    let h: f64 = (1..=n).map(|i| 1.0 / i as f64).sum();
    let mut means = Vec::new();
    for seed in 0..20 {
        let g = gen_random(n, 8 * n, true, seed).unwrap();
        let perm = random_permutation(n, &mut rng::seeded(seed)).unwrap();
        means.push(build_domseq_exact(&g, &perm).unwrap().mean_len());
    }
    let mean = means.iter().sum::<f64>() / 20.0;
    let lo = means.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = means.iter().copied().fold(0.0, f64::max);
    outcome(
        mean >= 0.5 * h && mean <= 2.0 * h,
        format!("mean {mean:.3} (per seed {lo:.3}..{hi:.3}), H_n {h:.3}, band [{:.3}, {:.3}]", 0.5 * h, 2.0 * h),
    )
}

fn ramsey_padding() -> Outcome {
    let g = gen_random(64, 256, true, 108).unwrap();
    let mv = MetricView::from_graph(&g).unwrap();
    let rep = estimate_padding(&mv, 3, 20_000, 108, true).unwrap();
    let bound = padding_bound(64, 3);
    let failing = rep.rows.iter().filter(|r| r.frequency + 3.0 * r.stderr < bound).count();
    let w = rep.weakest();
    outcome(
        failing == 0,
        format!(
            "weakest vertex {} freq {:.4} +- {:.4}, bound {bound:.5}, {failing} below",
            w.vertex, w.frequency, w.stderr
        ),
    )
}

fn range_lemma() -> Outcome {
    let e = simulate_range_lemma(&[0.37; 1000], None, 4, 0.5, 100_000, 109).unwrap();
    let bound = 0.5 / 1001f64.sqrt();
    outcome(
        e.estimate + 3.0 * e.stderr >= bound,
        format!("estimate {:.4} +- {:.4}, bound {bound:.4}", e.estimate, e.stderr),
    )
}

fn losslessness() -> Outcome {
    let mut r = rng::seeded(110);
    let mut mismatches = 0;
    let mut max_delta = 0;
    for _ in 0..200 {
        let n = r.gen_range(2..=32);
        let extra = r.gen_range(0..=2 * n);
        let g = random_connected(&mut r, n, extra, 30);
        let d = all_pairs(&g);
        let perm = random_permutation(n, &mut r).unwrap();
        let beta = sample_beta(&mut r);
        let seqs = build_domseq_exact(&g, &perm).unwrap();
        let delta = delta_for(seqs.max_dist());
        max_delta = max_delta.max(delta);
        let trie = ExpandedTrie::new(expanded_labels(&d, &perm, beta, delta), beta, delta);
        for mode in [WeightMode::Level, WeightMode::Actual] {
            let t = build_frt_tree(&seqs, beta, mode).unwrap();
            for u in 0..n {
                for v in 0..n {
                    if t.distance(u, v).unwrap() != trie.distance(u, v, mode, &d) {
                        mismatches += 1;
                    }
                }
            }
        }
    }
    outcome(
        mismatches == 0 && max_delta <= 10,
        format!("200 instances, max delta {max_delta}, {mismatches} mismatches"),
    )
}

fn scaling() -> Outcome {
    let sizes: Vec<usize> = (12..=16).map(|e| 1 << e).collect();
    let family: Family = "random:1,1".parse().unwrap();
    let mut pass = true;
    let mut parts = Vec::new();
    for weighted in [false, true] {
        let rows = run_scaling(&family, &sizes, 8, weighted, 111).unwrap();
        let lo = rows.iter().map(|r| r.normalized).fold(f64::INFINITY, f64::min);
        let hi = rows.iter().map(|r| r.normalized).fold(0.0, f64::max);
        pass &= hi / lo < 2.0;
        let label = if weighted { "weighted" } else { "unweighted" };
        parts.push(format!("{label} normalized {lo:.4}..{hi:.4} ratio {:.3}", hi / lo));
    }
    outcome(pass, parts.join("; "))
}

fn treembed(dir: &Path, args: &[&str], threads: &str, out: &Path) -> Result<Vec<u8>, String> {
    let status = Command::new(env!("CARGO_BIN_EXE_treembed"))
        .current_dir(dir)
        .args(args)
        .args(["--threads", threads, "--out"])
        .arg(out)
        .output()
        .map_err(|e| e.to_string())?;
    if !status.status.success() {
        return Err(format!("{args:?}: {}", String::from_utf8_lossy(&status.stderr)));
    }
    std::fs::read(out).map_err(|e| e.to_string())
}

fn determinism() -> Outcome {
    let dir: PathBuf = std::env::temp_dir().join(format!("treembed-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let setup = [
        (vec!["gen", "--family", "random:150,600", "--weighted", "--seed", "5"], "g.txt"),
        (vec!["gen", "--family", "random:40,120", "--weighted", "--seed", "6"], "small.txt"),
        (vec!["oracle", "build", "--graph", "g.txt", "--trees", "6", "--seed", "7"], "g.frto"),
    ];
    for (args, out) in &setup {
        if let Err(e) = treembed(&dir, args, "0", &dir.join(out)) {
            return outcome(false, e);
        }
    }
    let commands: Vec<Vec<&str>> = vec![
        vec!["gen", "--family", "powerlaw:300,1200", "--seed", "5"],
        vec!["gen", "--family", "slim:200,400,20", "--weighted", "--seed", "5"],
        vec!["sssp", "--graph", "g.txt", "--source", "3", "--eps", "0.1"],
        vec!["domseq", "--graph", "g.txt", "--seed", "7", "--mode", "exact"],
        vec!["domseq", "--graph", "g.txt", "--seed", "7", "--mode", "approx"],
        vec!["tree", "--graph", "g.txt", "--seed", "7", "--mode", "level"],
        vec!["tree", "--graph", "g.txt", "--seed", "7", "--mode", "actual", "--domseq", "approx"],
        vec!["oracle", "build", "--graph", "g.txt", "--trees", "6", "--seed", "7"],
        vec!["oracle", "query", "--oracle", "g.frto", "--u", "1", "--v", "2"],
        vec!["oracle", "eval", "--oracle", "g.frto", "--graph", "g.txt", "--pairs", "500", "--seed", "7"],
        vec!["ramsey", "--graph", "small.txt", "--a", "3", "--trials", "500", "--seed", "7"],
        vec!["bench", "--family", "grid:20x20", "--trees", "1,2,4", "--pairs", "500", "--seed", "7"],
        vec!["scaling", "--sizes", "512,1024", "--seed", "7"],
    ];
    let mut differing = Vec::new();
    for (i, args) in commands.iter().enumerate() {
        let a = treembed(&dir, args, "1", &dir.join(format!("a{i}")));
        let b = treembed(&dir, args, "3", &dir.join(format!("b{i}")));
        match (a, b) {
            (Ok(a), Ok(b)) if a == b && !a.is_empty() => {}
            (Err(e), _) | (_, Err(e)) => differing.push(e),
            _ => differing.push(args.join(" ")),
        }
    }
    let _ = std::fs::remove_dir_all(&dir);
    let detail = format!("{} commands twice (1 and 3 threads), {} differ", commands.len(), differing.len());
    if differing.is_empty() {
        outcome(true, detail)
    } else {
        outcome(false, format!("{detail}: {}", differing.join(" | ")))
    }
}

type Criterion = (u32, &'static str, f64, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 12] = [
        (1, "dominance-sequence exactness", 120.0, domseq_exactness),
        (2, "approximate SSSP preservation", 60.0, sssp_preservation),
        (3, "refinement reaches 0.99 in 17 rounds", 60.0, gabow_refinement),
        (4, "approximate sequences bracket truth", 120.0, approx_bracket),
        (5, "trees dominate graph distances", 120.0, dominating),
        (6, "oracle stretch on benchmark graphs", 1800.0, table_one),
        (7, "sequence length concentration", 120.0, sequence_length),
        (8, "Ramsey padding frequency", 300.0, ramsey_padding),
        (9, "range lemma simulator", 60.0, range_lemma),
        (10, "compressed tree losslessness", 60.0, losslessness),
        (11, "approximate builder operation scaling", 600.0, scaling),
        (12, "seeded determinism", f64::INFINITY, determinism),
    ];
    let only: Vec<u32> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let mut failed = 0;
    for (id, name, budget, f) in criteria {
        if !only.is_empty() && !only.contains(&id) {
            continue;
        }
        let start = Instant::now();
        let mut o = f();
        let secs = start.elapsed().as_secs_f64();
        if secs > budget {
            o.pass = false;
            o.detail.push_str(&format!("; over the {budget:.0}s budget"));
        }
        if !o.pass {
            failed += 1;
        }
        let tag = if o.pass { "PASS" } else { "FAIL" };
        println!("{tag} {id:>2} {name}: {} ({secs:.1}s)", o.detail);
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}

//! Command-line driver. [`run`] executes a parsed [`Cli`] and maps every
//! failure onto one of the documented exit codes.

pub mod bench;
pub mod family;

use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use thiserror::Error;

use treembed_core::bucket_sssp::{approx_sssp_graph, refine_gabow, SsspError};
use treembed_core::csv::{f6, Table};
use treembed_core::domseq::{build_domseq, DomseqError, SeqKind};
use treembed_core::frt::{FrtError, WeightMode};
use treembed_core::graph::{dijkstra_exact, parse_graph, random_permutation, write_graph, Graph, GraphError, INF};
use treembed_core::oracle::{build_oracle, deserialize, eval_stretch, serialize, DistanceOracle, OracleError};
use treembed_core::ramsey::{estimate_padding, MetricView, RamseyError};
use treembed_core::rng;

use bench::{run_bench, run_scaling, scaling_csv, BenchConfig};
use family::Family;

pub const EXIT_ARG: i32 = 2;
pub const EXIT_IO: i32 = 3;
pub const EXIT_FORMAT: i32 = 4;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Arg(String),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{0}")]
    Format(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Arg(_) => EXIT_ARG,
            CliError::Io { .. } => EXIT_IO,
            CliError::Format(_) => EXIT_FORMAT,
        }
    }
}

impl From<GraphError> for CliError {
    fn from(e: GraphError) -> CliError {
        match e {
            GraphError::Parse { .. } => CliError::Format(e.to_string()),
            _ => CliError::Arg(e.to_string()),
        }
    }
}

impl From<SsspError> for CliError {
    fn from(e: SsspError) -> CliError {
        CliError::Arg(e.to_string())
    }
}

impl From<DomseqError> for CliError {
    fn from(e: DomseqError) -> CliError {
        CliError::Arg(e.to_string())
    }
}

impl From<FrtError> for CliError {
    fn from(e: FrtError) -> CliError {
        match e {
            FrtError::Corrupt(_) => CliError::Format(e.to_string()),
            _ => CliError::Arg(e.to_string()),
        }
    }
}

impl From<OracleError> for CliError {
    fn from(e: OracleError) -> CliError {
        match e {
            OracleError::BadMagic | OracleError::BadVersion(_) | OracleError::Truncated | OracleError::Corrupt(_) => {
                CliError::Format(e.to_string())
            }
            OracleError::Tree(t) => t.into(),
            _ => CliError::Arg(e.to_string()),
        }
    }
}

impl From<RamseyError> for CliError {
    fn from(e: RamseyError) -> CliError {
        CliError::Arg(e.to_string())
    }
}

#[derive(Debug, Parser)]
#[command(name = "treembed", version, about = "Tree embeddings, dominance sequences and distance oracles")]
pub struct Cli {
    /// Seed for every random choice; required by randomized commands.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Output path; standard output when absent.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Worker threads, 0 for one per core.
    #[arg(long, global = true, default_value_t = 0)]
    pub threads: usize,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum ModeArg {
    Level,
    Actual,
}

impl From<ModeArg> for WeightMode {
    fn from(m: ModeArg) -> WeightMode {
        match m {
            ModeArg::Level => WeightMode::Level,
            ModeArg::Actual => WeightMode::Actual,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum KindArg {
    Exact,
    Approx,
}

impl From<KindArg> for SeqKind {
    fn from(k: KindArg) -> SeqKind {
        match k {
            KindArg::Exact => SeqKind::Exact,
            KindArg::Approx => SeqKind::Approx,
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a graph file.
    Gen {
        /// grid:AxB[xC], powerlaw:N,M, slim:N,M,D or random:N,M.
        #[arg(long)]
        family: Family,
        #[arg(long)]
        weighted: bool,
    },
    /// Approximate single-source distances next to exact ones.
    Sssp {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        source: usize,
        /// Refine to relative error eps.
        #[arg(long)]
        eps: Option<f64>,
    },
    /// Dominance sequences for a random permutation.
    Domseq {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, value_enum, default_value = "exact")]
        mode: KindArg,
    },
    /// Sample one tree and write it in the oracle format.
    Tree {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, value_enum, default_value = "actual")]
        mode: ModeArg,
        #[arg(long, value_enum, default_value = "exact")]
        domseq: KindArg,
    },
    /// Build, query or evaluate a distance oracle.
    #[command(subcommand)]
    Oracle(OracleCommand),
    /// Per-vertex padding frequencies of random hierarchical partitions.
    Ramsey {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        a: u32,
        #[arg(long, default_value_t = 10_000)]
        trials: usize,
        /// Use radius scale 1 instead of a random one.
        #[arg(long)]
        no_beta: bool,
    },
    /// Stretch of nested oracle prefixes on a generated graph.
    Bench(BenchArgs),
    /// Operation counts of the approximate sequence builder across sizes.
    Scaling {
        #[arg(long, default_value = "random:1,1")]
        family: Family,
        #[arg(long, value_delimiter = ',', default_value = "4096,8192,16384,32768,65536")]
        sizes: Vec<usize>,
        /// Edges per vertex.
        #[arg(long, default_value_t = 8)]
        density: usize,
        #[arg(long)]
        weighted: bool,
    },
}

#[derive(Debug, Subcommand)]
pub enum OracleCommand {
    Build {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, default_value_t = 32)]
        trees: usize,
        #[arg(long, value_enum, default_value = "actual")]
        mode: ModeArg,
        #[arg(long, value_enum, default_value = "exact")]
        domseq: KindArg,
    },
    Query {
        #[arg(long)]
        oracle: PathBuf,
        /// File of `u v` lines.
        #[arg(long, conflicts_with_all = ["u", "v"])]
        pairs: Option<PathBuf>,
        #[arg(long, requires = "v")]
        u: Option<usize>,
        #[arg(long, requires = "u")]
        v: Option<usize>,
    },
    Eval {
        #[arg(long)]
        oracle: PathBuf,
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, default_value_t = 10_000)]
        pairs: usize,
    },
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[arg(long)]
    pub family: Family,
    #[arg(long)]
    pub weighted: bool,
    #[arg(long, value_delimiter = ',', default_value = "1,2,4,8,16,32")]
    pub trees: Vec<usize>,
    #[arg(long, default_value_t = 10_000)]
    pub pairs: usize,
    #[arg(long, value_enum, default_value = "actual")]
    pub mode: ModeArg,
    #[arg(long, value_enum, default_value = "exact")]
    pub domseq: KindArg,
}

fn read(path: &Path) -> Result<Vec<u8>, CliError> {
    fs::read(path).map_err(|source| CliError::Io { path: path.into(), source })
}

fn read_graph(path: &Path) -> Result<Graph, CliError> {
    let bytes = read(path)?;
    let text = String::from_utf8(bytes).map_err(|_| CliError::Format(format!("{}: not UTF-8", path.display())))?;
    parse_graph(&text).map_err(|e| match e {
        GraphError::Parse { .. } => CliError::Format(format!("{}: {e}", path.display())),
        e => e.into(),
    })
}

fn read_oracle(path: &Path) -> Result<DistanceOracle, CliError> {
    deserialize(&read(path)?).map_err(|e| match CliError::from(e) {
        CliError::Format(m) => CliError::Format(format!("{}: {m}", path.display())),
        other => other,
    })
}

fn emit(out: Option<&Path>, bytes: &[u8]) -> Result<(), CliError> {
    match out {
        Some(p) => fs::write(p, bytes).map_err(|source| CliError::Io { path: p.into(), source }),
        None => std::io::stdout().write_all(bytes).map_err(|source| CliError::Io { path: "<stdout>".into(), source }),
    }
}

fn need_seed(seed: Option<u64>) -> Result<u64, CliError> {
    seed.ok_or_else(|| CliError::Arg("this command needs --seed".into()))
}

fn dist_cell(d: u64) -> String {
    if d == INF {
        "inf".into()
    } else {
        d.to_string()
    }
}

fn parse_pairs(text: &str, path: &Path) -> Result<Vec<(usize, usize)>, CliError> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap().trim();
        if line.is_empty() {
            continue;
        }
        let f: Vec<&str> = line.split(|c: char| c == ',' || c.is_whitespace()).filter(|s| !s.is_empty()).collect();
        let bad = || CliError::Format(format!("{}:{}: expected `u v`", path.display(), i + 1));
        if f.len() != 2 {
            return Err(bad());
        }
        out.push((f[0].parse().map_err(|_| bad())?, f[1].parse().map_err(|_| bad())?));
    }
    Ok(out)
}

pub fn run(cli: Cli) -> Result<(), CliError> {
    if cli.threads > 0 {
        // Fails only if a pool already exists, which is harmless.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(cli.threads).build_global();
    }
    let out = cli.out.as_deref();
    match cli.command {
        Command::Gen { family, weighted } => {
            let g = family.generate(weighted, need_seed(cli.seed)?)?;
            eprintln!("gen {family}: n={} m={}", g.n(), g.m());
            emit(out, write_graph(&g).as_bytes())
        }
        Command::Sssp { graph, source, eps } => {
            let g = read_graph(&graph)?;
            if source >= g.n() {
                return Err(CliError::Arg(format!("source {source} out of range")));
            }
            let approx = match eps {
                Some(e) => {
                    let r = refine_gabow(&g, source, e)?;
                    eprintln!("sssp: {} refinement rounds, {} queue operations", r.rounds.len(), r.ops.total());
                    r.dist
                }
                None => {
                    let r = approx_sssp_graph(&g, source)?;
                    eprintln!("sssp: {} queue operations", r.ops.total());
                    r.dist
                }
            };
            let exact = dijkstra_exact(&g, source);
            let mut t = Table::new("sssp", &["vertex", "approx_d", "exact_d", "ratio"]);
            for v in 0..g.n() {
                let ratio = match (approx[v], exact[v]) {
                    (_, INF) => "nan".to_string(),
                    (_, 0) => f6(1.0),
                    (a, e) => f6(a as f64 / e as f64),
                };
                t.row(&[&v, &dist_cell(approx[v]), &dist_cell(exact[v]), &ratio]);
            }
            emit(out, t.finish().as_bytes())
        }
        Command::Domseq { graph, mode } => {
            let g = read_graph(&graph)?;
            let perm = random_permutation(g.n(), &mut rng::seeded(need_seed(cli.seed)?))?;
            let seqs = build_domseq(&g, &perm, mode.into())?;
            eprintln!(
                "domseq {}: mean length {:.3}, {} queue operations",
                seqs.kind.name(),
                seqs.mean_len(),
                seqs.ops.total()
            );
            let mut t = Table::new("domseq", &["vertex", "rank_in_list", "dominator", "stored_distance"]);
            for x in 0..g.n() {
                for (i, e) in seqs.list(x).iter().enumerate() {
                    t.row(&[&x, &(i + 1), &e.dominator, &e.dist]);
                }
            }
            emit(out, t.finish().as_bytes())
        }
        Command::Tree { graph, mode, domseq } => {
            let g = read_graph(&graph)?;
            let o = build_oracle(&g, 1, mode.into(), domseq.into(), need_seed(cli.seed)?)?;
            eprintln!("tree: {} nodes, delta {}", o.trees[0].node_count(), o.trees[0].delta);
            emit(out, &serialize(&o))
        }
        Command::Oracle(OracleCommand::Build { graph, trees, mode, domseq }) => {
            let g = read_graph(&graph)?;
            let o = build_oracle(&g, trees, mode.into(), domseq.into(), need_seed(cli.seed)?)?;
            eprintln!("oracle: {} trees over {} vertices", o.k(), o.n);
            emit(out, &serialize(&o))
        }
        Command::Oracle(OracleCommand::Query { oracle, pairs, u, v }) => {
            let o = read_oracle(&oracle)?;
            let pairs = match (pairs, u, v) {
                (Some(p), _, _) => {
                    let text = String::from_utf8(read(&p)?)
                        .map_err(|_| CliError::Format(format!("{}: not UTF-8", p.display())))?;
                    parse_pairs(&text, &p)?
                }
                (None, Some(u), Some(v)) => vec![(u, v)],
                _ => return Err(CliError::Arg("give --pairs FILE or --u A --v B".into())),
            };
            let mut t = Table::new("query", &["u", "v", "estimate"]);
            for (u, v) in pairs {
                t.row(&[&u, &v, &f6(o.query(u, v)?)]);
            }
            emit(out, t.finish().as_bytes())
        }
        Command::Oracle(OracleCommand::Eval { oracle, graph, pairs }) => {
            let o = read_oracle(&oracle)?;
            let g = read_graph(&graph)?;
            let rep = eval_stretch(&o, &g, pairs, need_seed(cli.seed)?)?;
            eprintln!(
                "eval k={}: average {:.4}, worst {:.4}, geomean {:.4}, skipped {}",
                rep.k, rep.average, rep.worst, rep.geomean, rep.skipped
            );
            let mut t = Table::new("eval", &["u", "v", "exact", "estimate", "stretch"]);
            for r in &rep.rows {
                t.row(&[&r.u, &r.v, &r.exact, &f6(r.approx), &f6(r.stretch)]);
            }
            emit(out, t.finish().as_bytes())
        }
        Command::Ramsey { graph, a, trials, no_beta } => {
            let g = read_graph(&graph)?;
            let mv = MetricView::from_graph(&g)?;
            let rep = estimate_padding(&mv, a, trials, need_seed(cli.seed)?, !no_beta)?;
            let w = rep.weakest();
            eprintln!(
                "ramsey a={a}: mean frequency {:.4}, weakest vertex {} at {:.4}, bound {:.4}",
                rep.mean_frequency(),
                w.vertex,
                w.frequency,
                w.bound
            );
            let mut t = Table::new("ramsey", &["vertex", "success_freq", "stderr", "bound"]);
            for r in &rep.rows {
                t.row(&[&r.vertex, &f6(r.frequency), &f6(r.stderr), &f6(r.bound)]);
            }
            emit(out, t.finish().as_bytes())
        }
        Command::Bench(b) => {
            let cfg = BenchConfig {
                family: b.family,
                weighted: b.weighted,
                trees: b.trees,
                pairs: b.pairs,
                seed: need_seed(cli.seed)?,
                mode: b.mode.into(),
                kind: b.domseq.into(),
            };
            let rep = run_bench(&cfg)?;
            for r in &rep.rows {
                eprintln!("bench {} k={}: average {:.4}, worst {:.4}", rep.graph, r.k, r.average, r.worst);
            }
            emit(out, rep.csv().as_bytes())?;
            // Wall times go to a sidecar so the main report is reproducible.
            match out {
                Some(p) => {
                    let mut side = p.as_os_str().to_owned();
                    side.push(".timing.csv");
                    emit(Some(Path::new(&side)), rep.timing_csv().as_bytes())
                }
                None => {
                    eprint!("{}", rep.timing_csv());
                    Ok(())
                }
            }
        }
        Command::Scaling { family, sizes, density, weighted } => {
            let rows = run_scaling(&family, &sizes, density, weighted, need_seed(cli.seed)?)?;
            emit(out, scaling_csv(&rows).as_bytes())
        }
    }
}

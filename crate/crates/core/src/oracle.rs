//! Distance oracle over several independently sampled trees. A query
//! returns the smallest tree distance, which never underestimates the graph
//! distance because every tree dominates it.

use std::collections::BTreeMap;

use rand::Rng as _;
use thiserror::Error;

use crate::bucket_sssp::OpCounts;
use crate::domseq::SeqKind;
use crate::frt::{sample_tree_counted, Beta, FrtError, FrtTree, WeightMode, NO_PARENT};
use crate::graph::{dijkstra_exact, Graph, INF};
use crate::{par, rng};

pub const MAGIC: &[u8; 4] = b"FRTO";
pub const VERSION: u16 = 1;

#[derive(Debug, Error)]
pub enum OracleError {
    #[error("an oracle needs at least one tree")]
    NoTrees,
    #[error("too many trees: {0}")]
    TooManyTrees(usize),
    #[error("graph must be connected")]
    Disconnected,
    #[error("need at least two vertices to sample pairs")]
    TooFewVertices,
    #[error("vertex {0} out of range")]
    VertexOutOfRange(usize),
    #[error("oracle covers {oracle} vertices, graph has {graph}")]
    SizeMismatch { oracle: usize, graph: usize },
    #[error("empty oracle file")]
    Empty,
    #[error("bad magic bytes")]
    BadMagic,
    #[error("unsupported format version {0}")]
    BadVersion(u16),
    #[error("oracle file is truncated")]
    Truncated,
    #[error("corrupt oracle file: {0}")]
    Corrupt(String),
    #[error(transparent)]
    Tree(#[from] FrtError),
}

pub struct DistanceOracle {
    pub n: usize,
    pub mode: WeightMode,
    pub kind: SeqKind,
    pub seed: u64,
    pub trees: Vec<FrtTree>,
}

/// Samples `k` trees. Tree `t` draws its permutation and `beta` from
/// stream `t` of `seed`, so any prefix of trees is itself a valid oracle
/// and results do not depend on scheduling.
pub fn build_oracle(
    g: &Graph,
    k: usize,
    mode: WeightMode,
    kind: SeqKind,
    seed: u64,
) -> Result<DistanceOracle, OracleError> {
    build_oracle_counted(g, k, mode, kind, seed).map(|(o, _)| o)
}

/// [`build_oracle`] that also returns each tree's sequence-builder
/// operation counts.
pub fn build_oracle_counted(
    g: &Graph,
    k: usize,
    mode: WeightMode,
    kind: SeqKind,
    seed: u64,
) -> Result<(DistanceOracle, Vec<OpCounts>), OracleError> {
    if k == 0 {
        return Err(OracleError::NoTrees);
    }
    if k > u16::MAX as usize {
        return Err(OracleError::TooManyTrees(k));
    }
    if !g.is_connected() {
        return Err(OracleError::Disconnected);
    }
    let built = par::map((0..k as u64).collect(), |t| sample_tree_counted(g, kind, mode, &mut rng::stream(seed, t)));
    let (trees, ops) = built.into_iter().collect::<Result<Vec<_>, _>>()?.into_iter().unzip();
    Ok((DistanceOracle { n: g.n(), mode, kind, seed, trees }, ops))
}

impl DistanceOracle {
    pub fn k(&self) -> usize {
        self.trees.len()
    }

    pub fn query(&self, u: usize, v: usize) -> Result<f64, OracleError> {
        self.query_prefix(u, v, self.k())
    }

    /// Answer using only the first `k` trees.
    pub fn query_prefix(&self, u: usize, v: usize, k: usize) -> Result<f64, OracleError> {
        for x in [u, v] {
            if x >= self.n {
                return Err(OracleError::VertexOutOfRange(x));
            }
        }
        if u == v {
            return Ok(0.0);
        }
        let mut best = f64::INFINITY;
        for t in &self.trees[..k.min(self.k())] {
            best = best.min(t.distance(u, v)?);
        }
        Ok(best)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PairRow {
    pub u: usize,
    pub v: usize,
    pub exact: u64,
    pub approx: f64,
    pub stretch: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct StretchReport {
    pub k: usize,
    pub pairs: usize,
    /// Sampled pairs with no path, left out of the statistics.
    pub skipped: usize,
    pub average: f64,
    pub worst: f64,
    pub geomean: f64,
    pub rows: Vec<PairRow>,
}

/// Uniform pairs of distinct vertices; a pair may repeat.
pub fn sample_pairs(n: usize, count: usize, seed: u64) -> Result<Vec<(usize, usize)>, OracleError> {
    if n < 2 {
        return Err(OracleError::TooFewVertices);
    }
    let mut r = rng::stream(seed, u64::MAX);
    Ok((0..count)
        .map(|_| {
            let u = r.gen_range(0..n);
            let mut v = r.gen_range(0..n - 1);
            if v >= u {
                v += 1;
            }
            (u, v)
        })
        .collect())
}

/// Exact distances for `pairs`, one Dijkstra per distinct source.
pub fn exact_pair_distances(g: &Graph, pairs: &[(usize, usize)]) -> Vec<u64> {
    let mut by_source: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (i, &(u, _)) in pairs.iter().enumerate() {
        by_source.entry(u).or_default().push(i);
    }
    let groups: Vec<(usize, Vec<usize>)> = by_source.into_iter().collect();
    let solved = par::map(groups, |(u, idx)| {
        let d = dijkstra_exact(g, u);
        idx.into_iter().map(|i| (i, d[pairs[i].1])).collect::<Vec<_>>()
    });
    let mut out = vec![INF; pairs.len()];
    for (i, d) in solved.into_iter().flatten() {
        out[i] = d;
    }
    out
}

/// Stretch statistics of the first `k` trees over fixed pairs.
pub fn stretch_report(
    oracle: &DistanceOracle,
    pairs: &[(usize, usize)],
    exact: &[u64],
    k: usize,
) -> Result<StretchReport, OracleError> {
    let mut rows = Vec::with_capacity(pairs.len());
    let mut skipped = 0;
    for (&(u, v), &d) in pairs.iter().zip(exact) {
        if d == INF {
            skipped += 1;
            continue;
        }
        let approx = oracle.query_prefix(u, v, k)?;
        rows.push(PairRow { u, v, exact: d, approx, stretch: approx / d as f64 });
    }
    let count = rows.len().max(1) as f64;
    let average = rows.iter().map(|r| r.stretch).sum::<f64>() / count;
    let worst = rows.iter().map(|r| r.stretch).fold(0.0, f64::max);
    let geomean = (rows.iter().map(|r| r.stretch.ln()).sum::<f64>() / count).exp();
    Ok(StretchReport { k: k.min(oracle.k()), pairs: pairs.len(), skipped, average, worst, geomean, rows })
}

/// Samples `pairs` vertex pairs and measures stretch against exact
/// distances.
pub fn eval_stretch(oracle: &DistanceOracle, g: &Graph, pairs: usize, seed: u64) -> Result<StretchReport, OracleError> {
    if oracle.n != g.n() {
        return Err(OracleError::SizeMismatch { oracle: oracle.n, graph: g.n() });
    }
    let p = sample_pairs(g.n(), pairs, seed)?;
    let exact = exact_pair_distances(g, &p);
    stretch_report(oracle, &p, &exact, oracle.k())
}

fn mode_byte(m: WeightMode) -> u8 {
    match m {
        WeightMode::Level => 0,
        WeightMode::Actual => 1,
    }
}

fn kind_byte(k: SeqKind) -> u8 {
    match k {
        SeqKind::Exact => 0,
        SeqKind::Approx => 1,
    }
}

/// Little-endian binary encoding.
///
/// Header: magic `FRTO`, version u16, n u64, tree count u16, weight mode u8
/// (0 level, 1 actual), sequence kind u8 (0 exact, 1 approx), seed u64.
/// Per tree: beta numerator u64, delta u32, node count u64, then per node
/// parent u64 (`u64::MAX` for the root), label u64, end level u32 and
/// level weight u64; then the leaf node of each vertex as u64; in actual
/// mode, per vertex an entry count u32 followed by `(level u32, dist u64)`.
pub fn serialize(oracle: &DistanceOracle) -> Vec<u8> {
    let mut out = Vec::new();
    out.extend_from_slice(MAGIC);
    out.extend_from_slice(&VERSION.to_le_bytes());
    out.extend_from_slice(&(oracle.n as u64).to_le_bytes());
    out.extend_from_slice(&(oracle.k() as u16).to_le_bytes());
    out.push(mode_byte(oracle.mode));
    out.push(kind_byte(oracle.kind));
    out.extend_from_slice(&oracle.seed.to_le_bytes());
    for t in &oracle.trees {
        out.extend_from_slice(&t.beta.num().to_le_bytes());
        out.extend_from_slice(&t.delta.to_le_bytes());
        out.extend_from_slice(&(t.node_count() as u64).to_le_bytes());
        for v in 0..t.node_count() {
            let p = if t.parent[v] == NO_PARENT { u64::MAX } else { t.parent[v] as u64 };
            out.extend_from_slice(&p.to_le_bytes());
            out.extend_from_slice(&(t.label[v] as u64).to_le_bytes());
            out.extend_from_slice(&t.end_level[v].to_le_bytes());
            out.extend_from_slice(&t.weight[v].to_le_bytes());
        }
        for &l in &t.leaf {
            out.extend_from_slice(&(l as u64).to_le_bytes());
        }
        if t.mode == WeightMode::Actual {
            for table in &t.leaf_dist {
                out.extend_from_slice(&(table.len() as u32).to_le_bytes());
                for &(level, d) in table {
                    out.extend_from_slice(&level.to_le_bytes());
                    out.extend_from_slice(&d.to_le_bytes());
                }
            }
        }
    }
    out
}

struct Reader<'a> {
    buf: &'a [u8],
}

impl Reader<'_> {
    fn take<const N: usize>(&mut self) -> Result<[u8; N], OracleError> {
        if self.buf.len() < N {
            return Err(OracleError::Truncated);
        }
        let (head, rest) = self.buf.split_at(N);
        self.buf = rest;
        Ok(head.try_into().unwrap())
    }
    fn u8(&mut self) -> Result<u8, OracleError> {
        Ok(self.take::<1>()?[0])
    }
    fn u16(&mut self) -> Result<u16, OracleError> {
        Ok(u16::from_le_bytes(self.take()?))
    }
    fn u32(&mut self) -> Result<u32, OracleError> {
        Ok(u32::from_le_bytes(self.take()?))
    }
    fn u64(&mut self) -> Result<u64, OracleError> {
        Ok(u64::from_le_bytes(self.take()?))
    }
    /// Count that must fit in the remaining bytes at `unit` bytes each.
    fn count(&mut self, raw: u64, unit: usize) -> Result<usize, OracleError> {
        if raw > (self.buf.len() / unit) as u64 {
            return Err(OracleError::Truncated);
        }
        Ok(raw as usize)
    }
}

fn index(raw: u64, bound: usize, what: &str) -> Result<u32, OracleError> {
    if raw >= bound as u64 {
        return Err(OracleError::Corrupt(format!("{what} {raw} out of range")));
    }
    Ok(raw as u32)
}

pub fn deserialize(bytes: &[u8]) -> Result<DistanceOracle, OracleError> {
    if bytes.is_empty() {
        return Err(OracleError::Empty);
    }
    let mut r = Reader { buf: bytes };
    if r.take::<4>().map_err(|_| OracleError::BadMagic)? != *MAGIC {
        return Err(OracleError::BadMagic);
    }
    let version = r.u16()?;
    if version != VERSION {
        return Err(OracleError::BadVersion(version));
    }
    let n64 = r.u64()?;
    let k = r.u16()? as usize;
    let mode = match r.u8()? {
        0 => WeightMode::Level,
        1 => WeightMode::Actual,
        b => return Err(OracleError::Corrupt(format!("weight mode {b}"))),
    };
    let kind = match r.u8()? {
        0 => SeqKind::Exact,
        1 => SeqKind::Approx,
        b => return Err(OracleError::Corrupt(format!("sequence kind {b}"))),
    };
    let seed = r.u64()?;
    if k == 0 {
        return Err(OracleError::NoTrees);
    }
    let n = r.count(n64, 8)?;
    let mut trees = Vec::with_capacity(k);
    for _ in 0..k {
        let beta = Beta::from_num(r.u64()?).ok_or_else(|| OracleError::Corrupt("beta out of range".into()))?;
        let delta = r.u32()?;
        let raw_nodes = r.u64()?;
        let nodes = r.count(raw_nodes, 28)?;
        let (mut parent, mut label, mut end_level, mut weight) = (
            Vec::with_capacity(nodes),
            Vec::with_capacity(nodes),
            Vec::with_capacity(nodes),
            Vec::with_capacity(nodes),
        );
        for _ in 0..nodes {
            let p = r.u64()?;
            parent.push(if p == u64::MAX { NO_PARENT } else { index(p, nodes, "parent")? });
            label.push(index(r.u64()?, n, "label")?);
            end_level.push(r.u32()?);
            weight.push(r.u64()?);
        }
        let mut leaf = Vec::with_capacity(n);
        for _ in 0..n {
            leaf.push(index(r.u64()?, nodes, "leaf")?);
        }
        let mut leaf_dist = Vec::new();
        if mode == WeightMode::Actual {
            for _ in 0..n {
                let raw = r.u32()? as u64;
                let len = r.count(raw, 12)?;
                let mut table = Vec::with_capacity(len);
                for _ in 0..len {
                    table.push((r.u32()?, r.u64()?));
                }
                if table.last().map(|e| e.0) != Some(delta) {
                    return Err(OracleError::Corrupt("leaf table must end at the bottom level".into()));
                }
                leaf_dist.push(table);
            }
        }
        trees.push(FrtTree::assemble(beta, delta, mode, parent, label, end_level, weight, leaf, leaf_dist)?);
    }
    if !r.buf.is_empty() {
        return Err(OracleError::Corrupt(format!("{} trailing bytes", r.buf.len())));
    }
    Ok(DistanceOracle { n, mode, kind, seed, trees })
}

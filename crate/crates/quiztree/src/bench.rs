//! Benchmark harness: sample distributions, build trees, measure
//! redundancy (cost − H) and prolixity (cost − Opt).

use std::fmt::Write as _;
use std::io;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use quiztree_core::json::parse_distribution;
use quiztree_core::sample::{sample, SampleFamily};
use quiztree_core::{huffman, Distribution};

use crate::spec::StrategySpec;

#[derive(Debug, thiserror::Error)]
pub enum BenchError {
    #[error("unknown distribution family {0:?}")]
    UnknownFamily(String),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: io::Error },
    #[error("{0}")]
    Config(String),
    #[error(transparent)]
    Core(#[from] quiztree_core::Error),
}

#[derive(Debug, Clone, PartialEq)]
pub enum Source {
    Sampled(SampleFamily),
    /// One fixed distribution; every sample reuses it (only the strategy's
    /// own randomness varies).
    File(PathBuf),
}

impl FromStr for Source {
    type Err = BenchError;

    /// A family name, or `file:PATH`.
    fn from_str(s: &str) -> Result<Self, BenchError> {
        if let Some(p) = s.strip_prefix("file:") {
            return Ok(Source::File(PathBuf::from(p)));
        }
        s.parse::<SampleFamily>()
            .map(Source::Sampled)
            .map_err(|_| BenchError::UnknownFamily(s.to_string()))
    }
}

impl std::fmt::Display for Source {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Source::Sampled(fam) => write!(f, "{fam}"),
            Source::File(p) => write!(f, "file:{}", p.display()),
        }
    }
}

#[derive(Debug, Clone)]
pub struct BenchConfig {
    pub strategy: StrategySpec,
    pub ns: Vec<usize>,
    pub source: Source,
    pub samples: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchRow {
    pub n: usize,
    pub strategy: String,
    pub family: String,
    pub samples: usize,
    pub mean_redundancy: f64,
    pub max_redundancy: f64,
    pub mean_prolixity: f64,
    /// Exact, as a rational string.
    pub max_prolixity: String,
    pub family_size: String,
}

struct Measured {
    redundancy: f64,
    prolixity: BigRational,
}

/// Generator for task `task` of a run: one ChaCha stream per task, so the
/// result does not depend on scheduling.
fn task_rng(seed: u64, task: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(task);
    rng
}

fn measure(strategy: &StrategySpec, dist: &Distribution) -> Result<Measured, BenchError> {
    let tree = strategy.build_tree(dist)?;
    let cost = tree.cost(dist)?;
    let opt = huffman(dist).opt_cost;
    Ok(Measured {
        redundancy: cost.to_f64().unwrap_or(f64::NAN) - dist.entropy(),
        prolixity: cost - opt,
    })
}

fn load(path: &Path) -> Result<Distribution, BenchError> {
    let text = std::fs::read_to_string(path).map_err(|source| BenchError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    Ok(parse_distribution(&text)?)
}

pub fn bench_run(config: &BenchConfig) -> Result<Vec<BenchRow>, BenchError> {
    if config.samples == 0 {
        return Err(BenchError::Config("samples must be at least 1".into()));
    }
    let fixed = match &config.source {
        Source::File(p) => Some(load(p)?),
        Source::Sampled(_) => None,
    };
    let ns: Vec<usize> = match &fixed {
        Some(d) => vec![d.n()],
        None => config.ns.clone(),
    };
    if ns.is_empty() || ns.contains(&0) {
        return Err(BenchError::Config("need at least one n, each at least 1".into()));
    }

    let mut rows = Vec::with_capacity(ns.len());
    for (ni, &n) in ns.iter().enumerate() {
        let measured = (0..config.samples)
            .into_par_iter()
            .map(|i| {
                let mut rng = task_rng(config.seed, (ni * config.samples + i) as u64);
                let dist = match (&fixed, &config.source) {
                    (Some(d), _) => d.clone(),
                    (None, Source::Sampled(fam)) => sample(*fam, n, &mut rng)?,
                    (None, Source::File(_)) => unreachable!("file source is loaded up front"),
                };
                let strategy = config.strategy.with_seed(rng.next_u64());
                measure(&strategy, &dist)
            })
            .collect::<Result<Vec<_>, _>>()?;

        let count = measured.len() as f64;
        let mean_redundancy = measured.iter().map(|m| m.redundancy).sum::<f64>() / count;
        let max_redundancy = measured.iter().map(|m| m.redundancy).fold(f64::NEG_INFINITY, f64::max);
        let mean_prolixity = measured.iter().map(|m| m.prolixity.to_f64().unwrap_or(f64::NAN)).sum::<f64>() / count;
        let max_prolixity = measured
            .iter()
            .map(|m| &m.prolixity)
            .max()
            .cloned()
            .unwrap_or_else(BigRational::zero);
        let family_size: BigUint = config.strategy.family_size(n)?;
        rows.push(BenchRow {
            n,
            strategy: config.strategy.label(),
            family: config.source.to_string(),
            samples: config.samples,
            mean_redundancy,
            max_redundancy,
            mean_prolixity,
            max_prolixity: max_prolixity.to_string(),
            family_size: family_size.to_string(),
        });
    }
    Ok(rows)
}

pub fn to_csv(rows: &[BenchRow]) -> Result<String, BenchError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r).map_err(|e| BenchError::Config(e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| BenchError::Config(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

pub fn to_json(rows: &[BenchRow]) -> String {
    serde_json::to_string_pretty(rows).expect("plain data")
}

/// One-line-per-row table for terminals.
pub fn to_table(rows: &[BenchRow]) -> String {
    let mut s = format!(
        "{:>6}  {:<18} {:>12} {:>12} {:>12}  {}\n",
        "n", "strategy", "mean red.", "max red.", "mean prol.", "family size"
    );
    for r in rows {
        let _ = writeln!(
            s,
            "{:>6}  {:<18} {:>12.6} {:>12.6} {:>12.6}  {}",
            r.n, r.strategy, r.mean_redundancy, r.max_redundancy, r.mean_prolixity, r.family_size
        );
    }
    s
}

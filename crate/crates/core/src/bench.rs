//! Algorithm dispatch and the build/verify/time benchmark loop.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;
use std::str::FromStr;
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::emulator::{build_4w_emulator, EmulatorResult};
use crate::error::{invalid, Error, Result};
use crate::fast2w::build_fast_2w;
use crate::generate::{generate, GenSpec};
use crate::graph::WeightedGraph;
use crate::greedy::{
    build_6eps_spanner_indexed, build_poly_spanner_indexed, build_subsetwise_spanner_indexed,
    greedy_multiplicative, Params, ScanStrategy, SpannerResult,
};
use crate::light::ceil_pow;
use crate::par::prelude::*;
use crate::paths::{build_index, ShortestPathIndex};
use crate::verify::{Bound, Certificate};

/// A construction and its parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "algo", rename_all = "kebab-case")]
pub enum AlgoSpec {
    Mult { k: usize },
    #[serde(rename = "6w")]
    SixW { eps: f64 },
    /// Subset drawn at random with `ceil(sqrt n)` vertices unless given.
    Subsetwise { eps: f64 },
    Poly { eps: f64, c: f64 },
    Fast2w { c: f64 },
    Emulator4w,
}

impl AlgoSpec {
    pub fn name(&self) -> &'static str {
        match self {
            AlgoSpec::Mult { .. } => "mult",
            AlgoSpec::SixW { .. } => "6w",
            AlgoSpec::Subsetwise { .. } => "subsetwise",
            AlgoSpec::Poly { .. } => "poly",
            AlgoSpec::Fast2w { .. } => "fast2w",
            AlgoSpec::Emulator4w => "emulator4w",
        }
    }

    /// Randomized constructions are allowed occasional stretch failures.
    pub fn is_randomized(&self) -> bool {
        matches!(self, AlgoSpec::Fast2w { .. } | AlgoSpec::Emulator4w)
    }

    /// The stretch this construction claims.
    pub fn claimed_bound(&self, subset: Option<&[usize]>) -> Bound {
        match self {
            AlgoSpec::Mult { k } => Bound::Mult {
                alpha: (2 * k - 1) as f64,
            },
            AlgoSpec::SixW { eps } => Bound::SixW { eps: *eps },
            AlgoSpec::Subsetwise { eps } => Bound::Subset {
                eps: *eps,
                subset: subset.unwrap_or_default().to_vec(),
            },
            AlgoSpec::Poly { eps, c } => Bound::Poly { eps: *eps, c: *c },
            AlgoSpec::Fast2w { .. } => Bound::TwoW,
            AlgoSpec::Emulator4w => Bound::FourWEmulator,
        }
    }
}

impl FromStr for AlgoSpec {
    type Err = Error;

    /// `mult[:K]`, `6w[:EPS]`, `subsetwise[:EPS]`, `poly[:EPS[:C]]`,
    /// `fast2w[:C]`, `emulator4w`.
    fn from_str(s: &str) -> Result<Self> {
        let mut parts = s.split(':');
        let name = parts.next().unwrap_or_default();
        let args: Vec<&str> = parts.collect();
        let num = |i: usize, default: f64| -> Result<f64> {
            match args.get(i) {
                None => Ok(default),
                Some(x) => x
                    .parse()
                    .map_err(|_| invalid(format!("bad parameter `{x}` in `{s}`"))),
            }
        };
        let spec = match name {
            "mult" => AlgoSpec::Mult {
                k: num(0, 2.0)? as usize,
            },
            "6w" => AlgoSpec::SixW { eps: num(0, 1.0)? },
            "subsetwise" | "subset" => AlgoSpec::Subsetwise { eps: num(0, 0.5)? },
            "poly" => AlgoSpec::Poly {
                eps: num(0, 0.0)?,
                c: num(1, 16.0)?,
            },
            "fast2w" => AlgoSpec::Fast2w { c: num(0, 4.0)? },
            "emulator4w" => AlgoSpec::Emulator4w,
            _ => return Err(invalid(format!("unknown algorithm `{s}`"))),
        };
        Ok(spec)
    }
}

/// Output of one construction.
#[derive(Debug, Clone)]
pub enum Built {
    Spanner(SpannerResult),
    Emulator(EmulatorResult),
}

impl Built {
    pub fn graph(&self) -> WeightedGraph {
        match self {
            Built::Spanner(s) => s.graph.clone(),
            Built::Emulator(e) => e.to_graph(),
        }
    }

    pub fn size(&self) -> usize {
        match self {
            Built::Spanner(s) => s.size(),
            Built::Emulator(e) => e.size(),
        }
    }

    pub fn paths_bought(&self) -> usize {
        match self {
            Built::Spanner(s) => s.paths_added.len(),
            Built::Emulator(_) => 0,
        }
    }

    pub fn params(&self) -> Params {
        match self {
            Built::Spanner(s) => s.params.clone(),
            Built::Emulator(e) => Params {
                t: Some(e.t),
                seed: Some(e.seed),
                ..Params::named("emulator4w")
            },
        }
    }
}

/// Runs `algo` on `g`. `idx` must be the index of `g` when given; it is
/// computed on demand otherwise. The subsetwise construction requires
/// `subset`.
pub fn run_algo(
    g: &WeightedGraph,
    idx: Option<&ShortestPathIndex>,
    algo: &AlgoSpec,
    seed: u64,
    subset: Option<&[usize]>,
) -> Result<Built> {
    let needs_index = matches!(
        algo,
        AlgoSpec::SixW { .. } | AlgoSpec::Subsetwise { .. } | AlgoSpec::Poly { .. }
    );
    let owned = (idx.is_none() && needs_index).then(|| build_index(g));
    let index = || idx.or(owned.as_ref()).expect("index available");
    let strategy = ScanStrategy::default();
    Ok(match algo {
        AlgoSpec::Mult { k } => Built::Spanner(greedy_multiplicative(g, *k)?),
        AlgoSpec::SixW { eps } => {
            Built::Spanner(build_6eps_spanner_indexed(g, index(), *eps, strategy)?)
        }
        AlgoSpec::Subsetwise { eps } => {
            let s = subset.ok_or_else(|| invalid("subsetwise construction needs a subset"))?;
            Built::Spanner(build_subsetwise_spanner_indexed(g, index(), s, *eps, strategy)?)
        }
        AlgoSpec::Poly { eps, c } => {
            Built::Spanner(build_poly_spanner_indexed(g, index(), *eps, *c, strategy)?)
        }
        AlgoSpec::Fast2w { c } => Built::Spanner(build_fast_2w(g, *c, seed)?),
        AlgoSpec::Emulator4w => Built::Emulator(build_4w_emulator(g, seed)?),
    })
}

/// `ceil(sqrt n)` distinct vertices drawn from ChaCha8 stream 2 of `seed`,
/// returned sorted.
pub fn random_subset(n: usize, size: usize, seed: u64) -> Vec<usize> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(2);
    let mut s = rand::seq::index::sample(&mut rng, n, size.min(n)).into_vec();
    s.sort_unstable();
    s
}

pub fn default_subset_size(n: usize) -> usize {
    ceil_pow(n, 0.5)
}

/// One line of benchmark output.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchRecord {
    pub algo: String,
    pub params: Params,
    pub n: usize,
    pub m_in: usize,
    pub m_out: usize,
    pub paths_bought: usize,
    pub wall_time_ms: f64,
    pub seed: u64,
    pub verify_pass: bool,
    pub max_slack_ratio: f64,
    pub violations: usize,
}

/// Instances to run: one graph per `(n, seed)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorpusSpec {
    /// Template; `n` and `seed` are overwritten per instance.
    pub template: GenSpec,
    pub sizes: Vec<usize>,
}

#[derive(Debug, Clone)]
pub struct BenchConfig {
    pub corpus: CorpusSpec,
    pub algos: Vec<AlgoSpec>,
    pub seeds: Vec<u64>,
    /// Concurrent runs; only honoured with the `parallel` feature.
    pub jobs: usize,
}

#[derive(Debug, Clone)]
pub struct BenchOutcome {
    pub records: Vec<BenchRecord>,
    /// Failed verifications of deterministic constructions.
    pub deterministic_failures: usize,
}

/// Generates, builds, verifies and times one `(instance, algo)` run.
pub fn run_one(g: &WeightedGraph, algo: &AlgoSpec, seed: u64) -> Result<(BenchRecord, Certificate)> {
    let subset = matches!(algo, AlgoSpec::Subsetwise { .. })
        .then(|| random_subset(g.n(), default_subset_size(g.n()), seed));
    let start = Instant::now();
    let needs_index = matches!(
        algo,
        AlgoSpec::SixW { .. } | AlgoSpec::Subsetwise { .. } | AlgoSpec::Poly { .. }
    );
    let idx = needs_index.then(|| build_index(g));
    let built = run_algo(g, idx.as_ref(), algo, seed, subset.as_deref())?;
    let wall_time_ms = start.elapsed().as_secs_f64() * 1e3;
    let idx = idx.unwrap_or_else(|| build_index(g));
    let cert = algo
        .claimed_bound(subset.as_deref())
        .certify_indexed(g, &idx, &built.graph())?;
    let record = BenchRecord {
        algo: algo.name().to_string(),
        params: built.params(),
        n: g.n(),
        m_in: g.m(),
        m_out: built.size(),
        paths_bought: built.paths_bought(),
        wall_time_ms,
        seed,
        verify_pass: cert.passed(),
        max_slack_ratio: cert.max_slack_ratio(),
        violations: cert.violation_count(),
    };
    Ok((record, cert))
}

pub fn run_bench(config: &BenchConfig) -> Result<BenchOutcome> {
    let mut runs = Vec::new();
    for &n in &config.corpus.sizes {
        for &seed in &config.seeds {
            for algo in &config.algos {
                runs.push((n, seed, algo));
            }
        }
    }
    let work = || -> Result<Vec<BenchRecord>> {
        crate::slice_iter!(runs)
            .map(|&(n, seed, algo)| {
                let spec = GenSpec {
                    n,
                    seed,
                    ..config.corpus.template.clone()
                };
                let g = generate(&spec)?;
                run_one(&g, algo, seed).map(|(r, _)| r)
            })
            .collect()
    };
    #[cfg(feature = "parallel")]
    let records = rayon::ThreadPoolBuilder::new()
        .num_threads(config.jobs.max(1))
        .build()
        .map_err(|e| invalid(format!("thread pool: {e}")))?
        .install(work)?;
    #[cfg(not(feature = "parallel"))]
    let records = work()?;

    let deterministic_failures = records
        .iter()
        .zip(runs.iter().map(|r| r.2))
        .filter(|(r, a)| !r.verify_pass && !a.is_randomized())
        .count();
    Ok(BenchOutcome {
        records,
        deterministic_failures,
    })
}

pub fn write_jsonl(records: &[BenchRecord], path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let wrap = |e: std::io::Error| Error::Io {
        path: path.to_path_buf(),
        source: e,
    };
    let mut out = BufWriter::new(File::create(path).map_err(wrap)?);
    for r in records {
        let line = serde_json::to_string(r).expect("records serialize");
        writeln!(out, "{line}").map_err(wrap)?;
    }
    out.flush().map_err(wrap)
}

pub fn read_jsonl(path: impl AsRef<Path>) -> Result<Vec<BenchRecord>> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io {
        path: path.to_path_buf(),
        source: e,
    })?;
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| {
            serde_json::from_str(l).map_err(|e| Error::Parse {
                path: path.display().to_string(),
                line: i + 1,
                msg: e.to_string(),
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::{Family, WeightModel};

    fn config(algos: Vec<AlgoSpec>, family: Family) -> BenchConfig {
        BenchConfig {
            corpus: CorpusSpec {
                template: GenSpec::new(family, 0, WeightModel::Uniform, 0),
                sizes: vec![20, 30],
            },
            algos,
            seeds: vec![1, 2],
            jobs: 2,
        }
    }

    #[test]
    fn empty_algo_list() {
        let out = run_bench(&config(vec![], Family::Gnp)).unwrap();
        assert!(out.records.is_empty());
        assert_eq!(out.deterministic_failures, 0);
    }

    #[test]
    fn trees_are_incompressible() {
        let out = run_bench(&config(vec![AlgoSpec::SixW { eps: 1.0 }], Family::Tree)).unwrap();
        assert_eq!(out.records.len(), 4);
        for r in &out.records {
            assert_eq!(r.m_in, r.m_out);
            assert!(r.verify_pass);
        }
    }

    #[test]
    fn records_are_deterministic_except_time() {
        let algos = vec![
            AlgoSpec::Fast2w { c: 4.0 },
            AlgoSpec::Subsetwise { eps: 0.5 },
            AlgoSpec::Emulator4w,
        ];
        let strip = |mut v: Vec<BenchRecord>| {
            v.iter_mut().for_each(|r| r.wall_time_ms = 0.0);
            v
        };
        let a = strip(run_bench(&config(algos.clone(), Family::Gnp)).unwrap().records);
        let b = strip(run_bench(&config(algos, Family::Gnp)).unwrap().records);
        assert_eq!(a, b);
    }

    #[test]
    fn algo_parsing() {
        assert_eq!("6w:0.1".parse::<AlgoSpec>().unwrap(), AlgoSpec::SixW { eps: 0.1 });
        assert_eq!(
            "poly".parse::<AlgoSpec>().unwrap(),
            AlgoSpec::Poly { eps: 0.0, c: 16.0 }
        );
        assert_eq!("mult:3".parse::<AlgoSpec>().unwrap(), AlgoSpec::Mult { k: 3 });
        assert!("8w".parse::<AlgoSpec>().is_err());
        assert!("6w:abc".parse::<AlgoSpec>().is_err());
    }

    #[test]
    fn subset_is_sorted_and_distinct() {
        let s = random_subset(50, 8, 3);
        assert_eq!(s.len(), 8);
        assert!(s.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(s, random_subset(50, 8, 3));
    }
}

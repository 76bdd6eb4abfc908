use std::collections::BTreeMap;
use std::io::{ErrorKind, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use wspanner::bench::{
    default_subset_size, random_subset, read_jsonl, run_algo, run_bench, write_jsonl, AlgoSpec,
    BenchConfig, Built, CorpusSpec,
};
use wspanner::generate::{generate, Family, GenSpec, WeightModel};
use wspanner::greedy::Params;
use wspanner::io::{format_emulator, format_graph, read_graph, read_subset};
use wspanner::verify::{size_scaling_fit, Bound};
use wspanner::{build_index, WeightedGraph};

const FORMATS: &str = "\
FILE FORMATS:
  Edge list (graphs and spanners):
    n m
    u v w        one line per edge, 0-based ids, w > 0
  Lines starting with '#' and blank lines are ignored. Self-loops and
  duplicate edges are rejected. Emulator output adds a fourth column,
  `g` for a graph edge and `v` for a virtual edge; readers ignore it.

  Subset file: whitespace-separated vertex ids.

  Build stats (JSON): {algo, params, n, m_in, m_out, paths_bought,
    phase_edge_counts: {phase: edges}, levels?: [{level, v_i, d_i, e_i,
    missing_pivots}], sampled?, virtual_edges?}

  Verify report (JSON): {bound, passed, subgraph, reports: [{bound,
    pairs_checked, violations: [{u, v, d_g, d_h, w, slack, kind}],
    max_slack_ratio, size}]}

  Bench output (JSON lines): {algo, params, n, m_in, m_out, paths_bought,
    wall_time_ms, seed, verify_pass, max_slack_ratio, violations}

EXIT STATUS:
  0 success, 1 verification failure, 2 usage or input error";

#[derive(Parser)]
#[command(name = "wspanner", version, about = "Build and check spanners of weighted graphs", after_help = FORMATS)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Generate a random graph
    Generate(GenerateArgs),
    /// Build a spanner or emulator
    Build(BuildArgs),
    /// Check a spanner against a stretch bound
    Verify(VerifyArgs),
    /// Generate a corpus, build, verify and time every algorithm
    Bench(BenchArgs),
    /// Summarize a graph or a bench file
    Stats(StatsArgs),
}

#[derive(Args, Clone)]
struct GraphGen {
    /// gnp, grid, geometric, star, path, complete or tree
    #[arg(long, default_value = "gnp")]
    family: String,
    /// Edge probability for gnp (default: average degree sqrt(n))
    #[arg(long)]
    p: Option<f64>,
    /// Connection radius for geometric
    #[arg(long)]
    radius: Option<f64>,
    /// Branching factor for tree (default: random recursive tree)
    #[arg(long)]
    branching: Option<usize>,
    /// unit, uniform or exp-spread
    #[arg(long, default_value = "uniform")]
    wmodel: String,
    #[arg(long)]
    wmax: Option<f64>,
    /// Keep only the largest connected component
    #[arg(long)]
    largest_component: bool,
}

impl GraphGen {
    fn spec(&self, n: usize, seed: u64) -> Result<GenSpec> {
        let family = Family::from_str(&self.family)?;
        let model = WeightModel::from_str(&self.wmodel)?;
        let mut spec = GenSpec::new(family, n, model, seed);
        spec.p = self.p;
        spec.radius = self.radius;
        spec.branching = self.branching;
        spec.wmax = self.wmax;
        spec.largest_component = self.largest_component;
        Ok(spec)
    }
}

#[derive(Args)]
struct GenerateArgs {
    #[command(flatten)]
    gen: GraphGen,
    #[arg(long)]
    n: usize,
    #[arg(long, env = "WSPANNER_SEED", default_value_t = 0)]
    seed: u64,
    /// Output file (default: stdout)
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct BuildArgs {
    #[arg(long)]
    graph: PathBuf,
    /// mult, 6w, subsetwise, poly, fast2w or emulator4w
    #[arg(long)]
    algo: String,
    #[arg(long)]
    eps: Option<f64>,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    c: Option<f64>,
    /// Subset file for subsetwise (default: ceil(sqrt n) random vertices)
    #[arg(long)]
    subset: Option<PathBuf>,
    #[arg(long, env = "WSPANNER_SEED", default_value_t = 0)]
    seed: u64,
    /// Output edge list (default: stdout)
    #[arg(short, long)]
    output: Option<PathBuf>,
    /// Write build statistics as JSON here (`-` for stderr)
    #[arg(long)]
    stats: Option<String>,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long)]
    graph: PathBuf,
    #[arg(long)]
    spanner: PathBuf,
    /// 6w:EPS, 2w, 4w-emu, poly:EPS:C, mult:ALPHA or subset:EPS:FILE
    #[arg(long)]
    bound: String,
}

#[derive(Args)]
struct BenchArgs {
    #[command(flatten)]
    gen: GraphGen,
    /// Comma-separated vertex counts
    #[arg(long, value_delimiter = ',', required = true)]
    ns: Vec<usize>,
    /// Comma-separated algorithms, e.g. 6w:1,fast2w:4,poly:0:16
    #[arg(long, value_delimiter = ',', default_value = "6w,fast2w")]
    algos: Vec<String>,
    /// Seed list `a,b,c` or range `a..b`
    #[arg(long, default_value = "0..5")]
    seeds: String,
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    /// Output JSON lines (default: stdout)
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct StatsArgs {
    /// Graph edge list
    #[arg(long)]
    graph: Option<PathBuf>,
    /// Bench JSON lines; reports size and runtime scaling per algorithm
    #[arg(long)]
    bench: Option<PathBuf>,
}

/// Writes to stdout; a closed pipe (e.g. `| head`) is not an error.
fn stdout(text: &str) -> Result<()> {
    match std::io::stdout().lock().write_all(text.as_bytes()) {
        Err(e) if e.kind() != ErrorKind::BrokenPipe => Err(e.into()),
        _ => Ok(()),
    }
}

fn emit(text: &str, path: Option<&Path>) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => stdout(text),
    }
}

fn parse_seeds(s: &str) -> Result<Vec<u64>> {
    if let Some((a, b)) = s.split_once("..") {
        let (a, b): (u64, u64) = (a.trim().parse()?, b.trim().parse()?);
        if a >= b {
            bail!("empty seed range `{s}`");
        }
        return Ok((a..b).collect());
    }
    s.split(',')
        .map(|x| x.trim().parse().with_context(|| format!("bad seed `{x}`")))
        .collect()
}

fn algo_with_flags(args: &BuildArgs) -> Result<AlgoSpec> {
    let mut algo = AlgoSpec::from_str(&args.algo)?;
    match &mut algo {
        AlgoSpec::Mult { k } => *k = args.k.unwrap_or(*k),
        AlgoSpec::SixW { eps } | AlgoSpec::Subsetwise { eps } => *eps = args.eps.unwrap_or(*eps),
        AlgoSpec::Poly { eps, c } => {
            *eps = args.eps.unwrap_or(*eps);
            *c = args.c.unwrap_or(*c);
        }
        AlgoSpec::Fast2w { c } => *c = args.c.unwrap_or(*c),
        AlgoSpec::Emulator4w => {}
    }
    Ok(algo)
}

fn build_stats(g: &WeightedGraph, built: &Built) -> Value {
    let mut stats = json!({
        "algo": built.params().algo,
        "params": built.params(),
        "n": g.n(),
        "m_in": g.m(),
        "m_out": built.size(),
        "paths_bought": built.paths_bought(),
    });
    match built {
        Built::Spanner(h) => {
            let phases: BTreeMap<&str, usize> =
                h.phases.iter().map(|p| (p.phase.as_str(), p.edges)).collect();
            stats["phase_edge_counts"] = json!(phases);
            if !h.levels.is_empty() {
                stats["levels"] = json!(h.levels);
            }
        }
        Built::Emulator(e) => {
            let virt = e.virtual_count();
            stats["phase_edge_counts"] = json!({
                "light_init": e.size() - virt,
                "virtual": virt,
            });
            stats["t"] = json!(e.t);
            stats["sampled"] = json!(e.sampled.len());
            stats["virtual_edges"] = json!(virt);
        }
    }
    stats
}

fn cmd_generate(a: GenerateArgs) -> Result<ExitCode> {
    let g = generate(&a.gen.spec(a.n, a.seed)?)?;
    emit(&format_graph(&g), a.output.as_deref())?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_build(a: BuildArgs) -> Result<ExitCode> {
    let g = read_graph(&a.graph)?;
    let algo = algo_with_flags(&a)?;
    let subset = match (&algo, &a.subset) {
        (AlgoSpec::Subsetwise { .. }, Some(p)) => Some(read_subset(p)?),
        (AlgoSpec::Subsetwise { .. }, None) => {
            Some(random_subset(g.n(), default_subset_size(g.n()), a.seed))
        }
        _ => None,
    };
    let built = run_algo(&g, None, &algo, a.seed, subset.as_deref())?;
    let text = match &built {
        Built::Spanner(h) => format_graph(&h.graph),
        Built::Emulator(e) => format_emulator(e),
    };
    emit(&text, a.output.as_deref())?;
    if let Some(dest) = &a.stats {
        let mut stats = build_stats(&g, &built);
        if let Some(s) = &subset {
            stats["subset"] = json!(s);
        }
        let text = serde_json::to_string_pretty(&stats)? + "\n";
        if dest == "-" {
            eprint!("{text}");
        } else {
            std::fs::write(dest, text).with_context(|| format!("writing {dest}"))?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_verify(a: VerifyArgs) -> Result<ExitCode> {
    let g = read_graph(&a.graph)?;
    let h = read_graph(&a.spanner)?;
    let bound = Bound::parse_with_subset(&a.bound, |f| read_subset(f))?;
    let cert = bound.certify(&g, &h)?;
    let report = json!({
        "bound": a.bound,
        "passed": cert.passed(),
        "subgraph": cert.subgraph,
        "reports": cert.reports,
    });
    stdout(&(serde_json::to_string_pretty(&report)? + "\n"))?;
    Ok(if cert.passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn cmd_bench(a: BenchArgs) -> Result<ExitCode> {
    let algos = a
        .algos
        .iter()
        .filter(|s| !s.is_empty())
        .map(|s| AlgoSpec::from_str(s))
        .collect::<wspanner::Result<Vec<_>>>()?;
    let config = BenchConfig {
        corpus: CorpusSpec {
            template: a.gen.spec(0, 0)?,
            sizes: a.ns,
        },
        algos,
        seeds: parse_seeds(&a.seeds)?,
        jobs: a.jobs,
    };
    let outcome = run_bench(&config)?;
    match &a.output {
        Some(p) => write_jsonl(&outcome.records, p)?,
        None => {
            let mut text = String::new();
            for r in &outcome.records {
                text += &serde_json::to_string(r)?;
                text.push('\n');
            }
            stdout(&text)?;
        }
    }
    if outcome.deterministic_failures > 0 {
        eprintln!(
            "wspanner: {} deterministic verification failure(s)",
            outcome.deterministic_failures
        );
        return Ok(ExitCode::from(1));
    }
    Ok(ExitCode::SUCCESS)
}

/// Parameters picked by the user; `t`, the seed and derived level counts vary
/// per instance and would split the groups.
fn chosen_params(p: &Params) -> Params {
    Params {
        t: None,
        seed: None,
        subset_size: None,
        k: p.k.filter(|_| p.algo == "mult"),
        ..p.clone()
    }
}

fn median(mut xs: Vec<f64>) -> f64 {
    xs.sort_by(f64::total_cmp);
    let k = xs.len();
    if k % 2 == 1 {
        xs[k / 2]
    } else {
        (xs[k / 2 - 1] + xs[k / 2]) / 2.0
    }
}

fn cmd_stats(a: StatsArgs) -> Result<ExitCode> {
    let out = if let Some(path) = a.graph {
        let g = read_graph(&path)?;
        let labels = g.components();
        let mut comps = labels.clone();
        comps.sort_unstable();
        comps.dedup();
        let idx = build_index(&g);
        let n = g.n();
        let mut connected_pairs = 0usize;
        for u in 0..n {
            for v in u + 1..n {
                connected_pairs += usize::from(idx.connected(u, v));
            }
        }
        json!({
            "n": n,
            "m": g.m(),
            "components": comps.len(),
            "connected_pairs": connected_pairs,
            "max_degree": g.max_degree(),
            "min_weight": g.min_weight(),
            "max_weight": g.max_weight(),
            "total_weight": g.total_weight(),
        })
    } else {
        let path = a.bench.expect("clap enforces one of --graph/--bench");
        let records = read_jsonl(&path)?;
        // params -> n -> (sizes, times)
        type BySize = BTreeMap<usize, (Vec<f64>, Vec<f64>)>;
        let mut groups: BTreeMap<String, BySize> = BTreeMap::new();
        let mut failures: BTreeMap<String, usize> = BTreeMap::new();
        for r in &records {
            let key = serde_json::to_string(&chosen_params(&r.params))?;
            let by_n = groups.entry(key.clone()).or_default().entry(r.n).or_default();
            by_n.0.push(r.m_out as f64);
            by_n.1.push(r.wall_time_ms);
            *failures.entry(key).or_default() += usize::from(!r.verify_pass);
        }
        let rows: Vec<Value> = groups
            .into_iter()
            .map(|(key, by_n)| {
                let sizes: Vec<(usize, f64)> =
                    by_n.iter().map(|(&n, v)| (n, median(v.0.clone()))).collect();
                let times: Vec<(usize, f64)> =
                    by_n.iter().map(|(&n, v)| (n, median(v.1.clone()))).collect();
                json!({
                    "params": serde_json::from_str::<Value>(&key).unwrap_or(Value::Null),
                    "median_size": sizes,
                    "median_time_ms": times,
                    "size_exponent": size_scaling_fit(&sizes).ok(),
                    "time_exponent": size_scaling_fit(&times).ok(),
                    "verify_failures": failures[&key],
                })
            })
            .collect();
        json!(rows)
    };
    stdout(&(serde_json::to_string_pretty(&out)? + "\n"))?;
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.cmd {
        Cmd::Generate(a) => cmd_generate(a),
        Cmd::Build(a) => cmd_build(a),
        Cmd::Verify(a) => cmd_verify(a),
        Cmd::Bench(a) => cmd_bench(a),
        Cmd::Stats(a) => cmd_stats(a),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("wspanner: {e:#}");
            ExitCode::from(2)
        }
    }
}

//! Subcommands of the `mincut` binary.

pub mod bench;
pub mod report;

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use mincut::oracle::min_cut_oracle;
use mincut::{generate, measure_diameter, run_full_pipeline, Family, GenParams, Graph, PipelineConfig, RootPolicy};
use mincut::{PipelineOutput, SimulatorConfig};

use report::{judge, ConfigEcho, RunReport, Status};

/// Exit codes other than success.
pub mod exit {
    pub const FAILURE: u8 = 1;
    pub const INPUT: u8 = 2;
    pub const BANDWIDTH: u8 = 3;
    pub const TIMEOUT: u8 = 4;
    pub const VERIFY_FAIL: u8 = 5;
}

#[derive(Debug, Parser)]
#[command(name = "mincut", version, about = "Simulated CONGEST detection of min-cuts of size 1, 2 and 3")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the detection pipeline on one graph.
    Run(RunArgs),
    /// Run the pipeline and compare its cuts with the brute-force oracle.
    Verify(VerifyArgs),
    /// Sweep a family over several sizes and tabulate round counts.
    Bench(BenchArgs),
    /// Write a generated graph in edge-list format.
    Gen(GenArgs),
}

/// Where the input graph comes from.
#[derive(Debug, Clone, Args)]
pub struct GraphArgs {
    /// Edge-list file.
    #[arg(long, conflicts_with_all = ["family", "n"])]
    pub graph: Option<PathBuf>,
    /// Generated family instead of a file.
    #[arg(long, requires = "n")]
    pub family: Option<Family>,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Edge probability for random_connected.
    #[arg(long, default_value_t = 0.3)]
    pub p: f64,
}

/// Pipeline knobs shared by `run` and `verify`.
#[derive(Debug, Clone, Args)]
pub struct PipelineArgs {
    /// BFS root: a vertex id or `auto` (vertex 0).
    #[arg(long, default_value = "auto")]
    pub root: RootArg,
    #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u8).range(1..=3))]
    pub max_size: u8,
    /// Abort with exit code 3 on the first message over the per-edge budget.
    /// Without it, oversized rounds are only counted.
    #[arg(long)]
    pub strict_bandwidth: bool,
    #[arg(long, default_value_t = 2)]
    pub words_per_round: usize,
    /// Per-phase round cap; exceeding it exits with code 4.
    #[arg(long, default_value_t = SimulatorConfig::default().round_limit)]
    pub round_limit: u64,
    /// Write the JSON report here.
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct RunArgs {
    #[command(flatten)]
    pub input: GraphArgs,
    #[command(flatten)]
    pub pipeline: PipelineArgs,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub input: GraphArgs,
    #[command(flatten)]
    pub pipeline: PipelineArgs,
    /// With --family, verify seeds seed..seed+trials.
    #[arg(long, default_value_t = 1)]
    pub trials: u64,
    /// Corrupt the pipeline output before judging it. Test hook.
    #[arg(long, hide = true)]
    pub inject_fault: Option<Fault>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Fault {
    /// Drop the first reported cut.
    DropCut,
    /// Report one extra edge in the first cut.
    ExtraEdge,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[arg(long)]
    pub family: Family,
    /// Comma-separated vertex counts.
    #[arg(long, value_delimiter = ',', required = true)]
    pub sizes: Vec<usize>,
    #[arg(long, default_value_t = 1)]
    pub trials: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 0.3)]
    pub p: f64,
    /// CSV output; the table is also printed.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct GenArgs {
    #[arg(long)]
    pub family: Family,
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 0.3)]
    pub p: f64,
    /// Output file; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RootArg {
    Auto,
    Vertex(usize),
}

impl FromStr for RootArg {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        if s == "auto" {
            return Ok(RootArg::Auto);
        }
        s.parse().map(RootArg::Vertex).map_err(|_| format!("expected a vertex id or `auto`, got `{s}`"))
    }
}

impl fmt::Display for RootArg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RootArg::Auto => f.write_str("auto"),
            RootArg::Vertex(v) => write!(f, "{v}"),
        }
    }
}

impl RootArg {
    fn policy(self) -> RootPolicy {
        match self {
            RootArg::Auto => RootPolicy::LowestId,
            RootArg::Vertex(v) => RootPolicy::Explicit(v),
        }
    }
}

/// Maps an error to the documented exit code.
pub fn exit_code(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<mincut::Error>() {
        Some(mincut::Error::Input(_) | mincut::Error::Capacity { .. } | mincut::Error::Generation(_)) => exit::INPUT,
        Some(mincut::Error::Bandwidth { .. }) => exit::BANDWIDTH,
        Some(mincut::Error::Timeout { .. }) => exit::TIMEOUT,
        _ => exit::FAILURE,
    }
}

/// Runs a parsed command and returns the process exit code.
pub fn execute(cli: Cli) -> Result<u8> {
    match cli.command {
        Command::Run(a) => cmd_run(&a),
        Command::Verify(a) => cmd_verify(&a),
        Command::Bench(a) => bench::cmd_bench(&a),
        Command::Gen(a) => cmd_gen(&a),
    }
}

fn input_error(msg: String) -> anyhow::Error {
    mincut::Error::Input(msg).into()
}

/// A loaded graph and how to describe it in the report.
struct Loaded {
    graph: Graph,
    source: String,
}

fn load_file(path: &Path) -> Result<Loaded> {
    let text = std::fs::read_to_string(path).map_err(|e| input_error(format!("cannot read {}: {e}", path.display())))?;
    let graph = Graph::parse_edge_list(&text).with_context(|| format!("parsing {}", path.display()))?;
    Ok(Loaded { graph, source: format!("file:{}", path.display()) })
}

fn load_family(family: Family, n: usize, seed: u64, p: f64) -> Result<Loaded> {
    let graph = generate(family, &GenParams::new(n).seed(seed).p(p))?;
    Ok(Loaded { graph, source: format!("{family} n={n} seed={seed}") })
}

fn load(input: &GraphArgs) -> Result<Loaded> {
    match (&input.graph, input.family, input.n) {
        (Some(path), _, _) => load_file(path),
        (None, Some(f), Some(n)) => load_family(f, n, input.seed, input.p),
        _ => Err(input_error("give either --graph FILE or --family F --n N".into())),
    }
}

fn pipeline_config(a: &PipelineArgs) -> PipelineConfig {
    PipelineConfig {
        root: a.root.policy(),
        max_size: a.max_size as usize,
        sim: SimulatorConfig {
            words_per_round: a.words_per_round,
            strict_bandwidth: a.strict_bandwidth,
            round_limit: a.round_limit,
            ..SimulatorConfig::default()
        },
    }
}

fn execute_pipeline(loaded: &Loaded, a: &PipelineArgs) -> Result<(RunReport, PipelineOutput)> {
    let config = pipeline_config(a);
    let g = &loaded.graph;
    let out = run_full_pipeline(g, &config)?;
    let echo = ConfigEcho {
        source: loaded.source.clone(),
        root: a.root.to_string(),
        resolved_root: config.root.resolve(g)?,
        max_size: config.max_size,
        strict_bandwidth: config.sim.strict_bandwidth,
        words_per_round: config.sim.words_per_round,
        budget_bits: config.sim.budget(g.n()),
        round_limit: config.sim.round_limit,
    };
    Ok((RunReport::new(g, measure_diameter(g)?, echo, &out), out))
}

fn write_report(path: &Path, report: &RunReport) -> Result<()> {
    let mut text = serde_json::to_string_pretty(report)?;
    text.push('\n');
    std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

fn cmd_run(a: &RunArgs) -> Result<u8> {
    let loaded = load(&a.input)?;
    let (report, _) = execute_pipeline(&loaded, &a.pipeline)?;
    let s = &report.stats;
    println!(
        "n={} m={} D={} lambda={} cuts={} rounds={} max_bits={} budget={} violations={}",
        report.n,
        report.m,
        report.diameter,
        report.lambda,
        report.cuts.len(),
        s.rounds_elapsed,
        s.max_bits_per_edge_per_round,
        report.config.budget_bits,
        s.violations
    );
    for c in &report.cuts {
        let edges = mincut::EdgeSet::from_pairs(c.cut_edges.iter().copied());
        println!("  {} {} by {}", c.case, edges, c.detected_by);
    }
    if let Some(path) = &a.pipeline.report {
        write_report(path, &report)?;
    }
    Ok(0)
}

fn apply_fault(report: &mut RunReport, fault: Fault) {
    match fault {
        Fault::DropCut => {
            if !report.cuts.is_empty() {
                report.cuts.remove(0);
            }
        }
        Fault::ExtraEdge => {
            if let Some(c) = report.cuts.first_mut() {
                let extra = (0..report.n)
                    .flat_map(|u| (u + 1..report.n).map(move |v| (u, v)))
                    .find(|e| !c.cut_edges.contains(e));
                if let Some(e) = extra {
                    c.cut_edges.push(e);
                    c.size += 1;
                }
            }
            report::canonicalize(&mut report.cuts);
        }
    }
}

/// Verifies one graph and prints its verdict line and diff.
fn verify_one(loaded: &Loaded, a: &VerifyArgs) -> Result<RunReport> {
    let oracle = min_cut_oracle(&loaded.graph)?;
    let (mut report, _) = execute_pipeline(loaded, &a.pipeline)?;
    if let Some(f) = a.inject_fault {
        apply_fault(&mut report, f);
    }
    let verdict = judge(report.lambda, &report.cut_sets(), &oracle);
    match verdict.status {
        Status::Pass => println!("PASS {} lambda={} cuts={}", loaded.source, report.lambda, report.cuts.len()),
        Status::Fail => {
            println!("FAIL {} lambda={} oracle_lambda={}", loaded.source, report.lambda, verdict.oracle_lambda);
            for c in &verdict.missing {
                println!("  - {}", mincut::EdgeSet::from_pairs(c.iter().copied()));
            }
            for c in &verdict.unexpected {
                println!("  + {}", mincut::EdgeSet::from_pairs(c.iter().copied()));
            }
        }
    }
    report.verdict = Some(verdict);
    Ok(report)
}

fn cmd_verify(a: &VerifyArgs) -> Result<u8> {
    if a.trials == 0 {
        return Err(input_error("--trials must be at least 1".into()));
    }
    let inputs: Vec<Loaded> = match (a.input.family, a.input.n) {
        (Some(f), Some(n)) if a.input.graph.is_none() => {
            if a.trials > 1 && a.pipeline.report.is_some() {
                return Err(input_error("--report takes a single graph; drop --trials".into()));
            }
            (0..a.trials).map(|t| load_family(f, n, a.input.seed + t, a.input.p)).collect::<Result<_>>()?
        }
        _ if a.trials > 1 => return Err(input_error("--trials needs --family and --n".into())),
        _ => vec![load(&a.input)?],
    };
    let mut failed = 0;
    for loaded in &inputs {
        let report = verify_one(loaded, a)?;
        if report.verdict.as_ref().is_some_and(|v| v.status == Status::Fail) {
            failed += 1;
        }
        if let Some(path) = &a.pipeline.report {
            write_report(path, &report)?;
        }
    }
    if inputs.len() > 1 {
        println!("{} of {} passed", inputs.len() - failed, inputs.len());
    }
    Ok(if failed == 0 { 0 } else { exit::VERIFY_FAIL })
}

fn cmd_gen(a: &GenArgs) -> Result<u8> {
    let g = generate(a.family, &GenParams::new(a.n).seed(a.seed).p(a.p))?;
    let text = g.to_edge_list();
    match &a.out {
        Some(path) => std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))?,
        None => print!("{text}"),
    }
    Ok(0)
}

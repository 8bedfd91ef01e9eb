//! End-to-end driver: BFS, the size-1 stage, then the size-2 and size-3
//! stages, each run only while no smaller cut has been found.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::report::{collect_cuts, CutReport, Detection, StageStats};
use crate::runtime::{Network, RoundStats, SimulatorConfig};
use crate::small::eta::compute_eta;
use crate::small::twocut::{detect_1cuts, detect_2cuts};
use crate::small::zeta::compute_zeta;
use crate::three::detect_3cuts;
use crate::tree::{build_bfs, BfsInfo, RootPolicy};

/// Largest cut size the pipeline knows how to look for.
pub const MAX_SIZE: usize = 3;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PipelineConfig {
    pub root: RootPolicy,
    /// Stop after this stage (1, 2 or 3).
    pub max_size: usize,
    pub sim: SimulatorConfig,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig { root: RootPolicy::LowestId, max_size: MAX_SIZE, sim: SimulatorConfig::default() }
    }
}

impl PipelineConfig {
    pub fn validate(&self) -> Result<()> {
        if !(1..=MAX_SIZE).contains(&self.max_size) {
            return Err(Error::Input(format!("max size must be 1, 2 or 3, got {}", self.max_size)));
        }
        self.sim.validate()
    }
}

/// Edge connectivity as far as the executed stages can tell.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum LambdaDetected {
    Exact(usize),
    /// No cut of size at most this many edges exists.
    Above(usize),
}

impl fmt::Display for LambdaDetected {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LambdaDetected::Exact(k) => write!(f, "{k}"),
            LambdaDetected::Above(k) => write!(f, ">{k}"),
        }
    }
}

impl std::str::FromStr for LambdaDetected {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Input(format!("bad lambda `{s}`"));
        match s.strip_prefix('>') {
            Some(k) => k.parse().map(LambdaDetected::Above).map_err(|_| bad()),
            None => s.parse().map(LambdaDetected::Exact).map_err(|_| bad()),
        }
    }
}

impl Serialize for LambdaDetected {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for LambdaDetected {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Phases that belong to BFS and the size-1 and size-2 stages.
pub fn is_small_stage_phase(label: &str) -> bool {
    matches!(
        label,
        "bfs" | "broadcast1:ancestors" | "exchange:ancestors" | "trsf:eta" | "broadcast1:eta" | "exchange:eta" | "trsf:zeta"
    )
}

#[derive(Debug, Clone)]
pub struct PipelineOutput {
    pub tree: BfsInfo,
    pub lambda: LambdaDetected,
    /// Raw node decisions of the stage that found the cuts.
    pub detections: Vec<Detection>,
    pub cuts: Vec<CutReport>,
    pub stats: RoundStats,
    /// Highest stage that ran.
    pub stages_run: usize,
}

impl PipelineOutput {
    /// Cost of BFS plus the size-1 and size-2 stages.
    pub fn small_stage(&self) -> StageStats {
        stage(&self.stats, true)
    }

    /// Cost of the size-3 battery.
    pub fn size3_stage(&self) -> StageStats {
        stage(&self.stats, false)
    }
}

fn stage(stats: &RoundStats, small: bool) -> StageStats {
    let mut out = StageStats::default();
    for p in stats.per_phase.iter().filter(|p| is_small_stage_phase(&p.label) == small) {
        out.rounds += p.rounds;
        out.messages += p.messages;
        out.bits += p.bits;
    }
    out
}

/// Runs the stages in order, stopping at the first size with cuts or after
/// `max_size`.
pub fn run_full_pipeline(g: &Graph, config: &PipelineConfig) -> Result<PipelineOutput> {
    run(g, config, true)
}

/// Runs every stage up to `max_size` even after an earlier one found cuts.
/// λ and the reported cuts still come from the first stage with cuts; the
/// point is measuring every stage's cost on any graph.
pub fn run_all_stages(g: &Graph, config: &PipelineConfig) -> Result<PipelineOutput> {
    run(g, config, false)
}

fn run(g: &Graph, config: &PipelineConfig, gated: bool) -> Result<PipelineOutput> {
    config.validate()?;
    g.validate_connected()?;
    let mut net = Network::new(g, config.sim.clone())?;
    let tree = build_bfs(&mut net, config.root)?;
    let states = compute_eta(&mut net, &tree)?;
    let mut stages_run = 1;
    let mut hit: Option<(Vec<Detection>, usize)> = None;
    let record = |dets: Vec<Detection>, k: usize, hit: &mut Option<(Vec<Detection>, usize)>| {
        if hit.is_none() && !dets.is_empty() {
            *hit = Some((dets, k));
        }
    };
    record(detect_1cuts(&states), 1, &mut hit);
    let go = |hit: &Option<_>, k: usize| config.max_size >= k && (hit.is_none() || !gated);
    if go(&hit, 2) {
        stages_run = 2;
        let zeta = compute_zeta(&mut net, &tree, &states)?;
        record(detect_2cuts(&states, &zeta), 2, &mut hit);
    }
    if go(&hit, 3) {
        stages_run = 3;
        record(detect_3cuts(&mut net, &tree, &states)?, 3, &mut hit);
    }
    let stats = net.into_stats();
    let (lambda, detections) = match hit {
        Some((d, k)) => (LambdaDetected::Exact(k), d),
        None => (LambdaDetected::Above(config.max_size), Vec::new()),
    };
    let cuts = collect_cuts(g, &tree, &detections)?;
    Ok(PipelineOutput { tree, lambda, detections, cuts, stats, stages_run })
}

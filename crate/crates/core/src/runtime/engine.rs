//! Synchronous round engine.
//!
//! Round `r` of a phase runs every node that is awake or has mail; messages
//! sent in round `r` are delivered at the start of round `r + 1`, sorted by
//! (sender id, edge id). When every live node sleeps and nothing is in flight
//! the clock jumps straight to the earliest wake-up.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{EdgeId, Graph, NodeId, Port};
use crate::runtime::bits::{word_bits, Bits, Widths};

/// What a node wants after a step.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Step {
    /// Run again next round.
    Continue,
    /// Sleep until the given phase round, or until mail arrives.
    WakeAt(u64),
    /// Sleep until mail arrives.
    Idle,
    /// Done for this phase.
    Halt,
}

#[derive(Debug, Clone)]
pub struct Incoming {
    pub edge: EdgeId,
    pub from: NodeId,
    pub payload: Bits,
}

#[derive(Debug, Clone)]
struct Outgoing {
    edge: EdgeId,
    to: NodeId,
    payload: Bits,
}

/// Everything a node may see or do in one round.
pub struct NodeContext<'a> {
    id: NodeId,
    round: u64,
    n: usize,
    budget: usize,
    ports: &'a [Port],
    inbox: &'a [Incoming],
    outbox: Vec<Outgoing>,
}

impl<'a> NodeContext<'a> {
    pub fn id(&self) -> NodeId {
        self.id
    }

    /// Phase-local round, starting at 1.
    pub fn round(&self) -> u64 {
        self.round
    }

    /// Number of vertices; nodes are assumed to know `n` (hence log n).
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn widths(&self) -> Widths {
        Widths::for_n(self.n)
    }

    /// Bits allowed per edge, per direction, per round.
    pub fn budget(&self) -> usize {
        self.budget
    }

    pub fn ports(&self) -> &'a [Port] {
        self.ports
    }

    pub fn inbox(&self) -> &'a [Incoming] {
        self.inbox
    }

    /// Sends `payload` to neighbor `to`.
    pub fn send(&mut self, to: NodeId, payload: Bits) {
        let port = self
            .ports
            .binary_search_by_key(&to, |p| p.neighbor)
            .unwrap_or_else(|_| panic!("node {} has no edge to {to}", self.id));
        let edge = self.ports[port].edge;
        self.outbox.push(Outgoing { edge, to, payload });
    }
}

/// A per-vertex state machine. It never sees another node's state.
pub trait NodeProgram {
    type Output;
    fn step(&mut self, ctx: &mut NodeContext<'_>) -> Result<Step>;
    fn output(self) -> Self::Output;
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimulatorConfig {
    /// Words per edge per direction per round; one word is ceil(log2 n) bits.
    pub words_per_round: usize,
    pub strict_bandwidth: bool,
    /// Safety cap on rounds per phase.
    pub round_limit: u64,
    pub seed: u64,
}

impl Default for SimulatorConfig {
    fn default() -> Self {
        SimulatorConfig { words_per_round: 2, strict_bandwidth: true, round_limit: 50_000_000, seed: 0 }
    }
}

impl SimulatorConfig {
    pub fn validate(&self) -> Result<()> {
        if self.words_per_round < 1 {
            return Err(Error::Input("words_per_round must be at least 1".into()));
        }
        if self.round_limit < 1 {
            return Err(Error::Input("round_limit must be at least 1".into()));
        }
        Ok(())
    }

    pub fn budget(&self, n: usize) -> usize {
        self.words_per_round * word_bits(n)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PhaseStats {
    pub label: String,
    pub rounds: u64,
    pub messages: u64,
    pub bits: u64,
    pub max_bits_per_edge_per_round: usize,
    /// Edge-rounds over budget (only nonzero outside strict mode).
    pub violations: u64,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RoundStats {
    pub rounds_elapsed: u64,
    pub max_bits_per_edge_per_round: usize,
    pub total_messages: u64,
    pub total_bits: u64,
    pub violations: u64,
    pub per_phase: Vec<PhaseStats>,
}

impl RoundStats {
    pub fn push(&mut self, p: PhaseStats) {
        self.rounds_elapsed += p.rounds;
        self.max_bits_per_edge_per_round = self.max_bits_per_edge_per_round.max(p.max_bits_per_edge_per_round);
        self.total_messages += p.messages;
        self.total_bits += p.bits;
        self.violations += p.violations;
        self.per_phase.push(p);
    }

    pub fn merge(&mut self, other: &RoundStats) {
        for p in &other.per_phase {
            self.push(p.clone());
        }
    }

    /// Rounds spent in phases whose label satisfies `pred`.
    pub fn rounds_where(&self, pred: impl Fn(&str) -> bool) -> u64 {
        self.per_phase.iter().filter(|p| pred(&p.label)).map(|p| p.rounds).sum()
    }
}

/// Runs one phase to completion and returns the per-node outputs.
pub fn run_protocol<P: NodeProgram>(
    g: &Graph,
    label: &str,
    programs: Vec<P>,
    config: &SimulatorConfig,
) -> Result<(Vec<P::Output>, PhaseStats)> {
    config.validate()?;
    let n = g.n();
    assert_eq!(programs.len(), n, "one program per vertex");
    let budget = config.budget(n);
    let mut progs: Vec<P> = programs;
    let mut halted = vec![false; n];
    let mut live = n;
    // wake[v]: the round a sleeping node asked for; u64::MAX when idle.
    let mut wake = vec![1u64; n];
    let mut heap: BinaryHeap<Reverse<(u64, NodeId)>> = (0..n).map(|v| Reverse((1, v))).collect();
    let mut inbox: Vec<Vec<Incoming>> = vec![Vec::new(); n];
    let mut pending: Vec<Vec<Incoming>> = vec![Vec::new(); n];
    let mut has_mail: Vec<NodeId> = Vec::new();
    let mut stats = PhaseStats { label: label.to_string(), ..Default::default() };
    let mut edge_load: Vec<(u64, usize)> = vec![(0, 0); 2 * g.m()];
    let mut round = 0u64;
    let mut runnable: Vec<NodeId> = Vec::new();
    let mut queued = vec![false; n];
    let mut next_mail: Vec<NodeId> = Vec::new();

    while live > 0 {
        round += 1;
        if has_mail.is_empty() {
            // Fast-forward over rounds where nothing can happen.
            while let Some(&Reverse((r, v))) = heap.peek() {
                if halted[v] || wake[v] != r {
                    heap.pop();
                } else {
                    break;
                }
            }
            match heap.peek() {
                Some(Reverse((r, _))) => round = round.max(*r),
                None => {
                    return Err(Error::Protocol(format!(
                        "phase `{label}` deadlocked: {live} nodes idle with no messages in flight"
                    )))
                }
            }
        }
        if round > config.round_limit {
            return Err(Error::Timeout { phase: label.to_string(), limit: config.round_limit });
        }
        runnable.clear();
        for &v in &has_mail {
            if !queued[v] {
                queued[v] = true;
                runnable.push(v);
            }
        }
        has_mail.clear();
        while let Some(&Reverse((r, v))) = heap.peek() {
            if r > round {
                break;
            }
            heap.pop();
            if !halted[v] && wake[v] == r && !queued[v] {
                queued[v] = true;
                runnable.push(v);
            }
        }
        runnable.sort_unstable();

        for &v in &runnable {
            queued[v] = false;
            let mail = std::mem::take(&mut inbox[v]);
            if halted[v] {
                if let Some(m) = mail.first() {
                    return Err(Error::Protocol(format!(
                        "phase `{label}`: node {v} received a message from {} after halting",
                        m.from
                    )));
                }
                continue;
            }
            let mut ctx = NodeContext {
                id: v,
                round,
                n,
                budget,
                ports: g.ports(v),
                inbox: &mail,
                outbox: Vec::new(),
            };
            let step = progs[v].step(&mut ctx)?;
            let outbox = std::mem::take(&mut ctx.outbox);
            for out in outbox {
                let (a, _) = g.edge(out.edge);
                let slot = 2 * out.edge + usize::from(a != v);
                let load = &mut edge_load[slot];
                if load.0 != round {
                    *load = (round, 0);
                }
                load.1 += out.payload.len();
                stats.max_bits_per_edge_per_round = stats.max_bits_per_edge_per_round.max(load.1);
                if load.1 > budget {
                    if config.strict_bandwidth {
                        return Err(Error::Bandwidth {
                            phase: label.to_string(),
                            edge: out.edge,
                            from: v,
                            to: out.to,
                            round,
                            bits: load.1,
                            budget,
                        });
                    }
                    stats.violations += 1;
                }
                stats.messages += 1;
                stats.bits += out.payload.len() as u64;
                if pending[out.to].is_empty() {
                    next_mail.push(out.to);
                }
                pending[out.to].push(Incoming { edge: out.edge, from: v, payload: out.payload });
            }
            match step {
                Step::Continue => {
                    wake[v] = round + 1;
                    heap.push(Reverse((round + 1, v)));
                }
                Step::WakeAt(r) => {
                    let r = r.max(round + 1);
                    wake[v] = r;
                    heap.push(Reverse((r, v)));
                }
                Step::Idle => wake[v] = u64::MAX,
                Step::Halt => {
                    halted[v] = true;
                    live -= 1;
                }
            }
        }
        // Senders run in id order, so each inbox is already sorted by sender;
        // a stable sort on the pair keeps the contract explicit.
        for &v in &next_mail {
            pending[v].sort_by_key(|m| (m.from, m.edge));
            inbox[v] = std::mem::take(&mut pending[v]);
        }
        std::mem::swap(&mut has_mail, &mut next_mail);
        next_mail.clear();
        if live == 0 {
            if let Some(&v) = has_mail.first() {
                return Err(Error::Protocol(format!(
                    "phase `{label}`: message to node {v} sent after every node halted"
                )));
            }
        }
    }
    stats.rounds = round;
    Ok((progs.into_iter().map(NodeProgram::output).collect(), stats))
}

/// A graph plus accumulated statistics; runs labeled phases back to back.
pub struct Network<'g> {
    graph: &'g Graph,
    config: SimulatorConfig,
    stats: RoundStats,
}

impl<'g> Network<'g> {
    pub fn new(graph: &'g Graph, config: SimulatorConfig) -> Result<Self> {
        config.validate()?;
        Ok(Network { graph, config, stats: RoundStats::default() })
    }

    pub fn graph(&self) -> &'g Graph {
        self.graph
    }

    pub fn config(&self) -> &SimulatorConfig {
        &self.config
    }

    pub fn widths(&self) -> Widths {
        Widths::for_n(self.graph.n())
    }

    pub fn budget(&self) -> usize {
        self.config.budget(self.graph.n())
    }

    pub fn run<P: NodeProgram>(&mut self, label: &str, programs: Vec<P>) -> Result<Vec<P::Output>> {
        let (out, phase) = run_protocol(self.graph, label, programs, &self.config)?;
        self.stats.push(phase);
        Ok(out)
    }

    pub fn stats(&self) -> &RoundStats {
        &self.stats
    }

    pub fn into_stats(self) -> RoundStats {
        self.stats
    }
}

/// Largest shortest-path distance, by BFS from every vertex.
pub fn measure_diameter(g: &Graph) -> Result<usize> {
    g.validate_connected()?;
    let mut best = 0;
    for s in 0..g.n() {
        for d in g.bfs_distances(s) {
            best = best.max(d.expect("connected"));
        }
    }
    Ok(best)
}

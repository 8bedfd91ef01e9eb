//! Distributed BFS tree: explore flood with lowest-id parent choice, child
//! acknowledgements, a max-level convergecast and a Depth broadcast. Ancestor
//! lists follow as a Type-1 broadcast of ids.

use crate::error::{Error, Result};
use crate::graph::NodeId;
use crate::runtime::{BitReader, BitWriter, Network, NodeContext, NodeProgram, Step};
use crate::tree::broadcast::broadcast_t1;
use crate::tree::{BfsInfo, RootPolicy, TreeView};

const EXPLORE: u64 = 0;
const ACK: u64 = 1;
const UP: u64 = 2;
const DOWN: u64 = 3;

pub struct Bfs {
    view: TreeView,
    is_root: bool,
    reached: bool,
    children_known: bool,
    pending_reports: usize,
    max_level: usize,
}

impl Bfs {
    pub fn new(id: NodeId, is_root: bool) -> Self {
        Bfs {
            view: TreeView { id, ..Default::default() },
            is_root,
            reached: false,
            children_known: false,
            pending_reports: 0,
            max_level: 0,
        }
    }

    fn msg(ctx: &NodeContext<'_>, tag: u64, value: Option<usize>) -> Result<crate::runtime::Bits> {
        let mut w = BitWriter::new();
        w.put(tag, 2);
        if let Some(v) = value {
            w.put_usize(v, ctx.widths().id());
        }
        w.finish()
    }

    fn report_up(&mut self, ctx: &mut NodeContext<'_>) -> Result<Step> {
        match self.view.parent {
            Some(p) => {
                let m = Self::msg(ctx, UP, Some(self.max_level))?;
                ctx.send(p, m);
                Ok(Step::Idle)
            }
            None => {
                // Root: the depth is final.
                self.view.depth = self.max_level;
                self.send_down(ctx)
            }
        }
    }

    fn send_down(&mut self, ctx: &mut NodeContext<'_>) -> Result<Step> {
        for &c in &self.view.children {
            let m = Self::msg(ctx, DOWN, Some(self.view.depth))?;
            ctx.send(c, m);
        }
        Ok(Step::Halt)
    }
}

impl NodeProgram for Bfs {
    type Output = TreeView;

    fn step(&mut self, ctx: &mut NodeContext<'_>) -> Result<Step> {
        let wb = ctx.widths().id();
        let round = ctx.round();
        if round == 1 && self.is_root {
            self.reached = true;
            for p in ctx.ports() {
                ctx.send(p.neighbor, Self::msg(ctx, EXPLORE, None)?);
            }
            if ctx.ports().is_empty() {
                self.view.depth = 0;
                return Ok(Step::Halt);
            }
            return Ok(Step::WakeAt(3));
        }
        let mut explorers = Vec::new();
        for m in ctx.inbox() {
            let mut r = BitReader::new(&m.payload);
            match r.read(2)? {
                EXPLORE => explorers.push(m.from),
                ACK => self.view.children.push(m.from),
                UP => {
                    self.max_level = self.max_level.max(r.read_usize(wb)?);
                    self.pending_reports = self
                        .pending_reports
                        .checked_sub(1)
                        .ok_or_else(|| Error::Protocol("unexpected depth report".into()))?;
                }
                _ => {
                    self.view.depth = r.read_usize(wb)?;
                    return self.send_down(ctx);
                }
            }
        }
        if !self.reached && !explorers.is_empty() {
            self.reached = true;
            self.view.level = (round - 1) as usize;
            let parent = *explorers.iter().min().unwrap();
            self.view.parent = Some(parent);
            ctx.send(parent, Self::msg(ctx, ACK, None)?);
            for p in ctx.ports() {
                if !explorers.contains(&p.neighbor) {
                    ctx.send(p.neighbor, Self::msg(ctx, EXPLORE, None)?);
                }
            }
            // Acks from children arrive two rounds later.
            return Ok(Step::WakeAt(round + 2));
        }
        if self.reached && !self.children_known && round >= self.view.level as u64 + 3 {
            self.children_known = true;
            self.view.children.sort_unstable();
            self.pending_reports = self.view.children.len();
            self.max_level = self.max_level.max(self.view.level);
        }
        if self.children_known && self.pending_reports == 0 {
            self.pending_reports = usize::MAX;
            return self.report_up(ctx);
        }
        if self.reached && !self.children_known {
            // Late explores from level-mates must not cancel the ack deadline.
            return Ok(Step::WakeAt(self.view.level as u64 + 3));
        }
        Ok(Step::Idle)
    }

    fn output(self) -> TreeView {
        self.view
    }
}

/// Runs the BFS phase and the ancestor broadcast; returns the observer's
/// assembled view (every node holds its own [`TreeView`]).
pub fn build_bfs(net: &mut Network<'_>, policy: RootPolicy) -> Result<BfsInfo> {
    let g = net.graph();
    let root = policy.resolve(g)?;
    let programs = (0..g.n()).map(|v| Bfs::new(v, v == root)).collect();
    let mut views: Vec<TreeView> = net.run("bfs", programs)?;
    let ids: Vec<u64> = (0..g.n() as u64).collect();
    let wb = net.widths().id();
    let received = broadcast_t1(net, &views, "broadcast1:ancestors", &ids, wb)?;
    for (v, anc) in received.into_iter().enumerate() {
        let mut a: Vec<NodeId> = anc.into_iter().map(|x| x as NodeId).collect();
        a.push(v);
        views[v].ancestors = a;
    }
    let depth = views[root].depth;
    Ok(BfsInfo { root, depth, nodes: views })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::{generate, Family, GenParams};
    use crate::runtime::SimulatorConfig;

    fn run(g: &crate::graph::Graph, root: usize) -> (BfsInfo, crate::runtime::RoundStats) {
        let mut net = Network::new(g, SimulatorConfig::default()).unwrap();
        let t = build_bfs(&mut net, RootPolicy::Explicit(root)).unwrap();
        (t, net.into_stats())
    }

    #[test]
    fn c4_levels_and_tiebreak() {
        let g = generate(Family::Cycle, &GenParams::new(4)).unwrap();
        let (t, _) = run(&g, 0);
        assert_eq!((0..4).map(|v| t.level(v)).collect::<Vec<_>>(), vec![0, 1, 2, 1]);
        assert_eq!(t.parent(2), Some(1));
        assert_eq!(t.depth, 2);
        assert_eq!(t, BfsInfo::centralized(&g, 0));
    }

    #[test]
    fn odd_cycles_and_prisms() {
        for (f, n) in [(Family::Cycle, 5), (Family::Cycle, 9), (Family::Prism, 10), (Family::Complete, 6)] {
            let g = generate(f, &GenParams::new(n)).unwrap();
            for root in 0..n {
                assert_eq!(run(&g, root).0, BfsInfo::centralized(&g, root), "{f:?} root {root}");
            }
        }
    }

    #[test]
    fn star_depth_one() {
        let g = crate::graph::Graph::connected(6, (1..6).map(|v| (0, v))).unwrap();
        let (t, _) = run(&g, 0);
        assert_eq!(t.depth, 1);
    }

    #[test]
    fn single_vertex() {
        let g = crate::graph::Graph::new(1, []).unwrap();
        let (t, st) = run(&g, 0);
        assert_eq!(t.depth, 0);
        assert_eq!(t.nodes[0].ancestors, vec![0]);
        assert_eq!(st.total_messages, 0);
    }

    #[test]
    fn matches_centralized_on_grids() {
        for side in 2..=8 {
            let g = generate(Family::Grid, &GenParams::new(side * side)).unwrap();
            for root in [0, side * side - 1, side / 2] {
                let (t, st) = run(&g, root);
                assert_eq!(t, BfsInfo::centralized(&g, root));
                assert!(st.rounds_where(|l| l == "bfs") <= 3 * t.depth as u64 + 4);
            }
        }
    }
}

//! Broadcast Type-1 and Type-2: every node sends a record to its whole subtree.
//!
//! Each node queues its own record first and then forwards its parent's
//! records as they arrive, so a node at level l receives exactly l records,
//! nearest ancestor first. Per-child records (one record for each child's
//! subtree) use the same machinery.

use crate::error::{Error, Result};
use crate::graph::NodeId;
use crate::runtime::{BitReader, BitWriter, Bits, Framing, InStream, Network, NodeContext, NodeProgram, OutStream, Step};
use crate::tree::TreeView;

/// What a node sends down.
#[derive(Debug, Clone)]
pub enum Own {
    /// The same record to every child's subtree.
    Same(Bits),
    /// One record per child, aligned with `TreeView::children`.
    PerChild(Vec<Bits>),
}

pub struct Downcast {
    parent: Option<NodeId>,
    children: Vec<NodeId>,
    expect: usize,
    input: InStream,
    outs: Vec<OutStream>,
    received: Vec<Bits>,
    started: bool,
    own: Option<Own>,
}

impl Downcast {
    pub fn new(view: &TreeView, framing: Framing, own: Own) -> Self {
        Downcast {
            parent: view.parent,
            children: view.children.clone(),
            expect: view.level,
            input: InStream::new(framing),
            outs: view.children.iter().map(|_| OutStream::new(framing)).collect(),
            received: Vec::new(),
            started: false,
            own: Some(own),
        }
    }
}

impl NodeProgram for Downcast {
    /// Ancestors' records, root first.
    type Output = Vec<Bits>;

    fn step(&mut self, ctx: &mut NodeContext<'_>) -> Result<Step> {
        if !self.started {
            self.started = true;
            match self.own.take().expect("own record") {
                Own::Same(rec) => {
                    for o in &mut self.outs {
                        o.push_record(&rec)?;
                    }
                }
                Own::PerChild(recs) => {
                    if recs.len() != self.outs.len() {
                        return Err(Error::Protocol("per-child record count mismatch".into()));
                    }
                    for (o, rec) in self.outs.iter_mut().zip(&recs) {
                        o.push_record(rec)?;
                    }
                }
            }
        }
        for m in ctx.inbox() {
            if Some(m.from) != self.parent {
                return Err(Error::Protocol(format!("downcast: unexpected message from {}", m.from)));
            }
            self.input.feed(&m.payload);
        }
        while let Some(rec) = self.input.pop() {
            for o in &mut self.outs {
                o.push_record(&rec)?;
            }
            self.received.push(rec);
        }
        if self.received.len() > self.expect {
            return Err(Error::Protocol("downcast: more records than ancestors".into()));
        }
        let budget = ctx.budget();
        let mut busy = false;
        for (i, o) in self.outs.iter_mut().enumerate() {
            if let Some(chunk) = o.next_chunk(budget) {
                ctx.send(self.children[i], chunk);
            }
            busy |= !o.is_empty();
        }
        if busy {
            Ok(Step::Continue)
        } else if self.received.len() < self.expect {
            Ok(Step::Idle)
        } else {
            self.input.expect_idle("downcast")?;
            Ok(Step::Halt)
        }
    }

    fn output(mut self) -> Vec<Bits> {
        self.received.reverse();
        self.received
    }
}

/// Raw downcast: returns, per node, its ancestors' records root first.
pub fn downcast(
    net: &mut Network<'_>,
    views: &[TreeView],
    label: &str,
    framing: Framing,
    own: Vec<Own>,
) -> Result<Vec<Vec<Bits>>> {
    let programs = views.iter().zip(own).map(|(v, o)| Downcast::new(v, framing, o)).collect();
    net.run(label, programs)
}

/// Type-1: one `width`-bit value per node. Returns the values of the proper
/// ancestors of each node, root first.
pub fn broadcast_t1(
    net: &mut Network<'_>,
    views: &[TreeView],
    label: &str,
    values: &[u64],
    width: usize,
) -> Result<Vec<Vec<u64>>> {
    let own = values
        .iter()
        .map(|&x| {
            let mut w = BitWriter::new();
            w.put(x, width);
            w.finish().map(Own::Same)
        })
        .collect::<Result<Vec<_>>>()?;
    let recs = downcast(net, views, label, Framing::Fixed(width), own)?;
    recs.into_iter()
        .map(|list| list.iter().map(|b| BitReader::new(b).read(width)).collect())
        .collect()
}

/// Type-2: a list of `width`-bit values per node (at most Depth of them in
/// the intended uses). Returns each proper ancestor's list, root first.
pub fn broadcast_t2(
    net: &mut Network<'_>,
    views: &[TreeView],
    label: &str,
    lists: &[Vec<u64>],
    width: usize,
) -> Result<Vec<Vec<Vec<u64>>>> {
    let own = lists
        .iter()
        .map(|list| {
            let mut w = BitWriter::new();
            for &x in list {
                w.put(x, width);
            }
            w.finish().map(Own::Same)
        })
        .collect::<Result<Vec<_>>>()?;
    let wb = net.widths().wb;
    let recs = downcast(net, views, label, Framing::words(wb), own)?;
    recs.into_iter()
        .map(|list| {
            list.iter()
                .map(|b| {
                    if width == 0 || b.len() % width != 0 {
                        return Err(Error::Protocol("broadcast_t2: ragged record".into()));
                    }
                    let mut r = BitReader::new(b);
                    (0..b.len() / width).map(|_| r.read(width)).collect()
                })
                .collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::{generate, Family, GenParams};
    use crate::graph::Graph;
    use crate::runtime::SimulatorConfig;
    use crate::tree::BfsInfo;

    fn setup(g: &Graph) -> (Network<'_>, BfsInfo) {
        let net = Network::new(g, SimulatorConfig::default()).unwrap();
        (net, BfsInfo::centralized(g, 0))
    }

    #[test]
    fn type1_ids_on_path() {
        let g = generate(Family::Path, &GenParams::new(4)).unwrap();
        let (mut net, t) = setup(&g);
        let wb = net.widths().id();
        let got = broadcast_t1(&mut net, &t.nodes, "broadcast1", &[0, 1, 2, 3], wb).unwrap();
        assert_eq!(got[3], vec![0, 1, 2]);
        assert!(got[0].is_empty());
    }

    #[test]
    fn type1_single_vertex() {
        let g = Graph::new(1, []).unwrap();
        let (mut net, t) = setup(&g);
        let got = broadcast_t1(&mut net, &t.nodes, "broadcast1", &[0], 1).unwrap();
        assert!(got[0].is_empty());
        assert_eq!(net.stats().total_messages, 0);
    }

    #[test]
    fn type2_lists_on_path() {
        let g = generate(Family::Path, &GenParams::new(4)).unwrap();
        let (mut net, t) = setup(&g);
        let lists: Vec<Vec<u64>> = (0..4).map(|v| t.ancestors(v).iter().map(|&a| a as u64).collect()).collect();
        let w = net.widths().count();
        let got = broadcast_t2(&mut net, &t.nodes, "broadcast2", &lists, w).unwrap();
        assert_eq!(got[3], vec![vec![0], vec![0, 1], vec![0, 1, 2]]);
    }

    #[test]
    fn per_child_records() {
        let g = Graph::connected(4, [(0, 1), (0, 2), (2, 3)]).unwrap();
        let (mut net, t) = setup(&g);
        let rec = |x: u64| {
            let mut w = BitWriter::new();
            w.put(x, 4);
            w.finish().unwrap()
        };
        let own = (0..4)
            .map(|v| Own::PerChild(t.children(v).iter().map(|&c| rec(c as u64)).collect()))
            .collect();
        let got = downcast(&mut net, &t.nodes, "down", Framing::Fixed(4), own).unwrap();
        let read = |b: &Bits| BitReader::new(b).read(4).unwrap();
        assert_eq!(got[3].iter().map(read).collect::<Vec<_>>(), vec![2, 3]);
        assert_eq!(got[1].iter().map(read).collect::<Vec<_>>(), vec![1]);
    }
}

//! One record per edge direction: ancestor lists, η tables and sketches swapped
//! with neighbors. Records are streamed in budget-sized chunks.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::graph::NodeId;
use crate::runtime::{Bits, Framing, InStream, Network, NodeContext, NodeProgram, OutStream, Step};

pub struct Exchange {
    outs: Vec<(NodeId, OutStream)>,
    inputs: BTreeMap<NodeId, InStream>,
    received: BTreeMap<NodeId, Bits>,
}

impl Exchange {
    /// `send`: one record per chosen neighbor. `expect`: neighbors that will
    /// send one record each.
    pub fn new(framing: Framing, send: Vec<(NodeId, Bits)>, expect: &[NodeId]) -> Result<Self> {
        let outs = send
            .into_iter()
            .map(|(to, rec)| {
                let mut o = OutStream::new(framing);
                o.push_record(&rec).map(|_| (to, o))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Exchange {
            outs,
            inputs: expect.iter().map(|&b| (b, InStream::new(framing))).collect(),
            received: BTreeMap::new(),
        })
    }
}

impl NodeProgram for Exchange {
    type Output = BTreeMap<NodeId, Bits>;

    fn step(&mut self, ctx: &mut NodeContext<'_>) -> Result<Step> {
        for m in ctx.inbox() {
            let input = self
                .inputs
                .get_mut(&m.from)
                .ok_or_else(|| Error::Protocol(format!("exchange: unexpected record from {}", m.from)))?;
            input.feed(&m.payload);
            if let Some(rec) = input.pop() {
                if self.received.insert(m.from, rec).is_some() {
                    return Err(Error::Protocol(format!("exchange: second record from {}", m.from)));
                }
            }
        }
        let budget = ctx.budget();
        let mut busy = false;
        for (to, o) in &mut self.outs {
            if let Some(chunk) = o.next_chunk(budget) {
                ctx.send(*to, chunk);
            }
            busy |= !o.is_empty();
        }
        if busy {
            Ok(Step::Continue)
        } else if self.received.len() < self.inputs.len() {
            Ok(Step::Idle)
        } else {
            Ok(Step::Halt)
        }
    }

    fn output(self) -> BTreeMap<NodeId, Bits> {
        self.received
    }
}

/// Runs an exchange phase. `send[v]` lists v's outgoing records; every
/// record's recipient must list v in its `expect`.
pub fn exchange(
    net: &mut Network<'_>,
    label: &str,
    send: Vec<Vec<(NodeId, Bits)>>,
    expect: Vec<Vec<NodeId>>,
) -> Result<Vec<BTreeMap<NodeId, Bits>>> {
    let framing = Framing::words(net.widths().wb);
    let programs = send
        .into_iter()
        .zip(&expect)
        .map(|(s, e)| Exchange::new(framing, s, e))
        .collect::<Result<Vec<_>>>()?;
    net.run(label, programs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::{generate, Family, GenParams};
    use crate::runtime::{BitReader, BitWriter, SimulatorConfig};

    #[test]
    fn swaps_long_records() {
        let g = generate(Family::Cycle, &GenParams::new(5)).unwrap();
        let mut net = Network::new(&g, SimulatorConfig::default()).unwrap();
        let rec = |v: usize| {
            let mut w = BitWriter::new();
            for i in 0..10 {
                w.put((v * 10 + i) as u64, 7);
            }
            w.finish().unwrap()
        };
        let send = (0..5).map(|v| g.neighbors(v).map(|b| (b, rec(v))).collect()).collect();
        let expect = (0..5).map(|v| g.neighbors(v).collect()).collect();
        let got = exchange(&mut net, "exchange", send, expect).unwrap();
        let first = |b: &Bits| BitReader::new(b).read(7).unwrap();
        assert_eq!(first(&got[0][&4]), 40);
        assert_eq!(first(&got[2][&1]), 10);
        assert!(net.stats().max_bits_per_edge_per_round <= net.budget());
    }
}

//! Event-driven convergecast: a node waits for one record from every child,
//! combines them with its own data and streams the result to its parent.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::graph::NodeId;
use crate::runtime::{Bits, Framing, InStream, NodeContext, NodeProgram, OutStream, Step};
use crate::tree::TreeView;

/// Combiner: children's records (by child id) to (record for the parent, local output).
pub type Combine<O> = Box<dyn FnOnce(BTreeMap<NodeId, Bits>) -> Result<(Bits, O)>>;

pub struct Upcast<O> {
    parent: Option<NodeId>,
    inputs: BTreeMap<NodeId, InStream>,
    got: BTreeMap<NodeId, Bits>,
    combine: Option<Combine<O>>,
    out: OutStream,
    result: Option<O>,
}

impl<O> Upcast<O> {
    pub fn new(view: &TreeView, framing: Framing, combine: Combine<O>) -> Self {
        Upcast {
            parent: view.parent,
            inputs: view.children.iter().map(|&c| (c, InStream::new(framing))).collect(),
            got: BTreeMap::new(),
            combine: Some(combine),
            out: OutStream::new(framing),
            result: None,
        }
    }
}

impl<O> NodeProgram for Upcast<O> {
    type Output = O;

    fn step(&mut self, ctx: &mut NodeContext<'_>) -> Result<Step> {
        for m in ctx.inbox() {
            let input = self
                .inputs
                .get_mut(&m.from)
                .ok_or_else(|| Error::Protocol(format!("convergecast: unexpected message from {}", m.from)))?;
            input.feed(&m.payload);
            if let Some(rec) = input.pop() {
                self.got.insert(m.from, rec);
            }
        }
        if self.combine.is_some() && self.got.len() == self.inputs.len() {
            let combine = self.combine.take().unwrap();
            let (up, local) = combine(std::mem::take(&mut self.got))?;
            self.result = Some(local);
            if self.parent.is_some() {
                self.out.push_record(&up)?;
            }
        }
        if let Some(p) = self.parent {
            if let Some(chunk) = self.out.next_chunk(ctx.budget()) {
                ctx.send(p, chunk);
            }
        }
        if self.result.is_none() {
            Ok(Step::Idle)
        } else if self.out.is_empty() {
            Ok(Step::Halt)
        } else {
            Ok(Step::Continue)
        }
    }

    fn output(self) -> O {
        self.result.expect("convergecast finished")
    }
}

//! Tree restricted semigroup functions.
//!
//! Node `a` holds an atomic value `X_a^v` for each ancestor `v`. The wave
//! computes `X_{desc a}^v`, the fold over `desc(a)`, for every `v` in `A(a)`;
//! `f(v)` is the value at `a = v`. A node at level `l_a` sends the partial
//! fold for ancestor level `l` to its parent in logical step
//! `Depth - l_a + l + 1`. One logical step spans `S` rounds, where `S` is the
//! number of budget-sized slots an element needs.

use std::collections::BTreeMap;
use std::fmt::Debug;

use crate::error::{Error, Result};
use crate::graph::NodeId;
use crate::runtime::{BitReader, BitWriter, Bits, Network, NodeContext, NodeProgram, Step, Widths};
use crate::tree::TreeView;

/// A commutative semigroup with a fixed-width wire encoding.
pub trait Semigroup: Clone + Debug + PartialEq {
    fn combine(&self, other: &Self) -> Self;
    /// Serialized size of every element.
    fn bits(w: Widths) -> usize;
    fn encode(&self, out: &mut BitWriter, w: Widths);
    fn decode(r: &mut BitReader<'_>, w: Widths) -> Result<Self>;
}

/// Integer addition over counts bounded by m.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Sum(pub u64);

impl Semigroup for Sum {
    fn combine(&self, other: &Self) -> Self {
        Sum(self.0 + other.0)
    }
    fn bits(w: Widths) -> usize {
        w.count()
    }
    fn encode(&self, out: &mut BitWriter, w: Widths) {
        out.put(self.0, w.count());
    }
    fn decode(r: &mut BitReader<'_>, w: Widths) -> Result<Self> {
        Ok(Sum(r.read(w.count())?))
    }
}

/// Maximum over vertex ids.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct MaxId(pub u64);

impl Semigroup for MaxId {
    fn combine(&self, other: &Self) -> Self {
        MaxId(self.0.max(other.0))
    }
    fn bits(w: Widths) -> usize {
        w.id()
    }
    fn encode(&self, out: &mut BitWriter, w: Widths) {
        out.put(self.0, w.id());
    }
    fn decode(r: &mut BitReader<'_>, w: Widths) -> Result<Self> {
        Ok(MaxId(r.read(w.id())?))
    }
}

/// Slots per logical step for elements of `S`.
pub fn slots<S: Semigroup>(w: Widths, budget: usize) -> usize {
    S::bits(w).div_ceil(budget).max(1)
}

pub struct Trsf<S: Semigroup> {
    level: usize,
    depth: usize,
    floor: usize,
    parent: Option<NodeId>,
    acc: Vec<S>,
    incoming: BTreeMap<NodeId, (Bits, usize)>,
    outgoing: Option<Bits>,
    slots: u64,
}

impl<S: Semigroup> Trsf<S> {
    /// `atoms[l]` is `X_a^{α(a,l)}` for `l = 0..=level`.
    pub fn new(view: &TreeView, atoms: Vec<S>) -> Self {
        Self::with_floor(view, 0, atoms)
    }

    /// Restricts the wave to ancestors at level `floor` and below:
    /// `atoms[i]` is the value for level `floor + i`. Nodes above `floor`
    /// pass an empty vector and stay silent.
    pub fn with_floor(view: &TreeView, floor: usize, atoms: Vec<S>) -> Self {
        let expected = (view.level + 1).saturating_sub(floor);
        assert_eq!(atoms.len(), expected, "one atomic value per ancestor at or below the floor");
        let children = if view.level >= floor { view.children.clone() } else { Vec::new() };
        Trsf {
            level: view.level,
            depth: view.depth,
            floor,
            parent: view.parent,
            acc: atoms,
            incoming: children.into_iter().map(|c| (c, (Bits::new(), 0))).collect(),
            outgoing: None,
            slots: 1,
        }
    }

    /// Number of elements this node sends up.
    fn sends(&self) -> usize {
        self.level.saturating_sub(self.floor)
    }

    fn first_send_round(&self) -> u64 {
        (self.depth - self.level) as u64 * self.slots + 1
    }

    fn last_send_round(&self) -> u64 {
        (self.depth - self.floor) as u64 * self.slots
    }
}

impl<S: Semigroup> NodeProgram for Trsf<S> {
    type Output = Vec<S>;

    fn step(&mut self, ctx: &mut NodeContext<'_>) -> Result<Step> {
        let w = ctx.widths();
        let budget = ctx.budget();
        let e = S::bits(w);
        self.slots = slots::<S>(w, budget) as u64;
        let r = ctx.round();
        for m in ctx.inbox() {
            let (buf, count) = self
                .incoming
                .get_mut(&m.from)
                .ok_or_else(|| Error::Protocol(format!("trsf: message from non-child {}", m.from)))?;
            buf.extend_from_bitslice(&m.payload);
            while buf.len() >= e {
                let l = *count;
                if l >= self.acc.len() {
                    return Err(Error::Protocol("trsf: child sent too many tuples".into()));
                }
                // Wave safety: the child at level+1 sends index l in step depth-level+l.
                let expected = (self.depth - self.level + l) as u64 * self.slots + 1;
                if r != expected {
                    return Err(Error::Protocol(format!(
                        "trsf: tuple for level {l} from {} arrived in round {r}, expected {expected}",
                        m.from
                    )));
                }
                let x = S::decode(&mut BitReader::new(&buf[..e]), w)?;
                self.acc[l] = self.acc[l].combine(&x);
                *buf = buf[e..].to_bitvec();
                *count += 1;
            }
        }
        let sender = self.parent.filter(|_| self.sends() > 0);
        if let Some(p) = sender {
            let first = self.first_send_round();
            if r >= first && r <= self.last_send_round() {
                let offset = r - first;
                let (l, slot) = ((offset / self.slots) as usize, (offset % self.slots) as usize);
                if slot == 0 {
                    let mut out = BitWriter::new();
                    self.acc[l].encode(&mut out, w);
                    let mut bits = out.finish()?;
                    bits.resize(self.slots as usize * budget, false);
                    self.outgoing = Some(bits);
                }
                let bits = self.outgoing.as_ref().expect("element staged");
                let lo = slot * budget;
                let hi = ((slot + 1) * budget).min(e);
                if lo < hi {
                    ctx.send(p, bits[lo..hi].to_bitvec());
                }
            }
        }
        let sends_done = sender.is_none() || r >= self.last_send_round();
        let received_all = self.incoming.values().all(|(_, c)| *c == self.acc.len());
        if sends_done && received_all {
            return Ok(Step::Halt);
        }
        if sender.is_some() && !sends_done {
            let first = self.first_send_round();
            if r + 1 < first {
                return Ok(Step::WakeAt(first));
            }
            return Ok(Step::Continue);
        }
        Ok(Step::Idle)
    }

    fn output(self) -> Vec<S> {
        self.acc
    }
}

/// Runs one TRSF wave. `atoms[a][l] = X_a^{α(a,l)}`; returns
/// `X_{desc a}^{α(a,l)}` in the same layout.
pub fn trsf_compute<S: Semigroup>(
    net: &mut Network<'_>,
    views: &[TreeView],
    label: &str,
    atoms: Vec<Vec<S>>,
) -> Result<Vec<Vec<S>>> {
    let programs = views.iter().zip(atoms).map(|(v, a)| Trsf::new(v, a)).collect();
    net.run(label, programs)
}

/// Floor-restricted wave; see [`Trsf::with_floor`].
pub fn trsf_compute_from<S: Semigroup>(
    net: &mut Network<'_>,
    views: &[TreeView],
    label: &str,
    floor: usize,
    atoms: Vec<Vec<S>>,
) -> Result<Vec<Vec<S>>> {
    let programs = views.iter().zip(atoms).map(|(v, a)| Trsf::with_floor(v, floor, a)).collect();
    net.run(label, programs)
}

/// Centralized fold used as the oracle for [`trsf_compute`].
pub fn trsf_reference<S: Semigroup>(tree: &crate::tree::BfsInfo, atoms: &[Vec<S>]) -> Vec<Vec<S>> {
    let n = tree.n();
    (0..n)
        .map(|a| {
            (0..=tree.level(a))
                .map(|l| {
                    let mut acc: Option<S> = None;
                    for b in 0..n {
                        if tree.is_ancestor(a, b) {
                            let x = &atoms[b][l];
                            acc = Some(match acc {
                                None => x.clone(),
                                Some(y) => y.combine(x),
                            });
                        }
                    }
                    acc.expect("desc(a) contains a")
                })
                .collect()
        })
        .collect()
}

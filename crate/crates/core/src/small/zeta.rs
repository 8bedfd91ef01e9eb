//! The ζ semigroup used for disjoint 2-cuts.
//!
//! An element is the identity, the absorbing element, or a tuple naming the
//! unique subtree root `w` at the inspected level that all relevant non-tree
//! edges land in, together with the number `γ` of such edges. Two tuples
//! combine when they name the same `w`; otherwise the result is absorbing.

use std::fmt::Debug;

use crate::error::{Error, Result};
use crate::graph::NodeId;
use crate::runtime::{BitReader, BitWriter, Network, Widths};
use crate::small::eta::NodeState;
use crate::tree::trsf::{trsf_compute, Semigroup};
use crate::tree::BfsInfo;

/// Payload identifying the partner subtree; tuples merge iff keys are equal.
pub trait TupleKey: Clone + Debug + PartialEq {
    fn bits(w: Widths) -> usize;
    fn encode(&self, out: &mut BitWriter, w: Widths);
    fn decode(r: &mut BitReader<'_>, w: Widths) -> Result<Self>;
}

#[derive(Debug, Clone, PartialEq)]
pub enum Tagged<K> {
    Identity,
    Absorbing,
    Tuple { key: K, gamma: u64 },
}

const TAG_IDENTITY: u64 = 0;
const TAG_ABSORBING: u64 = 1;
const TAG_TUPLE: u64 = 2;

impl<K: TupleKey> Semigroup for Tagged<K> {
    fn combine(&self, other: &Self) -> Self {
        match (self, other) {
            (Tagged::Absorbing, _) | (_, Tagged::Absorbing) => Tagged::Absorbing,
            (Tagged::Identity, x) | (x, Tagged::Identity) => x.clone(),
            (Tagged::Tuple { key: a, gamma: ga }, Tagged::Tuple { key: b, gamma: gb }) => {
                if a == b {
                    Tagged::Tuple { key: a.clone(), gamma: ga + gb }
                } else {
                    Tagged::Absorbing
                }
            }
        }
    }

    fn bits(w: Widths) -> usize {
        2 + K::bits(w) + w.count()
    }

    fn encode(&self, out: &mut BitWriter, w: Widths) {
        let pad = K::bits(w) + w.count();
        match self {
            Tagged::Identity => {
                out.put(TAG_IDENTITY, 2);
                pad_zeros(out, pad);
            }
            Tagged::Absorbing => {
                out.put(TAG_ABSORBING, 2);
                pad_zeros(out, pad);
            }
            Tagged::Tuple { key, gamma } => {
                out.put(TAG_TUPLE, 2);
                key.encode(out, w);
                out.put(*gamma, w.count());
            }
        }
    }

    fn decode(r: &mut BitReader<'_>, w: Widths) -> Result<Self> {
        let pad = K::bits(w) + w.count();
        match r.read(2)? {
            TAG_IDENTITY => {
                r.read_bits(pad)?;
                Ok(Tagged::Identity)
            }
            TAG_ABSORBING => {
                r.read_bits(pad)?;
                Ok(Tagged::Absorbing)
            }
            TAG_TUPLE => {
                let key = K::decode(r, w)?;
                let gamma = r.read(w.count())?;
                Ok(Tagged::Tuple { key, gamma })
            }
            t => Err(Error::Protocol(format!("zeta: bad tag {t}"))),
        }
    }
}

fn pad_zeros(out: &mut BitWriter, pad: usize) {
    let mut left = pad;
    while left > 0 {
        let k = left.min(64);
        out.put(0, k);
        left -= k;
    }
}

/// `⟨w, π(w), η(w)⟩`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ZetaKey {
    pub w: NodeId,
    pub parent: NodeId,
    pub eta: u64,
}

impl TupleKey for ZetaKey {
    fn bits(w: Widths) -> usize {
        2 * w.id() + w.count()
    }
    fn encode(&self, out: &mut BitWriter, w: Widths) {
        out.put_usize(self.w, w.id()).put_usize(self.parent, w.id()).put(self.eta, w.count());
    }
    fn decode(r: &mut BitReader<'_>, w: Widths) -> Result<Self> {
        Ok(ZetaKey { w: r.read_usize(w.id())?, parent: r.read_usize(w.id())?, eta: r.read(w.count())? })
    }
}

pub type Zeta = Tagged<ZetaKey>;

impl Zeta {
    pub fn tuple(w: NodeId, parent: NodeId, eta: u64, gamma: u64) -> Self {
        Tagged::Tuple { key: ZetaKey { w, parent, eta }, gamma }
    }
}

/// Shared preprocessing rule. For level `l` with `v = α(a,l)`: absorbing if a
/// non-tree neighbor is shallower than `l`; otherwise collect the level-`l`
/// ancestors of the non-tree neighbors other than `v` and return the single
/// one (with its edge count) if there is exactly one. `key` receives `w`,
/// `π(w)` and a neighbor below `w`.
pub fn classify<K: TupleKey>(
    s: &NodeState,
    l: usize,
    nbrs: impl Iterator<Item = NodeId>,
    key: impl Fn(NodeId, NodeId, NodeId) -> K,
) -> Tagged<K> {
    if l == 0 {
        return Tagged::Identity;
    }
    let v = s.view.ancestors[l];
    let mut found: Option<(NodeId, NodeId, NodeId)> = None;
    let mut gamma = 0;
    for b in nbrs {
        let anc = &s.nbr_anc[&b];
        if anc.len() <= l {
            return Tagged::Absorbing;
        }
        let w = anc[l];
        if w == v {
            continue;
        }
        match found {
            None => found = Some((w, anc[l - 1], b)),
            Some((x, _, _)) if x != w => return Tagged::Absorbing,
            _ => {}
        }
        gamma += 1;
    }
    match found {
        None => Tagged::Identity,
        Some((w, pw, b)) => Tagged::Tuple { key: key(w, pw, b), gamma },
    }
}

/// `ζ_a^{α(a,l)}` for every level.
pub fn preprocess_zeta(s: &NodeState) -> Vec<Zeta> {
    (0..=s.level())
        .map(|l| {
            classify(s, l, s.nontree.iter().copied(), |w, pw, b| ZetaKey { w, parent: pw, eta: s.nbr_eta[&b][l] })
        })
        .collect()
}

/// `Z_{desc a}^{α(a,l)}` for every node and level.
pub fn compute_zeta(net: &mut Network<'_>, tree: &BfsInfo, states: &[NodeState]) -> Result<Vec<Vec<Zeta>>> {
    let atoms = states.iter().map(preprocess_zeta).collect();
    trsf_compute(net, &tree.nodes, "trsf:zeta", atoms)
}

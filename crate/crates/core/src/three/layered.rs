//! CASE5: `v_1` is an ancestor of two disjoint nodes `v_2, v_3`.
//!
//! With `γ(v_2, v_3) > 0` the pair is a disjoint 2-cut of `G_u` (edges inside
//! `desc u`, `u = v_1`), found by a ζ wave restricted to the levels below `u`
//! whose tuples also carry the global η of the partner. With
//! `γ(v_2, v_3) = 0` both are 1-cuts of `G_u`, and a pipelined convergecast of
//! per-level candidates meets at their lowest common ancestor.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::graph::NodeId;
use crate::report::{CaseLabel, Detection};
use crate::runtime::{
    pack, unpack, BitReader, BitWriter, Bits, Framing, InStream, Network, NodeContext, NodeProgram, OutStream, Step,
    Widths,
};
use crate::small::eta::NodeState;
use crate::small::zeta::{classify, Tagged, TupleKey};
use crate::tree::exchange::exchange;
use crate::tree::trsf::trsf_compute_from;
use crate::tree::{BfsInfo, TreeView};

/// `⟨w, π(w), η_u(w), η(w), ℓ(LCA)⟩` where `η_u(w) = η(w) - H_{desc w}^u`.
///
/// All contributors to one tuple share `α(·,l)` and `w`, so they agree on the
/// level of the lowest common ancestor of the two subtrees.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PivotKey {
    pub w: NodeId,
    pub parent: NodeId,
    pub eta_pivot: u64,
    pub eta: u64,
    pub lca_level: usize,
}

impl TupleKey for PivotKey {
    fn bits(w: Widths) -> usize {
        3 * w.id() + 2 * w.count()
    }
    fn encode(&self, out: &mut BitWriter, w: Widths) {
        out.put_usize(self.w, w.id())
            .put_usize(self.parent, w.id())
            .put(self.eta_pivot, w.count())
            .put(self.eta, w.count())
            .put_usize(self.lca_level, w.id());
    }
    fn decode(r: &mut BitReader<'_>, w: Widths) -> Result<Self> {
        Ok(PivotKey {
            w: r.read_usize(w.id())?,
            parent: r.read_usize(w.id())?,
            eta_pivot: r.read(w.count())?,
            eta: r.read(w.count())?,
            lca_level: r.read_usize(w.id())?,
        })
    }
}

pub type PivotZeta = Tagged<PivotKey>;

/// `H_{desc α(a,j)}^{α(a,i)}` for `i ≤ j ≤ level`, from the `broadcast2:h` lists.
fn h_anc(s: &NodeState, lists: &[Vec<u64>], j: usize, i: usize) -> u64 {
    if j == s.level() {
        s.h_desc[i]
    } else {
        lists[j][i]
    }
}

/// Non-tree neighbors strictly below the pivot at level `i`.
fn layer_nbrs(s: &NodeState, i: usize) -> Vec<NodeId> {
    let u = s.view.ancestors[i];
    s.nontree
        .iter()
        .copied()
        .filter(|b| {
            let anc = &s.nbr_anc[b];
            anc.len() > i + 1 && anc[i] == u
        })
        .collect()
}

fn common_prefix(a: &[NodeId], b: &[NodeId]) -> usize {
    a.iter().zip(b).take_while(|(x, y)| x == y).count()
}

/// Runs every pivot layer, applies the local CASE5 test for `γ > 0` and
/// returns each node's 2-cut detail for the shallowest pivot.
pub fn detect_case5_layered(
    net: &mut Network<'_>,
    tree: &BfsInfo,
    states: &[NodeState],
    lists: &[Vec<Vec<u64>>],
) -> Result<(Vec<Detection>, Vec<Option<PairDetail>>)> {
    let wc = net.widths().count();
    let mut out = Vec::new();
    let mut details: Vec<Option<PairDetail>> = vec![None; states.len()];
    for i in 1..tree.depth {
        let nbrs: Vec<Vec<NodeId>> =
            states.iter().map(|s| if s.level() > i { layer_nbrs(s, i) } else { Vec::new() }).collect();
        let send = states
            .iter()
            .zip(&nbrs)
            .map(|(s, nb)| {
                if nb.is_empty() {
                    return Ok(Vec::new());
                }
                let etas: Vec<u64> =
                    (i + 1..=s.level()).map(|j| s.eta_anc[j] - h_anc(s, &lists[s.id()], j, i)).collect();
                let rec = pack(&etas, wc)?;
                Ok(nb.iter().map(|&b| (b, rec.clone())).collect())
            })
            .collect::<Result<Vec<_>>>()?;
        let got = exchange(net, &format!("exchange:layer{i}"), send, nbrs.clone())?;
        let mut pivot_eta: Vec<BTreeMap<NodeId, Vec<u64>>> = Vec::with_capacity(states.len());
        for (s, recs) in states.iter().zip(got) {
            let mut m = BTreeMap::new();
            for (b, bits) in recs {
                let list = unpack(&bits, wc)?;
                if list.len() + i + 1 != s.nbr_anc[&b].len() {
                    return Err(Error::Protocol("exchange:layer: list length mismatch".into()));
                }
                m.insert(b, list);
            }
            pivot_eta.push(m);
        }
        let floor = i + 1;
        let atoms: Vec<Vec<PivotZeta>> = states
            .iter()
            .zip(&nbrs)
            .zip(&pivot_eta)
            .map(|((s, nb), pe)| {
                (floor..=s.level())
                    .map(|l| {
                        classify(s, l, nb.iter().copied(), |w, pw, b| PivotKey {
                            w,
                            parent: pw,
                            eta_pivot: pe[&b][l - floor],
                            eta: s.nbr_eta[&b][l],
                            lca_level: common_prefix(&s.view.ancestors, &s.nbr_anc[&b]) - 1,
                        })
                    })
                    .collect()
            })
            .collect();
        let folded = trsf_compute_from(net, &tree.nodes, &format!("trsf:zeta-layer{i}"), floor, atoms)?;
        for (s, z) in states.iter().zip(&folded) {
            let (dets, detail) = local_test(s, i, floor, z);
            out.extend(dets);
            if details[s.id()].is_none() {
                details[s.id()] = detail;
            }
        }
    }
    Ok((out, details))
}

/// Local decision at `a` for the pivot at level `i`. Every tuple that makes
/// `a` and `w` a disjoint 2-cut of `G_u` is tested directly against `η(u)`;
/// the shallowest-level such partner also becomes `a`'s 2-cut detail.
fn local_test(s: &NodeState, i: usize, floor: usize, z: &[PivotZeta]) -> (Vec<Detection>, Option<PairDetail>) {
    let mut out = Vec::new();
    let mut detail = None;
    if s.level() <= i {
        return (out, detail);
    }
    let u = s.view.ancestors[i];
    let h_ua = s.h_desc[i] as i64;
    let eta_u = s.eta_anc[i] as i64;
    let eta_a = s.eta() as i64;
    for (idx, t) in z.iter().enumerate() {
        let Tagged::Tuple { key, gamma } = t else { continue };
        let l = floor + idx;
        let g = *gamma as i64;
        if eta_a - h_ua - g != 1 || key.eta_pivot as i64 - g != 1 {
            continue;
        }
        debug_assert!(s.view.ancestors[l] != key.w);
        if detail.is_none() {
            detail = Some(PairDetail {
                node: s.id(),
                eta: s.eta(),
                partner: key.w,
                partner_eta: key.eta,
                gamma: *gamma,
                lca_level: key.lca_level,
                pivot_level: i,
            });
        }
        let h_uw = key.eta as i64 - key.eta_pivot as i64;
        if eta_u - 1 == h_ua + h_uw {
            out.push(Detection::new(CaseLabel::Case5, vec![u, s.id(), key.w], s.id()));
        }
    }
    (out, detail)
}

/// A record that competes for one convergecast slot per level.
pub trait Detail: Copy {
    fn bits(w: Widths) -> usize;
    fn encode(&self, out: &mut BitWriter, w: Widths);
    fn decode(r: &mut BitReader<'_>, w: Widths) -> Result<Self>;
    /// Lower wins: pivot level first, then node id.
    fn rank(&self) -> (usize, NodeId);
}

/// `𝒟¹(a)`: `a` is a 1-cut of `G_u` for every `u` from the pivot down to `π(a)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Candidate {
    pub node: NodeId,
    pub eta: u64,
    pub pivot_level: usize,
}

impl Detail for Candidate {
    fn bits(w: Widths) -> usize {
        2 * w.id() + w.count()
    }
    fn encode(&self, out: &mut BitWriter, w: Widths) {
        out.put_usize(self.node, w.id()).put(self.eta, w.count()).put_usize(self.pivot_level, w.id());
    }
    fn decode(r: &mut BitReader<'_>, w: Widths) -> Result<Self> {
        Ok(Candidate { node: r.read_usize(w.id())?, eta: r.read(w.count())?, pivot_level: r.read_usize(w.id())? })
    }
    fn rank(&self) -> (usize, NodeId) {
        (self.pivot_level, self.node)
    }
}

/// `𝒟²(a)`: `a` and `w` form a disjoint 2-cut of `G_u` for every `u` from the
/// pivot down to their lowest common ancestor.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PairDetail {
    pub node: NodeId,
    pub eta: u64,
    pub partner: NodeId,
    pub partner_eta: u64,
    pub gamma: u64,
    pub lca_level: usize,
    pub pivot_level: usize,
}

impl Detail for PairDetail {
    fn bits(w: Widths) -> usize {
        4 * w.id() + 3 * w.count()
    }
    fn encode(&self, out: &mut BitWriter, w: Widths) {
        out.put_usize(self.node, w.id())
            .put(self.eta, w.count())
            .put_usize(self.partner, w.id())
            .put(self.partner_eta, w.count())
            .put(self.gamma, w.count())
            .put_usize(self.lca_level, w.id())
            .put_usize(self.pivot_level, w.id());
    }
    fn decode(r: &mut BitReader<'_>, w: Widths) -> Result<Self> {
        Ok(PairDetail {
            node: r.read_usize(w.id())?,
            eta: r.read(w.count())?,
            partner: r.read_usize(w.id())?,
            partner_eta: r.read(w.count())?,
            gamma: r.read(w.count())?,
            lca_level: r.read_usize(w.id())?,
            pivot_level: r.read_usize(w.id())?,
        })
    }
    fn rank(&self) -> (usize, NodeId) {
        (self.pivot_level, self.node)
    }
}

fn candidate(s: &NodeState) -> Option<Candidate> {
    let eta = s.eta();
    (1..s.level())
        .find(|&l| eta.checked_sub(s.h_desc[l]) == Some(1))
        .map(|l| Candidate { node: s.id(), eta, pivot_level: l })
}

fn better<R: Detail>(a: Option<R>, b: Option<R>) -> Option<R> {
    match (a, b) {
        (None, x) | (x, None) => x,
        (Some(x), Some(y)) => Some(if y.rank() < x.rank() { y } else { x }),
    }
}

fn encode_slot<R: Detail>(rec: Option<R>, w: Widths) -> Result<Bits> {
    let mut out = BitWriter::new();
    out.put_bool(rec.is_some());
    match rec {
        Some(r) => r.encode(&mut out, w),
        None => {
            let mut left = R::bits(w);
            while left > 0 {
                let k = left.min(64);
                out.put(0, k);
                left -= k;
            }
        }
    }
    out.finish()
}

fn decode_slot<R: Detail>(bits: &Bits, w: Widths) -> Result<Option<R>> {
    let mut r = BitReader::new(bits);
    let present = r.read_bool()?;
    let rec = R::decode(&mut r, w)?;
    Ok(present.then_some(rec))
}

/// Pipelined contention-resolving convergecast: slot `t` of a node's stream
/// holds the best record at level `level + t` inside its subtree.
pub struct DetailCast<R: Detail> {
    parent: Option<NodeId>,
    slots: usize,
    own: Option<R>,
    inputs: BTreeMap<NodeId, (InStream, Vec<Option<R>>)>,
    out: OutStream,
    next: usize,
}

impl<R: Detail> DetailCast<R> {
    pub fn new(view: &TreeView, own: Option<R>, w: Widths) -> Self {
        let framing = Framing::Fixed(1 + R::bits(w));
        DetailCast {
            parent: view.parent,
            slots: view.depth - view.level + 1,
            own,
            inputs: view.children.iter().map(|&c| (c, (InStream::new(framing), Vec::new()))).collect(),
            out: OutStream::new(framing),
            next: if view.parent.is_some() { 0 } else { usize::MAX },
        }
    }

    fn inputs_done(&self) -> bool {
        self.inputs.values().all(|(_, v)| v.len() + 1 == self.slots)
    }
}

impl<R: Detail> NodeProgram for DetailCast<R> {
    /// Per child, the winning record at each level below this node.
    type Output = BTreeMap<NodeId, Vec<Option<R>>>;

    fn step(&mut self, ctx: &mut NodeContext<'_>) -> Result<Step> {
        let w = ctx.widths();
        for m in ctx.inbox() {
            let (stream, got) = self
                .inputs
                .get_mut(&m.from)
                .ok_or_else(|| Error::Protocol(format!("detail convergecast: unexpected sender {}", m.from)))?;
            stream.feed(&m.payload);
            while let Some(rec) = stream.pop() {
                got.push(decode_slot(&rec, w)?);
            }
        }
        while self.next < self.slots {
            let rec = if self.next == 0 {
                self.own
            } else {
                if self.inputs.values().any(|(_, v)| v.len() < self.next) {
                    break;
                }
                self.inputs.values().fold(None, |acc, (_, v)| better(acc, v[self.next - 1]))
            };
            self.out.push_record(&encode_slot(rec, w)?)?;
            self.next += 1;
        }
        if let Some(p) = self.parent {
            if let Some(chunk) = self.out.next_chunk(ctx.budget()) {
                ctx.send(p, chunk);
            }
        }
        let sent_all = self.parent.is_none() || (self.next >= self.slots && self.out.is_empty());
        if sent_all && self.inputs_done() {
            for (c, (stream, _)) in &self.inputs {
                stream.expect_idle(&format!("detail convergecast from {c}"))?;
            }
            Ok(Step::Halt)
        } else if self.out.is_empty() {
            Ok(Step::Idle)
        } else {
            Ok(Step::Continue)
        }
    }

    fn output(self) -> Self::Output {
        self.inputs.into_iter().map(|(c, (_, v))| (c, v)).collect()
    }
}

fn run_cast<R: Detail>(
    net: &mut Network<'_>,
    tree: &BfsInfo,
    label: &str,
    own: Vec<Option<R>>,
) -> Result<Vec<BTreeMap<NodeId, Vec<Option<R>>>>> {
    let w = net.widths();
    let programs = tree.nodes.iter().zip(own).map(|(v, o)| DetailCast::new(v, o, w)).collect();
    net.run(label, programs)
}

/// CASE5 from 1-cut details, decided at the lowest common ancestor `x`: for
/// records `a`, `b` from different children and every ancestor `z` of `x`
/// between the deeper pivot and `x`, test `η(z) - 1 = (η(a) - 1) + (η(b) - 1)`.
pub fn detect_case5_candidates(net: &mut Network<'_>, tree: &BfsInfo, states: &[NodeState]) -> Result<Vec<Detection>> {
    let got = run_cast(net, tree, "convergecast:detail1", states.iter().map(candidate).collect())?;
    let mut out = Vec::new();
    for (s, per_child) in states.iter().zip(got) {
        let lists: Vec<Vec<Candidate>> = per_child.into_values().map(|v| v.into_iter().flatten().collect()).collect();
        for (ci, la) in lists.iter().enumerate() {
            for lb in &lists[ci + 1..] {
                for a in la {
                    for b in lb {
                        let lo = a.pivot_level.max(b.pivot_level);
                        for l in lo..=s.level() {
                            if s.eta_anc[l] as i64 - 1 == a.eta as i64 - 1 + b.eta as i64 - 1 {
                                let nodes = vec![s.view.ancestors[l], a.node, b.node];
                                out.push(Detection::new(CaseLabel::Case5, nodes, s.id()));
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(out)
}

/// CASE5 from 2-cut details, decided at the lowest common ancestor `x` of
/// the pair: the pair stays a 2-cut of `G_z` with the same `γ` for every `z`
/// from the pivot down to `x`, so each such `z` is tested.
pub fn detect_case5_pairs(
    net: &mut Network<'_>,
    tree: &BfsInfo,
    states: &[NodeState],
    details: Vec<Option<PairDetail>>,
) -> Result<Vec<Detection>> {
    let got = run_cast(net, tree, "convergecast:detail2", details)?;
    let mut out = Vec::new();
    for (s, per_child) in states.iter().zip(got) {
        for d in per_child.into_values().flatten().flatten() {
            if d.lca_level != s.level() {
                continue;
            }
            let h_a = d.eta as i64 - 1 - d.gamma as i64;
            let h_b = d.partner_eta as i64 - 1 - d.gamma as i64;
            for l in d.pivot_level..=s.level() {
                if l >= 1 && s.eta_anc[l] as i64 - 1 == h_a + h_b {
                    out.push(Detection::new(CaseLabel::Case5, vec![s.view.ancestors[l], d.node, d.partner], s.id()));
                }
            }
        }
    }
    Ok(out)
}

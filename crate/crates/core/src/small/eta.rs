//! Ancestor exchange, the `H` tables and `η(v) = |δ(desc v)|`.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::graph::{boundary, gamma, Graph, NodeId};
use crate::runtime::{pack, unpack, Network};
use crate::tree::broadcast::broadcast_t1;
use crate::tree::exchange::exchange;
use crate::tree::trsf::{trsf_compute, Sum};
use crate::tree::{BfsInfo, TreeView};

/// Everything one node knows after the size-1 stage.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NodeState {
    pub view: TreeView,
    /// Neighbors joined by non-tree edges, ascending.
    pub nontree: Vec<NodeId>,
    /// Ancestor list (root first, ending at the neighbor) of each non-tree neighbor.
    pub nbr_anc: BTreeMap<NodeId, Vec<NodeId>>,
    /// `η` of each non-tree neighbor's ancestors, aligned with `nbr_anc`.
    pub nbr_eta: BTreeMap<NodeId, Vec<u64>>,
    /// `H_a^{α(a,l)}`: neighbors `b` with `α(a,l) ∉ A(b)`.
    pub h_own: Vec<u64>,
    /// `H_{desc a}^{α(a,l)} = γ(desc a, desc α(a,l))`.
    pub h_desc: Vec<u64>,
    /// `η(α(a,l))` for `l = 0..=level`.
    pub eta_anc: Vec<u64>,
}

impl NodeState {
    pub fn id(&self) -> NodeId {
        self.view.id
    }

    pub fn level(&self) -> usize {
        self.view.level
    }

    pub fn eta(&self) -> u64 {
        self.eta_anc[self.view.level]
    }

    pub fn parent(&self) -> Option<NodeId> {
        self.view.parent
    }

    /// `α(b, l)` for a non-tree neighbor `b`, if `b` is deep enough.
    pub fn nbr_alpha(&self, b: NodeId, l: usize) -> Option<NodeId> {
        self.nbr_anc.get(&b).and_then(|a| a.get(l)).copied()
    }

    /// Whether `u` is an ancestor of the non-tree neighbor `b`.
    pub fn nbr_has_ancestor(&self, b: NodeId, u: NodeId, level_u: usize) -> bool {
        self.nbr_alpha(b, level_u) == Some(u)
    }
}

fn nontree_neighbors(g: &Graph, v: &TreeView) -> Vec<NodeId> {
    let mut out: Vec<NodeId> = g
        .neighbors(v.id)
        .filter(|&b| Some(b) != v.parent && !v.children.contains(&b))
        .collect();
    out.sort_unstable();
    out.dedup();
    out
}

/// `H_a^{α(a,l)}` from the ancestor lists of a's non-tree neighbors.
fn own_h(view: &TreeView, nbr_anc: &BTreeMap<NodeId, Vec<NodeId>>) -> Vec<u64> {
    (0..=view.level)
        .map(|l| {
            let v = view.ancestors[l];
            // The parent lacks only a itself; children contain every ancestor of a.
            let mut h = u64::from(l == view.level && view.parent.is_some());
            for anc in nbr_anc.values() {
                if anc.get(l) != Some(&v) {
                    h += 1;
                }
            }
            h
        })
        .collect()
}

/// Ancestor exchange and the local `H_a` rows.
pub fn preprocess_eta(
    net: &mut Network<'_>,
    tree: &BfsInfo,
) -> Result<Vec<(Vec<NodeId>, BTreeMap<NodeId, Vec<NodeId>>, Vec<u64>)>> {
    let g = net.graph();
    let wb = net.widths().id();
    let nontree: Vec<Vec<NodeId>> = tree.nodes.iter().map(|v| nontree_neighbors(g, v)).collect();
    let send = tree
        .nodes
        .iter()
        .zip(&nontree)
        .map(|(v, nt)| {
            let rec = pack(&v.ancestors.iter().map(|&a| a as u64).collect::<Vec<_>>(), wb)?;
            Ok(nt.iter().map(|&b| (b, rec.clone())).collect())
        })
        .collect::<Result<Vec<_>>>()?;
    let got = exchange(net, "exchange:ancestors", send, nontree.clone())?;
    tree.nodes
        .iter()
        .zip(nontree)
        .zip(got)
        .map(|((v, nt), recs)| {
            let nbr_anc = recs
                .into_iter()
                .map(|(b, bits)| Ok((b, unpack(&bits, wb)?.into_iter().map(|x| x as NodeId).collect())))
                .collect::<Result<BTreeMap<_, Vec<NodeId>>>>()?;
            let h = own_h(v, &nbr_anc);
            Ok((nt, nbr_anc, h))
        })
        .collect()
}

/// Runs the whole size-1 stage: ancestor exchange, `trsf:eta`, the η
/// broadcast down the tree and the η exchange with non-tree neighbors.
pub fn compute_eta(net: &mut Network<'_>, tree: &BfsInfo) -> Result<Vec<NodeState>> {
    let pre = preprocess_eta(net, tree)?;
    let atoms: Vec<Vec<Sum>> = pre.iter().map(|(_, _, h)| h.iter().map(|&x| Sum(x)).collect()).collect();
    let folded = trsf_compute(net, &tree.nodes, "trsf:eta", atoms)?;
    let h_desc: Vec<Vec<u64>> = folded.into_iter().map(|row| row.into_iter().map(|s| s.0).collect()).collect();
    let etas: Vec<u64> = tree.nodes.iter().map(|v| h_desc[v.id][v.level]).collect();
    let wc = net.widths().count();
    let down = broadcast_t1(net, &tree.nodes, "broadcast1:eta", &etas, wc)?;
    let eta_anc: Vec<Vec<u64>> = down
        .into_iter()
        .enumerate()
        .map(|(v, mut list)| {
            list.push(etas[v]);
            list
        })
        .collect();
    let send = pre
        .iter()
        .enumerate()
        .map(|(v, (nt, _, _))| {
            let rec = pack(&eta_anc[v], wc)?;
            Ok(nt.iter().map(|&b| (b, rec.clone())).collect())
        })
        .collect::<Result<Vec<_>>>()?;
    let expect = pre.iter().map(|(nt, _, _)| nt.clone()).collect();
    let got = exchange(net, "exchange:eta", send, expect)?;
    pre.into_iter()
        .zip(got)
        .enumerate()
        .map(|(v, ((nontree, nbr_anc, h_own), recs))| {
            let nbr_eta = recs
                .into_iter()
                .map(|(b, bits)| {
                    let list = unpack(&bits, wc)?;
                    if list.len() != nbr_anc[&b].len() {
                        return Err(Error::Protocol("exchange:eta: list length differs from ancestor list".into()));
                    }
                    Ok((b, list))
                })
                .collect::<Result<BTreeMap<_, _>>>()?;
            Ok(NodeState {
                view: tree.nodes[v].clone(),
                nontree,
                nbr_anc,
                nbr_eta,
                h_own,
                h_desc: h_desc[v].clone(),
                eta_anc: eta_anc[v].clone(),
            })
        })
        .collect()
}

/// Centralized `η(v) = |δ(desc v)|`.
pub fn eta_reference(g: &Graph, tree: &BfsInfo) -> Result<Vec<u64>> {
    (0..g.n()).map(|v| Ok(boundary(g, &tree.desc(v))?.len() as u64)).collect()
}

/// Centralized `H_{desc a}^v = γ(desc a, desc v)` for `v ∈ A(a)`.
pub fn h_desc_reference(g: &Graph, tree: &BfsInfo, a: NodeId) -> Result<Vec<u64>> {
    let da = tree.desc(a);
    tree.ancestors(a)
        .iter()
        .map(|&v| Ok(gamma(g, &da, &tree.desc(v))? as u64))
        .collect()
}

//! Local size-3 tests: CASE1, CASE2 and CASE4 from the η and `H` tables, and
//! CASE3, CASE6 and CASE7 from the sketches.

use std::collections::BTreeSet;

use crate::graph::NodeId;
use crate::report::{CaseLabel, Detection};
use crate::sketch::distributed::reduced_above_all;
use crate::sketch::{Sketch, SketchTables};
use crate::small::eta::NodeState;

fn i(x: u64) -> i64 {
    x as i64
}

/// CASE1: `η(v) = 3`.
pub fn detect_case1(states: &[NodeState]) -> Vec<Detection> {
    states
        .iter()
        .filter(|s| s.parent().is_some() && s.eta() == 3)
        .map(|s| Detection::new(CaseLabel::Case1, vec![s.id()], s.id()))
        .collect()
}

/// The 2-respect pattern for a 3-cut: `η(a) - 2 = η(b) - 1 = γ` or the mirror.
pub fn two_respect_3cut(eta_a: u64, eta_b: u64, g: u64) -> bool {
    let (a, b, g) = (i(eta_a), i(eta_b), i(g));
    (a - 2 == g && b - 1 == g) || (a - 1 == g && b - 2 == g)
}

/// The 3-respect equalities for `v_1, v_2, v_3` given `η(v_i)` and
/// `γ_ij = γ(desc v_i, desc v_j)`.
pub fn three_respect(eta: [u64; 3], g12: u64, g13: u64, g23: u64) -> bool {
    i(eta[0]) - 1 == i(g12) + i(g13) && i(eta[1]) - 1 == i(g12) + i(g23) && i(eta[2]) - 1 == i(g13) + i(g23)
}

/// CASE2: nested pair decided at the deeper node `x` for each proper
/// ancestor `v ≠ r` with `γ = H_{desc x}^v`.
pub fn detect_case2(states: &[NodeState]) -> Vec<Detection> {
    let mut out = Vec::new();
    for s in states {
        for l in 1..s.level() {
            if two_respect_3cut(s.eta_anc[l], s.eta(), s.h_desc[l]) {
                out.push(Detection::new(CaseLabel::Case2, vec![s.view.ancestors[l], s.id()], s.id()));
            }
        }
    }
    out
}

/// CASE4: three nested nodes `z ⊃ y ⊃ x`, decided at `x`. `lists[j][l]` is
/// `H_{desc α(x,j)}^{α(x,l)}` as broadcast by the ancestor at level `j`.
///
/// Edges from `desc x` leaving `desc z` lie in all three boundaries and would
/// stay in the cut, so `H_{desc x}^z = 0` is required as well.
pub fn detect_case4(s: &NodeState, lists: &[Vec<u64>]) -> Vec<Detection> {
    let mut out = Vec::new();
    let lx = s.level();
    for j in 2..lx {
        for l in 1..j {
            let (hyx, hzx, hzy) = (s.h_desc[j], s.h_desc[l], lists[j][l]);
            if hzx == 0 && three_respect([s.eta(), s.eta_anc[j], s.eta_anc[l]], hyx, hzx, hzy) {
                let nodes = vec![s.view.ancestors[l], s.view.ancestors[j], s.id()];
                out.push(Detection::new(CaseLabel::Case4, nodes, s.id()));
            }
        }
    }
    out
}

/// Candidates of a sketch: non-root nodes outside `ρ(source)`.
fn candidates<'a>(sk: &'a Sketch, spine: &'a [NodeId]) -> impl Iterator<Item = NodeId> + 'a {
    sk.nodes.iter().filter(move |(u, e)| e.parent.is_some() && !spine.contains(u)).map(|(&u, _)| u)
}

fn disjoint(sk: &Sketch, x: NodeId, y: NodeId) -> bool {
    x != y && !sk.is_ancestor(x, y) && !sk.is_ancestor(y, x)
}

/// CASE3: `v_1 = a` scans `S_3(a)` for a disjoint partner.
pub fn detect_case3(s: &NodeState, t: &SketchTables) -> Vec<Detection> {
    if s.parent().is_none() {
        return Vec::new();
    }
    let sk = t.own();
    candidates(sk, &s.view.ancestors)
        .filter(|&u| two_respect_3cut(s.eta(), sk.nodes[&u].eta, sk.nodes[&u].gamma))
        .map(|u| Detection::new(CaseLabel::Case3, vec![s.id(), u], s.id()))
        .collect()
}

/// CASE6, both sub-cases.
///
/// A: `a` pairs nodes of `S_3(a)` assuming `γ(x, y) = 0`; the equality
/// `η(x) - 1 = γ(x, a)` forces that.
/// B: for each ancestor `v`, `a` takes `x` from a neighbor's ancestor sketch
/// `S_3(x)` and reads `γ(x, y)` there.
pub fn detect_case6(s: &NodeState, t: &SketchTables) -> Vec<Detection> {
    let mut out = Vec::new();
    if s.parent().is_some() {
        let sk = t.own();
        let good: Vec<NodeId> = candidates(sk, &s.view.ancestors)
            .filter(|u| sk.nodes[u].eta == sk.nodes[u].gamma + 1)
            .collect();
        for (idx, &x) in good.iter().enumerate() {
            for &y in &good[idx + 1..] {
                let (ex, ey) = (&sk.nodes[&x], &sk.nodes[&y]);
                if three_respect([s.eta(), ex.eta, ey.eta], ex.gamma, ey.gamma, 0) && disjoint(sk, x, y) {
                    out.push(Detection::new(CaseLabel::Case6, vec![s.id(), x, y], s.id()));
                }
            }
        }
    }
    let mut remote: BTreeSet<NodeId> = BTreeSet::new();
    let mut remote_sketches: Vec<&Sketch> = Vec::new();
    for list in t.neighbors.values() {
        for sk in list.iter().skip(1) {
            if remote.insert(sk.source) {
                remote_sketches.push(sk);
            }
        }
    }
    for l in 1..=s.level() {
        let sv = &t.ancestors[l];
        let v = sv.source;
        let spine = &s.view.ancestors[..=l];
        for sx in &remote_sketches {
            let x = sx.source;
            let Some(ex) = sv.nodes.get(&x) else { continue };
            if spine.contains(&x) {
                continue;
            }
            for y in candidates(sx, &[]) {
                let (Some(ey), Some(gxy)) = (sv.nodes.get(&y), sx.gamma(y)) else { continue };
                if !three_respect([s.eta_anc[l], ex.eta, ey.eta], ex.gamma, ey.gamma, gxy) {
                    continue;
                }
                if !spine.contains(&y) && disjoint(sv, x, y) {
                    out.push(Detection::new(CaseLabel::Case6, vec![v, x, y], s.id()));
                }
            }
        }
    }
    out
}

/// CASE7: `x` scans the reduced sketch `S_2(v ∖ x)` of each proper ancestor `v`.
pub fn detect_case7(s: &NodeState, t: &SketchTables) -> Vec<Detection> {
    let mut out = Vec::new();
    let passes = |l: usize| i(s.eta()) - 1 == i(s.h_desc[l]);
    if !(1..s.level()).any(passes) {
        return out;
    }
    let reduced = reduced_above_all(s, &t.reduced_chain);
    for l in (1..s.level()).filter(|&l| passes(l)) {
        let hvx = s.h_desc[l];
        let r = &reduced[l];
        for u in candidates(r, &s.view.ancestors) {
            let e = &r.nodes[&u];
            if i(e.eta) - 1 == i(e.gamma) && i(s.eta_anc[l]) - 1 == i(hvx) + i(e.gamma) {
                out.push(Detection::new(CaseLabel::Case7, vec![u, s.view.ancestors[l], s.id()], s.id()));
            }
        }
    }
    out
}

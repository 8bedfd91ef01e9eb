//! Local 1-cut and 2-cut tests on top of the η, `H` and ζ tables.

use crate::report::{CaseLabel, Detection};
use crate::small::eta::NodeState;
use crate::small::zeta::{Tagged, Zeta};

/// `(π(a), a)` is a bridge iff `η(a) = 1`.
pub fn detect_1cuts(states: &[NodeState]) -> Vec<Detection> {
    states
        .iter()
        .filter(|s| s.parent().is_some() && s.eta() == 1)
        .map(|s| Detection::new(CaseLabel::OneRespect, vec![s.id()], s.id()))
        .collect()
}

/// Every 2-cut, decided at the deeper tree endpoint.
///
/// * `η(a) = 2`: `δ(desc a)` respects the tree once.
/// * nested: for a proper ancestor `v`, `η(v) - H_{desc a}^v = 1 = η(a) - H_{desc a}^v`.
/// * disjoint: `Z_{desc a}^{α(a,l)} = ⟨w, π(w), η(w), γ⟩` with `η(a) - γ = 1 = η(w) - γ`.
pub fn detect_2cuts(states: &[NodeState], zeta: &[Vec<Zeta>]) -> Vec<Detection> {
    let mut out = Vec::new();
    for s in states {
        if s.parent().is_none() {
            continue;
        }
        let a = s.id();
        let eta_a = s.eta() as i64;
        if eta_a == 2 {
            out.push(Detection::new(CaseLabel::OneRespect, vec![a], a));
        }
        for l in 1..=s.level() {
            let v = s.view.ancestors[l];
            if v != a {
                let h = s.h_desc[l] as i64;
                if s.eta_anc[l] as i64 - h == 1 && eta_a - h == 1 {
                    out.push(Detection::new(CaseLabel::TwoNested, vec![v, a], a));
                }
            }
            if let Tagged::Tuple { key, gamma } = &zeta[a][l] {
                let g = *gamma as i64;
                if eta_a - g == 1 && key.eta as i64 - g == 1 {
                    out.push(Detection::new(CaseLabel::TwoDisjoint, vec![key.w, a], a));
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::{generate, Family, GenParams};
    use crate::graph::{EdgeSet, Graph, NodeId};
    use crate::oracle::min_cut_oracle;
    use crate::report::collect_cuts;
    use crate::runtime::{Network, SimulatorConfig};
    use crate::small::eta::compute_eta;
    use crate::small::zeta::compute_zeta;
    use crate::tree::BfsInfo;

    fn cuts(g: &Graph, root: NodeId) -> (Vec<EdgeSet>, Vec<EdgeSet>) {
        let t = BfsInfo::centralized(g, root);
        let mut net = Network::new(g, SimulatorConfig::default()).unwrap();
        let s = compute_eta(&mut net, &t).unwrap();
        let z = compute_zeta(&mut net, &t, &s).unwrap();
        let one = collect_cuts(g, &t, &detect_1cuts(&s)).unwrap();
        let two = collect_cuts(g, &t, &detect_2cuts(&s, &z)).unwrap();
        let set = |v: Vec<crate::report::CutReport>| v.into_iter().map(|c| EdgeSet::from_pairs(c.cut_edges)).collect();
        (set(one), set(two))
    }

    #[test]
    fn c4_all_pairs_every_root() {
        let g = generate(Family::Cycle, &GenParams::new(4)).unwrap();
        for root in 0..4 {
            let (one, two) = cuts(&g, root);
            assert!(one.is_empty());
            assert_eq!(two.len(), 6);
        }
    }

    #[test]
    fn p4_bridges() {
        let g = generate(Family::Path, &GenParams::new(4)).unwrap();
        let (one, _) = cuts(&g, 0);
        assert_eq!(one.len(), 3);
    }

    #[test]
    fn barbell_bridge() {
        let g = generate(Family::Barbell, &GenParams::new(8)).unwrap();
        let oracle = min_cut_oracle(&g).unwrap();
        assert_eq!(oracle.lambda, 1);
        for root in 0..8 {
            assert_eq!(cuts(&g, root).0, oracle.min_cuts);
        }
    }

    #[test]
    fn theta_graph_two_cuts() {
        // Three internally disjoint 0-5 paths of lengths 2, 2 and 3.
        let g = Graph::connected(6, [(0, 1), (1, 5), (0, 2), (2, 5), (0, 3), (3, 4), (4, 5)]).unwrap();
        let oracle = min_cut_oracle(&g).unwrap();
        assert_eq!(oracle.lambda, 2);
        for root in 0..6 {
            assert_eq!(cuts(&g, root).1, oracle.min_cuts, "root {root}");
        }
    }

    #[test]
    fn k4_has_no_small_cuts() {
        let g = generate(Family::Complete, &GenParams::new(4)).unwrap();
        let (one, two) = cuts(&g, 0);
        assert!(one.is_empty() && two.is_empty());
    }
}

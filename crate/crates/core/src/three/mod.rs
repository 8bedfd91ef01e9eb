//! Size-3 detection, run once the graph is known to have no cut of size at
//! most two.

pub mod cases;
pub mod layered;

use crate::error::Result;
use crate::report::Detection;
use crate::runtime::Network;
use crate::sketch::compute_sketches;
use crate::small::eta::NodeState;
use crate::tree::broadcast::broadcast_t2;
use crate::tree::BfsInfo;

pub use cases::{three_respect, two_respect_3cut};

/// Every size-3 detection over all seven cases.
pub fn detect_3cuts(net: &mut Network<'_>, tree: &BfsInfo, states: &[NodeState]) -> Result<Vec<Detection>> {
    let mut out = cases::detect_case1(states);
    out.extend(cases::detect_case2(states));

    let wc = net.widths().count();
    let h_lists: Vec<Vec<u64>> = states.iter().map(|s| s.h_desc.clone()).collect();
    let lists = broadcast_t2(net, &tree.nodes, "broadcast2:h", &h_lists, wc)?;
    for (s, l) in states.iter().zip(&lists) {
        out.extend(cases::detect_case4(s, l));
    }

    let tables = compute_sketches(net, tree, states)?;
    for (s, t) in states.iter().zip(&tables) {
        out.extend(cases::detect_case3(s, t));
        out.extend(cases::detect_case6(s, t));
        out.extend(cases::detect_case7(s, t));
    }

    let (local, details) = layered::detect_case5_layered(net, tree, states, &lists)?;
    out.extend(local);
    out.extend(layered::detect_case5_candidates(net, tree, states)?);
    out.extend(layered::detect_case5_pairs(net, tree, states, details)?);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use std::collections::BTreeSet;

    use super::*;
    use crate::generate::{generate, Family, GenParams};
    use crate::graph::{EdgeSet, Graph, NodeId};
    use crate::oracle::min_cut_oracle;
    use crate::report::collect_cuts;
    use crate::runtime::SimulatorConfig;
    use crate::small::eta::compute_eta;

    fn detected(g: &Graph, root: NodeId) -> BTreeSet<EdgeSet> {
        let t = BfsInfo::centralized(g, root);
        let mut net = Network::new(g, SimulatorConfig { strict_bandwidth: true, ..Default::default() }).unwrap();
        let s = compute_eta(&mut net, &t).unwrap();
        let d = detect_3cuts(&mut net, &t, &s).unwrap();
        collect_cuts(g, &t, &d).unwrap().into_iter().map(|c| EdgeSet::from_pairs(c.cut_edges)).collect()
    }

    fn check(g: &Graph, roots: impl IntoIterator<Item = NodeId>) {
        let o = min_cut_oracle(g).unwrap();
        assert_eq!(o.lambda, 3);
        let want: BTreeSet<EdgeSet> = o.min_cuts.into_iter().collect();
        for r in roots {
            assert_eq!(detected(g, r), want, "root {r}: {}", g.to_edge_list());
        }
    }

    #[test]
    fn k4_and_prism() {
        let k4 = generate(Family::Complete, &GenParams::new(4)).unwrap();
        check(&k4, 0..4);
        let prism = generate(Family::Prism, &GenParams::new(8)).unwrap();
        check(&prism, 0..8);
    }

    #[test]
    fn random_three_connected() {
        let mut tried = 0;
        for seed in 0..400 {
            let g = match generate(Family::RandomConnected, &GenParams::new(9).seed(seed).p(0.4)) {
                Ok(g) => g,
                Err(_) => continue,
            };
            if min_cut_oracle(&g).unwrap().lambda != 3 {
                continue;
            }
            tried += 1;
            check(&g, [0, 4, 8]);
        }
        assert!(tried > 10, "only {tried} samples");
    }
}

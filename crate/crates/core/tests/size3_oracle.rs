//! Size-3 detection against the exhaustive oracle on every root of a few
//! hundred λ = 3 graphs: no unsound detection, no missed cut, and each cut is
//! reported under the case its tree edges dictate.

use std::collections::BTreeMap;

use mincut::fixtures::{candidate, FIXTURE_ORACLE_LIMIT};
use mincut::oracle::min_cut_oracle_with_limit;
use mincut::report::{classify_cut, CaseLabel};
use mincut::runtime::Network;
use mincut::small::eta::compute_eta;
use mincut::three::detect_3cuts;
use mincut::{BfsInfo, SimulatorConfig};

#[test]
fn sound_and_complete_on_lambda3_candidates() {
    let mut seen: BTreeMap<CaseLabel, usize> = BTreeMap::new();
    let mut failures = Vec::new();
    let mut graphs = 0;
    for i in 0..1500u64 {
        let Some(g) = candidate(i) else { continue };
        let o = min_cut_oracle_with_limit(&g, FIXTURE_ORACLE_LIMIT).unwrap();
        if o.lambda != 3 {
            continue;
        }
        graphs += 1;
        for root in 0..g.n() {
            let t = BfsInfo::centralized(&g, root);
            let mut net = Network::new(&g, SimulatorConfig::default()).unwrap();
            let states = compute_eta(&mut net, &t).unwrap();
            let dets = detect_3cuts(&mut net, &t, &states).unwrap();
            for d in &dets {
                let c = d.cut(&g, &t).unwrap();
                if c.len() != 3 || classify_cut(&t, &c) != Some(d.case) {
                    failures.push(format!("seed {i} root {root}: unsound {d:?}"));
                }
            }
            for c in &o.min_cuts {
                let case = classify_cut(&t, c).unwrap();
                *seen.entry(case).or_default() += 1;
                if !dets.iter().any(|d| d.case == case && &d.cut(&g, &t).unwrap() == c) {
                    failures.push(format!("seed {i} root {root}: missed {case} {:?}", c.pairs()));
                }
            }
        }
    }
    assert!(graphs >= 200, "only {graphs} λ=3 graphs");
    assert!(failures.is_empty(), "{failures:#?}");
    for case in CaseLabel::SIZE3 {
        assert!(seen.get(&case).copied().unwrap_or(0) > 0, "{case} never exercised");
    }
}

//! Centralized ground truth: exhaustive min-cut enumeration for small graphs
//! and a max-flow edge connectivity for larger ones.

use std::collections::{BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{EdgeSet, Graph};

pub const DEFAULT_ORACLE_LIMIT: usize = 16;
pub const ORACLE_LIMIT_ENV: &str = "MINCUT_ORACLE_LIMIT";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleResult {
    pub lambda: usize,
    /// Every distinct minimum cut-set, canonically ordered.
    pub min_cuts: Vec<EdgeSet>,
}

/// Oracle cap, honouring `MINCUT_ORACLE_LIMIT` when it parses.
pub fn oracle_limit() -> usize {
    std::env::var(ORACLE_LIMIT_ENV)
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .unwrap_or(DEFAULT_ORACLE_LIMIT)
}

/// Exhaustive oracle with the configured cap.
pub fn min_cut_oracle(g: &Graph) -> Result<OracleResult> {
    min_cut_oracle_with_limit(g, oracle_limit())
}

/// Enumerates every vertex subset that leaves vertex 0 outside (2^(n-1) of them)
/// and keeps the distinct boundaries of minimum size.
pub fn min_cut_oracle_with_limit(g: &Graph, limit: usize) -> Result<OracleResult> {
    g.validate_connected()?;
    let n = g.n();
    if n > limit || n > 30 {
        return Err(Error::Capacity { n, limit: limit.min(30) });
    }
    if n == 1 {
        return Ok(OracleResult { lambda: 0, min_cuts: Vec::new() });
    }
    let edges: Vec<(usize, usize)> = g.edges().to_vec();
    let mut best = usize::MAX;
    let mut masks: Vec<u32> = Vec::new();
    // Subsets of {1..n-1}, shifted so bit i stands for vertex i+1.
    for sub in 1u32..(1u32 << (n - 1)) {
        let mask = sub << 1;
        let mut size = 0;
        for &(u, v) in &edges {
            if (mask >> u & 1) != (mask >> v & 1) {
                size += 1;
                if size > best {
                    break;
                }
            }
        }
        if size < best {
            best = size;
            masks.clear();
        }
        if size == best {
            masks.push(mask);
        }
    }
    let mut cuts = BTreeSet::new();
    for mask in masks {
        cuts.insert(EdgeSet::from_pairs(
            edges.iter().copied().filter(|&(u, v)| (mask >> u & 1) != (mask >> v & 1)),
        ));
    }
    Ok(OracleResult { lambda: best, min_cuts: cuts.into_iter().collect() })
}

/// Edge connectivity via unit-capacity max-flow from vertex 0 to every other
/// vertex (Edmonds-Karp). Works at any size; no enumeration.
pub fn edge_connectivity(g: &Graph) -> Result<usize> {
    g.validate_connected()?;
    let n = g.n();
    if n == 1 {
        return Ok(0);
    }
    let mut best = g.min_degree();
    for t in 1..n {
        best = best.min(max_flow(g, 0, t, best));
    }
    Ok(best)
}

/// Unit-capacity undirected max-flow, stopping early once `cap` is reached.
fn max_flow(g: &Graph, s: usize, t: usize, cap: usize) -> usize {
    // Each undirected edge is two arcs with capacity 1; flow[e] in {-1,0,1}
    // measured along the normalized orientation.
    let mut flow = vec![0i8; g.m()];
    let mut total = 0;
    while total < cap {
        let mut prev: Vec<Option<(usize, usize)>> = vec![None; g.n()];
        let mut seen = vec![false; g.n()];
        seen[s] = true;
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            if u == t {
                break;
            }
            for p in g.ports(u) {
                let (a, _) = g.edge(p.edge);
                let dir: i8 = if a == u { 1 } else { -1 };
                if !seen[p.neighbor] && flow[p.edge] != dir {
                    seen[p.neighbor] = true;
                    prev[p.neighbor] = Some((u, p.edge));
                    queue.push_back(p.neighbor);
                }
            }
        }
        if !seen[t] {
            break;
        }
        let mut v = t;
        while let Some((u, e)) = prev[v] {
            let (a, _) = g.edge(e);
            flow[e] += if a == u { 1 } else { -1 };
            v = u;
        }
        total += 1;
    }
    total
}

/// Canonical sort and dedupe of a cut list.
pub fn canonical_cuts(cuts: impl IntoIterator<Item = EdgeSet>) -> Vec<EdgeSet> {
    cuts.into_iter().collect::<BTreeSet<_>>().into_iter().collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::{generate, Family, GenParams};

    fn fam(f: Family, n: usize) -> Graph {
        generate(f, &GenParams::new(n)).unwrap()
    }

    #[test]
    fn path_bridges() {
        let r = min_cut_oracle(&fam(Family::Path, 4)).unwrap();
        assert_eq!(r.lambda, 1);
        assert_eq!(
            r.min_cuts,
            vec![
                EdgeSet::from_pairs([(0, 1)]),
                EdgeSet::from_pairs([(1, 2)]),
                EdgeSet::from_pairs([(2, 3)])
            ]
        );
    }

    #[test]
    fn cycle_pairs() {
        let r = min_cut_oracle(&fam(Family::Cycle, 5)).unwrap();
        assert_eq!(r.lambda, 2);
        assert_eq!(r.min_cuts.len(), 10);
    }

    #[test]
    fn prism_is_three_connected() {
        let g = fam(Family::Prism, 6);
        let r = min_cut_oracle(&g).unwrap();
        assert_eq!(r.lambda, 3);
        // Six vertex stars plus the matching.
        assert_eq!(r.min_cuts.len(), 7);
        assert_eq!(edge_connectivity(&g).unwrap(), 3);
    }

    #[test]
    fn capacity_error() {
        let g = fam(Family::Cycle, 20);
        assert!(matches!(min_cut_oracle_with_limit(&g, 16), Err(Error::Capacity { .. })));
        assert_eq!(edge_connectivity(&g).unwrap(), 2);
    }

    #[test]
    fn flow_matches_enumeration() {
        for n in 2..7 {
            for f in [Family::Path, Family::Cycle, Family::Complete] {
                if f == Family::Cycle && n < 3 {
                    continue;
                }
                let g = fam(f, n);
                assert_eq!(edge_connectivity(&g).unwrap(), min_cut_oracle(&g).unwrap().lambda);
            }
        }
    }
}

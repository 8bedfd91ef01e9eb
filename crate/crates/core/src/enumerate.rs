//! Exhaustive small-graph corpora: connected graphs up to isomorphism and the
//! spanning trees of a graph.

use std::collections::HashMap;

use petgraph::algo::is_isomorphic;

use crate::graph::{Edge, Graph};

/// Invariant used to bucket candidates before the exact isomorphism check:
/// edge count plus the sorted multiset of (degree, sorted neighbor degrees).
fn invariant(n: usize, edges: &[Edge]) -> Vec<u64> {
    let mut deg = vec![0u64; n];
    let mut adj = vec![Vec::new(); n];
    for &(u, v) in edges {
        deg[u] += 1;
        deg[v] += 1;
        adj[u].push(v);
        adj[v].push(u);
    }
    let mut sig: Vec<u64> = (0..n)
        .map(|v| {
            let mut nd: Vec<u64> = adj[v].iter().map(|&w| deg[w]).collect();
            nd.sort_unstable();
            nd.iter().fold(deg[v], |acc, d| acc.wrapping_mul(31).wrapping_add(*d))
        })
        .collect();
    sig.sort_unstable();
    sig.insert(0, edges.len() as u64);
    sig
}

/// All connected simple graphs on exactly `n` vertices, one per isomorphism class.
///
/// Every connected graph has a vertex whose removal keeps it connected, so the
/// classes on `n` vertices are reached by attaching a new vertex to a nonempty
/// neighborhood in each class on `n - 1` vertices.
pub fn connected_graphs(n: usize) -> Vec<Graph> {
    let mut level: Vec<Graph> = vec![Graph::new(1, []).unwrap()];
    for k in 2..=n {
        let mut buckets: HashMap<Vec<u64>, Vec<(Graph, petgraph::graph::UnGraph<(), ()>)>> = HashMap::new();
        let mut next = Vec::new();
        for g in &level {
            for mask in 1u32..(1 << (k - 1)) {
                let mut edges = g.edges().to_vec();
                edges.extend((0..k - 1).filter(|&u| mask >> u & 1 == 1).map(|u| (u, k - 1)));
                let key = invariant(k, &edges);
                let cand = Graph::new(k, edges).unwrap();
                let pg = cand.to_petgraph();
                let bucket = buckets.entry(key).or_default();
                if bucket.iter().any(|(_, other)| is_isomorphic(other, &pg)) {
                    continue;
                }
                bucket.push((cand.clone(), pg));
                next.push(cand);
            }
        }
        level = next;
    }
    if n == 0 {
        Vec::new()
    } else {
        level
    }
}

/// Connected graphs with `2 <= n <= max_n`, up to isomorphism.
pub fn connected_graphs_up_to(max_n: usize) -> Vec<Graph> {
    (2..=max_n).flat_map(connected_graphs).collect()
}

/// Every spanning tree of `g`, each as a parent array rooted at `root`
/// (`parent[root] == None`). Enumerated by include/exclude over edges with a
/// union-find feasibility check, so the count is exact.
pub fn spanning_trees(g: &Graph, root: usize) -> Vec<Vec<Option<usize>>> {
    let n = g.n();
    let mut out = Vec::new();
    let mut chosen = Vec::new();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut x = x;
        while p[x] != x {
            x = p[x];
        }
        x
    }
    fn rec(g: &Graph, idx: usize, chosen: &mut Vec<Edge>, out: &mut Vec<Vec<Edge>>) {
        let n = g.n();
        if chosen.len() == n - 1 {
            out.push(chosen.clone());
            return;
        }
        if idx == g.m() || g.m() - idx < n - 1 - chosen.len() {
            return;
        }
        let (u, v) = g.edge(idx);
        let mut p: Vec<usize> = (0..n).collect();
        for &(a, b) in chosen.iter() {
            let (ra, rb) = (find(&mut p, a), find(&mut p, b));
            p[ra] = rb;
        }
        if find(&mut p, u) != find(&mut p, v) {
            chosen.push((u, v));
            rec(g, idx + 1, chosen, out);
            chosen.pop();
        }
        rec(g, idx + 1, chosen, out);
    }
    let mut edge_sets = Vec::new();
    rec(g, 0, &mut chosen, &mut edge_sets);
    for set in edge_sets {
        let mut adj = vec![Vec::new(); n];
        for (u, v) in set {
            adj[u].push(v);
            adj[v].push(u);
        }
        let mut parent = vec![None; n];
        let mut seen = vec![false; n];
        seen[root] = true;
        let mut stack = vec![root];
        while let Some(u) = stack.pop() {
            for &w in &adj[u] {
                if !seen[w] {
                    seen[w] = true;
                    parent[w] = Some(u);
                    stack.push(w);
                }
            }
        }
        out.push(parent);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::{generate, Family, GenParams};

    #[test]
    fn class_counts_match_known_sequence() {
        // Connected graphs on n unlabeled vertices: 1, 1, 2, 6, 21, 112.
        let counts: Vec<usize> = (1..=6).map(|n| connected_graphs(n).len()).collect();
        assert_eq!(counts, vec![1, 1, 2, 6, 21, 112]);
    }

    #[test]
    fn spanning_tree_counts() {
        // Cayley: K4 has 16 spanning trees; C5 has 5.
        let k4 = generate(Family::Complete, &GenParams::new(4)).unwrap();
        assert_eq!(spanning_trees(&k4, 0).len(), 16);
        let c5 = generate(Family::Cycle, &GenParams::new(5)).unwrap();
        assert_eq!(spanning_trees(&c5, 2).len(), 5);
    }
}

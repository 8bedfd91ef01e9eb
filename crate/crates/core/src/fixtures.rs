//! Deterministic search for λ = 3 graphs whose minimum cuts exercise a given
//! size-3 case under a given root.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::generate::{generate, Family, GenParams};
use crate::graph::{Graph, NodeId};
use crate::oracle::min_cut_oracle_with_limit;
use crate::report::{classify_cut, CaseLabel};
use crate::tree::BfsInfo;

/// Largest graph the fixture search hands to the exhaustive oracle.
pub const FIXTURE_ORACLE_LIMIT: usize = 22;

/// A graph together with the roots under which one of its minimum cuts has
/// the requested structure.
#[derive(Debug, Clone)]
pub struct Fixture {
    pub name: String,
    pub graph: Graph,
    pub case: CaseLabel,
    pub roots: Vec<NodeId>,
}

/// A ring of small cliques joined by one single link and otherwise double
/// links, plus a few random chords. Most draws have λ = 3 with cuts that
/// cross the ring at the single link.
pub fn ring_of_cliques(seed: u64) -> Option<Graph> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let k = rng.gen_range(3..=5);
    let mut sizes: Vec<usize> = (0..k).map(|_| *[1usize, 3, 4].choose(&mut rng).unwrap()).collect();
    while sizes.iter().sum::<usize>() > 14 {
        let i = rng.gen_range(0..k);
        sizes[i] = 1;
    }
    let mut start = vec![0];
    for s in &sizes {
        start.push(start.last().unwrap() + s);
    }
    let n = start[k];
    let mut edges = Vec::new();
    for b in 0..k {
        for u in start[b]..start[b + 1] {
            for v in u + 1..start[b + 1] {
                edges.push((u, v));
            }
        }
    }
    let single = rng.gen_range(0..k);
    for b in 0..k {
        let c = (b + 1) % k;
        let mult = if b == single { 1 } else { 2 };
        let mut used = BTreeSet::new();
        for _ in 0..mult {
            let u = rng.gen_range(start[b]..start[b + 1]);
            let v = rng.gen_range(start[c]..start[c + 1]);
            used.insert((u.min(v), u.max(v)));
        }
        edges.extend(used);
    }
    for _ in 0..rng.gen_range(0..3) {
        let u = rng.gen_range(0..n);
        let v = rng.gen_range(0..n);
        if u != v {
            edges.push((u.min(v), u.max(v)));
        }
    }
    edges.sort_unstable();
    edges.dedup();
    Graph::connected(n, edges).ok()
}

/// A Hamiltonian cycle plus a random perfect matching on `n` (even) vertices.
pub fn cycle_plus_matching(n: usize, seed: u64) -> Option<Graph> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(&mut rng);
    let mut edges: Vec<(usize, usize)> = (0..n).map(|i| (i.min((i + 1) % n), i.max((i + 1) % n))).collect();
    for pair in perm.chunks(2) {
        edges.push((pair[0].min(pair[1]), pair[0].max(pair[1])));
    }
    edges.sort_unstable();
    edges.dedup();
    Graph::connected(n, edges).ok()
}

/// Two squared cycles `C_s^2` and `C_t^2` joined by exactly three edges
/// `(t_0, s_0)`, `(s_0, t_{t/2})` and `(t_{t/2}, s_{s/2})`. Rooted at `t_0`
/// the BFS path zig-zags between the sides, so the unique minimum cut
/// contains three nested tree edges.
pub fn zigzag(s: usize, t: usize) -> Option<Graph> {
    let mut edges = Vec::new();
    for (base, len) in [(0, s), (s, t)] {
        for i in 0..len {
            for d in [1, 2] {
                let j = (i + d) % len;
                edges.push(((base + i).min(base + j), (base + i).max(base + j)));
            }
        }
    }
    edges.extend([(0, s), (0, s + t / 2), (s / 2, s + t / 2)]);
    edges.sort_unstable();
    edges.dedup();
    Graph::connected(s + t, edges).ok()
}

/// Candidate graphs for seed `i`: three zig-zag graphs first, then rotating through ring-of-cliques, cubic
/// cycle-plus-matching and sparse random draws.
pub fn candidate(i: u64) -> Option<Graph> {
    if i < 3 {
        return zigzag(10 + i as usize, 10);
    }
    match i % 3 {
        0 => ring_of_cliques(i / 3),
        1 => cycle_plus_matching(8 + 2 * (i / 3 % 5) as usize, i),
        _ => {
            let n = 7 + (i / 3 % 6) as usize;
            generate(Family::RandomConnected, &GenParams::new(n).seed(i).p(0.35)).ok()
        }
    }
}

/// Roots under which some minimum cut of `g` has class `case`, if `λ(g) = 3`.
pub fn roots_with_case(g: &Graph, case: CaseLabel) -> Result<Vec<NodeId>> {
    let o = min_cut_oracle_with_limit(g, FIXTURE_ORACLE_LIMIT)?;
    if o.lambda != 3 {
        return Ok(Vec::new());
    }
    Ok((0..g.n())
        .filter(|&r| {
            let t = BfsInfo::centralized(g, r);
            o.min_cuts.iter().any(|c| classify_cut(&t, c) == Some(case))
        })
        .collect())
}

/// The first `count` candidates exhibiting `case`, scanning at most `budget` seeds.
pub fn find_fixtures(case: CaseLabel, count: usize, budget: u64) -> Result<Vec<Fixture>> {
    let mut out = Vec::new();
    for i in 0..budget {
        let Some(g) = candidate(i) else { continue };
        if g.n() > FIXTURE_ORACLE_LIMIT {
            continue;
        }
        let roots = roots_with_case(&g, case)?;
        if roots.is_empty() {
            continue;
        }
        out.push(Fixture { name: format!("{}-seed{i}", case.as_str()), graph: g, case, roots });
        if out.len() == count {
            break;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ring_draws_are_deterministic() {
        assert_eq!(ring_of_cliques(7).map(|g| g.to_edge_list()), ring_of_cliques(7).map(|g| g.to_edge_list()));
    }
}

//! Exhaustive checks of the tree characterizations of small induced cuts and
//! of the cut-space identity `δ(A ⊕ B) = δ(A) ⊕ δ(B)`.
//!
//! For a rooted spanning tree `T` and non-root nodes `v_i`, write `t_i` for the
//! parent edge of `v_i`, `D_i = desc(v_i)` and `X = D_1 ⊕ … ⊕ D_k`. Statement
//! P1 is always `δ(X)` equal to the tree edges (plus one non-tree edge for the
//! 2-respecting 3-cut); P2 is the arithmetic condition on `|δ(D_i)|` and
//! `γ(D_i, D_j)`. P1 is evaluated directly from `δ(X)`, never through the
//! identity it is being compared against.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{boundary, Graph, NodeId, VertexSet};
use crate::tree::BfsInfo;

/// Largest graph handled by the mask representation.
pub const MAX_LEMMA_N: usize = 12;

/// Which characterization is being checked.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Lemma {
    /// `{t_u, t_v} = δ(D_u ⊕ D_v)` iff `|δ(D_u)| = |δ(D_v)| = γ + 1`.
    TwoCut,
    /// `{t_1, t_2, e} = δ(D_1 ⊕ D_2)` for a non-tree `e` iff
    /// `|δ(D_1)| - 2 = |δ(D_2)| - 1 = γ` or the mirror.
    ThreeCutTwoRespect,
    /// `{t_1, t_2, t_3} = δ(D_1 ⊕ D_2 ⊕ D_3)` iff
    /// `|δ(D_i)| - 1 = Σ_{j≠i} γ(D_i, D_j)` for every `i`, taken literally.
    ThreeRespect,
    /// The same with the extra condition that no edge lies in all three
    /// boundaries. Such an edge adds one to every right-hand side while the
    /// equalities still balance, so the literal form admits cuts of size
    /// `3 + 4τ` with `τ` common edges.
    ThreeRespectNoCommonEdge,
}

impl Lemma {
    pub const ALL: [Lemma; 4] =
        [Lemma::TwoCut, Lemma::ThreeCutTwoRespect, Lemma::ThreeRespect, Lemma::ThreeRespectNoCommonEdge];
}

/// A tree and node tuple where P1 and P2 disagree.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    pub lemma: Lemma,
    pub edges: Vec<(NodeId, NodeId)>,
    pub parent: Vec<Option<NodeId>>,
    pub nodes: Vec<NodeId>,
    pub p1: bool,
    pub p2: bool,
}

/// Tallies for one lemma.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct LemmaTally {
    /// Node tuples examined.
    pub tuples: u64,
    /// Tuples where P1 (equivalently P2, when they agree) holds.
    pub p1_true: u64,
    pub mismatches: u64,
    /// The first few mismatches.
    pub examples: Vec<Counterexample>,
}

/// Tallies for every lemma.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct LemmaReport {
    pub trees: u64,
    pub two_cut: LemmaTally,
    pub three_cut_two_respect: LemmaTally,
    pub three_respect: LemmaTally,
    pub three_respect_no_common_edge: LemmaTally,
}

const KEEP_EXAMPLES: usize = 4;

impl LemmaReport {
    pub fn tally(&self, lemma: Lemma) -> &LemmaTally {
        match lemma {
            Lemma::TwoCut => &self.two_cut,
            Lemma::ThreeCutTwoRespect => &self.three_cut_two_respect,
            Lemma::ThreeRespect => &self.three_respect,
            Lemma::ThreeRespectNoCommonEdge => &self.three_respect_no_common_edge,
        }
    }

    fn tally_mut(&mut self, lemma: Lemma) -> &mut LemmaTally {
        match lemma {
            Lemma::TwoCut => &mut self.two_cut,
            Lemma::ThreeCutTwoRespect => &mut self.three_cut_two_respect,
            Lemma::ThreeRespect => &mut self.three_respect,
            Lemma::ThreeRespectNoCommonEdge => &mut self.three_respect_no_common_edge,
        }
    }

    pub fn merge(&mut self, other: LemmaReport) {
        self.trees += other.trees;
        for lemma in Lemma::ALL {
            let src = other.tally(lemma).clone();
            let dst = self.tally_mut(lemma);
            dst.tuples += src.tuples;
            dst.p1_true += src.p1_true;
            dst.mismatches += src.mismatches;
            let room = KEEP_EXAMPLES.saturating_sub(dst.examples.len());
            dst.examples.extend(src.examples.into_iter().take(room));
        }
    }
}

/// A graph with edges as bitmasks over vertices.
struct MaskGraph<'a> {
    g: &'a Graph,
    ends: Vec<u64>,
}

impl<'a> MaskGraph<'a> {
    fn new(g: &'a Graph) -> Result<Self> {
        if g.n() > MAX_LEMMA_N || g.m() > 64 {
            return Err(Error::Capacity { n: g.n(), limit: MAX_LEMMA_N });
        }
        Ok(MaskGraph { g, ends: g.edges().iter().map(|&(u, v)| (1 << u) | (1 << v)).collect() })
    }

    /// δ(A) as an edge mask.
    fn boundary(&self, a: u64) -> u64 {
        self.ends
            .iter()
            .enumerate()
            .filter(|(_, &e)| (e & a).count_ones() == 1)
            .fold(0, |acc, (i, _)| acc | 1 << i)
    }
}

/// Checks every lemma on every non-root tuple of one rooted spanning tree.
pub fn check_tree(g: &Graph, parent: &[Option<NodeId>]) -> Result<LemmaReport> {
    let mg = MaskGraph::new(g)?;
    let tree = BfsInfo::from_parents(parent)?;
    let n = g.n();
    let mut desc = vec![0u64; n];
    let mut tedge = vec![0u64; n];
    let mut tree_edges = 0u64;
    for v in 0..n {
        desc[v] = tree.desc(v).iter().fold(0, |acc, u| acc | 1 << u);
        if let Some(p) = parent[v] {
            let id = g.edge_id(p, v).ok_or_else(|| Error::Input(format!("tree edge ({p},{v}) not in graph")))?;
            tedge[v] = 1 << id;
            tree_edges |= tedge[v];
        }
    }
    let bd: Vec<u64> = desc.iter().map(|&d| mg.boundary(d)).collect();
    let size = |v: usize| i64::from(bd[v].count_ones());
    let gam = |a: usize, b: usize| i64::from((bd[a] & bd[b]).count_ones());
    let nodes: Vec<NodeId> = (0..n).filter(|&v| parent[v].is_some()).collect();

    let mut report = LemmaReport { trees: 1, ..Default::default() };
    let record = |report: &mut LemmaReport, lemma: Lemma, tuple: &[NodeId], p1: bool, p2: bool| {
        let t = report.tally_mut(lemma);
        t.tuples += 1;
        t.p1_true += u64::from(p1);
        if p1 != p2 {
            t.mismatches += 1;
            if t.examples.len() < KEEP_EXAMPLES {
                t.examples.push(Counterexample {
                    lemma,
                    edges: mg.g.edges().to_vec(),
                    parent: parent.to_vec(),
                    nodes: tuple.to_vec(),
                    p1,
                    p2,
                });
            }
        }
    };

    for (i, &u) in nodes.iter().enumerate() {
        for &v in &nodes[i + 1..] {
            let cut = mg.boundary(desc[u] ^ desc[v]);
            let g_uv = gam(u, v);

            let p1 = cut == tedge[u] | tedge[v];
            let p2 = size(u) == g_uv + 1 && size(v) == g_uv + 1;
            record(&mut report, Lemma::TwoCut, &[u, v], p1, p2);

            let rest = cut & !(tedge[u] | tedge[v]);
            let p1 = cut & (tedge[u] | tedge[v]) == tedge[u] | tedge[v]
                && rest.count_ones() == 1
                && rest & tree_edges == 0;
            let p2 = (size(u) - 2 == g_uv && size(v) - 1 == g_uv) || (size(u) - 1 == g_uv && size(v) - 2 == g_uv);
            record(&mut report, Lemma::ThreeCutTwoRespect, &[u, v], p1, p2);
        }
    }
    for (i, &a) in nodes.iter().enumerate() {
        for (j, &b) in nodes.iter().enumerate().skip(i + 1) {
            for &c in &nodes[j + 1..] {
                let cut = mg.boundary(desc[a] ^ desc[b] ^ desc[c]);
                let p1 = cut == tedge[a] | tedge[b] | tedge[c];
                let (gab, gac, gbc) = (gam(a, b), gam(a, c), gam(b, c));
                let p2 = size(a) - 1 == gab + gac && size(b) - 1 == gab + gbc && size(c) - 1 == gac + gbc;
                record(&mut report, Lemma::ThreeRespect, &[a, b, c], p1, p2);
                let common = bd[a] & bd[b] & bd[c] == 0;
                record(&mut report, Lemma::ThreeRespectNoCommonEdge, &[a, b, c], p1, p2 && common);
            }
        }
    }
    Ok(report)
}

/// Every lemma on every spanning tree of `g` under every root.
pub fn check_all_spanning_trees(g: &Graph) -> Result<LemmaReport> {
    let mut report = LemmaReport::default();
    for root in 0..g.n() {
        for parent in crate::enumerate::spanning_trees(g, root) {
            report.merge(check_tree(g, &parent)?);
        }
    }
    Ok(report)
}

/// Every lemma on the BFS tree of `g` from every root.
pub fn check_bfs_trees(g: &Graph) -> Result<LemmaReport> {
    let mut report = LemmaReport::default();
    for root in 0..g.n() {
        let t = BfsInfo::centralized(g, root);
        let parent: Vec<Option<NodeId>> = (0..g.n()).map(|v| t.parent(v)).collect();
        report.merge(check_tree(g, &parent)?);
    }
    Ok(report)
}

/// Outcome of a batch of randomized ⊕-linearity checks.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct LinearityReport {
    pub checks: u64,
    pub failures: u64,
}

/// `δ(A_1 ⊕ … ⊕ A_j) = δ(A_1) ⊕ … ⊕ δ(A_j)` for the given sets.
pub fn linearity_holds(g: &Graph, sets: &[VertexSet]) -> Result<bool> {
    let Some(first) = sets.first() else { return Ok(true) };
    let mut x = first.clone();
    let mut rhs = boundary(g, first)?;
    for a in &sets[1..] {
        x = x.xor(a);
        rhs = rhs.xor(&boundary(g, a)?);
    }
    Ok(boundary(g, &x)? == rhs)
}

/// `checks` random instances: a connected `G(n, p)` graph with `n ≤ max_n`
/// and `2 ≤ j ≤ 4` uniformly random vertex sets.
pub fn random_linearity_checks(checks: u64, max_n: usize, seed: u64) -> Result<LinearityReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = LinearityReport::default();
    let mut g = None;
    for i in 0..checks {
        if i % 20 == 0 || g.is_none() {
            let n = rng.gen_range(2..=max_n);
            let p = rng.gen_range(0.2..0.9);
            let params = crate::generate::GenParams::new(n).seed(rng.gen()).p(p);
            g = Some(crate::generate::generate(crate::generate::Family::RandomConnected, &params)?);
        }
        let g = g.as_ref().expect("graph drawn above");
        let j = rng.gen_range(2..=4);
        let sets: Vec<VertexSet> =
            (0..j).map(|_| VertexSet::from_iter(g.n(), (0..g.n()).filter(|_| rng.gen_bool(0.5)))).collect();
        report.checks += 1;
        if !linearity_holds(g, &sets)? {
            report.failures += 1;
        }
    }
    Ok(report)
}

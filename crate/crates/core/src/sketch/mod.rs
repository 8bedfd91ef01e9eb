//! Truncated canonical trees (k-sketches).
//!
//! For a source set `X ⊆ desc(v)` the canonical tree is the union of the tree
//! paths `ρ(v)` and `ρ(y)` for every non-tree neighbor `y` of `X` lying outside
//! `desc(v)`. The branching number `ξ` grows by `children(p) - 1` at every
//! branching ancestor below the first branch node; the k-sketch keeps the nodes
//! with `ξ ≤ k` plus the spine `ρ(v)`, and stores `η(u)` and `γ(X, desc u)` per
//! node.
//!
//! Pruned children of kept nodes travel as stubs (at most `k + 2` per node) so
//! that unions of sketches see the same degrees as the full canonical tree.

pub mod distributed;

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::graph::{gamma, Graph, NodeId, VertexSet};
use crate::runtime::{BitReader, BitWriter, Bits, BitsRef, Widths};
use crate::tree::BfsInfo;

pub use distributed::{compute_sketches, SketchTables};

/// Per-node metadata `⟨η(u), γ(X, desc u)⟩`; the parent is the tree parent.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Entry {
    pub parent: Option<NodeId>,
    pub eta: u64,
    pub gamma: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sketch {
    /// The spine end `v`.
    pub source: NodeId,
    pub k: usize,
    pub nodes: BTreeMap<NodeId, Entry>,
    /// Pruned children of kept nodes, smallest ids first.
    pub stubs: BTreeMap<NodeId, BTreeSet<NodeId>>,
}

/// Level of every node of a parent-linked forest (roots at level 0).
fn levels_of(parent: &BTreeMap<NodeId, Option<NodeId>>) -> BTreeMap<NodeId, usize> {
    let mut level: BTreeMap<NodeId, usize> = BTreeMap::new();
    let mut stack = Vec::new();
    for &u in parent.keys() {
        let mut cur = u;
        while !level.contains_key(&cur) {
            match parent.get(&cur).copied().flatten() {
                Some(p) => {
                    stack.push(cur);
                    cur = p;
                }
                None => {
                    level.insert(cur, 0);
                }
            }
        }
        let mut l = level[&cur];
        while let Some(c) = stack.pop() {
            l += 1;
            level.insert(c, l);
        }
    }
    level
}

/// Stub cap: enough children to decide every `ξ ≤ k` comparison.
pub fn stub_cap(k: usize) -> usize {
    k + 2
}

impl Sketch {
    pub fn contains(&self, u: NodeId) -> bool {
        self.nodes.contains_key(&u)
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn gamma(&self, u: NodeId) -> Option<u64> {
        self.nodes.get(&u).map(|e| e.gamma)
    }

    pub fn eta(&self, u: NodeId) -> Option<u64> {
        self.nodes.get(&u).map(|e| e.eta)
    }

    /// Ancestor chain of a kept node, root first.
    pub fn chain(&self, u: NodeId) -> Vec<NodeId> {
        let mut out = vec![u];
        let mut cur = u;
        while let Some(p) = self.nodes.get(&cur).and_then(|e| e.parent) {
            out.push(p);
            cur = p;
        }
        out.reverse();
        out
    }

    /// `x ∈ A(u)` as far as the sketch can tell (both kept).
    pub fn is_ancestor(&self, x: NodeId, u: NodeId) -> bool {
        let mut cur = Some(u);
        while let Some(c) = cur {
            if c == x {
                return true;
            }
            cur = self.nodes.get(&c).and_then(|e| e.parent);
        }
        false
    }

    /// Level of every kept node in the tree.
    pub fn levels(&self) -> BTreeMap<NodeId, usize> {
        levels_of(&self.nodes.iter().map(|(&u, e)| (u, e.parent)).collect())
    }

    /// Wire size in bits.
    pub fn bit_len(&self, w: Widths) -> usize {
        let mut out = BitWriter::new();
        self.encode(&mut out, w);
        out.len()
    }

    /// Entry count, then nodes parent-first, then stubs.
    pub fn encode(&self, out: &mut BitWriter, w: Widths) {
        let wb = w.id();
        let g = wb.max(2);
        let stubs: usize = self.stubs.values().map(|s| s.len()).sum();
        out.put_varint(self.nodes.len() as u64, g).put_varint(stubs as u64, g);
        for u in self.topological() {
            let e = &self.nodes[&u];
            out.put_usize(u, wb).put_bool(e.parent.is_some());
            if let Some(p) = e.parent {
                out.put_usize(p, wb);
            }
            out.put(e.eta, w.count()).put(e.gamma, w.count());
        }
        for (&p, set) in &self.stubs {
            for &q in set {
                out.put_usize(q, wb).put_usize(p, wb);
            }
        }
    }

    pub fn decode(r: &mut BitReader<'_>, w: Widths, source: NodeId, k: usize) -> Result<Sketch> {
        let wb = w.id();
        let g = wb.max(2);
        let bad = || Error::Protocol("sketch: truncated record".into());
        let nodes_len = r.try_varint(g).ok_or_else(bad)? as usize;
        let stubs_len = r.try_varint(g).ok_or_else(bad)? as usize;
        let mut nodes = BTreeMap::new();
        for _ in 0..nodes_len {
            let u = r.read_usize(wb)?;
            let parent = if r.read_bool()? { Some(r.read_usize(wb)?) } else { None };
            let eta = r.read(w.count())?;
            let gamma = r.read(w.count())?;
            nodes.insert(u, Entry { parent, eta, gamma });
        }
        let mut stubs: BTreeMap<NodeId, BTreeSet<NodeId>> = BTreeMap::new();
        for _ in 0..stubs_len {
            let q = r.read_usize(wb)?;
            let p = r.read_usize(wb)?;
            stubs.entry(p).or_default().insert(q);
        }
        Ok(Sketch { source, k, nodes, stubs })
    }

    pub fn to_bits(&self, w: Widths) -> Result<Bits> {
        let mut out = BitWriter::new();
        self.encode(&mut out, w);
        out.finish()
    }

    pub fn from_bits(bits: &BitsRef, w: Widths, source: NodeId, k: usize) -> Result<Sketch> {
        Self::decode(&mut BitReader::new(bits), w, source, k)
    }

    /// Kept nodes ordered so parents come before children.
    fn topological(&self) -> Vec<NodeId> {
        let depth = self.levels();
        let mut order: Vec<NodeId> = self.nodes.keys().copied().collect();
        order.sort_by_key(|u| (depth[u], *u));
        order
    }
}

/// Branching numbers of a rooted tree given by parent links and child counts.
///
/// `x` is the first branch node (the shallowest node with two or more
/// children, or the root when there is none). Nodes at or above `x` get 1,
/// except the root when it is `x`, which gets 2; below `x`,
/// `ξ(b) = deg(π(b)) + ξ(π(b)) - 2` where `deg` counts tree edges.
pub fn branching_numbers(
    root: NodeId,
    parent: &BTreeMap<NodeId, Option<NodeId>>,
    children: &BTreeMap<NodeId, usize>,
) -> BTreeMap<NodeId, usize> {
    let kids = |u: NodeId| children.get(&u).copied().unwrap_or(0);
    let levels = levels_of(parent);
    let mut order: Vec<(usize, NodeId)> = levels.iter().map(|(&u, &d)| (d, u)).collect();
    order.sort_unstable();
    // Walk down the unbranched top part to find x.
    let mut child_of: BTreeMap<NodeId, Vec<NodeId>> = BTreeMap::new();
    for (&u, &p) in parent {
        if let Some(p) = p {
            child_of.entry(p).or_default().push(u);
        }
    }
    let mut x = root;
    let mut top = vec![root];
    while kids(x) == 1 {
        match child_of.get(&x).and_then(|c| c.first()) {
            Some(&c) => {
                x = c;
                top.push(c);
            }
            None => break, // the only child is a stub
        }
    }
    let no_branch = kids(x) < 2;
    let x = if no_branch { root } else { x };
    let mut xi: BTreeMap<NodeId, usize> = BTreeMap::new();
    let top_set: BTreeSet<NodeId> = top.into_iter().collect();
    for (_, u) in order {
        let v = if u == root {
            if x == root { 2 } else { 1 }
        } else if x != root && top_set.contains(&u) {
            1
        } else {
            let p = parent[&u].expect("non-root has a parent");
            let deg_p = kids(p) + usize::from(p != root);
            (deg_p + xi[&p] as usize).saturating_sub(2)
        };
        xi.insert(u, v);
    }
    xi
}

/// Union under construction: parent links, metadata and stubs.
#[derive(Debug, Clone, Default)]
pub struct Builder {
    parent: BTreeMap<NodeId, Option<NodeId>>,
    eta: BTreeMap<NodeId, u64>,
    gamma: BTreeMap<NodeId, u64>,
    stubs: BTreeMap<NodeId, BTreeSet<NodeId>>,
    spine: Vec<NodeId>,
}

impl Builder {
    /// Starts from the spine `ρ(v)` (root first) with the η of each node.
    pub fn new(spine: &[NodeId], etas: &[u64]) -> Self {
        let mut b = Builder { spine: spine.to_vec(), ..Default::default() };
        b.add_path(spine, etas);
        b
    }

    fn v(&self) -> NodeId {
        *self.spine.last().expect("non-empty spine")
    }

    /// Adds a root-first tree path.
    pub fn add_path(&mut self, path: &[NodeId], etas: &[u64]) {
        for (i, &u) in path.iter().enumerate() {
            self.parent.entry(u).or_insert(if i == 0 { None } else { Some(path[i - 1]) });
            self.eta.entry(u).or_insert(etas[i]);
        }
    }

    pub fn add_gamma(&mut self, u: NodeId, x: u64) {
        *self.gamma.entry(u).or_insert(0) += x;
    }

    /// Adds a sketch computed for a source inside `desc(v)`, dropping the part
    /// strictly inside `desc(v)` and summing the metadata.
    pub fn add_sketch(&mut self, s: &Sketch) {
        let l = self.spine.len() - 1;
        let v = self.v();
        let levels = s.levels();
        let mut order: Vec<(usize, NodeId)> = levels.iter().map(|(&u, &d)| (d, u)).collect();
        order.sort_unstable();
        // Ancestor at level l of every node at or below it.
        let mut anc: BTreeMap<NodeId, NodeId> = BTreeMap::new();
        for &(d, u) in &order {
            if d == l {
                anc.insert(u, u);
            } else if d > l {
                let p = s.nodes[&u].parent.expect("deep node has a parent");
                if let Some(&a) = anc.get(&p) {
                    anc.insert(u, a);
                }
            }
        }
        let under_v = |u: &NodeId| anc.get(u) == Some(&v);
        for (&u, e) in &s.nodes {
            if levels[&u] > l && under_v(&u) {
                continue;
            }
            self.parent.entry(u).or_insert(e.parent);
            self.eta.entry(u).or_insert(e.eta);
            self.add_gamma(u, e.gamma);
        }
        for (&p, set) in &s.stubs {
            if under_v(&p) {
                continue;
            }
            self.stubs.entry(p).or_default().extend(set.iter().copied());
        }
    }

    /// Truncates to `ξ ≤ k` plus the spine.
    pub fn finish(self, k: usize) -> Sketch {
        let root = self.spine[0];
        let mut kept_children: BTreeMap<NodeId, BTreeSet<NodeId>> = BTreeMap::new();
        for (&u, &p) in &self.parent {
            if let Some(p) = p {
                kept_children.entry(p).or_default().insert(u);
            }
        }
        let mut all_children = kept_children.clone();
        for (&p, set) in &self.stubs {
            all_children.entry(p).or_default().extend(set.iter().copied().filter(|q| !self.parent.contains_key(q)));
        }
        let counts: BTreeMap<NodeId, usize> = all_children.iter().map(|(&p, s)| (p, s.len())).collect();
        let xi = branching_numbers(root, &self.parent, &counts);
        let spine: BTreeSet<NodeId> = self.spine.iter().copied().collect();
        let keep = |u: &NodeId| spine.contains(u) || xi[u] <= k;
        let mut nodes = BTreeMap::new();
        for (&u, &p) in &self.parent {
            // ξ is monotone below the root, so keeping by ξ keeps whole chains.
            if keep(&u) && p.is_none_or(|p| keep(&p)) {
                nodes.insert(u, Entry { parent: p, eta: self.eta[&u], gamma: self.gamma.get(&u).copied().unwrap_or(0) });
            }
        }
        let cap = stub_cap(k);
        let mut stubs = BTreeMap::new();
        for (&p, set) in &all_children {
            if !nodes.contains_key(&p) {
                continue;
            }
            let pruned: BTreeSet<NodeId> = set.iter().copied().filter(|q| !nodes.contains_key(q)).take(cap).collect();
            if !pruned.is_empty() {
                stubs.insert(p, pruned);
            }
        }
        Sketch { source: self.v(), k, nodes, stubs }
    }
}

/// Centralized k-sketch of the source set `x ⊆ desc(v)` with spine `ρ(v)`.
pub fn reference_sketch(g: &Graph, tree: &BfsInfo, eta: &[u64], v: NodeId, x: &VertexSet, k: usize) -> Result<Sketch> {
    let dv = tree.desc(v);
    let spine = tree.ancestors(v);
    let etas = |p: &[NodeId]| p.iter().map(|&u| eta[u]).collect::<Vec<_>>();
    let mut b = Builder::new(spine, &etas(spine));
    for a in x.iter() {
        for y in g.neighbors(a) {
            if tree.is_tree_edge(a, y) || dv.contains(y) {
                continue;
            }
            let path = tree.ancestors(y);
            b.add_path(path, &etas(path));
        }
    }
    // The untruncated canonical tree with exact metadata, then truncation.
    let all: Vec<NodeId> = b.parent.keys().copied().collect();
    for u in all {
        let gv = gamma(g, x, &tree.desc(u))? as u64;
        b.add_gamma(u, gv);
    }
    Ok(b.finish(k))
}

/// Node count bound `2^(k-1) (Depth + 1)` plus the spine.
pub fn node_bound(k: usize, depth: usize) -> usize {
    (1usize << k.saturating_sub(1)) * (depth + 1) + depth + 1
}

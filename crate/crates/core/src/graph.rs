//! Undirected simple graphs, vertex and edge sets, and the cut-space helpers
//! (`boundary`, `gamma`, `is_induced_cut`) that every other module is checked
//! against.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;

use bitvec::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type NodeId = usize;
pub type EdgeId = usize;

/// A normalized undirected edge `(min, max)`.
pub type Edge = (NodeId, NodeId);

/// One incident edge as seen from a vertex: the edge id and the neighbor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Port {
    pub edge: EdgeId,
    pub neighbor: NodeId,
}

/// Undirected, unweighted, simple graph with stable vertex and edge ids.
///
/// Vertices are `0..n`. Edge ids follow insertion order. Adjacency lists are
/// sorted by neighbor id so that every traversal is deterministic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: Vec<Edge>,
    adj: Vec<Vec<Port>>,
    index: HashMap<Edge, EdgeId>,
}

#[inline]
pub fn normalize(u: NodeId, v: NodeId) -> Edge {
    if u <= v {
        (u, v)
    } else {
        (v, u)
    }
}

impl Graph {
    /// Builds a graph, rejecting self-loops, duplicate edges and out-of-range ids.
    /// Connectivity is not required here; see [`Graph::validate_connected`].
    pub fn new(n: usize, edge_list: impl IntoIterator<Item = (NodeId, NodeId)>) -> Result<Self> {
        let mut edges = Vec::new();
        let mut index = HashMap::new();
        let mut adj = vec![Vec::new(); n];
        for (u, v) in edge_list {
            if u >= n || v >= n {
                return Err(Error::Input(format!("edge ({u},{v}) out of range for n={n}")));
            }
            if u == v {
                return Err(Error::Input(format!("self-loop at vertex {u}")));
            }
            let e = normalize(u, v);
            if index.contains_key(&e) {
                return Err(Error::Input(format!("duplicate edge ({},{})", e.0, e.1)));
            }
            let id = edges.len();
            index.insert(e, id);
            edges.push(e);
            adj[u].push(Port { edge: id, neighbor: v });
            adj[v].push(Port { edge: id, neighbor: u });
        }
        for ports in &mut adj {
            ports.sort_by_key(|p| p.neighbor);
        }
        Ok(Graph { n, edges, adj, index })
    }

    /// Builds a graph and checks that it is connected.
    pub fn connected(n: usize, edge_list: impl IntoIterator<Item = (NodeId, NodeId)>) -> Result<Self> {
        let g = Graph::new(n, edge_list)?;
        g.validate_connected()?;
        Ok(g)
    }

    pub fn validate_connected(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::Input("empty graph".into()));
        }
        if !self.is_connected() {
            return Err(Error::Input("graph is not connected".into()));
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, id: EdgeId) -> Edge {
        self.edges[id]
    }

    pub fn edge_id(&self, u: NodeId, v: NodeId) -> Option<EdgeId> {
        self.index.get(&normalize(u, v)).copied()
    }

    pub fn ports(&self, v: NodeId) -> &[Port] {
        &self.adj[v]
    }

    pub fn neighbors(&self, v: NodeId) -> impl Iterator<Item = NodeId> + '_ {
        self.adj[v].iter().map(|p| p.neighbor)
    }

    pub fn degree(&self, v: NodeId) -> usize {
        self.adj[v].len()
    }

    pub fn min_degree(&self) -> usize {
        (0..self.n).map(|v| self.degree(v)).min().unwrap_or(0)
    }

    pub fn is_connected(&self) -> bool {
        if self.n == 0 {
            return false;
        }
        self.bfs_distances(0).iter().all(|d| d.is_some())
    }

    /// Hop distances from `src`, `None` for unreachable vertices.
    pub fn bfs_distances(&self, src: NodeId) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.n];
        let mut queue = VecDeque::new();
        dist[src] = Some(0);
        queue.push_back(src);
        while let Some(u) = queue.pop_front() {
            let du = dist[u].unwrap();
            for p in &self.adj[u] {
                if dist[p.neighbor].is_none() {
                    dist[p.neighbor] = Some(du + 1);
                    queue.push_back(p.neighbor);
                }
            }
        }
        dist
    }

    /// Parses the edge-list text format: one `u v` pair per line, `#` comments,
    /// `n` inferred as one more than the largest id. The result must be connected.
    pub fn parse_edge_list(text: &str) -> Result<Self> {
        let mut pairs = Vec::new();
        let mut max_id = None;
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut it = line.split_whitespace();
            let parse = |tok: Option<&str>| -> Result<usize> {
                let tok = tok.ok_or_else(|| Error::Input(format!("line {}: expected two vertex ids", lineno + 1)))?;
                tok.parse::<usize>()
                    .map_err(|_| Error::Input(format!("line {}: `{tok}` is not a non-negative integer", lineno + 1)))
            };
            let u = parse(it.next())?;
            let v = parse(it.next())?;
            if it.next().is_some() {
                return Err(Error::Input(format!("line {}: trailing tokens", lineno + 1)));
            }
            max_id = Some(max_id.map_or(u.max(v), |m: usize| m.max(u).max(v)));
            pairs.push((u, v));
        }
        let n = max_id.map(|m| m + 1).ok_or_else(|| Error::Input("no edges in input".into()))?;
        Graph::connected(n, pairs)
    }

    pub fn to_edge_list(&self) -> String {
        let mut out = String::new();
        for &(u, v) in &self.edges {
            out.push_str(&format!("{u} {v}\n"));
        }
        out
    }

    /// Petgraph view, used for isomorphism checks and max-flow style helpers.
    pub fn to_petgraph(&self) -> petgraph::graph::UnGraph<(), ()> {
        let mut pg = petgraph::graph::UnGraph::with_capacity(self.n, self.m());
        for _ in 0..self.n {
            pg.add_node(());
        }
        for &(u, v) in &self.edges {
            pg.add_edge((u as u32).into(), (v as u32).into(), ());
        }
        pg
    }
}

/// Subset of `0..n` with bitset semantics.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct VertexSet {
    bits: BitVec<u64, Lsb0>,
}

impl VertexSet {
    pub fn empty(n: usize) -> Self {
        VertexSet { bits: bitvec![u64, Lsb0; 0; n] }
    }

    pub fn full(n: usize) -> Self {
        VertexSet { bits: bitvec![u64, Lsb0; 1; n] }
    }

    pub fn from_iter(n: usize, items: impl IntoIterator<Item = NodeId>) -> Self {
        let mut s = VertexSet::empty(n);
        for v in items {
            s.insert(v);
        }
        s
    }

    /// Set whose members are the set bits of `mask` (for `n <= 64`).
    pub fn from_mask(n: usize, mask: u64) -> Self {
        VertexSet::from_iter(n, (0..n).filter(|&v| mask >> v & 1 == 1))
    }

    pub fn universe(&self) -> usize {
        self.bits.len()
    }

    pub fn insert(&mut self, v: NodeId) {
        self.bits.set(v, true);
    }

    pub fn remove(&mut self, v: NodeId) {
        self.bits.set(v, false);
    }

    pub fn contains(&self, v: NodeId) -> bool {
        self.bits.get(v).map(|b| *b).unwrap_or(false)
    }

    pub fn len(&self) -> usize {
        self.bits.count_ones()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.not_any()
    }

    pub fn iter(&self) -> impl Iterator<Item = NodeId> + '_ {
        self.bits.iter_ones()
    }

    /// Symmetric difference `self ⊕ other`.
    pub fn xor(&self, other: &VertexSet) -> VertexSet {
        assert_eq!(self.universe(), other.universe(), "vertex sets over different universes");
        let mut out = self.clone();
        for (a, b) in out.bits.as_raw_mut_slice().iter_mut().zip(other.bits.as_raw_slice()) {
            *a ^= *b;
        }
        out
    }

    pub fn union(&self, other: &VertexSet) -> VertexSet {
        let mut out = self.clone();
        for (a, b) in out.bits.as_raw_mut_slice().iter_mut().zip(other.bits.as_raw_slice()) {
            *a |= *b;
        }
        out
    }

    pub fn complement(&self) -> VertexSet {
        let mut out = self.clone();
        let n = out.universe();
        for v in 0..n {
            let b = out.contains(v);
            out.bits.set(v, !b);
        }
        out
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// A set of edges in canonical form: sorted normalized pairs.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct EdgeSet(BTreeSet<Edge>);

impl EdgeSet {
    pub fn new() -> Self {
        EdgeSet(BTreeSet::new())
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (NodeId, NodeId)>) -> Self {
        EdgeSet(pairs.into_iter().map(|(u, v)| normalize(u, v)).collect())
    }

    pub fn from_ids(g: &Graph, ids: impl IntoIterator<Item = EdgeId>) -> Self {
        EdgeSet(ids.into_iter().map(|e| g.edge(e)).collect())
    }

    pub fn insert(&mut self, u: NodeId, v: NodeId) -> bool {
        self.0.insert(normalize(u, v))
    }

    pub fn contains(&self, u: NodeId, v: NodeId) -> bool {
        self.0.contains(&normalize(u, v))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = Edge> + '_ {
        self.0.iter().copied()
    }

    pub fn pairs(&self) -> Vec<Edge> {
        self.0.iter().copied().collect()
    }

    pub fn xor(&self, other: &EdgeSet) -> EdgeSet {
        EdgeSet(self.0.symmetric_difference(&other.0).copied().collect())
    }

    pub fn intersection_len(&self, other: &EdgeSet) -> usize {
        self.0.intersection(&other.0).count()
    }

    /// Checks every member against the host graph.
    pub fn validate(&self, g: &Graph) -> Result<()> {
        for &(u, v) in &self.0 {
            if g.edge_id(u, v).is_none() {
                return Err(Error::Input(format!("({u},{v}) is not an edge of the graph")));
            }
        }
        Ok(())
    }
}

impl fmt::Debug for EdgeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.0.iter()).finish()
    }
}

impl fmt::Display for EdgeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|(u, v)| format!("({u},{v})")).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

fn check_set(g: &Graph, a: &VertexSet) -> Result<()> {
    if a.universe() != g.n() {
        return Err(Error::Input(format!(
            "vertex set over {} ids used with a graph on {} vertices",
            a.universe(),
            g.n()
        )));
    }
    Ok(())
}

/// δ(A): the edges with exactly one endpoint in `a`.
pub fn boundary(g: &Graph, a: &VertexSet) -> Result<EdgeSet> {
    check_set(g, a)?;
    Ok(EdgeSet(
        g.edges()
            .iter()
            .filter(|&&(u, v)| a.contains(u) != a.contains(v))
            .copied()
            .collect(),
    ))
}

/// γ(A,B) = |δ(A) ∩ δ(B)|.
pub fn gamma(g: &Graph, a: &VertexSet, b: &VertexSet) -> Result<usize> {
    check_set(g, a)?;
    check_set(g, b)?;
    Ok(g.edges()
        .iter()
        .filter(|&&(u, v)| a.contains(u) != a.contains(v) && b.contains(u) != b.contains(v))
        .count())
}

/// Returns a vertex set `A` with `∅ ⊊ A ⊊ V` and `δ(A) = f`, or `None`.
///
/// The components of `G − f` are two-colored along the edges of `f`; every
/// piece of that component graph puts its lowest vertex on the side of vertex
/// 0, so the witness is the side not containing vertex 0.
pub fn is_induced_cut(g: &Graph, f: &EdgeSet) -> Option<VertexSet> {
    if f.is_empty() || f.validate(g).is_err() {
        return None;
    }
    let n = g.n();
    // Components of G - f.
    let mut comp = vec![usize::MAX; n];
    let mut ncomp = 0;
    for s in 0..n {
        if comp[s] != usize::MAX {
            continue;
        }
        comp[s] = ncomp;
        let mut stack = vec![s];
        while let Some(u) = stack.pop() {
            for p in g.ports(u) {
                let (a, b) = normalize(u, p.neighbor);
                if f.contains(a, b) || comp[p.neighbor] != usize::MAX {
                    continue;
                }
                comp[p.neighbor] = ncomp;
                stack.push(p.neighbor);
            }
        }
        ncomp += 1;
    }
    let mut cadj = vec![Vec::new(); ncomp];
    for (u, v) in f.iter() {
        let (cu, cv) = (comp[u], comp[v]);
        if cu == cv {
            return None;
        }
        cadj[cu].push(cv);
        cadj[cv].push(cu);
    }
    // Components are numbered by their lowest vertex, so scanning in order
    // roots every piece at its lowest vertex.
    let mut color = vec![u8::MAX; ncomp];
    for s in 0..ncomp {
        if color[s] != u8::MAX {
            continue;
        }
        color[s] = 0;
        let mut queue = VecDeque::from([s]);
        while let Some(c) = queue.pop_front() {
            for &d in &cadj[c] {
                if color[d] == u8::MAX {
                    color[d] = 1 - color[c];
                    queue.push_back(d);
                } else if color[d] == color[c] {
                    return None;
                }
            }
        }
    }
    let a = VertexSet::from_iter(n, (0..n).filter(|&v| color[comp[v]] == 1));
    if a.is_empty() || a.len() == n {
        return None;
    }
    debug_assert_eq!(boundary(g, &a).ok().as_ref(), Some(f));
    Some(a)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path(n: usize) -> Graph {
        Graph::connected(n, (1..n).map(|i| (i - 1, i))).unwrap()
    }

    fn cycle(n: usize) -> Graph {
        Graph::connected(n, (0..n).map(|i| (i, (i + 1) % n))).unwrap()
    }

    #[test]
    fn rejects_bad_input() {
        assert!(Graph::new(3, [(0, 0)]).is_err());
        assert!(Graph::new(3, [(0, 1), (1, 0)]).is_err());
        assert!(Graph::new(3, [(0, 3)]).is_err());
        assert!(Graph::connected(4, [(0, 1), (2, 3)]).is_err());
    }

    #[test]
    fn parses_edge_list() {
        let g = Graph::parse_edge_list("# square\n0 1\n1 2\n\n2 3\n3 0\n").unwrap();
        assert_eq!(g.n(), 4);
        assert_eq!(g.m(), 4);
        assert_eq!(g.edge_id(3, 0), Some(3));
        assert!(Graph::parse_edge_list("0 1\n1 x\n").is_err());
        assert!(Graph::parse_edge_list("0 1 2\n").is_err());
        assert!(Graph::parse_edge_list("# nothing\n").is_err());
        let round = Graph::parse_edge_list(&g.to_edge_list()).unwrap();
        assert_eq!(round, g);
    }

    #[test]
    fn boundary_of_triangle_vertex() {
        let g = Graph::connected(3, [(0, 1), (1, 2), (2, 0)]).unwrap();
        let b = boundary(&g, &VertexSet::from_iter(3, [0])).unwrap();
        assert_eq!(b, EdgeSet::from_pairs([(0, 1), (0, 2)]));
        assert!(boundary(&g, &VertexSet::empty(3)).unwrap().is_empty());
        assert!(boundary(&g, &VertexSet::full(3)).unwrap().is_empty());
        assert!(boundary(&g, &VertexSet::empty(4)).is_err());
    }

    #[test]
    fn gamma_examples() {
        let c4 = cycle(4);
        let a = VertexSet::from_iter(4, [1, 2]);
        let b = VertexSet::from_iter(4, [3]);
        assert_eq!(gamma(&c4, &a, &b).unwrap(), 1);
        assert_eq!(gamma(&c4, &a, &a).unwrap(), 2);
        let p4 = path(4);
        let a = VertexSet::from_iter(4, [0]);
        let b = VertexSet::from_iter(4, [2]);
        assert_eq!(gamma(&p4, &a, &b).unwrap(), 0);
    }

    #[test]
    fn induced_cut_examples() {
        let p4 = path(4);
        let w = is_induced_cut(&p4, &EdgeSet::from_pairs([(1, 2)])).unwrap();
        assert_eq!(w, VertexSet::from_iter(4, [2, 3]));
        let c4 = cycle(4);
        assert!(is_induced_cut(&c4, &EdgeSet::from_pairs([(0, 1)])).is_none());
        let w = is_induced_cut(&c4, &EdgeSet::from_pairs([(0, 1), (2, 3)])).unwrap();
        assert_eq!(w, VertexSet::from_iter(4, [1, 2]));
        assert!(is_induced_cut(&c4, &EdgeSet::new()).is_none());
        assert!(is_induced_cut(&c4, &EdgeSet::from_pairs([(0, 2)])).is_none());
    }

    #[test]
    fn union_of_two_cuts_is_induced() {
        // Two disjoint bridges on a path: the middle segment is a witness.
        let p5 = path(5);
        let f = EdgeSet::from_pairs([(0, 1), (3, 4)]);
        let w = is_induced_cut(&p5, &f).unwrap();
        assert_eq!(w, VertexSet::from_iter(5, [1, 2, 3]));
    }

    #[test]
    fn vertex_set_ops() {
        let a = VertexSet::from_iter(70, [1, 65]);
        let b = VertexSet::from_iter(70, [1, 3]);
        assert_eq!(a.xor(&b).iter().collect::<Vec<_>>(), vec![3, 65]);
        assert_eq!(a.union(&b).len(), 3);
        assert_eq!(a.complement().len(), 68);
        assert_eq!(VertexSet::from_mask(4, 0b1010).iter().collect::<Vec<_>>(), vec![1, 3]);
    }
}

//! Rooted spanning trees: the distributed BFS construction, Broadcast
//! Type-1/Type-2, convergecast, neighbor exchange, and the generic tree
//! restricted semigroup function (TRSF) wave.

pub mod bfs;
pub mod broadcast;
pub mod convergecast;
pub mod exchange;
pub mod trsf;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Graph, NodeId, VertexSet};

pub use bfs::build_bfs;
pub use broadcast::{broadcast_t1, broadcast_t2, Downcast};
pub use convergecast::Upcast;
pub use exchange::Exchange;
pub use trsf::{trsf_compute, Semigroup, Trsf};

/// Which vertex roots the BFS tree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum RootPolicy {
    #[default]
    LowestId,
    Explicit(NodeId),
}

impl RootPolicy {
    pub fn resolve(self, g: &Graph) -> Result<NodeId> {
        match self {
            RootPolicy::LowestId => Ok(0),
            RootPolicy::Explicit(r) if r < g.n() => Ok(r),
            RootPolicy::Explicit(r) => Err(Error::Input(format!("root {r} out of range for n={}", g.n()))),
        }
    }
}

/// What one node knows about the tree after BFS and the ancestor broadcast.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct TreeView {
    pub id: NodeId,
    pub level: usize,
    pub parent: Option<NodeId>,
    /// Sorted by id.
    pub children: Vec<NodeId>,
    /// Depth of the whole tree.
    pub depth: usize,
    /// A(v) ordered root to v, inclusive; empty until disseminated.
    pub ancestors: Vec<NodeId>,
}

impl TreeView {
    pub fn is_root(&self) -> bool {
        self.parent.is_none()
    }

    pub fn is_leaf(&self) -> bool {
        self.children.is_empty()
    }

    /// α(v, l): the ancestor at level `l`.
    pub fn alpha(&self, l: usize) -> NodeId {
        self.ancestors[l]
    }
}

/// Global view of a rooted spanning tree. Distributed code only ever sees one
/// [`TreeView`]; the full structure is for oracles and observers.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BfsInfo {
    pub root: NodeId,
    pub depth: usize,
    pub nodes: Vec<TreeView>,
}

impl BfsInfo {
    /// Builds the view from a parent array (any spanning tree, not only BFS).
    pub fn from_parents(parent: &[Option<NodeId>]) -> Result<Self> {
        let n = parent.len();
        let roots: Vec<NodeId> = (0..n).filter(|&v| parent[v].is_none()).collect();
        if roots.len() != 1 {
            return Err(Error::Input(format!("parent array has {} roots", roots.len())));
        }
        let root = roots[0];
        let mut children = vec![Vec::new(); n];
        for v in 0..n {
            if let Some(p) = parent[v] {
                if p >= n {
                    return Err(Error::Input(format!("parent {p} out of range")));
                }
                children[p].push(v);
            }
        }
        let mut ancestors: Vec<Vec<NodeId>> = vec![Vec::new(); n];
        ancestors[root] = vec![root];
        let mut order = vec![root];
        let mut i = 0;
        while i < order.len() {
            let u = order[i];
            i += 1;
            for &c in &children[u] {
                let mut a = ancestors[u].clone();
                a.push(c);
                ancestors[c] = a;
                order.push(c);
            }
        }
        if order.len() != n {
            return Err(Error::Input("parent array is not a tree".into()));
        }
        let depth = ancestors.iter().map(|a| a.len() - 1).max().unwrap_or(0);
        let nodes = (0..n)
            .map(|v| TreeView {
                id: v,
                level: ancestors[v].len() - 1,
                parent: parent[v],
                children: children[v].clone(),
                depth,
                ancestors: ancestors[v].clone(),
            })
            .collect();
        Ok(BfsInfo { root, depth, nodes })
    }

    /// Centralized BFS with the same tie-break as the protocol (lowest-id parent).
    pub fn centralized(g: &Graph, root: NodeId) -> Self {
        let dist = g.bfs_distances(root);
        let parent: Vec<Option<NodeId>> = (0..g.n())
            .map(|v| {
                if v == root {
                    None
                } else {
                    let d = dist[v].expect("connected");
                    g.neighbors(v).find(|&u| dist[u] == Some(d - 1))
                }
            })
            .collect();
        BfsInfo::from_parents(&parent).expect("BFS parents form a tree")
    }

    pub fn n(&self) -> usize {
        self.nodes.len()
    }

    pub fn level(&self, v: NodeId) -> usize {
        self.nodes[v].level
    }

    pub fn parent(&self, v: NodeId) -> Option<NodeId> {
        self.nodes[v].parent
    }

    pub fn children(&self, v: NodeId) -> &[NodeId] {
        &self.nodes[v].children
    }

    pub fn ancestors(&self, v: NodeId) -> &[NodeId] {
        &self.nodes[v].ancestors
    }

    /// Is `u` an ancestor of `v` (inclusive)?
    pub fn is_ancestor(&self, u: NodeId, v: NodeId) -> bool {
        let lu = self.nodes[u].level;
        lu <= self.nodes[v].level && self.nodes[v].ancestors[lu] == u
    }

    pub fn alpha(&self, v: NodeId, l: usize) -> NodeId {
        self.nodes[v].ancestors[l]
    }

    pub fn lca(&self, a: NodeId, b: NodeId) -> NodeId {
        lca_of(&self.nodes[a].ancestors, &self.nodes[b].ancestors)
    }

    /// desc(v) as a vertex set.
    pub fn desc(&self, v: NodeId) -> VertexSet {
        VertexSet::from_iter(self.n(), (0..self.n()).filter(|&x| self.is_ancestor(v, x)))
    }

    /// Is `(u, v)` a tree edge?
    pub fn is_tree_edge(&self, u: NodeId, v: NodeId) -> bool {
        self.nodes[u].parent == Some(v) || self.nodes[v].parent == Some(u)
    }

    /// Vertices in BFS order (by level, then id).
    pub fn by_level(&self) -> Vec<NodeId> {
        let mut order: Vec<NodeId> = (0..self.n()).collect();
        order.sort_by_key(|&v| (self.nodes[v].level, v));
        order
    }
}

/// Longest common prefix of two root-first ancestor lists.
pub fn lca_of(a: &[NodeId], b: &[NodeId]) -> NodeId {
    let mut last = a[0];
    for (x, y) in a.iter().zip(b) {
        if x != y {
            break;
        }
        last = *x;
    }
    last
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::{generate, Family, GenParams};

    #[test]
    fn centralized_c4() {
        let g = generate(Family::Cycle, &GenParams::new(4)).unwrap();
        let t = BfsInfo::centralized(&g, 0);
        assert_eq!((0..4).map(|v| t.level(v)).collect::<Vec<_>>(), vec![0, 1, 2, 1]);
        assert_eq!(t.parent(2), Some(1));
        assert_eq!(t.ancestors(2), &[0, 1, 2]);
        assert!(t.is_ancestor(1, 2));
        assert!(!t.is_ancestor(3, 2));
        assert_eq!(t.lca(2, 3), 0);
        assert_eq!(t.desc(1).iter().collect::<Vec<_>>(), vec![1, 2]);
    }

    #[test]
    fn rejects_bad_parent_arrays() {
        assert!(BfsInfo::from_parents(&[None, None]).is_err());
        assert!(BfsInfo::from_parents(&[None, Some(2), Some(1)]).is_err());
    }
}

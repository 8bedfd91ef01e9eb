//! Detections produced by the distributed protocols and the JSON run report.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::graph::{boundary, EdgeSet, Graph, NodeId, VertexSet};
use crate::runtime::RoundStats;
use crate::tree::BfsInfo;

/// Structural class of a detected cut relative to the BFS tree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum CaseLabel {
    #[serde(rename = "1-respect")]
    OneRespect,
    #[serde(rename = "2-nested")]
    TwoNested,
    #[serde(rename = "2-disjoint")]
    TwoDisjoint,
    #[serde(rename = "CASE1")]
    Case1,
    #[serde(rename = "CASE2")]
    Case2,
    #[serde(rename = "CASE3")]
    Case3,
    #[serde(rename = "CASE4")]
    Case4,
    #[serde(rename = "CASE5")]
    Case5,
    #[serde(rename = "CASE6")]
    Case6,
    #[serde(rename = "CASE7")]
    Case7,
}

impl CaseLabel {
    pub fn as_str(self) -> &'static str {
        match self {
            CaseLabel::OneRespect => "1-respect",
            CaseLabel::TwoNested => "2-nested",
            CaseLabel::TwoDisjoint => "2-disjoint",
            CaseLabel::Case1 => "CASE1",
            CaseLabel::Case2 => "CASE2",
            CaseLabel::Case3 => "CASE3",
            CaseLabel::Case4 => "CASE4",
            CaseLabel::Case5 => "CASE5",
            CaseLabel::Case6 => "CASE6",
            CaseLabel::Case7 => "CASE7",
        }
    }

    pub const SIZE3: [CaseLabel; 7] = [
        CaseLabel::Case1,
        CaseLabel::Case2,
        CaseLabel::Case3,
        CaseLabel::Case4,
        CaseLabel::Case5,
        CaseLabel::Case6,
        CaseLabel::Case7,
    ];
}

impl fmt::Display for CaseLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A decision taken by one node: the cut is `δ(⊕ desc(v) for v in nodes)`.
///
/// Nodes decide on the tree vertices whose parent edges are in the cut; the
/// non-tree edges follow from that witness by a local post-processing step.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Detection {
    pub case: CaseLabel,
    pub nodes: Vec<NodeId>,
    pub detected_by: NodeId,
}

impl Detection {
    pub fn new(case: CaseLabel, mut nodes: Vec<NodeId>, detected_by: NodeId) -> Self {
        nodes.sort_unstable();
        Detection { case, nodes, detected_by }
    }

    /// Vertex side `⊕ desc(v)`.
    pub fn witness(&self, tree: &BfsInfo) -> VertexSet {
        let mut s = VertexSet::empty(tree.n());
        for &v in &self.nodes {
            s = s.xor(&tree.desc(v));
        }
        s
    }

    pub fn cut(&self, g: &Graph, tree: &BfsInfo) -> Result<EdgeSet> {
        boundary(g, &self.witness(tree))
    }
}

/// Centralized structural class of a cut-set: the tree edges it contains
/// and how their lower endpoints nest. `None` for more than three tree edges.
pub fn classify_cut(tree: &BfsInfo, cut: &EdgeSet) -> Option<CaseLabel> {
    let mut nodes: Vec<NodeId> = cut
        .iter()
        .filter(|&(u, v)| tree.is_tree_edge(u, v))
        .map(|(u, v)| if tree.parent(v) == Some(u) { v } else { u })
        .collect();
    nodes.sort_by_key(|&v| (tree.level(v), v));
    let nested = |a: NodeId, b: NodeId| tree.is_ancestor(a, b) || tree.is_ancestor(b, a);
    let size3 = cut.len() == 3;
    Some(match nodes[..] {
        [_] if size3 => CaseLabel::Case1,
        [_] => CaseLabel::OneRespect,
        [a, b] if nested(a, b) => if size3 { CaseLabel::Case2 } else { CaseLabel::TwoNested },
        [_, _] => if size3 { CaseLabel::Case3 } else { CaseLabel::TwoDisjoint },
        [a, b, c] => match (nested(a, b), nested(a, c), nested(b, c)) {
            (true, true, true) => CaseLabel::Case4,
            (true, true, false) => CaseLabel::Case5,
            (false, false, false) => CaseLabel::Case6,
            _ => CaseLabel::Case7,
        },
        _ => return None,
    })
}

/// One reported cut.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CutReport {
    pub cut_edges: Vec<(NodeId, NodeId)>,
    pub size: usize,
    pub case: CaseLabel,
    pub detected_by: NodeId,
}

/// Collapses detections to distinct cut-sets, keeping the first label found
/// for each and ordering by edge set.
pub fn collect_cuts(g: &Graph, tree: &BfsInfo, dets: &[Detection]) -> Result<Vec<CutReport>> {
    let mut seen: std::collections::BTreeMap<EdgeSet, CutReport> = Default::default();
    for d in dets {
        let cut = d.cut(g, tree)?;
        seen.entry(cut.clone()).or_insert_with(|| CutReport {
            cut_edges: cut.pairs(),
            size: cut.len(),
            case: d.case,
            detected_by: d.detected_by,
        });
    }
    Ok(seen.into_values().collect())
}

/// Rounds and traffic for a group of phases.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct StageStats {
    pub rounds: u64,
    pub messages: u64,
    pub bits: u64,
}

impl StageStats {
    pub fn of(stats: &RoundStats) -> Self {
        StageStats { rounds: stats.rounds_elapsed, messages: stats.total_messages, bits: stats.total_bits }
    }
}

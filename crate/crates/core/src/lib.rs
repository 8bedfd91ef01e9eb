//! Deterministic distributed detection of small min-cuts in the CONGEST model.
//!
//! The crate has a centralized side (graphs, cut algebra, brute-force oracles,
//! reference sketches) and a simulated distributed side (round engine, tree
//! primitives, and the size 1, 2 and 3 detection protocols).

pub mod enumerate;
pub mod error;
pub mod fixtures;
pub mod generate;
pub mod graph;
pub mod lemmas;
pub mod oracle;
pub mod pipeline;
pub mod report;
pub mod runtime;
pub mod sketch;
pub mod small;
pub mod three;
pub mod tree;

pub use error::{Error, Result};
pub use generate::{generate, Family, GenParams};
pub use graph::{boundary, gamma, is_induced_cut, Edge, EdgeId, EdgeSet, Graph, NodeId, VertexSet};
pub use pipeline::{run_all_stages, run_full_pipeline, LambdaDetected, PipelineConfig, PipelineOutput};
pub use report::{CaseLabel, CutReport, Detection};
pub use oracle::{edge_connectivity, min_cut_oracle, OracleResult};
pub use runtime::{measure_diameter, RoundStats, SimulatorConfig};
pub use tree::{BfsInfo, RootPolicy, TreeView};

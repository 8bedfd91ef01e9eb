//! Size-1 and size-2 min-cut detection.

pub mod eta;
pub mod twocut;
pub mod zeta;

pub use eta::{compute_eta, eta_reference, NodeState};
pub use twocut::{detect_1cuts, detect_2cuts};
pub use zeta::{compute_zeta, preprocess_zeta, Zeta};

use thiserror::Error;

/// Errors raised by graph loading, the simulator and the protocols.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Malformed or unsupported input graph.
    #[error("input error: {0}")]
    Input(String),

    /// The brute-force oracle was asked to enumerate a graph above its limit.
    #[error("graph has {n} vertices, above the oracle limit of {limit}; raise MINCUT_ORACLE_LIMIT to enumerate it")]
    Capacity { n: usize, limit: usize },

    /// A message (or the sum of messages) on one edge exceeded the per-round budget.
    #[error("bandwidth violation in phase `{phase}`: edge {edge} ({from}->{to}) carried {bits} bits in round {round}, budget {budget}")]
    Bandwidth {
        phase: String,
        edge: usize,
        from: usize,
        to: usize,
        round: u64,
        bits: usize,
        budget: usize,
    },

    /// A phase did not terminate within the configured round limit.
    #[error("phase `{phase}` exceeded the round limit of {limit}")]
    Timeout { phase: String, limit: u64 },

    /// A protocol invariant was breached (for example an oversized sketch).
    #[error("protocol error: {0}")]
    Protocol(String),

    /// A generator could not satisfy its parameters.
    #[error("generation error: {0}")]
    Generation(String),
}

pub type Result<T> = std::result::Result<T, Error>;

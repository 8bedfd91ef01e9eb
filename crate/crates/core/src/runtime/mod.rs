//! CONGEST round engine, bit-level message encoding and framed edge streams.

pub mod bits;
pub mod engine;
pub mod stream;

pub use bits::{pack, unpack, word_bits, BitReader, BitWriter, Bits, BitsRef, Widths};
pub use engine::{
    measure_diameter, run_protocol, Incoming, Network, NodeContext, NodeProgram, PhaseStats, RoundStats,
    SimulatorConfig, Step,
};
pub use stream::{Framing, InStream, OutStream};

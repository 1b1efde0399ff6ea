//! Layered belief-propagation decoding for quasi-cyclic LDPC codes.
//!
//! The crate is organized bottom-up:
//!
//! - [`qc_code`]: base matrices, circulant expansion and the compact edge
//!   index the decoder walks.
//! - [`layer_schedule`]: merging of base rows with disjoint column support
//!   into layers, plus the lane-utilization figure.
//! - [`channel`]: BPSK over AWGN, channel LLRs and reconciliation efficiency.
//! - [`decoder`]: layered and flooding sum-product decoding toward a target
//!   syndrome, single-frame and batched.
//! - [`demo`]: small illustrative matrices shipped with the crate.

pub mod channel;
pub mod decoder;
pub mod demo;
pub mod layer_schedule;
pub mod qc_code;

pub use channel::{beta, init_llr, transmit, ChannelConfig, ReceivedWord};
pub use decoder::{
    decode, decode_batch, flooding_decode, phi, syndrome_of, BatchDecoder, DecodeError,
    DecodeOutcome, DecoderConfig, DecoderState, FloodingDecoder, LayeredDecoder, Syndrome,
};
pub use layer_schedule::{
    conflict_graph, utilization, ConflictGraph, LayerSchedule, UtilizationReport,
};
pub use qc_code::{
    build_compact_index, descriptor, expand, BaseMatrix, CodeDescriptor, CodeError, CompactIndex,
    EdgeRecord, ParityCheck, ParseError,
};

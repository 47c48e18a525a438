//! Finite-length decoders on lifted Tanner graphs: weighted BMP/TMP/QMP
//! message passing and a sum-product reference.

mod bp;
mod graph;
mod mp;

pub use bp::{decode_bp, BpDecoder};
pub use graph::DecoderGraph;
pub use mp::{cn_rule, decode, quantize, sign_convention, DecodeResult, MessagePassingDecoder};

pub use crate::de::Algorithm;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum DecoderError {
    #[error("expected {expected} channel LLRs, got {got}")]
    Length { expected: usize, got: usize },
    #[error("channel LLRs must be finite")]
    NonFinite,
    #[error("weight schedule does not fit the graph: {0}")]
    Schedule(String),
}

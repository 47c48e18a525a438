//! One- and two-bit message passing (BMP, TMP, QMP) for protograph-based
//! spatially coupled LDPC codes with higher-order modulation and
//! probabilistic amplitude shaping.
//!
//! The crate is organised along the processing chain:
//!
//! * [`constellation`]: ASK sets, Maxwell-Boltzmann shaping, bit-metric LLRs,
//!   achievable rates and bit-channel models;
//! * [`protograph`]: coupled base matrices, windows, bit mappings and
//!   girth-aware cyclic lifting;
//! * [`de`]: density evolution, weight schedules and thresholds;
//! * [`decoders`]: finite-length quantized decoders and a sum-product
//!   baseline;
//! * [`sim`]: Monte Carlo frame error rate estimation.
//!
//! Density evolution and decoding are generic over the [`Real`] scalar; the
//! aliases below fix the common choices.

pub mod constellation;
pub mod de;
pub mod decoders;
pub mod numerics;
pub mod protograph;
mod scalar;
pub mod sim;

pub use scalar::Real;

/// Density-evolution state in double precision.
pub type EdgeTypeProbs64 = de::EdgeTypeProbs<f64>;
/// Density-evolution state in single precision.
pub type EdgeTypeProbs32 = de::EdgeTypeProbs<f32>;
/// Weight schedule as produced by threshold work.
pub type WeightSchedule64 = de::WeightSchedule<f64>;
/// Weight schedule used by the fast single-precision decoders.
pub type WeightSchedule32 = de::WeightSchedule<f32>;
pub type DeOutcome64 = de::DeOutcome<f64>;
pub type MessagePassingDecoder64<'g> = decoders::MessagePassingDecoder<'g, f64>;
pub type MessagePassingDecoder32<'g> = decoders::MessagePassingDecoder<'g, f32>;
pub type BpDecoder64<'g> = decoders::BpDecoder<'g, f64>;
pub type BpDecoder32<'g> = decoders::BpDecoder<'g, f32>;

/// Internal decoder data flow per iteration, `F = 2·n·q·d̄_v` bits.
pub fn data_flow(n_coded: u64, bits_per_message: u32, mean_vn_degree: f64) -> f64 {
    2.0 * n_coded as f64 * bits_per_message as f64 * mean_vn_degree
}

//! Monte Carlo frame and bit error rates with the all-zero codeword and a
//! symmetrized channel.
//!
//! Each frame draws its noise from its own counter-based stream derived from
//! `(master seed, SNR index, frame index)`, so results do not depend on how
//! frames are spread over threads.

mod frame;
mod report;
mod run;
mod stats;

pub use frame::{expand_mapping, sample_frame, FrameSampler, Sampler};
pub use report::{fer_rows, run_manifest, write_fer_csv, FerRow};
pub use run::{frame_rng, run_fer, run_fer_with, FerRecord, SimDecoder, SimPlan, StopRule};
pub use stats::{clopper_pearson, ks_two_sample};

use thiserror::Error;

use crate::decoders::DecoderError;

#[derive(Debug, Error)]
pub enum SimError {
    #[error("invalid simulation plan: {0}")]
    Plan(String),
    #[error(transparent)]
    Decoder(#[from] DecoderError),
    #[error("CSV output failed: {0}")]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

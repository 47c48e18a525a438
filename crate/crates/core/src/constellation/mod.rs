//! ASK constellations, shaped input distributions, bit-metric LLRs and the
//! bit-channel models derived from them.

mod ask;
mod channel;
mod llr;
mod mode;
mod rates;
mod shaping;

pub use ask::{make_ask, AskConstellation, MAX_BITS_PER_SYMBOL};
pub use channel::{
    sample_llr_cdf, sample_symmetrized_llrs, BitChannelModel, CdfMeta, EmpiricalCdf, MIN_RECOMMENDED_SAMPLES,
};
pub(crate) use channel::draw_symbol;
pub use llr::{bit_llr, symmetrize, BitDemapper, LLR_CLAMP};
pub use mode::{ModeSpec, ShapingKind, SignalingMode, PRESET_NAMES};
pub use rates::{
    biawgn_cond_entropy, cond_bit_entropy, rbmd, rbmd_inv, surrogate_for_entropy, surrogate_sigma, SurrogateChannel,
};
pub use shaping::{maxwell_boltzmann, mb_fit, pas_rates, MbFit, SymbolDistribution};

use thiserror::Error;

use crate::numerics::NumericsError;

#[derive(Debug, Error)]
pub enum ConstellationError {
    #[error("bits per symbol must be in 1..=8, got {0}")]
    BitsOutOfRange(usize),
    #[error("bit level {level} out of range 1..={m}")]
    BitLevelOutOfRange { level: usize, m: usize },
    #[error("probabilities must be non-negative and sum to one (sum = {0})")]
    InvalidDistribution(f64),
    #[error("target entropy {target} bits is not reachable by a sign-uniform MB law on {max}-bit ASK (feasible range (1, {max}])")]
    InfeasibleEntropy { target: f64, max: f64 },
    #[error("code rate must lie in (0, 1], got {0}")]
    InvalidCodeRate(f64),
    #[error("infeasible PAS mode: R_tx = {rtx}, R_c = {rc}, m = {m} gives R_dm = {dm_rate} outside (0, m-1]")]
    InfeasibleMode { rtx: f64, rc: f64, m: usize, dm_rate: f64 },
    #[error("uniform mode has R_tx = {rtx} but m * R_c = {expected}")]
    InconsistentUniformRate { rtx: f64, expected: f64 },
    #[error("unknown mode preset {0:?}")]
    UnknownPreset(String),
    #[error("rate {rate} is outside (0, H(X) = {max})")]
    RateOutOfRange { rate: f64, max: f64 },
    #[error("integration of H(B_{level}|Y) at {snr_db} dB failed: {source}")]
    Integration {
        snr_db: f64,
        level: usize,
        #[source]
        source: NumericsError,
    },
    #[error("bit channel at {snr_db} dB, level {level} is degenerate (H(B|Y) = {entropy}); no surrogate exists")]
    DegenerateChannel { snr_db: f64, level: usize, entropy: f64 },
    #[error("at least one sample is required")]
    NoSamples,
    #[error("malformed LLR cache: {0}")]
    BadCache(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

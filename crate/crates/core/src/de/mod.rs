//! Density evolution for binary, ternary and quaternary message passing on
//! protograph ensembles: message-type probabilities per edge type, weight
//! extraction, window convergence and threshold search.

mod cn;
mod edges;
mod run;
mod schedule;
mod threshold;
mod vn;
mod weights;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use cn::{cn_combine, cn_identity, de_cn, de_cn_products};
pub use edges::{EdgeTypeProbs, EdgeTypes};
pub use run::{de_run, DeOutcome};
pub use schedule::WeightSchedule;
pub use threshold::{
    bit_channels, coupled_setup, default_scheme, probe, threshold, threshold_over_t, window_setup, write_threshold_csv, Probe,
    ThresholdResult, ThresholdRow, THRESHOLD_RESOLUTION_DB,
};
pub use vn::{de_app, de_init, de_vn, de_vn_app, message_distribution, DiscreteLlrDistribution, VnPass};
pub use weights::{de_weights, log_ratio, message_llr, EdgeWeights, W_MAX};

use crate::constellation::ConstellationError;
use crate::protograph::ProtographError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Algorithm {
    Bmp,
    Tmp,
    Qmp,
}

impl Algorithm {
    pub const ALL: [Algorithm; 3] = [Algorithm::Bmp, Algorithm::Tmp, Algorithm::Qmp];

    /// Number of message values.
    pub fn alphabet_len(self) -> usize {
        match self {
            Self::Bmp => 2,
            Self::Tmp => 3,
            Self::Qmp => 4,
        }
    }

    /// Bits per exchanged message.
    pub fn message_bits(self) -> u32 {
        match self {
            Self::Bmp => 1,
            _ => 2,
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Bmp => "BMP",
            Self::Tmp => "TMP",
            Self::Qmp => "QMP",
        })
    }
}

impl FromStr for Algorithm {
    type Err = DeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_uppercase().as_str() {
            "BMP" => Ok(Self::Bmp),
            "TMP" => Ok(Self::Tmp),
            "QMP" => Ok(Self::Qmp),
            _ => Err(DeError::Config(format!("unknown algorithm {s:?}"))),
        }
    }
}

/// Where initial message probabilities come from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum InitSource {
    /// Monte Carlo CDF of the symmetrized bit-channel LLRs.
    Empirical,
    /// BI-AWGN channel with matched conditional entropy.
    Surrogate,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DeConfig {
    /// Quantizer threshold `T`.
    pub t: f64,
    pub l_max: usize,
    pub convergence_eps: f64,
    /// Absolute tolerance for merging equal LLR values.
    pub merge_tol: f64,
    pub init_source: InitSource,
    pub init_samples: usize,
    pub init_seed: u64,
    /// Maximum convolution products per VN type and iteration.
    pub term_budget: u64,
    /// Stop as not converged when no probability moves by more than this in
    /// one iteration; `0` disables the check.
    pub stall_tol: f64,
    /// Number of leading VN types checked for convergence; `None` watches
    /// all.
    pub watch_cols: Option<usize>,
}

impl Default for DeConfig {
    fn default() -> Self {
        Self {
            t: 1.3,
            l_max: 1000,
            convergence_eps: 1e-8,
            merge_tol: 1e-9,
            init_source: InitSource::Empirical,
            init_samples: 1_000_000,
            init_seed: 1,
            term_budget: 10_000_000,
            stall_tol: 1e-13,
            watch_cols: None,
        }
    }
}

impl DeConfig {
    pub fn validate(&self) -> Result<(), DeError> {
        if !(self.t >= 0.0 && self.t.is_finite()) {
            return Err(DeError::Config(format!("T must be finite and >= 0, got {}", self.t)));
        }
        if self.l_max == 0 {
            return Err(DeError::Config("lMax must be at least 1".into()));
        }
        if !(self.convergence_eps > 0.0 && self.convergence_eps < 1.0) {
            return Err(DeError::Config(format!("convergence eps must lie in (0, 1), got {}", self.convergence_eps)));
        }
        if !(self.merge_tol > 0.0) {
            return Err(DeError::Config("merge tolerance must be positive".into()));
        }
        if self.init_source == InitSource::Empirical && self.init_samples == 0 {
            return Err(DeError::Config("empirical initialisation needs samples".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Error)]
pub enum DeError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("no bit channel supplied for level {level}")]
    MissingChannel { level: usize },
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error(
        "VN type {vn_type} (degree {degree}) needs more than {budget} convolution terms (reached {terms}); \
         raise the term budget or use a smaller base"
    )]
    TermBudget { vn_type: usize, degree: usize, terms: u64, budget: u64 },
    #[error(
        "invalid SNR bracket [{lo}, {hi}] dB (converged at lo: {lo_converged}, at hi: {hi_converged}); \
         widen the bracket so DE fails at the lower and succeeds at the upper end"
    )]
    Bracket { lo: f64, hi: f64, lo_converged: bool, hi_converged: bool },
    #[error("weight schedule: {0}")]
    Schedule(String),
    #[error(transparent)]
    Constellation(#[from] ConstellationError),
    #[error(transparent)]
    Protograph(#[from] ProtographError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

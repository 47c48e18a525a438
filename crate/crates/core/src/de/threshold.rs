use std::io::Write;

use serde::{Deserialize, Serialize};

use super::{de_run, Algorithm, DeConfig, DeError, InitSource};
use crate::constellation::{
    cond_bit_entropy, sample_llr_cdf, surrogate_for_entropy, BitChannelModel, SignalingMode, SurrogateChannel,
};
use crate::protograph::{bit_mapping, coupled_base, window_base, BitMapping, MappingScheme, ScEnsemble};
use crate::Real;

/// Bisection stops once the bracket is this narrow.
pub const THRESHOLD_RESOLUTION_DB: f64 = 0.01;

/// Smallest surrogate `σ̆` used when a bit channel is practically noiseless.
const NOISELESS_SIGMA_BREVE: f64 = 0.05;

/// Bit mapping matching the mode: PAS for shaped modes, uniform otherwise.
pub fn default_scheme(mode: &SignalingMode) -> MappingScheme {
    if mode.is_shaped() {
        MappingScheme::Pas
    } else {
        MappingScheme::Uniform
    }
}

/// One channel model per bit level at `snr_db`.
pub fn bit_channels(mode: &SignalingMode, snr_db: f64, cfg: &DeConfig) -> Result<Vec<BitChannelModel>, DeError> {
    (1..=mode.bits())
        .map(|level| match cfg.init_source {
            InitSource::Empirical => Ok(sample_llr_cdf(mode, snr_db, level, cfg.init_samples, cfg.init_seed)?),
            InitSource::Surrogate => {
                let h = cond_bit_entropy(mode, snr_db, level)?;
                let s = match surrogate_for_entropy(h) {
                    Ok(s) => s,
                    Err(_) if h < 0.5 => SurrogateChannel::from_sigma_breve(NOISELESS_SIGMA_BREVE),
                    Err(e) => return Err(e.into()),
                };
                Ok(BitChannelModel::Surrogate(s))
            }
        })
        .collect()
}

/// Window protograph and bit mapping analysed for `(e, w, mode)`.
pub fn window_setup(e: &ScEnsemble, w: usize, mode: &SignalingMode) -> Result<(crate::protograph::BaseMatrix, BitMapping), DeError> {
    let base = window_base(e, w)?;
    let map = bit_mapping(&base, mode.bits(), default_scheme(mode), e.sub_cols())?;
    Ok((base, map))
}

/// Terminated coupled protograph with `s` positions and its bit mapping,
/// the design point for finite-length schedules.
pub fn coupled_setup(e: &ScEnsemble, s: usize, mode: &SignalingMode) -> Result<(crate::protograph::BaseMatrix, BitMapping), DeError> {
    let (base, _) = coupled_base(e, s)?;
    let map = bit_mapping(&base, mode.bits(), default_scheme(mode), e.sub_cols())?;
    Ok((base, map))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Probe {
    pub snr_db: f64,
    pub converged: bool,
    pub iterations: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ThresholdResult {
    pub threshold_db: f64,
    pub iterations: usize,
    pub probes: Vec<Probe>,
}

/// Window-decoding DE probe at a single SNR.
pub fn probe<F: Real>(
    alg: Algorithm,
    e: &ScEnsemble,
    w: usize,
    mode: &SignalingMode,
    cfg: &DeConfig,
    snr_db: f64,
) -> Result<Probe, DeError> {
    let (base, map) = window_setup(e, w, mode)?;
    let channels = bit_channels(mode, snr_db, cfg)?;
    let cfg = DeConfig { watch_cols: Some(e.sub_cols()), ..cfg.clone() };
    let out = de_run::<F>(alg, &base, &map, &channels, &cfg)?;
    Ok(Probe { snr_db, converged: out.converged, iterations: out.iterations })
}

/// Smallest SNR (to 0.01 dB) at which window DE converges, by bisection
/// on `[snr_lo, snr_hi]`.
pub fn threshold<F: Real>(
    alg: Algorithm,
    e: &ScEnsemble,
    w: usize,
    mode: &SignalingMode,
    cfg: &DeConfig,
    snr_lo: f64,
    snr_hi: f64,
) -> Result<ThresholdResult, DeError> {
    if !(snr_lo < snr_hi) {
        return Err(DeError::Config(format!("empty SNR bracket [{snr_lo}, {snr_hi}]")));
    }
    let mut probes = Vec::new();
    let lo = probe::<F>(alg, e, w, mode, cfg, snr_lo)?;
    probes.push(lo);
    let hi = probe::<F>(alg, e, w, mode, cfg, snr_hi)?;
    probes.push(hi);
    if lo.converged || !hi.converged {
        return Err(DeError::Bracket { lo: snr_lo, hi: snr_hi, lo_converged: lo.converged, hi_converged: hi.converged });
    }
    let (mut a, mut b, mut b_iter) = (snr_lo, snr_hi, hi.iterations);
    while b - a > THRESHOLD_RESOLUTION_DB + 1e-9 {
        let mid = 0.5 * (a + b);
        let p = probe::<F>(alg, e, w, mode, cfg, mid)?;
        probes.push(p);
        if p.converged {
            b = mid;
            b_iter = p.iterations;
        } else {
            a = mid;
        }
    }
    Ok(ThresholdResult { threshold_db: b, iterations: b_iter, probes })
}

/// Threshold for each `T` in `grid`; entries whose bracket fails are
/// reported as `None`.
pub fn threshold_over_t<F: Real>(
    alg: Algorithm,
    e: &ScEnsemble,
    w: usize,
    mode: &SignalingMode,
    cfg: &DeConfig,
    grid: &[f64],
    snr_lo: f64,
    snr_hi: f64,
) -> Result<Vec<(f64, Option<f64>)>, DeError> {
    let mut out = Vec::with_capacity(grid.len());
    for &t in grid {
        let c = DeConfig { t, ..cfg.clone() };
        match threshold::<F>(alg, e, w, mode, &c, snr_lo, snr_hi) {
            Ok(r) => out.push((t, Some(r.threshold_db))),
            Err(DeError::Bracket { .. }) => out.push((t, None)),
            Err(err) => return Err(err),
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThresholdRow {
    pub ensemble: String,
    pub mode: String,
    pub alg: Algorithm,
    #[serde(rename = "W")]
    pub w: usize,
    #[serde(rename = "threshold_dB")]
    pub threshold_db: f64,
    pub iterations_at_threshold: usize,
}

pub fn write_threshold_csv<W: Write>(rows: &[ThresholdRow], out: W) -> Result<(), DeError> {
    let mut wtr = csv::Writer::from_writer(out);
    for r in rows {
        wtr.serialize(r).map_err(|e| DeError::Schedule(e.to_string()))?;
    }
    wtr.flush()?;
    Ok(())
}

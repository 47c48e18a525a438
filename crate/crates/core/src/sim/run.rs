use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{clopper_pearson, FrameSampler, Sampler, SimError};
use crate::constellation::SignalingMode;
use crate::de::{Algorithm, WeightSchedule};
use crate::decoders::{BpDecoder, DecodeResult, DecoderError, DecoderGraph, MessagePassingDecoder};
use crate::protograph::{BitMapping, LiftedCode};
use crate::Real;

/// Stopping rule applied independently at every SNR point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct StopRule {
    pub max_frames: u64,
    pub min_frame_errors: u64,
}

impl Default for StopRule {
    fn default() -> Self {
        Self { max_frames: 1_000_000, min_frame_errors: 50 }
    }
}

/// Decoder run on every frame.
#[derive(Debug, Clone)]
pub enum SimDecoder<F> {
    /// Weighted BMP/TMP/QMP with the schedule's algorithm.
    MessagePassing(WeightSchedule<F>),
    /// Unquantized sum-product reference.
    SumProduct,
}

impl<F> SimDecoder<F> {
    pub fn label(&self) -> String {
        match self {
            Self::MessagePassing(s) => s.alg.to_string(),
            Self::SumProduct => "BP".into(),
        }
    }

    pub fn alg(&self) -> Option<Algorithm> {
        match self {
            Self::MessagePassing(s) => Some(s.alg),
            Self::SumProduct => None,
        }
    }
}

/// Everything a Monte Carlo run depends on.
#[derive(Debug, Clone)]
pub struct SimPlan<F> {
    pub mode: SignalingMode,
    pub code: LiftedCode,
    /// Bit level of every lifted VN.
    pub mapping: BitMapping,
    pub decoder: SimDecoder<F>,
    pub snr_db: Vec<f64>,
    pub stop: StopRule,
    pub l_max: usize,
    pub master_seed: u64,
    pub sampler: Sampler,
    /// Frames decoded per parallel batch; affects only wasted work past the
    /// stopping point, never the results. Defaults to four per worker thread.
    pub batch: usize,
}

impl<F: Real> SimPlan<F> {
    /// Plan with default stopping, independent sampling and `mapping` given
    /// per base column.
    pub fn new(
        mode: SignalingMode,
        code: LiftedCode,
        base_mapping: &BitMapping,
        decoder: SimDecoder<F>,
        snr_db: Vec<f64>,
        l_max: usize,
        master_seed: u64,
    ) -> Self {
        let mapping = super::expand_mapping(base_mapping, code.q());
        Self {
            mode,
            code,
            mapping,
            decoder,
            snr_db,
            stop: StopRule::default(),
            l_max,
            master_seed,
            sampler: Sampler::Independent,
            batch: 4 * rayon::current_num_threads(),
        }
    }

    /// Rejects inconsistent plans; `run_fer` calls this before any frame.
    pub fn validate(&self) -> Result<(), SimError> {
        let bad = |msg: String| Err(SimError::Plan(msg));
        if self.snr_db.is_empty() {
            return bad("SNR grid is empty".into());
        }
        if let Some(s) = self.snr_db.iter().find(|s| !s.is_finite()) {
            return bad(format!("SNR point {s} is not finite"));
        }
        if self.stop.max_frames == 0 || self.stop.min_frame_errors == 0 {
            return bad("maxFrames and minFrameErrors must be positive".into());
        }
        if self.l_max == 0 {
            return bad("lMax must be positive".into());
        }
        if self.batch == 0 {
            return bad("batch size must be positive".into());
        }
        if self.mapping.bits() != self.mode.bits() {
            return bad(format!(
                "mapping uses {} bit levels, mode {} has {}",
                self.mapping.bits(),
                self.mode.name(),
                self.mode.bits()
            ));
        }
        if self.mapping.len() != self.code.n() {
            return bad(format!("mapping covers {} VNs, code has {}", self.mapping.len(), self.code.n()));
        }
        let q = self.code.q();
        let levels = self.mapping.levels();
        if levels.chunks(q).any(|c| c.iter().any(|&k| k != c[0])) {
            return bad("VNs lifted from one base column must share a bit level".into());
        }
        if let SimDecoder::MessagePassing(s) = &self.decoder {
            if !s.is_finite() {
                return bad("weight schedule contains non-finite weights".into());
            }
            DecoderGraph::new(&self.code).check_schedule(s)?;
        }
        Ok(())
    }
}

/// Outcome of one SNR point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct FerRecord {
    pub snr_db: f64,
    pub frames_run: u64,
    pub frame_errors: u64,
    pub bit_errors: u64,
    pub fer: f64,
    pub ber: f64,
    pub wall_time: f64,
}

impl FerRecord {
    fn new(snr_db: f64, frames_run: u64, frame_errors: u64, bit_errors: u64, n: usize, wall_time: f64) -> Self {
        let fer = if frames_run == 0 { 0.0 } else { frame_errors as f64 / frames_run as f64 };
        let ber = if frames_run == 0 { 0.0 } else { bit_errors as f64 / (frames_run as f64 * n as f64) };
        Self { snr_db, frames_run, frame_errors, bit_errors, fer, ber, wall_time }
    }

    /// Two-sided Clopper-Pearson interval on the FER.
    pub fn fer_interval(&self, alpha: f64) -> (f64, f64) {
        clopper_pearson(self.frame_errors, self.frames_run, alpha)
    }
}

/// RNG of frame `frame` at SNR index `snr_idx`; a pure function of its
/// arguments.
pub fn frame_rng(master_seed: u64, snr_idx: usize, frame: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(((snr_idx as u64) << 40) | frame);
    rng
}

enum Worker<'g, F> {
    Mp(MessagePassingDecoder<'g, F>),
    Bp(BpDecoder<'g, F>),
}

impl<F: Real> Worker<'_, F> {
    fn decode(&mut self, llr: &[F], l_max: usize) -> Result<DecodeResult, DecoderError> {
        match self {
            Self::Mp(d) => d.decode(llr, l_max),
            Self::Bp(d) => d.decode(llr, l_max),
        }
    }
}

/// Frame error rate at every SNR point of `plan`.
///
/// Frames are decoded in parallel batches and then scanned in index order, so
/// the stopping point and every count are independent of the thread count.
pub fn run_fer<F: Real>(plan: &SimPlan<F>) -> Result<Vec<FerRecord>, SimError> {
    run_fer_with(plan, |_| {})
}

/// As [`run_fer`], calling `progress` after each SNR point.
pub fn run_fer_with<F: Real>(plan: &SimPlan<F>, mut progress: impl FnMut(&FerRecord)) -> Result<Vec<FerRecord>, SimError> {
    plan.validate()?;
    let g = DecoderGraph::new(&plan.code);
    let n = g.n();
    let mut out = Vec::with_capacity(plan.snr_db.len());
    for (si, &snr) in plan.snr_db.iter().enumerate() {
        let start = Instant::now();
        let sampler = FrameSampler::new(&plan.mode, &plan.mapping, snr, plan.sampler);
        let (mut frames, mut errors, mut bits) = (0u64, 0u64, 0u64);
        'points: while frames < plan.stop.max_frames {
            let end = (frames + plan.batch as u64).min(plan.stop.max_frames);
            let results: Vec<Result<(bool, u64), DecoderError>> = (frames..end)
                .into_par_iter()
                .map_init(
                    || {
                        let w = match &plan.decoder {
                            SimDecoder::MessagePassing(s) => {
                                Worker::Mp(MessagePassingDecoder::new(&g, s).expect("schedule validated"))
                            }
                            SimDecoder::SumProduct => Worker::Bp(BpDecoder::new(&g)),
                        };
                        (w, vec![F::zero(); n])
                    },
                    |(w, llr), f| {
                        let mut rng = frame_rng(plan.master_seed, si, f);
                        sampler.sample(&mut rng, llr);
                        let r = w.decode(llr, plan.l_max)?;
                        let e = r.bit_errors() as u64;
                        Ok((e > 0, e))
                    },
                )
                .collect();
            for r in results {
                let (failed, e) = r?;
                frames += 1;
                bits += e;
                if failed {
                    errors += 1;
                    if errors >= plan.stop.min_frame_errors {
                        break 'points;
                    }
                }
            }
        }
        let rec = FerRecord::new(snr, frames, errors, bits, n, start.elapsed().as_secs_f64());
        progress(&rec);
        out.push(rec);
    }
    Ok(out)
}

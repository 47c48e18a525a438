//! Per-bit-level models of the symmetrized LLR law consumed by density
//! evolution: Monte Carlo CDFs or Gaussian surrogates.

use std::io::{Read, Write};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{weighted::WeightedIndex, Distribution, StandardNormal};

use super::{symmetrize, BitDemapper, ConstellationError, SignalingMode, SurrogateChannel};
use crate::numerics::q_function;

/// Below this many samples an empirical CDF is flagged as undersampled.
pub const MIN_RECOMMENDED_SAMPLES: usize = 100_000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CdfMeta {
    pub mode_hash: u64,
    pub snr_db: f64,
    pub level: u32,
    pub count: u64,
    pub seed: u64,
}

/// Sorted sample set with a piecewise-linear CDF through the order
/// statistics (`F(s_i) = (i + 1/2)/n`, clamped to 0 and 1 outside the data).
#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalCdf {
    samples: Vec<f64>,
    meta: CdfMeta,
}

impl EmpiricalCdf {
    pub fn from_samples(mut samples: Vec<f64>, meta: CdfMeta) -> Self {
        assert!(!samples.is_empty(), "empirical CDF needs samples");
        samples.sort_by(f64::total_cmp);
        let meta = CdfMeta { count: samples.len() as u64, ..meta };
        Self { samples, meta }
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn meta(&self) -> &CdfMeta {
        &self.meta
    }

    pub fn undersampled(&self) -> bool {
        self.samples.len() < MIN_RECOMMENDED_SAMPLES
    }

    fn interpolate(&self, below: usize, x: f64) -> f64 {
        let n = self.samples.len();
        if below == 0 {
            return 0.0;
        }
        if below == n {
            return 1.0;
        }
        let lo = self.samples[below - 1];
        let hi = self.samples[below];
        let frac = if hi > lo { ((x - lo) / (hi - lo)).clamp(0.0, 1.0) } else { 0.0 };
        (below as f64 - 0.5 + frac) / n as f64
    }

    /// `Pr{L ≤ x}`.
    pub fn cdf_le(&self, x: f64) -> f64 {
        let c = self.samples.partition_point(|&s| s <= x);
        self.interpolate(c, x)
    }

    /// `Pr{L < x}`; differs from [`Self::cdf_le`] only on atoms.
    pub fn cdf_lt(&self, x: f64) -> f64 {
        let c = self.samples.partition_point(|&s| s < x);
        self.interpolate(c, x)
    }

    pub fn mean(&self) -> f64 {
        self.samples.iter().sum::<f64>() / self.samples.len() as f64
    }

    const MAGIC: &'static [u8; 8] = b"SCLLRCDF";

    /// Writes the cache format: magic, header `{mode hash, snr_db, level,
    /// count, seed}` and the sorted samples, all little-endian.
    pub fn write_cache<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        w.write_all(Self::MAGIC)?;
        w.write_all(&self.meta.mode_hash.to_le_bytes())?;
        w.write_all(&self.meta.snr_db.to_le_bytes())?;
        w.write_all(&self.meta.level.to_le_bytes())?;
        w.write_all(&self.meta.count.to_le_bytes())?;
        w.write_all(&self.meta.seed.to_le_bytes())?;
        for s in &self.samples {
            w.write_all(&s.to_le_bytes())?;
        }
        Ok(())
    }

    pub fn read_cache<R: Read>(mut r: R) -> Result<Self, ConstellationError> {
        let mut magic = [0u8; 8];
        r.read_exact(&mut magic)?;
        if &magic != Self::MAGIC {
            return Err(ConstellationError::BadCache("wrong magic".into()));
        }
        let mut b8 = [0u8; 8];
        let mut b4 = [0u8; 4];
        r.read_exact(&mut b8)?;
        let mode_hash = u64::from_le_bytes(b8);
        r.read_exact(&mut b8)?;
        let snr_db = f64::from_le_bytes(b8);
        r.read_exact(&mut b4)?;
        let level = u32::from_le_bytes(b4);
        r.read_exact(&mut b8)?;
        let count = u64::from_le_bytes(b8);
        r.read_exact(&mut b8)?;
        let seed = u64::from_le_bytes(b8);
        if count == 0 {
            return Err(ConstellationError::BadCache("empty sample set".into()));
        }
        let mut samples = Vec::with_capacity(count as usize);
        for _ in 0..count {
            r.read_exact(&mut b8)?;
            samples.push(f64::from_le_bytes(b8));
        }
        if samples.windows(2).any(|w| w[0] > w[1]) {
            return Err(ConstellationError::BadCache("samples not sorted".into()));
        }
        Ok(Self { samples, meta: CdfMeta { mode_hash, snr_db, level, count, seed } })
    }
}

/// Law of the symmetrized LLR `L̃_k` for one bit level.
#[derive(Debug, Clone, PartialEq)]
pub enum BitChannelModel {
    Empirical(EmpiricalCdf),
    Surrogate(SurrogateChannel),
}

impl BitChannelModel {
    /// `Pr{L̃ ≤ x}`.
    pub fn cdf_le(&self, x: f64) -> f64 {
        match self {
            Self::Empirical(e) => e.cdf_le(x),
            Self::Surrogate(s) => gaussian_cdf(s, x),
        }
    }

    /// `Pr{L̃ < x}`.
    pub fn cdf_lt(&self, x: f64) -> f64 {
        match self {
            Self::Empirical(e) => e.cdf_lt(x),
            Self::Surrogate(s) => gaussian_cdf(s, x),
        }
    }

    pub fn mean(&self) -> f64 {
        match self {
            Self::Empirical(e) => e.mean(),
            Self::Surrogate(s) => s.mu,
        }
    }
}

fn gaussian_cdf(s: &SurrogateChannel, x: f64) -> f64 {
    if x == f64::INFINITY {
        return 1.0;
    }
    if x == f64::NEG_INFINITY {
        return 0.0;
    }
    q_function((s.mu - x) / s.sigma)
}

/// Draws one channel use: returns the transmitted point index and the
/// received value.
#[inline]
pub(crate) fn draw_symbol<R: Rng>(rng: &mut R, index: &WeightedIndex<f64>, points: &[f64], sigma: f64) -> (usize, f64) {
    let i = index.sample(rng);
    let n: f64 = rng.sample(StandardNormal);
    (i, points[i] + sigma * n)
}

/// Raw symmetrized LLR samples for `level`.
pub fn sample_symmetrized_llrs(mode: &SignalingMode, snr_db: f64, level: usize, n: usize, seed: u64) -> Vec<f64> {
    let s2 = mode.noise_variance(snr_db);
    let demapper = BitDemapper::new(mode, s2);
    let index = WeightedIndex::new(mode.dist().probs().to_vec()).expect("valid distribution");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(level as u64);
    let sigma = s2.sqrt();
    (0..n)
        .map(|_| {
            let (i, y) = draw_symbol(&mut rng, &index, demapper.points(), sigma);
            symmetrize(demapper.llr(y, level), demapper.label_bit(i, level))
        })
        .collect()
}

/// Monte Carlo estimate of the CDF of `L̃_level` at `snr_db`.
pub fn sample_llr_cdf(
    mode: &SignalingMode,
    snr_db: f64,
    level: usize,
    n: usize,
    seed: u64,
) -> Result<BitChannelModel, ConstellationError> {
    if level == 0 || level > mode.bits() {
        return Err(ConstellationError::BitLevelOutOfRange { level, m: mode.bits() });
    }
    if n == 0 {
        return Err(ConstellationError::NoSamples);
    }
    let samples = sample_symmetrized_llrs(mode, snr_db, level, n, seed);
    let meta = CdfMeta { mode_hash: mode.hash64(), snr_db, level: level as u32, count: n as u64, seed };
    Ok(BitChannelModel::Empirical(EmpiricalCdf::from_samples(samples, meta)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constellation::{cond_bit_entropy, make_ask, SymbolDistribution};
    use crate::numerics::integrate;

    fn uniform8() -> SignalingMode {
        SignalingMode::with_distribution("8U", make_ask(3).unwrap(), SymbolDistribution::uniform(8), 1.0).unwrap()
    }

    #[test]
    fn empirical_cdf_limits_and_monotone() {
        let m = sample_llr_cdf(&uniform8(), 9.0, 1, 20_000, 3).unwrap();
        assert_eq!(m.cdf_le(f64::INFINITY), 1.0);
        assert_eq!(m.cdf_le(f64::NEG_INFINITY), 0.0);
        let mut prev = 0.0;
        for i in -400..400 {
            let v = m.cdf_le(i as f64 * 0.1);
            assert!((0.0..=1.0).contains(&v) && v >= prev);
            prev = v;
        }
    }

    #[test]
    fn atoms_split_le_and_lt() {
        let meta = CdfMeta { mode_hash: 0, snr_db: 0.0, level: 1, count: 0, seed: 0 };
        let e = EmpiricalCdf::from_samples(vec![0.0; 10], meta);
        assert_eq!(e.cdf_lt(0.0), 0.0);
        assert_eq!(e.cdf_le(0.0), 1.0);
    }

    #[test]
    fn sign_level_error_rate_matches_quadrature() {
        // Pr{L̃_1 ≤ 0} is the hard-decision error probability of the sign bit.
        let mode = uniform8();
        let snr = 9.0;
        let s2 = mode.noise_variance(snr);
        let n = 400_000;
        let m = sample_llr_cdf(&mode, snr, 1, n, 11).unwrap();
        let est = m.cdf_le(0.0);
        // oracle: decide on sign of y, transmitted sign of x
        let sigma = s2.sqrt();
        let pdf = |y: f64, x: f64| (-(y - x) * (y - x) / (2.0 * s2)).exp() / (2.0 * std::f64::consts::PI * s2).sqrt();
        let mut p = 0.0;
        for &x in mode.constellation().points() {
            let v = if x > 0.0 {
                integrate(|y| pdf(y, x), x - 12.0 * sigma, 0.0, 1e-14).unwrap()
            } else {
                integrate(|y| pdf(y, x), 0.0, x + 12.0 * sigma, 1e-14).unwrap()
            };
            p += v / 8.0;
        }
        let sd = (p * (1.0 - p) / n as f64).sqrt();
        assert!((est - p).abs() < 4.0 * sd + 1.0 / n as f64, "est {est} oracle {p}");
    }

    #[test]
    fn sampled_entropy_matches_quadrature() {
        // E[log2(1 + e^{-L̃})] = H(B|Y) for the symmetrized bit channel
        let mode = SignalingMode::preset("8PS-0.67").unwrap();
        for k in 1..=3 {
            let xs = sample_symmetrized_llrs(&mode, 9.0, k, 200_000, 5);
            let est: f64 = xs.iter().map(|&l| crate::numerics::log2_1p_exp_neg(l)).sum::<f64>() / xs.len() as f64;
            let exact = cond_bit_entropy(&mode, 9.0, k).unwrap();
            assert!((est - exact).abs() < 5e-3, "level {k}: {est} vs {exact}");
        }
    }

    #[test]
    fn cache_round_trip() {
        let m = sample_llr_cdf(&uniform8(), 7.0, 2, 1000, 9).unwrap();
        let BitChannelModel::Empirical(e) = m else { unreachable!() };
        let mut buf = Vec::new();
        e.write_cache(&mut buf).unwrap();
        assert_eq!(buf.len(), 8 + 8 + 8 + 4 + 8 + 8 + 8 * 1000);
        let back = EmpiricalCdf::read_cache(buf.as_slice()).unwrap();
        assert_eq!(back, e);
        assert!(EmpiricalCdf::read_cache(&buf[..20]).is_err());
    }
}

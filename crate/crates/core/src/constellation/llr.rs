use super::SignalingMode;

/// Saturation applied to every bit LLR, in nats. Keeps later `exp()` calls
/// finite for outputs far outside the constellation.
pub const LLR_CLAMP: f64 = 300.0;

/// Bit-metric demapper for a mode at a fixed noise variance.
///
/// Evaluates `l_k(y) = ln Σ_{x: b_k=0} p(y|x)P(x) − ln Σ_{x: b_k=1} p(y|x)P(x)`
/// with a max-shifted log-sum-exp per hypothesis.
#[derive(Debug, Clone)]
pub struct BitDemapper {
    m: usize,
    points: Vec<f64>,
    log_prior: Vec<f64>,
    bits: Vec<Vec<u8>>,
    inv_two_sigma2: f64,
}

impl BitDemapper {
    pub fn new(mode: &SignalingMode, noise_variance: f64) -> Self {
        assert!(noise_variance > 0.0, "noise variance must be positive");
        let c = mode.constellation();
        let m = c.bits();
        let bits = (0..c.len()).map(|i| (1..=m).map(|k| c.bit(i, k)).collect()).collect();
        let log_prior = mode
            .dist()
            .probs()
            .iter()
            .map(|&p| if p > 0.0 { p.ln() } else { f64::NEG_INFINITY })
            .collect();
        Self {
            m,
            points: c.points().to_vec(),
            log_prior,
            bits,
            inv_two_sigma2: 0.5 / noise_variance,
        }
    }

    pub fn bits(&self) -> usize {
        self.m
    }

    /// Bit LLR at level `level` (1-based).
    pub fn llr(&self, y: f64, level: usize) -> f64 {
        let mut max0 = f64::NEG_INFINITY;
        let mut max1 = f64::NEG_INFINITY;
        let mut buf = [0.0f64; 1 << super::ask::MAX_BITS_PER_SYMBOL];
        let metrics = &mut buf[..self.points.len()];
        for ((v, &x), &lp) in metrics.iter_mut().zip(&self.points).zip(&self.log_prior) {
            *v = lp - (y - x) * (y - x) * self.inv_two_sigma2;
        }
        for (i, &v) in metrics.iter().enumerate() {
            if self.bits[i][level - 1] == 0 {
                max0 = max0.max(v);
            } else {
                max1 = max1.max(v);
            }
        }
        let (mut s0, mut s1) = (0.0, 0.0);
        for (i, &v) in metrics.iter().enumerate() {
            if self.bits[i][level - 1] == 0 {
                s0 += (v - max0).exp();
            } else {
                s1 += (v - max1).exp();
            }
        }
        let l = (max0 + s0.ln()) - (max1 + s1.ln());
        if l.is_nan() {
            // both hypotheses impossible cannot happen for finite y; guard anyway
            return 0.0;
        }
        l.clamp(-LLR_CLAMP, LLR_CLAMP)
    }

    /// All `m` bit LLRs of `y`, written into `out`.
    pub fn llrs(&self, y: f64, out: &mut [f64]) {
        for (k, o) in out.iter_mut().enumerate().take(self.m) {
            *o = self.llr(y, k + 1);
        }
    }

    /// Label bit of constellation point `index` at `level`.
    #[inline]
    pub fn label_bit(&self, index: usize, level: usize) -> u8 {
        self.bits[index][level - 1]
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }
}

/// Per-bit LLRs `l_1(y) … l_m(y)` of a channel output.
pub fn bit_llr(y: f64, mode: &SignalingMode, noise_variance: f64) -> Vec<f64> {
    let d = BitDemapper::new(mode, noise_variance);
    let mut out = vec![0.0; d.bits()];
    d.llrs(y, &mut out);
    out
}

/// Channel-adapter symmetrization `l·(1 − 2b)`.
#[inline]
pub fn symmetrize(l: f64, bit: u8) -> f64 {
    debug_assert!(bit <= 1);
    if bit == 0 {
        l
    } else {
        -l
    }
}

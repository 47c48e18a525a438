use super::{AskConstellation, ConstellationError};
use crate::numerics::entropy_bits;

/// Probability mass function over the points of a constellation.
#[derive(Debug, Clone, PartialEq)]
pub struct SymbolDistribution {
    probs: Vec<f64>,
}

impl SymbolDistribution {
    pub fn new(probs: Vec<f64>) -> Result<Self, ConstellationError> {
        let sum: f64 = probs.iter().sum();
        if probs.iter().any(|p| !(p.is_finite() && *p >= 0.0)) || (sum - 1.0).abs() > 1e-12 {
            return Err(ConstellationError::InvalidDistribution(sum));
        }
        Ok(Self { probs })
    }

    pub fn uniform(size: usize) -> Self {
        Self { probs: vec![1.0 / size as f64; size] }
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn entropy(&self) -> f64 {
        entropy_bits(&self.probs)
    }

    pub fn is_sign_symmetric(&self) -> bool {
        let n = self.probs.len();
        (0..n).all(|i| (self.probs[i] - self.probs[n - 1 - i]).abs() <= 1e-15)
    }

    /// `E[X^2]` over the given amplitudes.
    pub fn energy(&self, points: &[f64]) -> f64 {
        self.probs.iter().zip(points).map(|(p, x)| p * x * x).sum()
    }
}

/// Maxwell-Boltzmann fit result: `P(x) ∝ exp(-nu x^2)`.
#[derive(Debug, Clone, PartialEq)]
pub struct MbFit {
    pub nu: f64,
    pub dist: SymbolDistribution,
}

fn mb_probs(points: &[f64], nu: f64) -> Vec<f64> {
    // Shift the exponent by its maximum (the innermost points) before exp().
    let e: Vec<f64> = points.iter().map(|x| -nu * x * x).collect();
    let max = e.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let w: Vec<f64> = e.iter().map(|v| (v - max).exp()).collect();
    let z: f64 = w.iter().sum();
    w.into_iter().map(|v| v / z).collect()
}

/// Maxwell-Boltzmann distribution with parameter `nu`.
pub fn maxwell_boltzmann(c: &AskConstellation, nu: f64) -> SymbolDistribution {
    SymbolDistribution { probs: mb_probs(c.points(), nu) }
}

/// Finds `nu ≥ 0` such that the MB distribution on `c` has entropy
/// `target_entropy` bits (within 1e-8). The sign stays uniform, so the
/// reachable range is `(1, m]`.
pub fn mb_fit(c: &AskConstellation, target_entropy: f64) -> Result<MbFit, ConstellationError> {
    let m = c.bits() as f64;
    if !target_entropy.is_finite() || target_entropy > m + 1e-12 || target_entropy <= 1.0 {
        return Err(ConstellationError::InfeasibleEntropy { target: target_entropy, max: m });
    }
    if target_entropy >= m - 1e-13 {
        return Ok(MbFit { nu: 0.0, dist: SymbolDistribution::uniform(c.len()) });
    }
    let entropy = |nu: f64| entropy_bits(&mb_probs(c.points(), nu));
    let mut hi = 1e-3;
    while entropy(hi) > target_entropy {
        hi *= 2.0;
        if hi > 1e6 {
            return Err(ConstellationError::InfeasibleEntropy { target: target_entropy, max: m });
        }
    }
    let mut lo = 0.0;
    // Entropy is strictly decreasing in nu; plain bisection down to the
    // resolution of f64.
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if entropy(mid) > target_entropy {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let nu = 0.5 * (lo + hi);
    let dist = maxwell_boltzmann(c, nu);
    let achieved = dist.entropy();
    if (achieved - target_entropy).abs() > 1e-8 {
        return Err(ConstellationError::InfeasibleEntropy { target: target_entropy, max: m });
    }
    Ok(MbFit { nu, dist })
}

/// Distribution-matcher rate of a PAS mode: `R_dm = R_tx − 1 + (1 − R_c)·m`.
/// The symbol entropy the shaper must hit is `R_dm + 1`.
pub fn pas_rates(rtx: f64, rc: f64, m: usize) -> Result<f64, ConstellationError> {
    if !(rc > 0.0 && rc <= 1.0) {
        return Err(ConstellationError::InvalidCodeRate(rc));
    }
    let dm = rtx - 1.0 + (1.0 - rc) * m as f64;
    if !(dm > 0.0 && dm <= (m as f64 - 1.0) + 1e-12) {
        return Err(ConstellationError::InfeasibleMode { rtx, rc, m, dm_rate: dm });
    }
    Ok(dm)
}

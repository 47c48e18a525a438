//! Bit-metric decoding rates and the binary-input AWGN surrogate channels.

use super::{ConstellationError, SignalingMode};
use crate::numerics::{bisect, integrate, integrate_with_breaks, log2_1p_exp_neg, log_add_exp};

const ENTROPY_ABS_TOL: f64 = 1e-9;

/// `H(B_k | Y)` in bits for bit level `level` at `snr_db`, by adaptive
/// quadrature over `y ∈ [min x − 10σ, max x + 10σ]`.
pub fn cond_bit_entropy(mode: &SignalingMode, snr_db: f64, level: usize) -> Result<f64, ConstellationError> {
    let c = mode.constellation();
    if level == 0 || level > c.bits() {
        return Err(ConstellationError::BitLevelOutOfRange { level, m: c.bits() });
    }
    let s2 = mode.noise_variance(snr_db);
    let sigma = s2.sqrt();
    let points = c.points();
    let log_norm = -0.5 * (2.0 * std::f64::consts::PI * s2).ln();
    let log_prior: Vec<f64> = mode.dist().probs().iter().map(|p| p.ln()).collect();
    let bits: Vec<u8> = (0..c.len()).map(|i| c.bit(i, level)).collect();

    // Σ_b p(y,b) log2(p(y)/p(y,b)), evaluated in the log domain.
    let integrand = |y: f64| {
        let mut lp = [f64::NEG_INFINITY; 2];
        for (i, &x) in points.iter().enumerate() {
            let v = log_prior[i] + log_norm - (y - x) * (y - x) / (2.0 * s2);
            let b = bits[i] as usize;
            lp[b] = log_add_exp(lp[b], v);
        }
        let total = log_add_exp(lp[0], lp[1]);
        lp.iter()
            .filter(|v| v.is_finite())
            .map(|&v| v.exp() * (total - v))
            .sum::<f64>()
            / std::f64::consts::LN_2
    };

    let lo = points[0] - 10.0 * sigma;
    let hi = points[points.len() - 1] + 10.0 * sigma;
    let mut breaks = vec![lo];
    breaks.extend(points.iter().copied().filter(|&x| x > lo && x < hi));
    breaks.push(hi);
    integrate_with_breaks(integrand, &breaks, ENTROPY_ABS_TOL).map_err(|e| ConstellationError::Integration {
        snr_db,
        level,
        source: e,
    })
}

/// Achievable BMD rate `[H(B) − Σ_k H(B_k|Y)]^+` in bits per channel use.
/// The labeling is a bijection, so `H(B) = H(X)`.
pub fn rbmd(mode: &SignalingMode, snr_db: f64) -> Result<f64, ConstellationError> {
    let mut sum = 0.0;
    for k in 1..=mode.bits() {
        sum += cond_bit_entropy(mode, snr_db, k)?;
    }
    Ok((mode.dist().entropy() - sum).max(0.0))
}

/// SNR in dB at which [`rbmd`] equals `rate`, by bisection on
/// `[-30, 60]` dB to 1e-6 dB.
pub fn rbmd_inv(mode: &SignalingMode, rate: f64) -> Result<f64, ConstellationError> {
    let h = mode.dist().entropy();
    if !(rate > 0.0 && rate < h) {
        return Err(ConstellationError::RateOutOfRange { rate, max: h });
    }
    let mut failure = None;
    let root = bisect(
        |s| match rbmd(mode, s) {
            Ok(r) => r - rate,
            Err(e) => {
                failure.get_or_insert(e);
                f64::NAN
            }
        },
        -30.0,
        60.0,
        1e-6,
    );
    if let Some(e) = failure {
        return Err(e);
    }
    root.map_err(|_| ConstellationError::RateOutOfRange { rate, max: h })
}

/// Conditional entropy `H(X|Y)` of the binary-input AWGN channel with inputs
/// ±1 and noise standard deviation `sigma`, in bits.
pub fn biawgn_cond_entropy(sigma: f64) -> f64 {
    let mu = 2.0 / (sigma * sigma);
    let s = 2.0 / sigma;
    let norm = 1.0 / (s * (2.0 * std::f64::consts::PI).sqrt());
    let f = |l: f64| {
        let z = (l - mu) / s;
        norm * (-0.5 * z * z).exp() * log2_1p_exp_neg(l)
    };
    integrate(f, mu - 14.0 * s, mu + 14.0 * s, 1e-13).unwrap_or_else(|e| match e {
        crate::numerics::NumericsError::QuadratureNonConvergence { estimate, .. } => estimate,
        _ => unreachable!(),
    })
}

/// Gaussian stand-in for a bit channel: symmetrized LLRs distributed as
/// `N(mu, sigma^2)` with `mu = 2/σ̆²`, `sigma² = 4/σ̆²`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SurrogateChannel {
    pub sigma_breve: f64,
    pub mu: f64,
    pub sigma: f64,
}

impl SurrogateChannel {
    pub fn from_sigma_breve(sigma_breve: f64) -> Self {
        let v = sigma_breve * sigma_breve;
        Self { sigma_breve, mu: 2.0 / v, sigma: 2.0 / sigma_breve }
    }
}

/// Matches bit level `level` with a BI-AWGN channel of equal conditional
/// entropy. `σ̆` is found by bisection to 1e-9.
pub fn surrogate_sigma(mode: &SignalingMode, snr_db: f64, level: usize) -> Result<SurrogateChannel, ConstellationError> {
    let h = cond_bit_entropy(mode, snr_db, level)?;
    surrogate_for_entropy(h).map_err(|_| ConstellationError::DegenerateChannel { snr_db, level, entropy: h })
}

/// BI-AWGN surrogate whose conditional entropy is `h` bits.
pub fn surrogate_for_entropy(h: f64) -> Result<SurrogateChannel, ConstellationError> {
    if !(h > 1e-12 && h < 1.0 - 1e-12) {
        return Err(ConstellationError::DegenerateChannel { snr_db: f64::NAN, level: 0, entropy: h });
    }
    // H is increasing in sigma; widen the bracket until it holds the target.
    let (mut lo, mut hi) = (0.05, 2.0);
    while biawgn_cond_entropy(lo) > h {
        lo *= 0.5;
        if lo < 1e-6 {
            return Err(ConstellationError::DegenerateChannel { snr_db: f64::NAN, level: 0, entropy: h });
        }
    }
    while biawgn_cond_entropy(hi) < h {
        hi *= 2.0;
        if hi > 1e6 {
            return Err(ConstellationError::DegenerateChannel { snr_db: f64::NAN, level: 0, entropy: h });
        }
    }
    let sb = bisect(|s| biawgn_cond_entropy(s) - h, lo, hi, 1e-11).map_err(|_| {
        ConstellationError::DegenerateChannel { snr_db: f64::NAN, level: 0, entropy: h }
    })?;
    Ok(SurrogateChannel::from_sigma_breve(sb))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constellation::{make_ask, SymbolDistribution};
    use approx::assert_abs_diff_eq;

    fn uniform(m: usize) -> SignalingMode {
        SignalingMode::with_distribution("u", make_ask(m).unwrap(), SymbolDistribution::uniform(1 << m), 1.0)
            .unwrap()
    }

    #[test]
    fn entropy_limits() {
        let mode = SignalingMode::preset("8PS-0.67").unwrap();
        for k in 1..=3 {
            // useless channel: H(B_k|Y) = H(B_k)
            let c = mode.constellation();
            let p0: f64 = (0..c.len()).filter(|&i| c.bit(i, k) == 0).map(|i| mode.dist().probs()[i]).sum();
            let h = cond_bit_entropy(&mode, -60.0, k).unwrap();
            assert_abs_diff_eq!(h, crate::numerics::binary_entropy(p0), epsilon = 1e-5);
            assert!(cond_bit_entropy(&mode, 60.0, k).unwrap() < 1e-9);
        }
    }

    #[test]
    fn rbmd_high_snr_is_m() {
        for m in 1..=3 {
            assert_abs_diff_eq!(rbmd(&uniform(m), 60.0).unwrap(), m as f64, epsilon = 1e-7);
        }
    }

    #[test]
    fn biawgn_entropy_known_points() {
        // sigma -> 0 gives zero, large sigma approaches one bit
        assert!(biawgn_cond_entropy(0.05) < 1e-12);
        assert!(biawgn_cond_entropy(50.0) > 0.999);
        // capacity of BI-AWGN at sigma = 1 is 0.4859 bits (tabulated)
        assert_abs_diff_eq!(1.0 - biawgn_cond_entropy(1.0), 0.4859, epsilon = 1e-4);
    }

    #[test]
    fn surrogate_of_binary_channel_is_itself() {
        let mode = uniform(1);
        for snr in [0.0, 3.0, 6.0] {
            let s = surrogate_sigma(&mode, snr, 1).unwrap();
            assert_abs_diff_eq!(s.sigma_breve, mode.noise_variance(snr).sqrt(), epsilon = 1e-7);
            assert_abs_diff_eq!(s.sigma * s.sigma, 2.0 * s.mu, epsilon = 1e-9);
        }
    }

    #[test]
    fn surrogate_entropy_round_trip() {
        let mode = uniform(2);
        let h = cond_bit_entropy(&mode, 10.0, 2).unwrap();
        let s = surrogate_sigma(&mode, 10.0, 2).unwrap();
        assert_abs_diff_eq!(biawgn_cond_entropy(s.sigma_breve), h, epsilon = 1e-8);
    }

    #[test]
    fn degenerate_channels_rejected() {
        let mode = uniform(2);
        assert!(matches!(
            surrogate_sigma(&mode, 80.0, 1),
            Err(ConstellationError::DegenerateChannel { .. })
        ));
    }
}

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::{
    make_ask, mb_fit, pas_rates, AskConstellation, ConstellationError, SymbolDistribution,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ShapingKind {
    Uniform,
    Mb,
}

/// On-disk description of a signaling mode.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct ModeSpec {
    pub name: String,
    pub m: usize,
    pub shaping: ShapingKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target_entropy: Option<f64>,
    #[serde(rename = "Rc")]
    pub rc: f64,
    #[serde(rename = "Rtx")]
    pub rtx: f64,
}

pub const PRESET_NAMES: [&str; 4] = ["4U-0.50", "4U-0.75", "8PS-0.67", "8PS-0.83"];

impl ModeSpec {
    /// Built-in operating modes. The PAS modes use the exact design rates
    /// 2/3 and 5/6.
    pub fn preset(name: &str) -> Option<Self> {
        let (m, shaping, rc, rtx) = match name {
            "4U-0.50" => (2, ShapingKind::Uniform, 0.5, 1.0),
            "4U-0.75" => (2, ShapingKind::Uniform, 0.75, 1.5),
            "8PS-0.67" => (3, ShapingKind::Mb, 2.0 / 3.0, 1.5),
            "8PS-0.83" => (3, ShapingKind::Mb, 5.0 / 6.0, 1.5),
            _ => return None,
        };
        Some(Self { name: name.to_string(), m, shaping, target_entropy: None, rc, rtx })
    }

    pub fn build(&self) -> Result<SignalingMode, ConstellationError> {
        SignalingMode::from_spec(self.clone())
    }

    /// 64-bit digest of the canonical JSON encoding.
    pub fn hash64(&self) -> u64 {
        let json = serde_json::to_vec(self).expect("mode spec serializes");
        let digest = Sha256::digest(&json);
        u64::from_le_bytes(digest[..8].try_into().expect("8 bytes"))
    }
}

/// A constellation together with its input distribution and rates: all that
/// is needed, together with a noise level, to turn channel outputs into bit
/// metrics.
#[derive(Debug, Clone, PartialEq)]
pub struct SignalingMode {
    spec: ModeSpec,
    constellation: AskConstellation,
    dist: SymbolDistribution,
    nu: f64,
}

impl SignalingMode {
    pub fn from_spec(spec: ModeSpec) -> Result<Self, ConstellationError> {
        let constellation = make_ask(spec.m)?;
        if !(spec.rc > 0.0 && spec.rc <= 1.0) {
            return Err(ConstellationError::InvalidCodeRate(spec.rc));
        }
        let (dist, nu) = match spec.shaping {
            ShapingKind::Uniform => {
                let expected = spec.m as f64 * spec.rc;
                if (spec.rtx - expected).abs() > 1e-6 {
                    return Err(ConstellationError::InconsistentUniformRate { rtx: spec.rtx, expected });
                }
                (SymbolDistribution::uniform(constellation.len()), 0.0)
            }
            ShapingKind::Mb => {
                let target = match spec.target_entropy {
                    Some(h) => h,
                    None => pas_rates(spec.rtx, spec.rc, spec.m)? + 1.0,
                };
                let fit = mb_fit(&constellation, target)?;
                (fit.dist, fit.nu)
            }
        };
        Ok(Self { spec, constellation, dist, nu })
    }

    pub fn preset(name: &str) -> Result<Self, ConstellationError> {
        ModeSpec::preset(name)
            .ok_or_else(|| ConstellationError::UnknownPreset(name.to_string()))?
            .build()
    }

    /// Mode with an arbitrary distribution, e.g. an MB law for a given entropy.
    pub fn with_distribution(
        name: &str,
        constellation: AskConstellation,
        dist: SymbolDistribution,
        rc: f64,
    ) -> Result<Self, ConstellationError> {
        if dist.probs().len() != constellation.len() {
            return Err(ConstellationError::InvalidDistribution(dist.probs().iter().sum()));
        }
        let m = constellation.bits();
        let h = dist.entropy();
        let spec = ModeSpec {
            name: name.to_string(),
            m,
            shaping: if (h - m as f64).abs() < 1e-12 { ShapingKind::Uniform } else { ShapingKind::Mb },
            target_entropy: Some(h),
            rc,
            rtx: h - (1.0 - rc) * m as f64,
        };
        Ok(Self { spec, constellation, dist, nu: f64::NAN })
    }

    pub fn spec(&self) -> &ModeSpec {
        &self.spec
    }

    pub fn name(&self) -> &str {
        &self.spec.name
    }

    pub fn constellation(&self) -> &AskConstellation {
        &self.constellation
    }

    pub fn dist(&self) -> &SymbolDistribution {
        &self.dist
    }

    pub fn bits(&self) -> usize {
        self.constellation.bits()
    }

    /// MB parameter (0 for uniform modes, NaN when built from an explicit
    /// distribution).
    pub fn nu(&self) -> f64 {
        self.nu
    }

    pub fn code_rate(&self) -> f64 {
        self.spec.rc
    }

    pub fn transmission_rate(&self) -> f64 {
        self.spec.rtx
    }

    pub fn is_shaped(&self) -> bool {
        self.spec.shaping == ShapingKind::Mb
    }

    pub fn energy(&self) -> f64 {
        self.dist.energy(self.constellation.points())
    }

    /// Noise variance giving `SNR = E[X^2]/sigma^2` at `snr_db`.
    pub fn noise_variance(&self, snr_db: f64) -> f64 {
        self.energy() / 10f64.powf(snr_db / 10.0)
    }

    pub fn snr_db(&self, noise_variance: f64) -> f64 {
        10.0 * (self.energy() / noise_variance).log10()
    }

    pub fn hash64(&self) -> u64 {
        self.spec.hash64()
    }
}

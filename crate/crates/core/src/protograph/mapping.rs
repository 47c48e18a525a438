use serde::{Deserialize, Serialize};

use super::{BaseMatrix, ProtographError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MappingScheme {
    /// Levels `1..m` cycle over the VN types of each position.
    Uniform,
    /// The last `n_sc/m` types of each position carry the sign level 1; the
    /// others cycle through `2..m`.
    Pas,
}

/// Bit level (1-based) assigned to every VN type of a base matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BitMapping {
    levels: Vec<u8>,
    m: usize,
}

impl BitMapping {
    pub fn from_levels(levels: Vec<u8>, m: usize) -> Result<Self, ProtographError> {
        if levels.iter().any(|&l| l == 0 || l as usize > m) {
            return Err(ProtographError::Mapping("bit level outside 1..=m".into()));
        }
        Ok(Self { levels, m })
    }

    /// Level of VN type `j` (0-based type index).
    #[inline]
    pub fn level(&self, j: usize) -> usize {
        self.levels[j] as usize
    }

    pub fn levels(&self) -> &[u8] {
        &self.levels
    }

    pub fn bits(&self) -> usize {
        self.m
    }

    pub fn len(&self) -> usize {
        self.levels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.levels.is_empty()
    }

    /// Number of VN types per level, index 0 = level 1.
    pub fn counts(&self) -> Vec<usize> {
        let mut c = vec![0; self.m];
        for &l in &self.levels {
            c[l as usize - 1] += 1;
        }
        c
    }
}

pub fn bit_mapping(
    base: &BaseMatrix,
    m: usize,
    scheme: MappingScheme,
    per_position: usize,
) -> Result<BitMapping, ProtographError> {
    if m == 0 || per_position == 0 || per_position % m != 0 {
        return Err(ProtographError::Mapping(format!(
            "{per_position} VN types per position is not a multiple of m = {m}"
        )));
    }
    if base.cols() % per_position != 0 {
        return Err(ProtographError::Mapping(format!(
            "{} columns do not split into positions of {per_position}",
            base.cols()
        )));
    }
    let pattern: Vec<u8> = match scheme {
        MappingScheme::Uniform => (0..per_position).map(|t| (t % m + 1) as u8).collect(),
        MappingScheme::Pas if m == 1 => vec![1; per_position],
        MappingScheme::Pas => {
            let sign_slots = per_position / m;
            let rest = per_position - sign_slots;
            (0..rest).map(|t| (2 + t % (m - 1)) as u8).chain(std::iter::repeat_n(1, sign_slots)).collect()
        }
    };
    let levels = pattern.iter().copied().cycle().take(base.cols()).collect();
    BitMapping::from_levels(levels, m)
}

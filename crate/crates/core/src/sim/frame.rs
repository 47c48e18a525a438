use rand::Rng;
use rand_distr::weighted::WeightedIndex;

use crate::constellation::{draw_symbol, symmetrize, BitDemapper, SignalingMode};
use crate::protograph::BitMapping;
use crate::Real;

/// How channel uses are assigned to the bits of a frame.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Sampler {
    /// Every VN sees its own symbol; matches the density-evolution model.
    #[default]
    Independent,
    /// One symbol carries `m` VNs of distinct levels.
    SymbolGrouped,
}

/// Draws symmetrized all-zero-equivalent channel LLRs for a lifted code.
#[derive(Debug, Clone)]
pub struct FrameSampler {
    demapper: BitDemapper,
    index: WeightedIndex<f64>,
    sigma: f64,
    levels: Vec<u8>,
    groups: Vec<Vec<u32>>,
    sampler: Sampler,
}

impl FrameSampler {
    /// `levels[v]` is the bit level of lifted VN `v`.
    pub fn new(mode: &SignalingMode, levels: &BitMapping, snr_db: f64, sampler: Sampler) -> Self {
        let s2 = mode.noise_variance(snr_db);
        let m = levels.bits();
        let groups = match sampler {
            Sampler::Independent => Vec::new(),
            Sampler::SymbolGrouped => symbol_groups(levels.levels(), m),
        };
        Self {
            demapper: BitDemapper::new(mode, s2),
            index: WeightedIndex::new(mode.dist().probs().to_vec()).expect("mode distribution is valid"),
            sigma: s2.sqrt(),
            levels: levels.levels().to_vec(),
            groups,
            sampler,
        }
    }

    pub fn len(&self) -> usize {
        self.levels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.levels.is_empty()
    }

    pub fn sampler(&self) -> Sampler {
        self.sampler
    }

    /// Fills `out` with one frame of symmetrized LLRs.
    pub fn sample<F: Real, R: Rng>(&self, rng: &mut R, out: &mut [F]) {
        assert_eq!(out.len(), self.levels.len(), "frame buffer has the wrong length");
        let points = self.demapper.points();
        match self.sampler {
            Sampler::Independent => {
                for (o, &k) in out.iter_mut().zip(&self.levels) {
                    let k = k as usize;
                    let (i, y) = draw_symbol(rng, &self.index, points, self.sigma);
                    *o = F::of(symmetrize(self.demapper.llr(y, k), self.demapper.label_bit(i, k)));
                }
            }
            Sampler::SymbolGrouped => {
                for g in &self.groups {
                    let (i, y) = draw_symbol(rng, &self.index, points, self.sigma);
                    for &v in g {
                        let v = v as usize;
                        let k = self.levels[v] as usize;
                        out[v] = F::of(symmetrize(self.demapper.llr(y, k), self.demapper.label_bit(i, k)));
                    }
                }
            }
        }
    }
}

/// Partitions VNs into symbols: the `t`-th VN of every level shares symbol
/// `t`. Levels with surplus VNs end up in partial groups.
fn symbol_groups(levels: &[u8], m: usize) -> Vec<Vec<u32>> {
    let mut by_level = vec![Vec::new(); m];
    for (v, &k) in levels.iter().enumerate() {
        by_level[k as usize - 1].push(v as u32);
    }
    let longest = by_level.iter().map(Vec::len).max().unwrap_or(0);
    (0..longest)
        .map(|t| by_level.iter().filter_map(|l| l.get(t).copied()).collect())
        .collect()
}

/// Bit levels of every lifted VN: VN `v` inherits the level of base column
/// `v / q`.
pub fn expand_mapping(mapping: &BitMapping, q: usize) -> BitMapping {
    let levels = mapping.levels().iter().flat_map(|&k| std::iter::repeat_n(k, q)).collect();
    BitMapping::from_levels(levels, mapping.bits()).expect("expansion keeps levels in range")
}

/// One frame of LLRs; convenience wrapper around [`FrameSampler`].
pub fn sample_frame<R: Rng>(mode: &SignalingMode, levels: &BitMapping, snr_db: f64, rng: &mut R) -> Vec<f64> {
    let s = FrameSampler::new(mode, levels, snr_db, Sampler::Independent);
    let mut out = vec![0.0; s.len()];
    s.sample(rng, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn groups_cover_every_vn_once() {
        let levels = [1u8, 2, 3, 2, 3, 1, 2, 3, 1, 3];
        let g = symbol_groups(&levels, 3);
        let mut seen: Vec<u32> = g.iter().flatten().copied().collect();
        seen.sort_unstable();
        assert_eq!(seen, (0..10).collect::<Vec<_>>());
        for grp in &g[..3] {
            let mut ks: Vec<u8> = grp.iter().map(|&v| levels[v as usize]).collect();
            ks.sort_unstable();
            assert_eq!(ks, vec![1, 2, 3]);
        }
        assert_eq!(g[3], vec![9]);
    }

    #[test]
    fn expansion_repeats_columns() {
        let m = BitMapping::from_levels(vec![1, 2], 2).unwrap();
        assert_eq!(expand_mapping(&m, 3).levels(), &[1, 1, 1, 2, 2, 2]);
    }
}

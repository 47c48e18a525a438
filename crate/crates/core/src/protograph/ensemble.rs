use std::fmt;

use super::{BaseMatrix, ProtographError};

/// Time-invariant spatially coupled ensemble built from the component
/// matrices `B_0 … B_mu`.
#[derive(Debug, Clone, PartialEq)]
pub struct ScEnsemble {
    dv: usize,
    dc: usize,
    blocks: Vec<BaseMatrix>,
}

impl ScEnsemble {
    /// Ensemble from explicit component matrices of equal shape.
    pub fn from_blocks(blocks: Vec<BaseMatrix>) -> Result<Self, ProtographError> {
        let first = blocks.first().ok_or(ProtographError::NoBlocks)?;
        let (r, c) = (first.rows(), first.cols());
        if blocks.iter().any(|b| b.rows() != r || b.cols() != c) {
            return Err(ProtographError::BlockShapeMismatch);
        }
        let dv = (0..c).map(|j| blocks.iter().map(|b| b.col_weight(j) as usize).sum::<usize>()).max().unwrap_or(0);
        let dc = (0..r).map(|i| blocks.iter().map(|b| b.row_weight(i) as usize).sum::<usize>()).max().unwrap_or(0);
        Ok(Self { dv, dc, blocks })
    }

    pub fn dv(&self) -> usize {
        self.dv
    }

    pub fn dc(&self) -> usize {
        self.dc
    }

    /// Syndrome former memory.
    pub fn memory(&self) -> usize {
        self.blocks.len() - 1
    }

    pub fn sub_rows(&self) -> usize {
        self.blocks[0].rows()
    }

    pub fn sub_cols(&self) -> usize {
        self.blocks[0].cols()
    }

    pub fn blocks(&self) -> &[BaseMatrix] {
        &self.blocks
    }

    /// Rate of the uncoupled (S → ∞) ensemble.
    pub fn asymptotic_rate(&self) -> f64 {
        1.0 - self.sub_rows() as f64 / self.sub_cols() as f64
    }

    /// Design rate after termination at `s` positions:
    /// `1 − (1 + mu/S)·m_sc/n_sc`.
    pub fn terminated_rate(&self, s: usize) -> f64 {
        1.0 - (1.0 + self.memory() as f64 / s as f64) * self.sub_rows() as f64 / self.sub_cols() as f64
    }

    /// Block-banded matrix with `rows_blocks × col_blocks` blocks where block
    /// `(r, c)` is `B_{r−c}` for `0 ≤ r − c ≤ mu`.
    fn banded(&self, row_blocks: usize, col_blocks: usize) -> BaseMatrix {
        let (mr, nc) = (self.sub_rows(), self.sub_cols());
        let mut out = BaseMatrix::zeros(row_blocks * mr, col_blocks * nc);
        for c in 0..col_blocks {
            for (k, b) in self.blocks.iter().enumerate() {
                let r = c + k;
                if r >= row_blocks {
                    break;
                }
                for i in 0..mr {
                    for j in 0..nc {
                        out.set(r * mr + i, c * nc + j, b.get(i, j));
                    }
                }
            }
        }
        out
    }
}

impl fmt::Display for ScEnsemble {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "B{},{}", self.dv, self.dc)
    }
}

/// Regular `(dv, dc)` ensemble with `mu = dv − 1` and each `B_i` the
/// `1 × dc/dv` all-ones row.
pub fn sc_ensemble(dv: usize, dc: usize) -> Result<ScEnsemble, ProtographError> {
    if dv < 2 || dc == 0 || dc % dv != 0 || dc <= dv {
        return Err(ProtographError::Degrees { dv, dc });
    }
    let width = dc / dv;
    let block = BaseMatrix::new(1, width, vec![1; width])?;
    Ok(ScEnsemble { dv, dc, blocks: vec![block; dv] })
}

/// Terminated coupled base matrix over `s` spatial positions, of size
/// `(mu + S)·m_sc × S·n_sc`, with its design rate.
pub fn coupled_base(e: &ScEnsemble, s: usize) -> Result<(BaseMatrix, f64), ProtographError> {
    if s < e.memory() + 1 {
        return Err(ProtographError::TooFewPositions { s, mu: e.memory() });
    }
    Ok((e.banded(e.memory() + s, s), e.terminated_rate(s)))
}

/// First `w` block rows and block columns of the coupled base matrix, the
/// protograph analysed for window decoding.
pub fn window_base(e: &ScEnsemble, w: usize) -> Result<BaseMatrix, ProtographError> {
    if w < e.memory() + 1 {
        return Err(ProtographError::WindowTooSmall { w, mu: e.memory() });
    }
    Ok(e.banded(w, w))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn regular_ensembles() {
        let e = sc_ensemble(4, 16).unwrap();
        assert_eq!(e.memory(), 3);
        assert_eq!(e.blocks().len(), 4);
        assert_eq!((e.sub_rows(), e.sub_cols()), (1, 4));
        assert_abs_diff_eq!(e.asymptotic_rate(), 0.75);
        assert_abs_diff_eq!(sc_ensemble(4, 12).unwrap().asymptotic_rate(), 2.0 / 3.0);
        let e = sc_ensemble(6, 36).unwrap();
        assert_eq!(e.memory(), 5);
        assert_abs_diff_eq!(e.asymptotic_rate(), 5.0 / 6.0);
        assert!(sc_ensemble(4, 18).is_err());
    }

    #[test]
    fn terminated_rates() {
        let (_, r) = coupled_base(&sc_ensemble(4, 16).unwrap(), 50).unwrap();
        assert_abs_diff_eq!(r, 0.735, epsilon = 1e-12);
        let (_, r) = coupled_base(&sc_ensemble(4, 24).unwrap(), 50).unwrap();
        assert_abs_diff_eq!(r, 1.0 - 53.0 / 50.0 / 6.0, epsilon = 1e-12);
        assert_abs_diff_eq!(r, 0.8233, epsilon = 5e-5);
        let e = sc_ensemble(4, 16).unwrap();
        assert_abs_diff_eq!(e.terminated_rate(1_000_000), 0.75, epsilon = 1e-5);
    }

    #[test]
    fn coupled_shape_and_degrees() {
        let e = sc_ensemble(4, 16).unwrap();
        let (b, _) = coupled_base(&e, 50).unwrap();
        assert_eq!((b.rows(), b.cols()), (53, 200));
        for j in 0..b.cols() {
            assert_eq!(b.col_weight(j), 4);
        }
        for i in 3..50 {
            assert_eq!(b.row_weight(i), 16);
        }
        assert_eq!(b.row_weight(0), 4);
        assert!(coupled_base(&e, 3).is_err());
    }

    #[test]
    fn window_example_mu2_w4() {
        let blocks = vec![
            BaseMatrix::from_rows(&[&[1]]).unwrap(),
            BaseMatrix::from_rows(&[&[2]]).unwrap(),
            BaseMatrix::from_rows(&[&[3]]).unwrap(),
        ];
        let e = ScEnsemble::from_blocks(blocks).unwrap();
        let w = window_base(&e, 4).unwrap();
        let expect: [[u32; 4]; 4] = [[1, 0, 0, 0], [2, 1, 0, 0], [3, 2, 1, 0], [0, 3, 2, 1]];
        for (i, row) in expect.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                assert_eq!(w.get(i, j), v);
            }
        }
        assert!(window_base(&e, 2).is_err());
    }

    #[test]
    fn window_of_full_band() {
        let e = sc_ensemble(3, 6).unwrap();
        let w = window_base(&e, 3).unwrap();
        // first block column carries the whole band
        assert_eq!(w.col_weight(0), 3);
        assert_eq!(w.col_weight(1), 3);
        assert!((0..w.rows()).all(|i| w.row_weight(i) > 0));
    }

    #[test]
    fn window_4_16_w15() {
        let e = sc_ensemble(4, 16).unwrap();
        let w = window_base(&e, 15).unwrap();
        assert_eq!((w.rows(), w.cols()), (15, 60));
        for j in 0..60 {
            assert!(w.col_weight(j) <= 4);
        }
        for j in 0..4 {
            assert_eq!(w.col_weight(j), 4);
        }
    }

    #[test]
    fn window_is_top_left_of_coupled() {
        let e = sc_ensemble(4, 12).unwrap();
        let (full, _) = coupled_base(&e, 20).unwrap();
        for w in 4..=20 {
            let win = window_base(&e, w).unwrap();
            assert_eq!(win, full.submatrix(0, win.rows(), 0, win.cols()));
        }
    }
}

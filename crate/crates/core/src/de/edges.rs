use super::Algorithm;
use crate::protograph::BaseMatrix;
use crate::Real;

/// Edge types `(i, j)` of a base matrix with `b_ij ≠ 0`, indexed row-major,
/// plus row and column incidence lists.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeTypes {
    rows: usize,
    cols: usize,
    types: Vec<(usize, usize, u32)>,
    by_row: Vec<Vec<usize>>,
    by_col: Vec<Vec<usize>>,
    lookup: Vec<usize>,
}

impl EdgeTypes {
    pub fn new(base: &BaseMatrix) -> Self {
        let (rows, cols) = (base.rows(), base.cols());
        let mut types = Vec::new();
        let mut by_row = vec![Vec::new(); rows];
        let mut by_col = vec![Vec::new(); cols];
        let mut lookup = vec![usize::MAX; rows * cols];
        for i in 0..rows {
            for j in 0..cols {
                let b = base.get(i, j);
                if b > 0 {
                    let k = types.len();
                    types.push((i, j, b));
                    by_row[i].push(k);
                    by_col[j].push(k);
                    lookup[i * cols + j] = k;
                }
            }
        }
        Self { rows, cols, types, by_row, by_col, lookup }
    }

    pub fn len(&self) -> usize {
        self.types.len()
    }

    pub fn is_empty(&self) -> bool {
        self.types.is_empty()
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// `(i, j, b_ij)` of edge type `k`.
    #[inline]
    pub fn get(&self, k: usize) -> (usize, usize, u32) {
        self.types[k]
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, u32)> + '_ {
        self.types.iter().copied()
    }

    pub fn in_row(&self, i: usize) -> &[usize] {
        &self.by_row[i]
    }

    pub fn in_col(&self, j: usize) -> &[usize] {
        &self.by_col[j]
    }

    /// Index of edge type `(i, j)`, if present.
    pub fn index(&self, i: usize, j: usize) -> Option<usize> {
        let k = self.lookup[i * self.cols + j];
        (k != usize::MAX).then_some(k)
    }
}

/// Message distribution per edge type. Slot order per algorithm:
/// BMP `[−1, +1]`, TMP `[−1, 0, +1]`, QMP `[−H, −L, +L, +H]`; unused slots
/// are zero.
#[derive(Debug, Clone, PartialEq)]
pub struct EdgeTypeProbs<F> {
    alg: Algorithm,
    probs: Vec<[F; 4]>,
}

impl<F: Real> EdgeTypeProbs<F> {
    pub fn new(alg: Algorithm, probs: Vec<[F; 4]>) -> Self {
        Self { alg, probs }
    }

    /// Every edge type carries the same distribution.
    pub fn constant(alg: Algorithm, n: usize, p: [F; 4]) -> Self {
        Self { alg, probs: vec![p; n] }
    }

    pub fn alg(&self) -> Algorithm {
        self.alg
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    #[inline]
    pub fn get(&self, k: usize) -> &[F; 4] {
        &self.probs[k]
    }

    pub fn as_slice(&self) -> &[[F; 4]] {
        &self.probs
    }

    pub fn set(&mut self, k: usize, p: [F; 4]) {
        self.probs[k] = p;
    }

    /// Probability of a wrong sign: `p(−1)` for BMP/TMP and `p(−H)+p(−L)`
    /// for QMP.
    pub fn error_mass(&self, k: usize) -> F {
        let p = &self.probs[k];
        match self.alg {
            Algorithm::Qmp => p[0] + p[1],
            _ => p[0],
        }
    }

    /// Mass of the last slot implied by the others, `1 − Σ`.
    pub fn implied(&self, k: usize) -> F {
        let n = self.alg.alphabet_len();
        F::one() - self.probs[k][..n - 1].iter().copied().sum::<F>()
    }

    /// Checks every tuple is a distribution up to `tol`.
    pub fn is_valid(&self, tol: F) -> bool {
        let n = self.alg.alphabet_len();
        self.probs.iter().all(|p| {
            let s: F = p[..n].iter().copied().sum();
            p[..n].iter().all(|&x| x >= -tol && x <= F::one() + tol)
                && p[n..].iter().all(|&x| x == F::zero())
                && (s - F::one()).abs() <= tol
        })
    }

    pub fn max_abs_diff(&self, other: &Self) -> F {
        self.probs
            .iter()
            .zip(&other.probs)
            .flat_map(|(a, b)| a.iter().zip(b).map(|(x, y)| (*x - *y).abs()))
            .fold(F::zero(), F::max)
    }

    pub fn cast<G: Real>(&self) -> EdgeTypeProbs<G> {
        EdgeTypeProbs { alg: self.alg, probs: self.probs.iter().map(|p| p.map(|x| G::of(x.f64()))).collect() }
    }
}

/// Clamps tiny negative round-off and renormalises the slots in use.
pub(crate) fn tidy<F: Real>(alg: Algorithm, mut p: [F; 4]) -> [F; 4] {
    let n = alg.alphabet_len();
    for x in p[..n].iter_mut() {
        debug_assert!(x.f64() >= -1e-9, "negative probability {x}");
        if *x < F::zero() {
            *x = F::zero();
        }
    }
    let s: F = p[..n].iter().copied().sum();
    if s > F::zero() {
        for x in p[..n].iter_mut() {
            *x = *x / s;
        }
    }
    p
}

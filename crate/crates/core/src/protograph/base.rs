use std::fmt;

use sha2::{Digest, Sha256};

use super::ProtographError;

/// Protograph base matrix with non-negative integer entries (parallel edges
/// allowed). Stored row-major.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BaseMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<u32>,
}

impl BaseMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<u32>) -> Result<Self, ProtographError> {
        if rows == 0 || cols == 0 || entries.len() != rows * cols {
            return Err(ProtographError::Shape { rows, cols, len: entries.len() });
        }
        let b = Self { rows, cols, entries };
        if let Some(j) = (0..cols).find(|&j| b.col_weight(j) == 0) {
            return Err(ProtographError::EmptyColumn(j));
        }
        Ok(b)
    }

    /// Convenience constructor from nested rows.
    pub fn from_rows(rows: &[&[u32]]) -> Result<Self, ProtographError> {
        let cols = rows.first().map_or(0, |r| r.len());
        if rows.iter().any(|r| r.len() != cols) {
            return Err(ProtographError::Shape { rows: rows.len(), cols, len: 0 });
        }
        Self::new(rows.len(), cols, rows.iter().flat_map(|r| r.iter().copied()).collect())
    }

    /// Matrix that may contain empty columns; used while assembling blocks.
    pub(crate) fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, entries: vec![0; rows * cols] }
    }

    pub(crate) fn set(&mut self, i: usize, j: usize, v: u32) {
        self.entries[i * self.cols + j] = v;
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.entries[i * self.cols + j]
    }

    pub fn entries(&self) -> &[u32] {
        &self.entries
    }

    pub fn col_weight(&self, j: usize) -> u32 {
        (0..self.rows).map(|i| self.get(i, j)).sum()
    }

    pub fn row_weight(&self, i: usize) -> u32 {
        self.entries[i * self.cols..(i + 1) * self.cols].iter().sum()
    }

    pub fn max_entry(&self) -> u32 {
        self.entries.iter().copied().max().unwrap_or(0)
    }

    pub fn edge_count(&self) -> u64 {
        self.entries.iter().map(|&e| e as u64).sum()
    }

    pub fn mean_col_weight(&self) -> f64 {
        self.edge_count() as f64 / self.cols as f64
    }

    /// Short hex digest identifying the matrix.
    pub fn hash_hex(&self) -> String {
        let mut h = Sha256::new();
        h.update((self.rows as u64).to_le_bytes());
        h.update((self.cols as u64).to_le_bytes());
        for e in &self.entries {
            h.update(e.to_le_bytes());
        }
        h.finalize()[..8].iter().map(|b| format!("{b:02x}")).collect()
    }

    /// Sub-matrix of rows `r0..r1`, columns `c0..c1`.
    pub fn submatrix(&self, r0: usize, r1: usize, c0: usize, c1: usize) -> BaseMatrix {
        let mut out = BaseMatrix::zeros(r1 - r0, c1 - c0);
        for i in r0..r1 {
            for j in c0..c1 {
                out.set(i - r0, j - c0, self.get(i, j));
            }
        }
        out
    }
}

impl fmt::Display for BaseMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self.get(i, j).to_string()).collect();
            writeln!(f, "{}", row.join(" "))?;
        }
        Ok(())
    }
}

use super::ConstellationError;

/// Equally spaced `2^m`-ary ASK set `{±1, ±3, …, ±(2^m − 1)}` with a binary
/// reflected Gray labeling.
///
/// Labels are assigned as `gray(M − 1 − i)` to the `i`-th point in ascending
/// order. The most significant label bit is bit level 1 and equals the sign
/// (0 for positive amplitudes); levels 2..m form a Gray code on the amplitude,
/// so `x` and `−x` differ only in level 1.
#[derive(Debug, Clone, PartialEq)]
pub struct AskConstellation {
    m: usize,
    points: Vec<f64>,
    labels: Vec<u32>,
}

pub const MAX_BITS_PER_SYMBOL: usize = 8;

impl AskConstellation {
    pub fn new(m: usize) -> Result<Self, ConstellationError> {
        if m == 0 || m > MAX_BITS_PER_SYMBOL {
            return Err(ConstellationError::BitsOutOfRange(m));
        }
        let size = 1usize << m;
        let points = (0..size).map(|i| (2 * i) as f64 - (size as f64 - 1.0)).collect();
        let labels = (0..size)
            .map(|i| {
                let r = (size - 1 - i) as u32;
                r ^ (r >> 1)
            })
            .collect();
        Ok(Self { m, points, labels })
    }

    /// Bits per symbol.
    pub fn bits(&self) -> usize {
        self.m
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn label(&self, index: usize) -> u32 {
        self.labels[index]
    }

    /// Bit at level `level` (1-based, level 1 = sign) of point `index`.
    #[inline]
    pub fn bit(&self, index: usize, level: usize) -> u8 {
        debug_assert!((1..=self.m).contains(&level));
        ((self.labels[index] >> (self.m - level)) & 1) as u8
    }

    /// Index of the point `-x` for the point at `index`.
    pub fn mirror(&self, index: usize) -> usize {
        self.len() - 1 - index
    }
}

/// Builds the `2^m`-ASK constellation with its sign-separable Gray labeling.
pub fn make_ask(m: usize) -> Result<AskConstellation, ConstellationError> {
    AskConstellation::new(m)
}

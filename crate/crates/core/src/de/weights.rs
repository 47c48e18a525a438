use super::{Algorithm, EdgeTypeProbs};
use crate::Real;

/// Largest weight magnitude in nats; larger log-ratios are clamped.
pub const W_MAX: f64 = 64.0;

/// Per-edge-type VN weights: QMP `[w_L, w_H]`, BMP/TMP `[w, 0]`.
#[derive(Debug, Clone, PartialEq)]
pub struct EdgeWeights<F> {
    pub w: Vec<[F; 2]>,
    /// Edge types where a ratio hit zero or infinity and was clamped.
    pub clamped: Vec<bool>,
}

impl<F: Real> EdgeWeights<F> {
    pub fn any_clamped(&self) -> bool {
        self.clamped.iter().any(|&c| c)
    }
}

/// `ln(num/den)` clamped to `±W_MAX`; `0/0` gives 0. Subnormal inputs
/// count as zero.
pub fn log_ratio<F: Real>(num: F, den: F) -> (F, bool) {
    let w_max = F::of(W_MAX);
    let z = F::zero();
    let tiny = F::min_positive_value();
    match (num >= tiny, den >= tiny) {
        (false, false) => (z, true),
        (true, false) => (w_max, true),
        (false, true) => (-w_max, true),
        (true, true) => {
            let w = (num / den).ln();
            if w > w_max {
                (w_max, true)
            } else if w < -w_max {
                (-w_max, true)
            } else {
                (w, false)
            }
        }
    }
}

pub fn de_weights<F: Real>(q: &EdgeTypeProbs<F>) -> EdgeWeights<F> {
    let mut w = Vec::with_capacity(q.len());
    let mut clamped = Vec::with_capacity(q.len());
    for p in q.as_slice() {
        let (pair, c) = match q.alg() {
            Algorithm::Qmp => {
                let (wl, cl) = log_ratio(p[2], p[1]);
                let (wh, ch) = log_ratio(p[3], p[0]);
                ([wl, wh], cl || ch)
            }
            Algorithm::Tmp => {
                let (x, c) = log_ratio(p[2], p[0]);
                ([x, F::zero()], c)
            }
            Algorithm::Bmp => {
                let (x, c) = log_ratio(p[1], p[0]);
                ([x, F::zero()], c)
            }
        };
        w.push(pair);
        clamped.push(c);
    }
    EdgeWeights { w, clamped }
}

/// LLR value carried by message slot `slot` under weights `w`.
#[inline]
pub fn message_llr<F: Real>(alg: Algorithm, slot: usize, w: [F; 2]) -> F {
    match (alg, slot) {
        (Algorithm::Bmp, 0) | (Algorithm::Tmp, 0) => -w[0],
        (Algorithm::Bmp, 1) | (Algorithm::Tmp, 2) => w[0],
        (Algorithm::Tmp, 1) => F::zero(),
        (Algorithm::Qmp, 0) => -w[1],
        (Algorithm::Qmp, 1) => -w[0],
        (Algorithm::Qmp, 2) => w[0],
        (Algorithm::Qmp, 3) => w[1],
        _ => unreachable!("slot {slot} unused for {alg:?}"),
    }
}

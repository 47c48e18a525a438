use super::{
    de_cn, de_init, de_vn_app, de_weights, Algorithm, DeConfig, DeError, EdgeTypeProbs, EdgeTypes, WeightSchedule,
};
use crate::constellation::BitChannelModel;
use crate::protograph::{BaseMatrix, BitMapping};
use crate::Real;

#[derive(Debug, Clone)]
pub struct DeOutcome<F> {
    pub converged: bool,
    /// The state stopped changing before convergence.
    pub stalled: bool,
    pub iterations: usize,
    pub schedule: WeightSchedule<F>,
    /// `P_app` per VN type after each iteration.
    pub trajectory: Vec<Vec<F>>,
    /// Largest `P_app` over the watched VN types after each iteration.
    pub watched: Vec<F>,
    /// Whether `watched` never increased.
    pub monotone: bool,
    /// Some weight was clamped at some iteration.
    pub clamped: bool,
    pub final_p: EdgeTypeProbs<F>,
}

impl<F: Real> DeOutcome<F> {
    pub fn final_error(&self) -> F {
        self.watched.last().copied().unwrap_or_else(F::one)
    }
}

/// Runs density evolution until the watched VN types reach
/// `cfg.convergence_eps`, the state reaches a fixed point, or `cfg.l_max`
/// iterations pass.
pub fn de_run<F: Real>(
    alg: Algorithm,
    base: &BaseMatrix,
    mapping: &BitMapping,
    channels: &[BitChannelModel],
    cfg: &DeConfig,
) -> Result<DeOutcome<F>, DeError> {
    cfg.validate()?;
    let edges = EdgeTypes::new(base);
    let watch = cfg.watch_cols.unwrap_or(base.cols()).clamp(1, base.cols());
    let eps = F::of(cfg.convergence_eps);
    let mut p = de_init::<F>(alg, channels, mapping, &edges, cfg)?;
    let mut schedule = WeightSchedule {
        alg,
        ensemble_hash: base.hash_hex(),
        mode: String::new(),
        snr_db: f64::NAN,
        t: cfg.t,
        l_max: cfg.l_max,
        edge_types: edges.iter().map(|(i, j, _)| (i, j)).collect(),
        iterations: Vec::new(),
    };
    let mut out = DeOutcome {
        converged: false,
        stalled: false,
        iterations: 0,
        schedule: schedule.clone(),
        trajectory: Vec::new(),
        watched: Vec::new(),
        monotone: true,
        clamped: false,
        final_p: p.clone(),
    };
    for l in 1..=cfg.l_max {
        let q = de_cn(&p, &edges);
        let mut w = de_weights(&q);
        // a clamped ratio comes from underflowed probabilities and carries
        // no information; hold the last well-conditioned weights instead
        if let Some(prev) = schedule.iterations.last() {
            for (k, &c) in w.clamped.iter().enumerate() {
                if c {
                    w.w[k] = prev[k];
                }
            }
        }
        let pass = de_vn_app(&q, &w, channels, mapping, &edges, cfg)?;
        out.clamped |= w.any_clamped();
        schedule.iterations.push(w.w);
        let worst = pass.app[..watch].iter().copied().fold(F::zero(), F::max);
        if out.watched.last().is_some_and(|&prev| worst > prev) {
            out.monotone = false;
        }
        out.watched.push(worst);
        out.trajectory.push(pass.app);
        out.iterations = l;
        let delta = pass.p.max_abs_diff(&p);
        p = pass.p;
        if worst < eps {
            out.converged = true;
            break;
        }
        if cfg.stall_tol > 0.0 && delta.f64() <= cfg.stall_tol {
            out.stalled = true;
            break;
        }
    }
    out.schedule = schedule;
    out.final_p = p;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constellation::SurrogateChannel;
    use crate::de::W_MAX;

    #[test]
    fn underflowed_ratios_hold_previous_weights() {
        let base = BaseMatrix::new(3, 6, vec![1; 18]).unwrap();
        let map = BitMapping::from_levels(vec![1; 6], 1).unwrap();
        let ch = vec![BitChannelModel::Surrogate(SurrogateChannel::from_sigma_breve(0.5))];
        // run far past the point where error probabilities underflow
        let cfg = DeConfig { convergence_eps: 1e-300, l_max: 60, stall_tol: 0.0, ..DeConfig::default() };
        for alg in Algorithm::ALL {
            let out = de_run::<f64>(alg, &base, &map, &ch, &cfg).unwrap();
            assert!(out.clamped, "{alg}");
            for it in &out.schedule.iterations {
                for w in it {
                    assert!(w[0] >= 0.0 && w[0] < W_MAX && w[1] >= 0.0 && w[1] < W_MAX, "{alg}: {w:?}");
                }
            }
        }
    }
}

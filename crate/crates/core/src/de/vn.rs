use std::collections::HashMap;

use rayon::prelude::*;

use super::edges::tidy;
use super::weights::{message_llr, EdgeWeights};
use super::{Algorithm, DeConfig, DeError, EdgeTypeProbs, EdgeTypes};
use crate::constellation::BitChannelModel;
use crate::protograph::BitMapping;
use crate::Real;

/// Finitely supported law of a sum of weighted check messages, atoms sorted
/// by value.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteLlrDistribution<F> {
    atoms: Vec<(F, F)>,
}

impl<F: Real> DiscreteLlrDistribution<F> {
    /// Point mass at zero.
    pub fn zero() -> Self {
        Self { atoms: vec![(F::zero(), F::one())] }
    }

    /// Builds from `(value, mass)` pairs, merging values within `tol`.
    pub fn from_atoms(atoms: Vec<(F, F)>, tol: f64) -> Self {
        let mut d = Self { atoms };
        d.merge(tol);
        d
    }

    pub fn atoms(&self) -> &[(F, F)] {
        &self.atoms
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn total_mass(&self) -> F {
        self.atoms.iter().map(|a| a.1).sum()
    }

    /// Law of the sum of two independent variables; `terms` counts the
    /// products formed.
    pub fn convolve(&self, other: &Self, tol: f64, terms: &mut u64) -> Self {
        *terms += (self.atoms.len() * other.atoms.len()) as u64;
        let mut out = Vec::with_capacity(self.atoms.len() * other.atoms.len());
        for &(x, p) in &self.atoms {
            for &(y, r) in &other.atoms {
                out.push((x + y, p * r));
            }
        }
        Self::from_atoms(out, tol)
    }

    fn merge(&mut self, tol: f64) {
        let inv = 1.0 / tol;
        let mut keyed: Vec<(i64, F, F)> = self
            .atoms
            .iter()
            .filter(|a| a.1 > F::zero())
            .map(|&(z, m)| ((z.f64() * inv).round() as i64, z, m))
            .collect();
        keyed.sort_unstable_by_key(|a| a.0);
        self.atoms.clear();
        let mut last_key = None;
        for (k, z, m) in keyed {
            match self.atoms.last_mut() {
                Some(last) if last_key == Some(k) => last.1 = last.1 + m,
                _ => {
                    self.atoms.push((z, m));
                    last_key = Some(k);
                }
            }
        }
    }
}

/// Distribution of the quantised message `Ψ(L̃ + z)` for a point shift `z`.
#[inline]
fn regions<F: Real>(alg: Algorithm, ch: &BitChannelModel, t: f64, z: f64) -> [f64; 4] {
    match alg {
        Algorithm::Bmp => {
            let neg = ch.cdf_le(-z);
            [neg, 1.0 - neg, 0.0, 0.0]
        }
        Algorithm::Tmp => {
            let neg = ch.cdf_lt(-t - z);
            let up = ch.cdf_le(t - z);
            [neg, (up - neg).max(0.0), 1.0 - up, 0.0]
        }
        Algorithm::Qmp => {
            let hn = ch.cdf_le(-t - z);
            let zero = ch.cdf_lt(-z);
            let up = ch.cdf_lt(t - z);
            [hn, (zero - hn).max(0.0), (up - zero).max(0.0), 1.0 - up]
        }
    }
}

fn quantized<F: Real>(alg: Algorithm, ch: &BitChannelModel, t: f64, dist: &DiscreteLlrDistribution<F>) -> [F; 4] {
    let mut acc = [F::zero(); 4];
    for &(z, m) in dist.atoms() {
        let r = regions::<F>(alg, ch, t, z.f64());
        for (a, x) in acc.iter_mut().zip(r) {
            *a = *a + m * F::of(x);
        }
    }
    tidy(alg, acc)
}

fn app_error<F: Real>(ch: &BitChannelModel, dist: &DiscreteLlrDistribution<F>) -> F {
    dist.atoms().iter().map(|&(z, m)| m * F::of(ch.cdf_le(-z.f64()))).sum()
}

fn channel_for<'c>(
    channels: &'c [BitChannelModel],
    mapping: &BitMapping,
    j: usize,
) -> Result<&'c BitChannelModel, DeError> {
    let level = mapping.level(j);
    channels.get(level - 1).ok_or(DeError::MissingChannel { level })
}

fn check_mapping(edges: &EdgeTypes, mapping: &BitMapping) -> Result<(), DeError> {
    if mapping.len() != edges.cols() {
        return Err(DeError::Shape(format!(
            "mapping covers {} VN types, base has {}",
            mapping.len(),
            edges.cols()
        )));
    }
    Ok(())
}

/// Initial VN-to-CN message distributions from the bit channels.
pub fn de_init<F: Real>(
    alg: Algorithm,
    channels: &[BitChannelModel],
    mapping: &BitMapping,
    edges: &EdgeTypes,
    cfg: &DeConfig,
) -> Result<EdgeTypeProbs<F>, DeError> {
    check_mapping(edges, mapping)?;
    let mut out = vec![[F::zero(); 4]; edges.len()];
    for (k, slot) in out.iter_mut().enumerate() {
        let ch = channel_for(channels, mapping, edges.get(k).1)?;
        *slot = quantized(alg, ch, cfg.t, &DiscreteLlrDistribution::<F>::zero());
    }
    Ok(EdgeTypeProbs::new(alg, out))
}

/// Result of the VN pass: outgoing distributions per edge type and the
/// a-posteriori error probability per VN type.
pub struct VnPass<F> {
    pub p: EdgeTypeProbs<F>,
    pub app: Vec<F>,
}

/// Variable-to-check and a-posteriori update in one pass over VN types.
pub fn de_vn_app<F: Real>(
    q: &EdgeTypeProbs<F>,
    w: &EdgeWeights<F>,
    channels: &[BitChannelModel],
    mapping: &BitMapping,
    edges: &EdgeTypes,
    cfg: &DeConfig,
) -> Result<VnPass<F>, DeError> {
    check_mapping(edges, mapping)?;
    let alg = q.alg();
    // Columns with the same level and the same check neighbourhood carry
    // identical densities at every iteration, so one representative per
    // class is evaluated.
    let mut reps: Vec<usize> = Vec::new();
    let mut seen: HashMap<Vec<u64>, usize> = HashMap::new();
    let twin: Vec<usize> = (0..edges.cols())
        .map(|j| {
            *seen.entry(column_key(mapping, edges, j)).or_insert_with(|| {
                reps.push(j);
                reps.len() - 1
            })
        })
        .collect();
    let per_rep: Vec<(Vec<[F; 4]>, F)> = reps
        .par_iter()
        .map(|&j| vn_column(alg, q, w, channel_for(channels, mapping, j)?, edges, j, cfg))
        .collect::<Result<_, _>>()?;
    let mut p = vec![[F::zero(); 4]; edges.len()];
    let mut app = Vec::with_capacity(edges.cols());
    for (j, &r) in twin.iter().enumerate() {
        let (outs, e) = &per_rep[r];
        for (&k, v) in edges.in_col(j).iter().zip(outs) {
            p[k] = *v;
        }
        app.push(*e);
    }
    Ok(VnPass { p: EdgeTypeProbs::new(alg, p), app })
}

/// Variable-to-check update alone.
pub fn de_vn<F: Real>(
    q: &EdgeTypeProbs<F>,
    w: &EdgeWeights<F>,
    channels: &[BitChannelModel],
    mapping: &BitMapping,
    edges: &EdgeTypes,
    cfg: &DeConfig,
) -> Result<EdgeTypeProbs<F>, DeError> {
    Ok(de_vn_app(q, w, channels, mapping, edges, cfg)?.p)
}

/// A-posteriori bit error probability per VN type.
pub fn de_app<F: Real>(
    q: &EdgeTypeProbs<F>,
    w: &EdgeWeights<F>,
    channels: &[BitChannelModel],
    mapping: &BitMapping,
    edges: &EdgeTypes,
    cfg: &DeConfig,
) -> Result<Vec<F>, DeError> {
    Ok(de_vn_app(q, w, channels, mapping, edges, cfg)?.app)
}

/// Law of the weighted LLR carried by one check message on edge type `k`.
pub fn message_distribution<F: Real>(
    q: &EdgeTypeProbs<F>,
    w: &EdgeWeights<F>,
    k: usize,
    tol: f64,
) -> DiscreteLlrDistribution<F> {
    let alg = q.alg();
    let atoms = (0..alg.alphabet_len()).map(|s| (message_llr(alg, s, w.w[k]), q.get(k)[s])).collect();
    DiscreteLlrDistribution::from_atoms(atoms, tol)
}

fn column_key(mapping: &BitMapping, edges: &EdgeTypes, j: usize) -> Vec<u64> {
    let mut key = vec![mapping.level(j) as u64];
    for &k in edges.in_col(j) {
        let (i, _, mult) = edges.get(k);
        key.extend([i as u64, u64::from(mult)]);
    }
    key
}

fn vn_column<F: Real>(
    alg: Algorithm,
    q: &EdgeTypeProbs<F>,
    w: &EdgeWeights<F>,
    ch: &BitChannelModel,
    edges: &EdgeTypes,
    j: usize,
    cfg: &DeConfig,
) -> Result<(Vec<[F; 4]>, F), DeError> {
    let tol = cfg.merge_tol;
    let mut factors = Vec::new();
    let mut first = Vec::new();
    for &k in edges.in_col(j) {
        let d = message_distribution(q, w, k, tol);
        first.push(factors.len());
        for _ in 0..edges.get(k).2 {
            factors.push(d.clone());
        }
    }
    let n = factors.len();
    let mut terms = 0u64;
    let over = |terms: u64| -> Result<(), DeError> {
        if terms > cfg.term_budget {
            Err(DeError::TermBudget { vn_type: j, degree: n, terms, budget: cfg.term_budget })
        } else {
            Ok(())
        }
    };
    let mut prefix = vec![DiscreteLlrDistribution::zero()];
    for f in &factors {
        let next = prefix.last().expect("seeded").convolve(f, tol, &mut terms);
        prefix.push(next);
        over(terms)?;
    }
    let mut suffix = vec![DiscreteLlrDistribution::zero(); n + 1];
    for t in (0..n).rev() {
        suffix[t] = factors[t].convolve(&suffix[t + 1], tol, &mut terms);
        over(terms)?;
    }
    let mut outs = Vec::with_capacity(first.len());
    for &pos in &first {
        let l_av = prefix[pos].convolve(&suffix[pos + 1], tol, &mut terms);
        over(terms)?;
        outs.push(quantized(alg, ch, cfg.t, &l_av));
    }
    Ok((outs, app_error(ch, &prefix[n])))
}

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{Algorithm, DeError};
use crate::Real;

/// VN weights for every DE iteration, keyed by edge type.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightSchedule<F> {
    pub alg: Algorithm,
    pub ensemble_hash: String,
    pub mode: String,
    pub snr_db: f64,
    pub t: f64,
    pub l_max: usize,
    /// Edge types `(i, j)` in the order used by `iterations`.
    pub edge_types: Vec<(usize, usize)>,
    /// `iterations[l - 1][k]` are the weights applied at iteration `l`.
    pub iterations: Vec<Vec<[F; 2]>>,
}

#[derive(Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
struct ScheduleJson {
    alg: Algorithm,
    ensemble_hash: String,
    mode: String,
    snr_db: f64,
    #[serde(rename = "T")]
    t: f64,
    l_max: usize,
    iterations: Vec<BTreeMap<String, Vec<f64>>>,
}

impl<F: Real> WeightSchedule<F> {
    pub fn len(&self) -> usize {
        self.iterations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.iterations.is_empty()
    }

    /// Weights at decoder iteration `l` (1-based); iterations past the end
    /// reuse the last entry.
    #[inline]
    pub fn at(&self, l: usize, k: usize) -> [F; 2] {
        let idx = l.clamp(1, self.iterations.len()) - 1;
        self.iterations[idx][k]
    }

    pub fn index_of(&self, i: usize, j: usize) -> Option<usize> {
        self.edge_types.iter().position(|&e| e == (i, j))
    }

    pub fn cast<G: Real>(&self) -> WeightSchedule<G> {
        WeightSchedule {
            alg: self.alg,
            ensemble_hash: self.ensemble_hash.clone(),
            mode: self.mode.clone(),
            snr_db: self.snr_db,
            t: self.t,
            l_max: self.l_max,
            edge_types: self.edge_types.clone(),
            iterations: self
                .iterations
                .iter()
                .map(|it| it.iter().map(|w| w.map(|x| G::of(x.f64()))).collect())
                .collect(),
        }
    }

    /// Every weight is finite.
    pub fn is_finite(&self) -> bool {
        self.iterations.iter().flatten().all(|w| w.iter().all(|x| x.is_finite()))
    }

    pub fn to_json(&self) -> String {
        let width = if self.alg == Algorithm::Qmp { 2 } else { 1 };
        let iterations = self
            .iterations
            .iter()
            .map(|it| {
                self.edge_types
                    .iter()
                    .zip(it)
                    .map(|(&(i, j), w)| (format!("{i},{j}"), w[..width].iter().map(|x| x.f64()).collect()))
                    .collect()
            })
            .collect();
        let doc = ScheduleJson {
            alg: self.alg,
            ensemble_hash: self.ensemble_hash.clone(),
            mode: self.mode.clone(),
            snr_db: self.snr_db,
            t: self.t,
            l_max: self.l_max,
            iterations,
        };
        serde_json::to_string(&doc).expect("serialisable")
    }

    pub fn from_json(text: &str) -> Result<Self, DeError> {
        let doc: ScheduleJson = serde_json::from_str(text).map_err(|e| DeError::Schedule(e.to_string()))?;
        let width = if doc.alg == Algorithm::Qmp { 2 } else { 1 };
        let mut edge_types: Vec<(usize, usize)> = Vec::new();
        if let Some(first) = doc.iterations.first() {
            for key in first.keys() {
                edge_types.push(parse_key(key)?);
            }
        }
        // row-major order, matching EdgeTypes
        edge_types.sort_unstable();
        let mut iterations = Vec::with_capacity(doc.iterations.len());
        for it in &doc.iterations {
            if it.len() != edge_types.len() {
                return Err(DeError::Schedule("iterations list different edge types".into()));
            }
            let mut row = Vec::with_capacity(edge_types.len());
            for &(i, j) in &edge_types {
                let w = it
                    .get(&format!("{i},{j}"))
                    .ok_or_else(|| DeError::Schedule(format!("edge type {i},{j} missing")))?;
                if w.len() != width {
                    return Err(DeError::Schedule(format!("expected {width} weights for {i},{j}")));
                }
                row.push([F::of(w[0]), if width == 2 { F::of(w[1]) } else { F::zero() }]);
            }
            iterations.push(row);
        }
        Ok(Self {
            alg: doc.alg,
            ensemble_hash: doc.ensemble_hash,
            mode: doc.mode,
            snr_db: doc.snr_db,
            t: doc.t,
            l_max: doc.l_max,
            edge_types,
            iterations,
        })
    }

    pub fn write(&self, path: &Path) -> Result<(), DeError> {
        std::fs::write(path, self.to_json())?;
        Ok(())
    }

    pub fn read(path: &Path) -> Result<Self, DeError> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }
}

fn parse_key(key: &str) -> Result<(usize, usize), DeError> {
    let bad = || DeError::Schedule(format!("bad edge-type key {key:?}"));
    let (a, b) = key.split_once(',').ok_or_else(bad)?;
    Ok((a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?))
}

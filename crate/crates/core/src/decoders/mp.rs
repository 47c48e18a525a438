use serde::{Deserialize, Serialize};

use super::{DecoderError, DecoderGraph};
use crate::de::{message_llr, Algorithm, WeightSchedule};
use crate::Real;

/// The sign used for every hard decision: `sign(0) = sign(−0) = +1`, so
/// exact ties decide for bit 0.
#[inline]
pub fn sign_convention<F: Real>(x: F) -> i8 {
    if x < F::zero() {
        -1
    } else {
        1
    }
}

/// Message slot for a real value; slot order matches the DE tuples
/// (BMP `[−1, +1]`, TMP `[−1, 0, +1]`, QMP `[−H, −L, +L, +H]`).
#[inline]
pub fn quantize<F: Real>(alg: Algorithm, x: F, t: F) -> u8 {
    match alg {
        Algorithm::Bmp => u8::from(x > F::zero()),
        Algorithm::Tmp => {
            if x > t {
                2
            } else if x < -t {
                0
            } else {
                1
            }
        }
        Algorithm::Qmp => {
            if x <= -t {
                0
            } else if x < F::zero() {
                1
            } else if x < t {
                2
            } else {
                3
            }
        }
    }
}

/// Check rule on message slots: sign product, and for QMP the smaller
/// magnitude, for TMP erasure if any input is erased.
#[inline]
pub fn cn_rule(alg: Algorithm, inputs: impl IntoIterator<Item = u8>) -> u8 {
    let mut neg = false;
    let mut weak = false;
    for s in inputs {
        match alg {
            Algorithm::Bmp => neg ^= s == 0,
            Algorithm::Tmp => {
                weak |= s == 1;
                neg ^= s == 0;
            }
            Algorithm::Qmp => {
                weak |= s == 1 || s == 2;
                neg ^= s <= 1;
            }
        }
    }
    encode(alg, neg, weak)
}

#[inline]
fn encode(alg: Algorithm, neg: bool, weak: bool) -> u8 {
    match alg {
        Algorithm::Bmp => u8::from(!neg),
        Algorithm::Tmp => {
            if weak {
                1
            } else if neg {
                0
            } else {
                2
            }
        }
        Algorithm::Qmp => match (neg, weak) {
            (true, false) => 0,
            (true, true) => 1,
            (false, true) => 2,
            (false, false) => 3,
        },
    }
}

#[inline]
fn split(alg: Algorithm, s: u8) -> (bool, bool) {
    match alg {
        Algorithm::Bmp => (s == 0, false),
        Algorithm::Tmp => (s == 0, s == 1),
        Algorithm::Qmp => (s <= 1, s == 1 || s == 2),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecodeResult {
    pub bits: Vec<u8>,
    pub iterations: usize,
    pub syndrome_zero: bool,
}

impl DecodeResult {
    pub fn bit_errors(&self) -> usize {
        self.bits.iter().filter(|&&b| b != 0).count()
    }
}

/// Flooding BMP/TMP/QMP decoder with weights taken per edge type and
/// iteration from a schedule; iterations past its end reuse the last entry.
pub struct MessagePassingDecoder<'g, F> {
    g: &'g DecoderGraph,
    alg: Algorithm,
    t: F,
    schedule: &'g WeightSchedule<F>,
    llr: Vec<F>,
    /// Variable-to-check slots in check order.
    v2c: Vec<u8>,
    /// Check-to-variable slots in variable order.
    c2v: Vec<u8>,
    hard: Vec<u8>,
    /// Message LLR of slot `s` on edge type `k` at `values[4k + s]`.
    values: Vec<F>,
    scratch: Vec<F>,
    /// `bit 0`: negative, `bit 1`: weak (erased or low magnitude).
    split: [u8; 4],
    encode: [u8; 4],
    last_unsatisfied: usize,
    iteration: usize,
}

impl<'g, F: Real> MessagePassingDecoder<'g, F> {
    pub fn new(g: &'g DecoderGraph, schedule: &'g WeightSchedule<F>) -> Result<Self, DecoderError> {
        g.check_schedule(schedule)?;
        if !(schedule.t >= 0.0) {
            return Err(DecoderError::Schedule(format!("threshold T = {} must be >= 0", schedule.t)));
        }
        let alg = schedule.alg;
        let e = g.edge_count();
        let max_deg = (0..g.n()).map(|v| g.vn_range(v).len()).max().unwrap_or(0);
        let mut split_t = [0u8; 4];
        for (sl, b) in split_t.iter_mut().enumerate().take(alg.alphabet_len()) {
            let (n, w) = split(alg, sl as u8);
            *b = u8::from(n) | (u8::from(w) << 1);
        }
        let mut encode_t = [0u8; 4];
        for (b, out) in encode_t.iter_mut().enumerate() {
            *out = encode(alg, b & 1 == 1, b & 2 == 2);
        }
        Ok(Self {
            g,
            alg,
            t: F::of(schedule.t),
            schedule,
            llr: vec![F::zero(); g.n()],
            v2c: vec![0; e],
            c2v: vec![0; e],
            hard: vec![0; g.n()],
            values: vec![F::zero(); 4 * g.types().len()],
            scratch: vec![F::zero(); max_deg],
            split: split_t,
            encode: encode_t,
            last_unsatisfied: 0,
            iteration: 0,
        })
    }

    pub fn alg(&self) -> Algorithm {
        self.alg
    }

    pub fn graph(&self) -> &DecoderGraph {
        self.g
    }

    pub fn iteration(&self) -> usize {
        self.iteration
    }

    /// Variable-to-check message slots, indexed by edge.
    pub fn v2c(&self) -> &[u8] {
        &self.v2c
    }

    /// Check-to-variable message slots, indexed by edge.
    pub fn c2v(&self) -> Vec<u8> {
        self.g.vn_slots().iter().map(|&p| self.c2v[p as usize]).collect()
    }

    pub fn hard(&self) -> &[u8] {
        &self.hard
    }

    /// Loads channel LLRs and sends their quantized values to every check.
    pub fn init(&mut self, llr: &[F]) -> Result<(), DecoderError> {
        if llr.len() != self.g.n() {
            return Err(DecoderError::Length { expected: self.g.n(), got: llr.len() });
        }
        if llr.iter().any(|x| !x.is_finite()) {
            return Err(DecoderError::NonFinite);
        }
        self.llr.copy_from_slice(llr);
        self.iteration = 0;
        self.last_unsatisfied = 0;
        let edges = self.g.vn_order_edges();
        for v in 0..self.g.n() {
            let s = quantize(self.alg, llr[v], self.t);
            for &e in &edges[self.g.vn_range(v)] {
                self.v2c[e as usize] = s;
            }
            self.hard[v] = u8::from(sign_convention(llr[v]) < 0);
        }
        Ok(())
    }

    /// One flooding iteration: check update then variable update.
    pub fn iterate(&mut self) {
        self.iteration += 1;
        let alg = self.alg;
        let slots = self.g.vn_slots();
        for c in 0..self.g.m() {
            let r = self.g.cn_edges(c);
            let (mut par, mut weak) = (0u8, 0u32);
            for &s in &self.v2c[r.clone()] {
                let b = self.split[s as usize];
                par ^= b & 1;
                weak += u32::from(b >> 1);
            }
            for e in r {
                let b = self.split[self.v2c[e] as usize];
                let others_weak = u8::from(weak > u32::from(b >> 1));
                self.c2v[slots[e] as usize] = self.encode[((par ^ b) & 1 | (others_weak << 1)) as usize];
            }
        }
        for k in 0..self.g.types().len() {
            let w = self.schedule.at(self.iteration, k);
            for s in 0..alg.alphabet_len() {
                self.values[4 * k + s] = message_llr(alg, s, w);
            }
        }
        let types = self.g.vn_order_types();
        let edges = self.g.vn_order_edges();
        for v in 0..self.g.n() {
            let r = self.g.vn_range(v);
            let d = r.len();
            let mut total = self.llr[v];
            for (i, p) in r.clone().enumerate() {
                let x = self.values[4 * types[p] as usize + self.c2v[p] as usize];
                self.scratch[i] = x;
                total = total + x;
            }
            self.hard[v] = u8::from(sign_convention(total) < 0);
            // extrinsic sums by prefix and suffix so that no value is
            // subtracted back out
            let mut suffix = F::zero();
            for i in (0..d).rev() {
                let x = self.scratch[i];
                self.scratch[i] = suffix;
                suffix = suffix + x;
            }
            let mut prefix = self.llr[v];
            for (i, p) in r.enumerate() {
                let x = self.values[4 * types[p] as usize + self.c2v[p] as usize];
                self.v2c[edges[p] as usize] = quantize(alg, prefix + self.scratch[i], self.t);
                prefix = prefix + x;
            }
        }
    }

    fn satisfied(&mut self) -> bool {
        match self.g.unsatisfied_from(&self.hard, self.last_unsatisfied) {
            Some(c) => {
                self.last_unsatisfied = c;
                false
            }
            None => true,
        }
    }

    /// Decodes `llr` with at most `l_max` iterations, stopping as soon as
    /// the hard decisions satisfy every check.
    pub fn decode(&mut self, llr: &[F], l_max: usize) -> Result<DecodeResult, DecoderError> {
        self.init(llr)?;
        let mut ok = self.satisfied();
        while !ok && self.iteration < l_max {
            self.iterate();
            ok = self.satisfied();
        }
        Ok(DecodeResult { bits: self.hard.clone(), iterations: self.iteration, syndrome_zero: ok })
    }
}

/// One-shot decode; see [`MessagePassingDecoder`].
pub fn decode<F: Real>(
    g: &DecoderGraph,
    llr: &[F],
    schedule: &WeightSchedule<F>,
    l_max: usize,
) -> Result<DecodeResult, DecoderError> {
    MessagePassingDecoder::new(g, schedule)?.decode(llr, l_max)
}

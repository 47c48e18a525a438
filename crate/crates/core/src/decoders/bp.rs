use super::{sign_convention, DecodeResult, DecoderError, DecoderGraph};
use crate::Real;

/// Largest message magnitude kept by the sum-product decoder.
const BP_CLAMP: f64 = 40.0;

/// Flooding sum-product decoder in the LLR domain (tanh rule).
pub struct BpDecoder<'g, F> {
    g: &'g DecoderGraph,
    llr: Vec<F>,
    v2c: Vec<F>,
    c2v: Vec<F>,
    hard: Vec<u8>,
    tanh: Vec<F>,
    iteration: usize,
}

impl<'g, F: Real> BpDecoder<'g, F> {
    pub fn new(g: &'g DecoderGraph) -> Self {
        let e = g.edge_count();
        Self {
            g,
            llr: vec![F::zero(); g.n()],
            v2c: vec![F::zero(); e],
            c2v: vec![F::zero(); e],
            hard: vec![0; g.n()],
            tanh: Vec::new(),
            iteration: 0,
        }
    }

    pub fn iteration(&self) -> usize {
        self.iteration
    }

    pub fn hard(&self) -> &[u8] {
        &self.hard
    }

    /// Loads channel LLRs and resets the iteration counter.
    pub fn init(&mut self, llr: &[F]) -> Result<(), DecoderError> {
        if llr.len() != self.g.n() {
            return Err(DecoderError::Length { expected: self.g.n(), got: llr.len() });
        }
        if llr.iter().any(|x| !x.is_finite()) {
            return Err(DecoderError::NonFinite);
        }
        let clamp = F::of(BP_CLAMP);
        self.iteration = 0;
        for v in 0..self.g.n() {
            let x = llr[v].max(-clamp).min(clamp);
            self.llr[v] = x;
            for &e in self.g.vn_edges(v) {
                self.v2c[e as usize] = x;
            }
            self.hard[v] = u8::from(sign_convention(x) < 0);
        }
        Ok(())
    }

    pub fn decode(&mut self, llr: &[F], l_max: usize) -> Result<DecodeResult, DecoderError> {
        self.init(llr)?;
        let mut ok = self.g.syndrome_zero(&self.hard);
        while !ok && self.iteration < l_max {
            self.iterate();
            ok = self.g.syndrome_zero(&self.hard);
        }
        Ok(DecodeResult { bits: self.hard.clone(), iterations: self.iteration, syndrome_zero: ok })
    }

    /// One flooding iteration without a syndrome check.
    pub fn iterate(&mut self) {
        self.iteration += 1;
        let (half, two, one) = (F::of(0.5), F::of(2.0), F::one());
        let limit = F::of(BP_CLAMP);
        let edge_max = one - F::epsilon();
        for c in 0..self.g.m() {
            let r = self.g.cn_edges(c);
            self.tanh.clear();
            self.tanh.extend(r.clone().map(|e| (self.v2c[e] * half).tanh()));
            let d = self.tanh.len();
            // leave-one-out products via a running prefix and a suffix pass
            let mut suffix = one;
            let mut suffixes = vec![one; d];
            for t in (0..d).rev() {
                suffixes[t] = suffix;
                suffix = suffix * self.tanh[t];
            }
            let mut prefix = one;
            for (t, e) in r.enumerate() {
                let p = (prefix * suffixes[t]).max(-edge_max).min(edge_max);
                self.c2v[e] = (two * p.atanh()).max(-limit).min(limit);
                prefix = prefix * self.tanh[t];
            }
        }
        for v in 0..self.g.n() {
            let edges = self.g.vn_edges(v);
            let total = edges.iter().fold(self.llr[v], |acc, &e| acc + self.c2v[e as usize]);
            self.hard[v] = u8::from(sign_convention(total) < 0);
            for &e in edges {
                let e = e as usize;
                self.v2c[e] = (total - self.c2v[e]).max(-limit).min(limit);
            }
        }
    }
}

/// One-shot sum-product decode.
pub fn decode_bp<F: Real>(g: &DecoderGraph, llr: &[F], l_max: usize) -> Result<DecodeResult, DecoderError> {
    BpDecoder::new(g).decode(llr, l_max)
}

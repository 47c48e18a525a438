use super::DecoderError;
use crate::de::{EdgeTypes, WeightSchedule};
use crate::protograph::LiftedCode;

/// Compressed adjacency of a lifted Tanner graph. Edges are numbered in
/// check-node order; every edge carries the index of its base edge type.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecoderGraph {
    n: usize,
    m: usize,
    q: usize,
    cn_ptr: Vec<u32>,
    edge_vn: Vec<u32>,
    vn_ptr: Vec<u32>,
    vn_edges: Vec<u32>,
    edge_type: Vec<u32>,
    /// Position of every edge in VN order.
    vn_slot: Vec<u32>,
    /// Edge types in VN order.
    vn_order_type: Vec<u32>,
    types: Vec<(usize, usize)>,
}

impl DecoderGraph {
    pub fn new(code: &LiftedCode) -> Self {
        let types = EdgeTypes::new(code.base());
        let adj = code.check_adjacency();
        let (n, m) = (code.n(), code.m());
        let mut cn_ptr = Vec::with_capacity(m + 1);
        let mut edge_vn = Vec::new();
        let mut edge_type = Vec::new();
        cn_ptr.push(0u32);
        for (c, row) in adj.iter().enumerate() {
            for &(v, _) in row {
                edge_vn.push(v as u32);
                let k = types.index(c / code.q(), v / code.q()).expect("lifted edge has a base type");
                edge_type.push(k as u32);
            }
            cn_ptr.push(edge_vn.len() as u32);
        }
        let mut deg = vec![0u32; n + 1];
        for &v in &edge_vn {
            deg[v as usize + 1] += 1;
        }
        for j in 0..n {
            deg[j + 1] += deg[j];
        }
        let vn_ptr = deg.clone();
        let mut fill = deg;
        let mut vn_edges = vec![0u32; edge_vn.len()];
        for (e, &v) in edge_vn.iter().enumerate() {
            vn_edges[fill[v as usize] as usize] = e as u32;
            fill[v as usize] += 1;
        }
        let mut vn_slot = vec![0u32; vn_edges.len()];
        for (p, &e) in vn_edges.iter().enumerate() {
            vn_slot[e as usize] = p as u32;
        }
        let vn_order_type = vn_edges.iter().map(|&e| edge_type[e as usize]).collect();
        Self {
            n,
            m,
            q: code.q(),
            cn_ptr,
            edge_vn,
            vn_ptr,
            vn_edges,
            edge_type,
            vn_slot,
            vn_order_type,
            types: types.iter().map(|(i, j, _)| (i, j)).collect(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn edge_count(&self) -> usize {
        self.edge_vn.len()
    }

    /// Edge ids `start..end` of check `c`.
    #[inline]
    pub fn cn_edges(&self, c: usize) -> std::ops::Range<usize> {
        self.cn_ptr[c] as usize..self.cn_ptr[c + 1] as usize
    }

    /// Edge ids of variable `v`.
    #[inline]
    pub fn vn_edges(&self, v: usize) -> &[u32] {
        &self.vn_edges[self.vn_ptr[v] as usize..self.vn_ptr[v + 1] as usize]
    }

    #[inline]
    pub fn edge_vn(&self, e: usize) -> usize {
        self.edge_vn[e] as usize
    }

    /// Base edge-type index of edge `e`.
    #[inline]
    pub fn edge_type(&self, e: usize) -> usize {
        self.edge_type[e] as usize
    }

    /// Range of VN-order positions belonging to VN `v`.
    #[inline]
    pub(crate) fn vn_range(&self, v: usize) -> std::ops::Range<usize> {
        self.vn_ptr[v] as usize..self.vn_ptr[v + 1] as usize
    }

    #[inline]
    pub(crate) fn vn_slots(&self) -> &[u32] {
        &self.vn_slot
    }

    #[inline]
    pub(crate) fn vn_order_types(&self) -> &[u32] {
        &self.vn_order_type
    }

    #[inline]
    pub(crate) fn vn_order_edges(&self) -> &[u32] {
        &self.vn_edges
    }

    /// Index of an unsatisfied check, scanning cyclically from `start`.
    pub(crate) fn unsatisfied_from(&self, hard: &[u8], start: usize) -> Option<usize> {
        (start..self.m).chain(0..start.min(self.m)).find(|&c| {
            let r = self.cn_edges(c);
            self.edge_vn[r].iter().fold(0u8, |acc, &v| acc ^ hard[v as usize]) != 0
        })
    }

    /// Edge types `(i, j)` of the underlying base matrix.
    pub fn types(&self) -> &[(usize, usize)] {
        &self.types
    }

    /// Whether `hard` satisfies every parity check.
    pub fn syndrome_zero(&self, hard: &[u8]) -> bool {
        (0..self.m).all(|c| self.cn_edges(c).fold(0u8, |acc, e| acc ^ hard[self.edge_vn(e)]) == 0)
    }

    pub(crate) fn check_schedule<F>(&self, s: &WeightSchedule<F>) -> Result<(), DecoderError> {
        if s.iterations.is_empty() {
            return Err(DecoderError::Schedule("schedule has no iterations".into()));
        }
        if s.edge_types != self.types {
            return Err(DecoderError::Schedule(format!(
                "schedule covers {} edge types, graph has {}; they must come from the same base matrix",
                s.edge_types.len(),
                self.types.len()
            )));
        }
        if s.iterations.iter().any(|it| it.len() != self.types.len()) {
            return Err(DecoderError::Schedule("iteration with wrong number of weights".into()));
        }
        Ok(())
    }
}

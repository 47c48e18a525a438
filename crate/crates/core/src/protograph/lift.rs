use std::collections::VecDeque;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{BaseMatrix, ProtographError};

/// One parallel edge of the base graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BaseEdge {
    pub row: usize,
    pub col: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LiftConfig {
    pub q: usize,
    pub girth_target: usize,
    pub max_sweeps: usize,
    pub seed: u64,
}

impl LiftConfig {
    pub fn new(q: usize, seed: u64) -> Self {
        Self { q, girth_target: 8, max_sweeps: 40, seed }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct LiftReport {
    pub girth_target: usize,
    /// Length of the shortest cycle found, or `girth_target` when none
    /// shorter than the target exists.
    pub achieved_girth: usize,
    pub target_met: bool,
    pub sweeps: usize,
}

/// Quasi-cyclic lifting of a base matrix by circulant permutations of size
/// `q`. Row `r` of the circulant for shift `s` connects to column
/// `(r + s) mod q`; lifted node `type·q + offset`.
#[derive(Debug, Clone, PartialEq)]
pub struct LiftedCode {
    base: BaseMatrix,
    q: usize,
    edges: Vec<BaseEdge>,
    shifts: Vec<u32>,
}

impl LiftedCode {
    /// Lifted code from explicit shifts, one per base edge in row-major entry
    /// order (parallel edges consecutive).
    pub fn from_shifts(base: BaseMatrix, q: usize, shifts: Vec<u32>) -> Result<Self, ProtographError> {
        let edges = base_edges(&base);
        if q == 0 || (base.max_entry() as usize) > q {
            return Err(ProtographError::LiftTooSmall { q, max_entry: base.max_entry() });
        }
        if shifts.len() != edges.len() {
            return Err(ProtographError::ShiftCount { expected: edges.len(), got: shifts.len() });
        }
        if let Some(&s) = shifts.iter().find(|&&s| s as usize >= q) {
            return Err(ProtographError::ShiftOutOfRange { shift: s, q });
        }
        Ok(Self { base, q, edges, shifts })
    }

    pub fn base(&self) -> &BaseMatrix {
        &self.base
    }

    pub fn q(&self) -> usize {
        self.q
    }

    /// Number of variable nodes.
    pub fn n(&self) -> usize {
        self.base.cols() * self.q
    }

    /// Number of check nodes.
    pub fn m(&self) -> usize {
        self.base.rows() * self.q
    }

    pub fn edges(&self) -> &[BaseEdge] {
        &self.edges
    }

    pub fn shifts(&self) -> &[u32] {
        &self.shifts
    }

    /// Shifts of base entry `(i, j)`.
    pub fn entry_shifts(&self, i: usize, j: usize) -> Vec<u32> {
        self.edges
            .iter()
            .zip(&self.shifts)
            .filter(|(e, _)| e.row == i && e.col == j)
            .map(|(_, &s)| s)
            .collect()
    }

    /// Base column of lifted VN `v`.
    #[inline]
    pub fn vn_type(&self, v: usize) -> usize {
        v / self.q
    }

    /// Base row of lifted CN `c`.
    #[inline]
    pub fn cn_type(&self, c: usize) -> usize {
        c / self.q
    }

    /// For every lifted CN, the connected VNs with the base edge index each
    /// connection comes from.
    pub fn check_adjacency(&self) -> Vec<Vec<(usize, usize)>> {
        let q = self.q;
        let mut adj = vec![Vec::new(); self.m()];
        for (k, (e, &s)) in self.edges.iter().zip(&self.shifts).enumerate() {
            for r in 0..q {
                adj[e.row * q + r].push((e.col * q + (r + s as usize) % q, k));
            }
        }
        for row in &mut adj {
            row.sort_unstable();
        }
        adj
    }

    /// Dense parity-check matrix; intended for small codes only.
    pub fn dense(&self) -> Vec<Vec<u8>> {
        let mut h = vec![vec![0u8; self.n()]; self.m()];
        for (c, row) in self.check_adjacency().into_iter().enumerate() {
            for (v, _) in row {
                h[c][v] ^= 1;
            }
        }
        h
    }

    /// Shortest cycle length of the lifted Tanner graph by breadth-first
    /// search, `None` if acyclic.
    pub fn girth_bfs(&self) -> Option<usize> {
        let adj = self.check_adjacency();
        let n = self.n();
        let mut nodes: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n + self.m()];
        let mut eid = 0;
        for (c, row) in adj.iter().enumerate() {
            for &(v, _) in row {
                nodes[v].push((n + c, eid));
                nodes[n + c].push((v, eid));
                eid += 1;
            }
        }
        tanner_girth(&nodes)
    }

    pub fn has_parallel_edges(&self) -> bool {
        self.check_adjacency().iter().any(|row| row.windows(2).any(|w| w[0].0 == w[1].0))
    }
}

/// Shortest cycle in an undirected multigraph given as adjacency lists of
/// `(neighbour, edge_id)`.
pub fn tanner_girth(nodes: &[Vec<(usize, usize)>]) -> Option<usize> {
    let mut best = usize::MAX;
    let mut dist = vec![usize::MAX; nodes.len()];
    let mut via = vec![usize::MAX; nodes.len()];
    let mut touched = Vec::new();
    let mut queue = VecDeque::new();
    for src in 0..nodes.len() {
        for &t in &touched {
            dist[t] = usize::MAX;
            via[t] = usize::MAX;
        }
        touched.clear();
        queue.clear();
        dist[src] = 0;
        touched.push(src);
        queue.push_back(src);
        while let Some(u) = queue.pop_front() {
            if 2 * dist[u] + 1 >= best {
                break;
            }
            for &(w, e) in &nodes[u] {
                if e == via[u] {
                    continue;
                }
                if dist[w] == usize::MAX {
                    dist[w] = dist[u] + 1;
                    via[w] = e;
                    touched.push(w);
                    queue.push_back(w);
                } else {
                    best = best.min(dist[u] + dist[w] + 1);
                }
            }
        }
    }
    (best != usize::MAX).then_some(best)
}

pub(crate) fn base_edges(base: &BaseMatrix) -> Vec<BaseEdge> {
    let mut edges = Vec::with_capacity(base.edge_count() as usize);
    for row in 0..base.rows() {
        for col in 0..base.cols() {
            for _ in 0..base.get(row, col) {
                edges.push(BaseEdge { row, col });
            }
        }
    }
    edges
}

/// Enumerates non-backtracking closed walks through a fixed base edge and
/// evaluates their circulant shift sums.
struct CycleSearch<'a> {
    edges: &'a [BaseEdge],
    cn_edges: Vec<Vec<usize>>,
    vn_edges: Vec<Vec<usize>>,
    pair_edges: Vec<Vec<usize>>,
    cols: usize,
    q: i64,
    max_len: usize,
}

struct Walker<'s> {
    target: usize,
    vn: usize,
    shifts: &'s [u32],
    active: &'s [bool],
    /// Closed walks as `(length, coefficient of s_target, remaining sum)`.
    found: Vec<(usize, i64, i64)>,
}

impl<'a> CycleSearch<'a> {
    fn new(base: &BaseMatrix, edges: &'a [BaseEdge], q: usize, max_len: usize) -> Self {
        let mut cn_edges = vec![Vec::new(); base.rows()];
        let mut vn_edges = vec![Vec::new(); base.cols()];
        let mut pair_edges = vec![Vec::new(); base.rows() * base.cols()];
        for (k, e) in edges.iter().enumerate() {
            cn_edges[e.row].push(k);
            vn_edges[e.col].push(k);
            pair_edges[e.row * base.cols() + e.col].push(k);
        }
        Self { edges, cn_edges, vn_edges, pair_edges, cols: base.cols(), q: q as i64, max_len }
    }

    fn walks(&self, target: usize, shifts: &[u32], active: &[bool]) -> Vec<(usize, i64, i64)> {
        let e = self.edges[target];
        let mut w = Walker { target, vn: e.col, shifts, active, found: Vec::new() };
        self.at_cn(&mut w, e.row, target, 1, -1, 0);
        w.found
    }

    fn at_cn(&self, w: &mut Walker<'_>, cn: usize, last: usize, depth: usize, coef: i64, rest: i64) {
        for &f in &self.pair_edges[cn * self.cols + w.vn] {
            if f != last && f != w.target && w.active[f] {
                w.found.push((depth + 1, coef, rest + w.shifts[f] as i64));
            }
        }
        if depth + 3 > self.max_len {
            return;
        }
        for &f in &self.cn_edges[cn] {
            if f == last || !w.active[f] {
                continue;
            }
            let (c, r) = if f == w.target { (coef + 1, rest) } else { (coef, rest + w.shifts[f] as i64) };
            self.at_vn(w, self.edges[f].col, f, depth + 1, c, r);
        }
    }

    fn at_vn(&self, w: &mut Walker<'_>, vn: usize, last: usize, depth: usize, coef: i64, rest: i64) {
        for &g in &self.vn_edges[vn] {
            if g == last || !w.active[g] {
                continue;
            }
            let (c, r) = if g == w.target { (coef - 1, rest) } else { (coef, rest - w.shifts[g] as i64) };
            self.at_cn(w, self.edges[g].row, g, depth + 1, c, r);
        }
    }

    /// Penalty for every candidate value of the target shift; shorter
    /// cycles weigh more.
    fn penalties(&self, walks: &[(usize, i64, i64)], out: &mut [u64]) {
        out.iter_mut().for_each(|x| *x = 0);
        let q = self.q;
        for &(len, coef, rest) in walks {
            let weight = 1u64 << (2 * (self.max_len - len)).min(60);
            let c = coef.rem_euclid(q);
            let r = rest.rem_euclid(q);
            if c == 0 {
                if r == 0 {
                    out.iter_mut().for_each(|x| *x += weight);
                }
            } else if c == 1 || c == q - 1 {
                let v = if c == 1 { (q - r) % q } else { r };
                out[v as usize] += weight;
            } else {
                for (v, x) in out.iter_mut().enumerate() {
                    if (c * v as i64 + r) % q == 0 {
                        *x += weight;
                    }
                }
            }
        }
    }

    fn shortest_bad(&self, walks: &[(usize, i64, i64)], value: u32) -> Option<usize> {
        walks
            .iter()
            .filter(|&&(_, c, r)| (c * value as i64 + r).rem_euclid(self.q) == 0)
            .map(|&(l, _, _)| l)
            .min()
    }
}

/// Lifts `base` with circulant shifts chosen to avoid cycles shorter than
/// `cfg.girth_target`: a greedy pass over a random edge order followed by
/// hill-climbing sweeps that reassign offending shifts.
pub fn lift(base: &BaseMatrix, cfg: &LiftConfig) -> Result<(LiftedCode, LiftReport), ProtographError> {
    let q = cfg.q;
    if q == 0 || (base.max_entry() as usize) > q {
        return Err(ProtographError::LiftTooSmall { q, max_entry: base.max_entry() });
    }
    if cfg.girth_target < 4 || cfg.girth_target % 2 != 0 {
        return Err(ProtographError::GirthTarget(cfg.girth_target));
    }
    let edges = base_edges(base);
    let search = CycleSearch::new(base, &edges, q, cfg.girth_target - 2);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut shifts = vec![0u32; edges.len()];
    let mut active = vec![false; edges.len()];
    let mut pen = vec![0u64; q];
    let mut order: Vec<usize> = (0..edges.len()).collect();

    order.shuffle(&mut rng);
    for &e in &order {
        active[e] = true;
        let walks = search.walks(e, &shifts, &active);
        search.penalties(&walks, &mut pen);
        shifts[e] = pick_min(&pen, &mut rng);
    }

    let mut sweeps = 0;
    let mut clean = false;
    while sweeps < cfg.max_sweeps {
        sweeps += 1;
        order.shuffle(&mut rng);
        let mut bad = 0;
        for &e in &order {
            let walks = search.walks(e, &shifts, &active);
            search.penalties(&walks, &mut pen);
            let cur = pen[shifts[e] as usize];
            if cur == 0 {
                continue;
            }
            bad += 1;
            let v = pick_min(&pen, &mut rng);
            if pen[v as usize] < cur {
                shifts[e] = v;
            }
        }
        if bad == 0 {
            clean = true;
            break;
        }
    }

    let achieved = if clean {
        cfg.girth_target
    } else {
        (0..edges.len())
            .filter_map(|e| search.shortest_bad(&search.walks(e, &shifts, &active), shifts[e]))
            .min()
            .unwrap_or(cfg.girth_target)
    };
    let report = LiftReport {
        girth_target: cfg.girth_target,
        achieved_girth: achieved,
        target_met: achieved >= cfg.girth_target,
        sweeps,
    };
    Ok((LiftedCode::from_shifts(base.clone(), q, shifts)?, report))
}

fn pick_min(pen: &[u64], rng: &mut ChaCha8Rng) -> u32 {
    let best = *pen.iter().min().expect("non-empty");
    let ties = pen.iter().filter(|&&p| p == best).count();
    let mut k = rng.random_range(0..ties);
    for (v, &p) in pen.iter().enumerate() {
        if p == best {
            if k == 0 {
                return v as u32;
            }
            k -= 1;
        }
    }
    unreachable!()
}

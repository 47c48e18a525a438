//! Property checks shared by the property tests and the acceptance suite.
//! Every check panics on the first violation.

use std::collections::VecDeque;

use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{weighted::WeightedIndex, Distribution, Normal};

use scldpc::constellation::{BitChannelModel, BitDemapper, SignalingMode, SurrogateChannel, PRESET_NAMES};
use scldpc::de::{
    de_cn, de_init, de_vn_app, de_weights, message_llr, probe, Algorithm, DeConfig, EdgeTypeProbs, EdgeTypes,
    InitSource,
};
use scldpc::decoders::{cn_rule, quantize};
use scldpc::protograph::{lift, sc_ensemble, BaseMatrix, BitMapping, LiftConfig};
use scldpc::sim::{ks_two_sample, run_fer, FerRecord, SimDecoder, SimPlan, StopRule};

use super::coupled_setup_small;

fn runner(cases: u32) -> TestRunner {
    let cfg = Config { cases, failure_persistence: None, ..Config::default() };
    TestRunner::new_with_rng(cfg, TestRng::deterministic_rng(RngAlgorithm::ChaCha))
}

fn alg() -> impl Strategy<Value = Algorithm> {
    prop::sample::select(Algorithm::ALL.to_vec())
}

/// Base matrices up to 3 x 4 with entries 0..=2 and no empty row or column.
fn base() -> impl Strategy<Value = BaseMatrix> {
    (1usize..=3, 1usize..=4)
        .prop_flat_map(|(r, c)| (Just(r), Just(c), prop::collection::vec(0u32..=2, r * c)))
        .prop_filter("empty row or column", |(r, c, e)| {
            (0..*r).all(|i| (0..*c).any(|j| e[i * c + j] > 0)) && (0..*c).all(|j| (0..*r).any(|i| e[i * c + j] > 0))
        })
        .prop_map(|(r, c, e)| BaseMatrix::new(r, c, e).unwrap())
}

fn normalized(alg: Algorithm, raw: &[f64]) -> [f64; 4] {
    let n = alg.alphabet_len();
    let total: f64 = raw[..n].iter().sum();
    let mut p = [0.0; 4];
    for s in 0..n {
        p[s] = raw[s] / total;
    }
    p
}

fn assert_distribution(p: &[f64; 4], alg: Algorithm, what: &str) -> Result<(), TestCaseError> {
    let total: f64 = p.iter().sum();
    prop_assert!((total - 1.0).abs() < 1e-12, "{what}: mass {total}");
    prop_assert!(p.iter().all(|&x| (-1e-15..=1.0 + 1e-15).contains(&x)), "{what}: {p:?}");
    prop_assert!(p[alg.alphabet_len()..].iter().all(|&x| x == 0.0), "{what}: unused slots {p:?}");
    Ok(())
}

/// DE maps distributions to distributions at the CN, the VN and the start.
pub fn de_probability_conservation(cases: u32) {
    let strategy = (alg(), base(), 0.3f64..1.5, 0.6f64..1.2).prop_flat_map(|(a, b, s1, s2)| {
        let n = EdgeTypes::new(&b).len();
        (Just(a), Just(b), Just(s1), Just(s2), prop::collection::vec(prop::collection::vec(0.001f64..1.0, 4), n))
    });
    runner(cases)
        .run(&strategy, |(a, b, s1, s2, raw)| {
            let edges = EdgeTypes::new(&b);
            let levels: Vec<u8> = (0..b.cols()).map(|j| 1 + (j % 2) as u8).collect();
            let map = BitMapping::from_levels(levels, 2).unwrap();
            let ch = [s1, s2].map(|s| BitChannelModel::Surrogate(SurrogateChannel::from_sigma_breve(s)));
            let cfg = DeConfig::default();
            let p = EdgeTypeProbs::new(a, raw.iter().map(|r| normalized(a, r)).collect());
            let q = de_cn(&p, &edges);
            let pass = de_vn_app(&q, &de_weights(&q), &ch, &map, &edges, &cfg).unwrap();
            let init = de_init::<f64>(a, &ch, &map, &edges, &cfg).unwrap();
            for k in 0..edges.len() {
                assert_distribution(q.get(k), a, "check update")?;
                assert_distribution(pass.p.get(k), a, "variable update")?;
                assert_distribution(init.get(k), a, "initialisation")?;
            }
            prop_assert!(pass.app.iter().all(|&x| (0.0..=1.0).contains(&x)));
            Ok(())
        })
        .unwrap();
}

/// Signed value of a message slot with `L = 1`, `H = 2`.
fn slot_value(alg: Algorithm, s: u8) -> i32 {
    match alg {
        Algorithm::Bmp => [-1, 1][s as usize],
        Algorithm::Tmp => [-1, 0, 1][s as usize],
        Algorithm::Qmp => [-2, -1, 1, 2][s as usize],
    }
}

/// Every CN input tuple up to degree 6 against sign product and minimum
/// magnitude on the signed values.
pub fn cn_truth_tables() {
    for alg in Algorithm::ALL {
        let a = alg.alphabet_len() as u32;
        for d in 1..=6u32 {
            for mut code in 0..a.pow(d) {
                let mut slots = Vec::with_capacity(d as usize);
                for _ in 0..d {
                    slots.push((code % a) as u8);
                    code /= a;
                }
                let vals: Vec<i32> = slots.iter().map(|&s| slot_value(alg, s)).collect();
                let sign: i32 = vals.iter().map(|v| v.signum()).product();
                let mag = vals.iter().map(|v| v.abs()).min().unwrap();
                let expect = sign * mag;
                let got = slot_value(alg, cn_rule(alg, slots.iter().copied()));
                // a TMP erasure is the only zero; sign of zero is irrelevant
                assert_eq!(got, expect, "{alg} inputs {slots:?}");
            }
        }
    }
}

/// Quantizers and message values are odd functions away from ties.
pub fn quantizer_symmetry(cases: u32) {
    runner(cases)
        .run(&(alg(), -20.0f64..20.0, 0.0f64..3.0, 0.0f64..10.0, 0.0f64..10.0), |(a, x, t, wl, wh)| {
            prop_assume!(x != 0.0 && (x.abs() - t).abs() > 1e-12);
            let n = a.alphabet_len() as u8;
            let s = quantize(a, x, t);
            prop_assert_eq!(quantize(a, -x, t), n - 1 - s);
            let v = slot_value(a, s);
            prop_assert!(v == 0 || v.signum() == x.signum() as i32);
            for m in 0..n as usize {
                let mirrored = message_llr(a, n as usize - 1 - m, [wl, wh]);
                prop_assert_eq!(mirrored, -message_llr(a, m, [wl, wh]));
            }
            Ok(())
        })
        .unwrap();
}

/// Girth of a simple Tanner graph given as a dense parity-check matrix.
fn dense_girth(h: &[Vec<u8>]) -> Option<usize> {
    let (m, n) = (h.len(), h[0].len());
    let mut adj = vec![Vec::new(); n + m];
    for (c, row) in h.iter().enumerate() {
        for (v, &b) in row.iter().enumerate() {
            if b == 1 {
                adj[v].push(n + c);
                adj[n + c].push(v);
            }
        }
    }
    let mut best: Option<usize> = None;
    for s in 0..n + m {
        let mut dist = vec![usize::MAX; n + m];
        let mut parent = vec![usize::MAX; n + m];
        dist[s] = 0;
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            for &x in &adj[u] {
                if dist[x] == usize::MAX {
                    dist[x] = dist[u] + 1;
                    parent[x] = u;
                    queue.push_back(x);
                } else if parent[u] != x {
                    let len = dist[u] + dist[x] + 1;
                    best = Some(best.map_or(len, |b| b.min(len)));
                }
            }
        }
    }
    best
}

/// Lifted degrees equal base row and column weights; the girth reported by
/// the lifter and by the graph agree with a dense BFS.
pub fn lift_degree_and_girth(cases: u32) {
    runner(cases)
        .run(&(base(), 3usize..=12, 0u64..1000), |(b, q, seed)| {
            let cfg = LiftConfig { q, girth_target: 8, max_sweeps: 4, seed };
            let (code, report) = lift(&b, &cfg).unwrap();
            prop_assert!(!code.has_parallel_edges());
            let h = code.dense();
            for (r, row) in h.iter().enumerate() {
                prop_assert_eq!(row.iter().map(|&x| x as u32).sum::<u32>(), b.row_weight(r / q));
            }
            for v in 0..code.n() {
                prop_assert_eq!(h.iter().map(|row| row[v] as u32).sum::<u32>(), b.col_weight(v / q));
            }
            let oracle = dense_girth(&h);
            prop_assert_eq!(code.girth_bfs(), oracle);
            let g = oracle.unwrap_or(usize::MAX);
            prop_assert_eq!(report.target_met, g >= 8);
            prop_assert_eq!(report.achieved_girth, g.min(8));
            Ok(())
        })
        .unwrap();
}

const KS_SNR_DB: f64 = 9.0;

/// Scrambled transmission: a uniform code bit `B` is XORed with the label
/// bit actually sent and the receiver undoes the scrambler on the LLR.
pub fn scrambled(mode: &SignalingMode, level: usize, n: usize, seed: u64) -> (Vec<f64>, Vec<f64>) {
    let s2 = mode.noise_variance(KS_SNR_DB);
    let demap = BitDemapper::new(mode, s2);
    let index = WeightedIndex::new(mode.dist().probs().to_vec()).unwrap();
    let noise = Normal::new(0.0, s2.sqrt()).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut zero, mut one) = (Vec::with_capacity(n / 2), Vec::with_capacity(n / 2));
    for _ in 0..n {
        let i = index.sample(&mut rng);
        let y = demap.points()[i] + noise.sample(&mut rng);
        let b: u8 = rng.random_range(0..2);
        let s = demap.label_bit(i, level) ^ b;
        let l = demap.llr(y, level) * if s == 0 { 1.0 } else { -1.0 };
        if b == 0 {
            zero.push(l);
        } else {
            one.push(-l);
        }
    }
    (zero, one)
}

/// Conditioned on either code bit, the scrambled bit channels have the same
/// LLR law (two-sample KS at level 1e-3).
pub fn channel_symmetry_ks(n: usize) {
    for (mi, name) in PRESET_NAMES.iter().enumerate() {
        let mode = SignalingMode::preset(name).unwrap();
        for level in 1..=mode.bits() {
            let (a, b) = scrambled(&mode, level, n, 100 * mi as u64 + level as u64);
            let (d, p) = ks_two_sample(&a, &b);
            assert!(p > 1e-3, "{name} level {level}: D = {d}, p = {p}");
        }
    }
}

fn pool(n: usize) -> rayon::ThreadPool {
    rayon::ThreadPoolBuilder::new().num_threads(n).build().unwrap()
}

/// DE probes, lifts and FER runs give identical results on 1 and 3 threads.
pub fn determinism_under_parallelism() {
    let e = sc_ensemble(4, 8).unwrap();
    let mode = SignalingMode::preset("4U-0.50").unwrap();
    let cfg = DeConfig { init_source: InitSource::Surrogate, ..DeConfig::default() };
    for alg in Algorithm::ALL {
        let a = pool(1).install(|| probe::<f64>(alg, &e, 8, &mode, &cfg, 7.0)).unwrap();
        let b = pool(3).install(|| probe::<f64>(alg, &e, 8, &mode, &cfg, 7.0)).unwrap();
        assert_eq!(a, b);
    }
    let base = scldpc::protograph::coupled_base(&e, 12).unwrap().0;
    let l1 = pool(1).install(|| lift(&base, &LiftConfig::new(60, 2))).unwrap();
    let l3 = pool(3).install(|| lift(&base, &LiftConfig::new(60, 2))).unwrap();
    assert_eq!(l1, l3);
    let s = coupled_setup_small();
    let strip = |r: Vec<FerRecord>| r.into_iter().map(|x| FerRecord { wall_time: 0.0, ..x }).collect::<Vec<_>>();
    for sched in &s.schedules {
        let mut plan = SimPlan::new(
            s.mode.clone(),
            s.code.clone(),
            &s.base_map,
            SimDecoder::MessagePassing(sched.clone()),
            vec![7.5, 8.5],
            200,
            5,
        );
        plan.stop = StopRule { max_frames: 40, min_frame_errors: 4 };
        let one = strip(pool(1).install(|| run_fer(&plan)).unwrap());
        plan.batch = 5;
        let three = strip(pool(3).install(|| run_fer(&plan)).unwrap());
        assert_eq!(one, three, "{}", sched.alg);
    }
}

//! Acceptance suite. Prints one verdict line per criterion and exits
//! non-zero when a verdict differs from the expected outcome.
//!
//! `ACCEPTANCE_CRITERIA=3,6` restricts the run to the listed criteria.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use scldpc::constellation::{rbmd, rbmd_inv, BitChannelModel, SignalingMode};
use scldpc::de::{
    bit_channels, coupled_setup, de_cn, de_init, de_run, de_vn, de_weights, threshold, Algorithm, DeConfig, EdgeTypes,
    InitSource, WeightSchedule,
};
use scldpc::decoders::{DecoderGraph, MessagePassingDecoder};
use scldpc::protograph::{coupled_base, lift, sc_ensemble, BaseMatrix, BitMapping, LiftConfig};
use scldpc::sim::{expand_mapping, run_fer, FerRecord, SimDecoder, SimPlan, StopRule};

mod common;
use common::props;

/// Criteria known to fail, with the reason. See the README.
const EXPECTED_FAIL: &[(usize, &str)] = &[(
    6,
    "at 0.15 dB above threshold the decoding wave stalls on the 300-lift and the FER stays near 1",
)];

const RATE_TOL: f64 = 5e-5;
const LIMIT_TOL_DB: f64 = 0.01;
const LIMIT_RATE_TOL: f64 = 0.005;
const THRESHOLD_TOL_DB: f64 = 0.05;
const INIT_TOL_DB: f64 = 0.02;
const GAP_48: (f64, f64) = (0.24, 0.07);
const GAP_HIGH_RATE: (f64, f64) = (0.10, 0.05);
const SIGMAS: f64 = 3.0;

const ALGS: [Algorithm; 3] = [Algorithm::Bmp, Algorithm::Tmp, Algorithm::Qmp];

struct Row {
    dv: usize,
    dc: usize,
    mode: &'static str,
    reference: [f64; 3],
    high_rate: bool,
}

const ROWS: [Row; 7] = [
    Row { dv: 4, dc: 8, mode: "4U-0.50", reference: [7.75, 6.50, 6.26], high_rate: false },
    Row { dv: 4, dc: 16, mode: "4U-0.75", reference: [10.89, 10.11, 10.00], high_rate: true },
    Row { dv: 6, dc: 24, mode: "4U-0.75", reference: [10.72, 10.0, 9.88], high_rate: true },
    Row { dv: 4, dc: 12, mode: "8PS-0.67", reference: [10.81, 9.68, 9.50], high_rate: false },
    Row { dv: 4, dc: 24, mode: "8PS-0.83", reference: [10.06, 9.33, 9.23], high_rate: true },
    Row { dv: 6, dc: 18, mode: "8PS-0.67", reference: [10.62, 9.55, 9.37], high_rate: false },
    Row { dv: 6, dc: 36, mode: "8PS-0.83", reference: [9.88, 9.21, 9.10], high_rate: true },
];

/// Ensembles whose thresholds are repeated with the empirical initialisation.
const EMPIRICAL_ROWS: [usize; 2] = [1, 3];

struct Verdict {
    pass: bool,
    summary: String,
}

impl Verdict {
    fn new(pass: bool, summary: impl Into<String>) -> Self {
        Self { pass, summary: summary.into() }
    }
}

fn detail(s: impl AsRef<str>) {
    println!("    {}", s.as_ref());
}

fn surrogate_cfg() -> DeConfig {
    DeConfig { init_source: InitSource::Surrogate, ..DeConfig::default() }
}

fn row_threshold(row: &Row, alg: Algorithm, cfg: &DeConfig, lo: f64, hi: f64) -> f64 {
    let e = sc_ensemble(row.dv, row.dc).unwrap();
    let mode = SignalingMode::preset(row.mode).unwrap();
    threshold::<f64>(alg, &e, 15, &mode, cfg, lo, hi).unwrap().threshold_db
}

fn surrogate_thresholds(row: &Row) -> [f64; 3] {
    let mode = SignalingMode::preset(row.mode).unwrap();
    let lo = rbmd_inv(&mode, mode.transmission_rate()).unwrap();
    ALGS.map(|alg| row_threshold(row, alg, &surrogate_cfg(), lo, lo + 4.0))
}

fn rates() -> Verdict {
    let t0 = Instant::now();
    let (_, r16) = coupled_base(&sc_ensemble(4, 16).unwrap(), 50).unwrap();
    let (_, r24) = coupled_base(&sc_ensemble(4, 24).unwrap(), 50).unwrap();
    let dt = t0.elapsed();
    let pass = (r16 - 0.735).abs() <= RATE_TOL && (r24 - 0.8233).abs() <= RATE_TOL && dt < Duration::from_secs(1);
    Verdict::new(pass, format!("rates {r16:.5} and {r24:.5} in {dt:.2?}"))
}

fn shannon_limits() -> Verdict {
    let reference = [("4U-0.50", 5.2803), ("4U-0.75", 9.3084), ("8PS-0.67", 8.5334), ("8PS-0.83", 8.5606)];
    let mut pass = true;
    for (name, snr) in reference {
        let mode = SignalingMode::preset(name).unwrap();
        let inv = rbmd_inv(&mode, mode.transmission_rate()).unwrap();
        let r = rbmd(&mode, snr).unwrap();
        let ok = (inv - snr).abs() <= LIMIT_TOL_DB && (r - mode.transmission_rate()).abs() <= LIMIT_RATE_TOL;
        detail(format!("{name}: limit {inv:.4} dB, R_bmd({snr}) = {r:.4}"));
        pass &= ok;
    }
    Verdict::new(pass, "Shannon limits of the four presets")
}

fn threshold_table(results: &[[f64; 3]]) -> Verdict {
    let mut pass = true;
    for (row, got) in ROWS.iter().zip(results) {
        let ok = got.iter().zip(&row.reference).all(|(g, r)| (g - r).abs() <= THRESHOLD_TOL_DB);
        pass &= ok;
        detail(format!(
            "({},{}) {}: BMP {:.3} TMP {:.3} QMP {:.3} (reference {:.2} {:.2} {:.2}){}",
            row.dv,
            row.dc,
            row.mode,
            got[0],
            got[1],
            got[2],
            row.reference[0],
            row.reference[1],
            row.reference[2],
            if ok { "" } else { " out of tolerance" }
        ));
    }
    for &i in &EMPIRICAL_ROWS {
        let row = &ROWS[i];
        for (a, alg) in ALGS.iter().enumerate() {
            let s = results[i][a];
            let emp = row_threshold(row, *alg, &DeConfig::default(), s - 0.5, s + 0.5);
            let ok = (emp - s).abs() <= INIT_TOL_DB;
            pass &= ok;
            detail(format!("({},{}) {alg}: empirical init {emp:.3}, surrogate {s:.3}", row.dv, row.dc));
        }
    }
    Verdict::new(pass, "window DE thresholds, W = 15, T = 1.3")
}

fn gaps(results: &[[f64; 3]]) -> Verdict {
    let mut pass = true;
    for (row, got) in ROWS.iter().zip(results) {
        let gap = got[1] - got[2];
        let ordered = got[2] <= got[1] && got[1] <= got[0];
        let ok = if row.dv == 4 && row.dc == 8 {
            (gap - GAP_48.0).abs() <= GAP_48.1
        } else if row.high_rate {
            (gap - GAP_HIGH_RATE.0).abs() <= GAP_HIGH_RATE.1
        } else {
            true
        };
        pass &= ok && ordered;
        detail(format!("({},{}) {}: QMP gain over TMP {gap:.2} dB, ordered {ordered}", row.dv, row.dc, row.mode));
    }
    Verdict::new(pass, "QMP/TMP gaps and threshold ordering")
}

/// Frequencies of message slots per edge type over `frames` lifted frames.
fn de_vs_decoder(alg: Algorithm) -> (bool, f64, Duration) {
    const Q: usize = 2000;
    const FRAMES: u64 = 4;
    let t0 = Instant::now();
    let mode = SignalingMode::preset("4U-0.50").unwrap();
    let base = BaseMatrix::new(3, 3, vec![1; 9]).unwrap();
    let mapping = BitMapping::from_levels(vec![1, 2, 1], 2).unwrap();
    let cfg = surrogate_cfg();
    let snr = 5.0;
    let channels = bit_channels(&mode, snr, &cfg).unwrap();
    let edges = EdgeTypes::new(&base);
    let p0 = de_init::<f64>(alg, &channels, &mapping, &edges, &cfg).unwrap();
    let q1 = de_cn(&p0, &edges);
    let w1 = de_weights(&q1);
    let p1 = de_vn(&q1, &w1, &channels, &mapping, &edges, &cfg).unwrap();

    let (code, _) = lift(&base, &LiftConfig::new(Q, 5)).unwrap();
    let g = DecoderGraph::new(&code);
    let to_de: Vec<usize> = g.types().iter().map(|&(i, j)| edges.index(i, j).unwrap()).collect();
    let schedule = WeightSchedule {
        alg,
        ensemble_hash: String::new(),
        mode: mode.name().to_string(),
        snr_db: snr,
        t: cfg.t,
        l_max: 1,
        edge_types: g.types().to_vec(),
        iterations: vec![to_de.iter().map(|&k| w1.w[k]).collect()],
    };
    let levels = expand_mapping(&mapping, Q);
    let noise: Vec<Normal<f64>> = channels
        .iter()
        .map(|c| match c {
            BitChannelModel::Surrogate(s) => Normal::new(s.mu, s.sigma).unwrap(),
            BitChannelModel::Empirical(_) => unreachable!(),
        })
        .collect();
    let mut dec = MessagePassingDecoder::new(&g, &schedule).unwrap();
    let mut c2v = vec![[0u64; 4]; edges.len()];
    let mut v2c = vec![[0u64; 4]; edges.len()];
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    for _ in 0..FRAMES {
        let llr: Vec<f64> = levels.levels().iter().map(|&l| noise[l as usize - 1].sample(&mut rng)).collect();
        dec.init(&llr).unwrap();
        dec.iterate();
        for (e, &s) in dec.c2v().iter().enumerate() {
            c2v[to_de[g.edge_type(e)]][s as usize] += 1;
        }
        for (e, &s) in dec.v2c().iter().enumerate() {
            v2c[to_de[g.edge_type(e)]][s as usize] += 1;
        }
    }
    let n = (Q as u64 * FRAMES) as f64;
    let mut worst: f64 = 0.0;
    for (probs, counts) in [(&q1, &c2v), (&p1, &v2c)] {
        for k in 0..edges.len() {
            for s in 0..alg.alphabet_len() {
                let p = probs.get(k)[s];
                let sd = (p * (1.0 - p) / n).sqrt().max(1e-300);
                worst = worst.max((counts[k][s] as f64 / n - p).abs() / sd);
            }
        }
    }
    let dt = t0.elapsed();
    (worst <= SIGMAS && dt < Duration::from_secs(60), worst, dt)
}

fn de_oracle() -> Verdict {
    let mut pass = true;
    for alg in ALGS {
        let (ok, worst, dt) = de_vs_decoder(alg);
        detail(format!("{alg}: largest deviation {worst:.2} sd in {dt:.1?}"));
        pass &= ok;
    }
    Verdict::new(pass, "one DE iteration against decoder message frequencies, Q = 2000")
}

fn finite_length(thr: [f64; 3]) -> Verdict {
    const S: usize = 50;
    const Q: usize = 300;
    const L_MAX: usize = 3000;
    let e = sc_ensemble(4, 16).unwrap();
    let mode = SignalingMode::preset("4U-0.75").unwrap();
    // at threshold the full chain needs up to about 2100 DE iterations; a
    // truncated schedule freezes the weights before the two waves meet
    let cfg = DeConfig { l_max: 4000, ..surrogate_cfg() };
    let (base, map) = coupled_setup(&e, S, &mode).unwrap();
    let (code, report) = lift(&base, &LiftConfig::new(Q, 1)).unwrap();
    detail(format!("n = {}, girth {}", code.n(), report.achieved_girth));
    let schedules: Vec<WeightSchedule<f64>> = ALGS
        .iter()
        .zip(thr)
        .map(|(&alg, t)| {
            let ch = bit_channels(&mode, t, &cfg).unwrap();
            let out = de_run::<f64>(alg, &base, &map, &ch, &cfg).unwrap();
            detail(format!("{alg} schedule at {t:.3} dB: converged {} after {} iterations", out.converged, out.iterations));
            out.schedule
        })
        .collect();
    let simulate = |a: usize, snr: f64, max_frames: u64| -> FerRecord {
        let mut p = SimPlan::new(
            mode.clone(),
            code.clone(),
            &map,
            SimDecoder::MessagePassing(schedules[a].clone()),
            vec![snr],
            L_MAX,
            41,
        );
        p.stop = StopRule { max_frames, min_frame_errors: 50 };
        run_fer(&p).unwrap().remove(0)
    };
    let show = |alg: Algorithm, r: &FerRecord| {
        let (lo, hi) = r.fer_interval(0.05);
        detail(format!(
            "{alg} at {:.2} dB: {}/{} frames, FER {:.3} [{lo:.3}, {hi:.3}] in {:.0} s",
            r.snr_db, r.frame_errors, r.frames_run, r.fer, r.wall_time
        ));
    };
    let mut pass = true;
    for (a, alg) in ALGS.iter().enumerate() {
        let r = simulate(a, thr[a] + 0.15, 10_000);
        show(*alg, &r);
        pass &= r.frame_errors >= 50 && r.fer <= 1e-2;
    }
    let common = thr[2] + 0.35;
    let recs: Vec<FerRecord> = (0..3).map(|a| simulate(a, common, 3000)).collect();
    for (alg, r) in ALGS.iter().zip(&recs) {
        show(*alg, r);
    }
    let iv: Vec<(f64, f64)> = recs.iter().map(|r| r.fer_interval(0.05)).collect();
    let ordered = iv[2].1 < iv[1].0 && iv[1].1 < iv[0].0;
    detail(format!("ordering at {common:.2} dB with disjoint intervals: {ordered}"));
    Verdict::new(pass && ordered, "Q = 300, S = 50 (4,16) 4U-0.75 waterfall")
}

fn property_suites() -> Verdict {
    let t0 = Instant::now();
    props::de_probability_conservation(200);
    props::cn_truth_tables();
    props::quantizer_symmetry(2000);
    props::lift_degree_and_girth(150);
    props::channel_symmetry_ks(1_000_000);
    props::determinism_under_parallelism();
    let dt = t0.elapsed();
    Verdict::new(dt < Duration::from_secs(600), format!("property suites in {dt:.1?}"))
}

fn guarded(f: impl FnOnce() -> Verdict) -> Verdict {
    catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
        let msg = e
            .downcast_ref::<String>()
            .cloned()
            .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
            .unwrap_or_default();
        Verdict::new(false, format!("panicked: {msg}"))
    })
}

fn main() -> ExitCode {
    let selected: Vec<usize> = match std::env::var("ACCEPTANCE_CRITERIA") {
        Ok(s) => s.split(',').filter_map(|x| x.trim().parse().ok()).collect(),
        Err(_) => (1..=7).collect(),
    };
    let wanted = |c: usize| selected.contains(&c);
    let mut table: Option<Vec<[f64; 3]>> = None;
    let mut mismatches = 0;
    for c in 1..=7 {
        if !wanted(c) {
            continue;
        }
        let t0 = Instant::now();
        let v = guarded(|| match c {
            1 => rates(),
            2 => shannon_limits(),
            3 | 4 => {
                let t = table.get_or_insert_with(|| ROWS.iter().map(surrogate_thresholds).collect());
                if c == 3 {
                    threshold_table(t)
                } else {
                    gaps(t)
                }
            }
            5 => de_oracle(),
            6 => {
                let thr = match &table {
                    Some(t) => t[1],
                    None => surrogate_thresholds(&ROWS[1]),
                };
                finite_length(thr)
            }
            _ => property_suites(),
        });
        let expected_fail = EXPECTED_FAIL.iter().find(|(k, _)| *k == c);
        let status = if v.pass { "PASS" } else { "FAIL" };
        let note = match (expected_fail, v.pass) {
            (Some((_, why)), false) => format!(" (expected: {why})"),
            (Some(_), true) => " (unexpected pass)".to_string(),
            _ => String::new(),
        };
        println!("criterion {c}: {status} {} [{:.1?}]{note}", v.summary, t0.elapsed());
        if v.pass == expected_fail.is_some() {
            mismatches += 1;
        }
    }
    if mismatches == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

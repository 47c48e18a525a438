use std::fs::File;
use std::io::BufWriter;

use serde::Serialize;
use serde_json::json;

use scldpc::constellation::{cond_bit_entropy, rbmd, rbmd_inv, surrogate_for_entropy, SignalingMode, PRESET_NAMES};
use scldpc::de::{
    bit_channels, coupled_setup, de_run, threshold as de_threshold, window_setup, write_threshold_csv, Algorithm,
    DeConfig, DeError, InitSource, ThresholdRow, WeightSchedule,
};
use scldpc::protograph::{bit_mapping, coupled_base, lift as lift_code, read_code_file, write_alist, write_code_file, LiftConfig, ScEnsemble};
use scldpc::sim::{fer_rows, run_fer_with, run_manifest, write_fer_csv, Sampler, SimDecoder, SimError, SimPlan, StopRule};
use scldpc::{data_flow, Real};

use crate::util::{invalid, load_mode, out_file, parse_ensemble, parse_grid, runtime, write_text, CliError, CliResult};
use crate::{
    DataflowArgs, DeArgs, Globals, InitArg, LiftArgs, Precision, RatesArgs, SimulateArgs, SurrogateArgs, ThresholdArgs,
    WeightsArgs,
};

fn parse_algs(arg: &str) -> CliResult<Vec<Algorithm>> {
    if arg.eq_ignore_ascii_case("all") {
        return Ok(vec![Algorithm::Qmp, Algorithm::Tmp, Algorithm::Bmp]);
    }
    arg.split(',').map(|a| a.trim().parse().map_err(invalid("--alg"))).collect()
}

fn de_config(a: &DeArgs, seed: u64) -> CliResult<DeConfig> {
    let cfg = DeConfig {
        t: a.t,
        l_max: a.l_max,
        init_source: match a.init {
            InitArg::Empirical => InitSource::Empirical,
            InitArg::Surrogate => InitSource::Surrogate,
        },
        init_samples: a.init_samples,
        init_seed: seed,
        ..DeConfig::default()
    };
    cfg.validate().map_err(invalid("--t/--l-max/--init-samples"))?;
    Ok(cfg)
}

fn de_failure(e: DeError) -> CliError {
    match e {
        DeError::Config(_) | DeError::Shape(_) | DeError::Protograph(_) | DeError::Schedule(_) => {
            CliError::Validation(e.to_string())
        }
        other => runtime(other),
    }
}

#[derive(Serialize)]
struct RateRow {
    mode: String,
    #[serde(rename = "Rtx")]
    rtx: f64,
    snr_db: f64,
    rate: f64,
}

pub fn rates(g: &Globals, a: RatesArgs) -> CliResult<()> {
    let names: Vec<String> =
        if a.modes.is_empty() { PRESET_NAMES.iter().map(|s| s.to_string()).collect() } else { a.modes.clone() };
    let modes = names.iter().map(|n| load_mode(n)).collect::<CliResult<Vec<_>>>()?;
    if let Some(s) = a.snr {
        if !s.is_finite() {
            return Err(CliError::Validation("--snr: must be finite".into()));
        }
    }
    if let Some(r) = a.rate {
        if !(r > 0.0) {
            return Err(CliError::Validation("--rate: must be positive".into()));
        }
    }
    let mut rows = Vec::new();
    for mode in &modes {
        let row = match a.snr {
            Some(snr) => RateRow {
                mode: mode.name().into(),
                rtx: mode.transmission_rate(),
                snr_db: snr,
                rate: rbmd(mode, snr).map_err(runtime)?,
            },
            None => {
                let rate = a.rate.unwrap_or(mode.transmission_rate());
                RateRow {
                    mode: mode.name().into(),
                    rtx: mode.transmission_rate(),
                    snr_db: rbmd_inv(mode, rate).map_err(invalid("--rate"))?,
                    rate,
                }
            }
        };
        println!("{:<10} R_bmd = {:.4} bpcu at {:.4} dB", row.mode, row.rate, row.snr_db);
        rows.push(row);
    }
    write_csv(&out_file(&g.out, "rates.csv")?, &rows)
}

fn write_csv<T: Serialize>(path: &std::path::Path, rows: &[T]) -> CliResult<()> {
    let mut w = csv::Writer::from_path(path).map_err(runtime)?;
    for r in rows {
        w.serialize(r).map_err(runtime)?;
    }
    w.flush().map_err(runtime)?;
    println!("wrote {}", path.display());
    Ok(())
}

fn bracket(mode: &SignalingMode, lo: Option<f64>, hi: Option<f64>) -> CliResult<(f64, f64)> {
    let lo = match lo {
        Some(x) => x,
        None => rbmd_inv(mode, mode.transmission_rate()).map_err(runtime)?,
    };
    let hi = hi.unwrap_or(lo + 4.0);
    if !(lo < hi) {
        return Err(CliError::Validation(format!("--lo/--hi: empty bracket [{lo}, {hi}]")));
    }
    Ok((lo, hi))
}

fn run_threshold<F: Real>(
    alg: Algorithm,
    e: &ScEnsemble,
    w: usize,
    mode: &SignalingMode,
    cfg: &DeConfig,
    lo: f64,
    hi: f64,
) -> CliResult<(f64, usize)> {
    let r = de_threshold::<F>(alg, e, w, mode, cfg, lo, hi).map_err(de_failure)?;
    Ok((r.threshold_db, r.iterations))
}

pub fn threshold(g: &Globals, a: ThresholdArgs) -> CliResult<()> {
    let e = parse_ensemble(&a.ensemble)?;
    let mode = load_mode(&a.mode)?;
    let algs = parse_algs(&a.alg)?;
    let cfg = de_config(&a.de, g.seed)?;
    window_setup(&e, a.window, &mode).map_err(invalid("--window/--mode"))?;
    let (lo, hi) = bracket(&mode, a.lo, a.hi)?;
    let mut rows = Vec::new();
    for alg in algs {
        let (thr, iters) = match a.de.precision {
            Precision::F64 => run_threshold::<f64>(alg, &e, a.window, &mode, &cfg, lo, hi)?,
            Precision::F32 => run_threshold::<f32>(alg, &e, a.window, &mode, &cfg, lo, hi)?,
        };
        println!("{e} {} {alg} W={}: threshold {thr:.4} dB ({iters} iterations)", mode.name(), a.window);
        rows.push(ThresholdRow {
            ensemble: e.to_string(),
            mode: mode.name().into(),
            alg,
            w: a.window,
            threshold_db: thr,
            iterations_at_threshold: iters,
        });
    }
    let path = out_file(&g.out, "thresholds.csv")?;
    let f = File::create(&path).map_err(runtime)?;
    write_threshold_csv(&rows, BufWriter::new(f)).map_err(runtime)?;
    println!("wrote {}", path.display());
    Ok(())
}

fn design_schedule<F: Real>(
    alg: Algorithm,
    e: &ScEnsemble,
    s: usize,
    mode: &SignalingMode,
    cfg: &DeConfig,
    snr: f64,
) -> CliResult<(WeightSchedule<f64>, bool, usize, bool)> {
    let (base, map) = coupled_setup(e, s, mode).map_err(de_failure)?;
    let channels = bit_channels(mode, snr, cfg).map_err(de_failure)?;
    let out = de_run::<F>(alg, &base, &map, &channels, cfg).map_err(de_failure)?;
    let mut sched = out.schedule.cast::<f64>();
    sched.mode = mode.name().into();
    sched.snr_db = snr;
    Ok((sched, out.converged, out.iterations, out.clamped))
}

pub fn weights(g: &Globals, a: WeightsArgs) -> CliResult<()> {
    let e = parse_ensemble(&a.ensemble)?;
    let mode = load_mode(&a.mode)?;
    let alg: Algorithm = a.alg.parse().map_err(invalid("--alg"))?;
    let cfg = de_config(&a.de, g.seed)?;
    coupled_setup(&e, a.positions, &mode).map_err(invalid("--positions/--mode"))?;
    let snr = match a.snr {
        Some(s) if s.is_finite() => s,
        Some(_) => return Err(CliError::Validation("--snr: must be finite".into())),
        None => {
            window_setup(&e, a.window, &mode).map_err(invalid("--window/--mode"))?;
            let (lo, hi) = bracket(&mode, None, None)?;
            let (thr, _) = match a.de.precision {
                Precision::F64 => run_threshold::<f64>(alg, &e, a.window, &mode, &cfg, lo, hi)?,
                Precision::F32 => run_threshold::<f32>(alg, &e, a.window, &mode, &cfg, lo, hi)?,
            };
            println!("{e} {} {alg}: window threshold {thr:.4} dB", mode.name());
            thr
        }
    };
    let (sched, converged, iters, clamped) = match a.de.precision {
        Precision::F64 => design_schedule::<f64>(alg, &e, a.positions, &mode, &cfg, snr)?,
        Precision::F32 => design_schedule::<f32>(alg, &e, a.positions, &mode, &cfg, snr)?,
    };
    println!(
        "{e} S={} {} {alg} at {snr:.4} dB: {} after {iters} iterations, {} edge types{}",
        a.positions,
        mode.name(),
        if converged { "converged" } else { "not converged" },
        sched.edge_types.len(),
        if clamped { ", some weights clamped" } else { "" }
    );
    let path = out_file(&g.out, &format!("schedule_{}.json", alg.to_string().to_lowercase()))?;
    sched.write(&path).map_err(runtime)?;
    println!("wrote {}", path.display());
    Ok(())
}

pub fn lift(g: &Globals, a: LiftArgs) -> CliResult<()> {
    let e = parse_ensemble(&a.ensemble)?;
    let (base, rate) = coupled_base(&e, a.positions).map_err(invalid("--positions"))?;
    let cfg = LiftConfig { q: a.q, girth_target: a.girth, max_sweeps: a.sweeps, seed: g.seed };
    let (code, report) = lift_code(&base, &cfg).map_err(invalid("--lift/--girth"))?;
    println!(
        "{e} S={} Q={}: n = {}, m = {}, rate {:.4}, girth {} (target {}{})",
        a.positions,
        a.q,
        code.n(),
        code.m(),
        rate,
        report.achieved_girth,
        report.girth_target,
        if report.target_met { ", met" } else { ", NOT met" }
    );
    let path = out_file(&g.out, "code.json")?;
    write_code_file(&path, &code, Some(&report)).map_err(runtime)?;
    println!("wrote {}", path.display());
    if a.alist {
        let path = out_file(&g.out, "code.alist")?;
        let f = File::create(&path).map_err(runtime)?;
        write_alist(&code, BufWriter::new(f)).map_err(runtime)?;
        println!("wrote {}", path.display());
    }
    Ok(())
}

fn simulate_with<F: Real>(g: &Globals, plan: SimPlan<F>, ensemble: &str) -> CliResult<()> {
    plan.validate().map_err(|e| CliError::Validation(e.to_string()))?;
    let records = run_fer_with(&plan, |r| {
        println!(
            "{:.4} dB: FER {:.3e} ({} / {} frames), BER {:.3e}, {:.1} s",
            r.snr_db, r.fer, r.frame_errors, r.frames_run, r.ber, r.wall_time
        );
    })
    .map_err(|e| match e {
        SimError::Plan(_) => CliError::Validation(e.to_string()),
        other => runtime(other),
    })?;
    let rows = fer_rows(&plan, ensemble, &records);
    let csv_path = out_file(&g.out, "fer.csv")?;
    let f = File::create(&csv_path).map_err(runtime)?;
    write_fer_csv(&rows, BufWriter::new(f)).map_err(runtime)?;
    println!("wrote {}", csv_path.display());
    let manifest = run_manifest(&plan, ensemble, &records);
    let m_path = out_file(&g.out, "manifest.json")?;
    write_text(&m_path, &serde_json::to_string_pretty(&manifest).map_err(runtime)?)?;
    println!("wrote {}", m_path.display());
    Ok(())
}

pub fn simulate(g: &Globals, a: SimulateArgs) -> CliResult<()> {
    let e = parse_ensemble(&a.ensemble)?;
    let mode = load_mode(&a.mode)?;
    let snr = parse_grid(&a.snr)?;
    let (code, _) = read_code_file(&a.code).map_err(invalid("--code"))?;
    let base_map = bit_mapping(code.base(), mode.bits(), scldpc::de::default_scheme(&mode), e.sub_cols())
        .map_err(invalid("--ensemble/--mode"))?;
    let decoder = match &a.schedule {
        Some(p) => {
            let s = WeightSchedule::<f64>::read(p).map_err(invalid("--schedule"))?;
            if let Some(want) = &a.alg {
                let want: Algorithm = want.parse().map_err(invalid("--alg"))?;
                if want != s.alg {
                    return Err(CliError::Validation(format!("--alg: {want} requested, schedule is for {}", s.alg)));
                }
            }
            if s.ensemble_hash != code.base().hash_hex() {
                return Err(CliError::Validation(
                    "--schedule: designed for a different protograph than --code".into(),
                ));
            }
            SimDecoder::MessagePassing(s)
        }
        None => SimDecoder::SumProduct,
    };
    let ensemble = e.to_string();
    let mut plan = SimPlan::new(mode, code, &base_map, decoder, snr, a.l_max, g.seed);
    plan.stop = StopRule { max_frames: a.max_frames, min_frame_errors: a.min_errors };
    plan.sampler = if a.grouped { Sampler::SymbolGrouped } else { Sampler::Independent };
    if let Some(b) = a.batch {
        plan.batch = b;
    }
    match a.precision {
        Precision::F64 => simulate_with(g, plan, &ensemble),
        Precision::F32 => {
            let decoder = match &plan.decoder {
                SimDecoder::MessagePassing(s) => SimDecoder::MessagePassing(s.cast::<f32>()),
                SimDecoder::SumProduct => SimDecoder::SumProduct,
            };
            let p32 = SimPlan {
                mode: plan.mode,
                code: plan.code,
                mapping: plan.mapping,
                decoder,
                snr_db: plan.snr_db,
                stop: plan.stop,
                l_max: plan.l_max,
                master_seed: plan.master_seed,
                sampler: plan.sampler,
                batch: plan.batch,
            };
            simulate_with(g, p32, &ensemble)
        }
    }
}

#[derive(Serialize)]
struct SurrogateRow {
    mode: String,
    snr_db: f64,
    level: usize,
    cond_entropy: f64,
    sigma_breve: Option<f64>,
    mu: Option<f64>,
}

pub fn surrogate(g: &Globals, a: SurrogateArgs) -> CliResult<()> {
    let mode = load_mode(&a.mode)?;
    if !a.snr.is_finite() {
        return Err(CliError::Validation("--snr: must be finite".into()));
    }
    let mut rows = Vec::new();
    for level in 1..=mode.bits() {
        let h = cond_bit_entropy(&mode, a.snr, level).map_err(runtime)?;
        let s = surrogate_for_entropy(h).ok();
        match s {
            Some(s) => println!(
                "level {level}: H(B|Y) = {h:.6} bits, sigma_breve = {:.6}, LLR ~ N({:.4}, {:.4}^2)",
                s.sigma_breve, s.mu, s.sigma
            ),
            None => println!("level {level}: H(B|Y) = {h:.3e} bits, no surrogate (degenerate channel)"),
        }
        rows.push(SurrogateRow {
            mode: mode.name().into(),
            snr_db: a.snr,
            level,
            cond_entropy: h,
            sigma_breve: s.map(|s| s.sigma_breve),
            mu: s.map(|s| s.mu),
        });
    }
    write_csv(&out_file(&g.out, "surrogate.csv")?, &rows)
}

pub fn dataflow(g: &Globals, a: DataflowArgs) -> CliResult<()> {
    if a.n == 0 || a.q == 0 || !(a.dv > 0.0 && a.dv.is_finite()) {
        return Err(CliError::Validation("--n, --q and --dv must be positive".into()));
    }
    let f = data_flow(a.n, a.q, a.dv);
    println!("F = 2 * {} * {} * {} = {f:.0} bits per iteration", a.n, a.q, a.dv);
    let path = out_file(&g.out, "dataflow.json")?;
    let doc = json!({ "nC": a.n, "q": a.q, "dvAvg": a.dv, "bitsPerIteration": f });
    write_text(&path, &serde_json::to_string_pretty(&doc).map_err(runtime)?)?;
    println!("wrote {}", path.display());
    Ok(())
}

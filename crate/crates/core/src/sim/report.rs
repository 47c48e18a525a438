use std::io::Write;

use serde::{Deserialize, Serialize};
use serde_json::json;

use super::{FerRecord, SimDecoder, SimError, SimPlan};
use crate::Real;

/// One CSV line of a FER run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FerRow {
    pub mode: String,
    pub ensemble: String,
    pub alg: String,
    pub snr_db: f64,
    pub frames: u64,
    pub frame_errors: u64,
    pub bit_errors: u64,
    pub fer: f64,
    pub ber: f64,
    pub seed: u64,
}

/// CSV rows for `records` produced by `plan`.
pub fn fer_rows<F: Real>(plan: &SimPlan<F>, ensemble: &str, records: &[FerRecord]) -> Vec<FerRow> {
    records
        .iter()
        .map(|r| FerRow {
            mode: plan.mode.name().to_string(),
            ensemble: ensemble.to_string(),
            alg: plan.decoder.label(),
            snr_db: r.snr_db,
            frames: r.frames_run,
            frame_errors: r.frame_errors,
            bit_errors: r.bit_errors,
            fer: r.fer,
            ber: r.ber,
            seed: plan.master_seed,
        })
        .collect()
}

pub fn write_fer_csv<W: Write>(rows: &[FerRow], out: W) -> Result<(), SimError> {
    let mut wtr = csv::Writer::from_writer(out);
    for r in rows {
        wtr.serialize(r)?;
    }
    wtr.flush()?;
    Ok(())
}

/// JSON manifest with everything needed to rerun `plan`.
pub fn run_manifest<F: Real>(plan: &SimPlan<F>, ensemble: &str, records: &[FerRecord]) -> serde_json::Value {
    let schedule = match &plan.decoder {
        SimDecoder::MessagePassing(s) => serde_json::from_str::<serde_json::Value>(&s.cast::<f64>().to_json())
            .unwrap_or(serde_json::Value::Null),
        SimDecoder::SumProduct => serde_json::Value::Null,
    };
    json!({
        "mode": plan.mode.spec(),
        "ensemble": ensemble,
        "code": {
            "baseHash": plan.code.base().hash_hex(),
            "rows": plan.code.base().rows(),
            "cols": plan.code.base().cols(),
            "q": plan.code.q(),
            "n": plan.code.n(),
            "shifts": plan.code.shifts(),
        },
        "mapping": plan.mapping.levels().chunks(plan.code.q()).map(|c| c[0]).collect::<Vec<_>>(),
        "decoder": plan.decoder.label(),
        "schedule": schedule,
        "snrDb": plan.snr_db,
        "stop": plan.stop,
        "lMax": plan.l_max,
        "masterSeed": plan.master_seed,
        "sampler": plan.sampler,
        "scalar": std::any::type_name::<F>(),
        // wall time is left out so that reruns give identical manifests
        "records": records
            .iter()
            .map(|r| json!({
                "snrDb": r.snr_db,
                "framesRun": r.frames_run,
                "frameErrors": r.frame_errors,
                "bitErrors": r.bit_errors,
                "fer": r.fer,
                "ber": r.ber,
            }))
            .collect::<Vec<_>>(),
    })
}

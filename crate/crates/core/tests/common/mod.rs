//! Fixtures shared by the integration tests.
#![allow(dead_code)]

pub mod props;

use scldpc::constellation::SignalingMode;
use scldpc::de::{bit_channels, coupled_setup, de_run, Algorithm, DeConfig, InitSource, WeightSchedule};
use scldpc::protograph::{lift, sc_ensemble, BitMapping, LiftConfig, LiftedCode};
use scldpc::sim::expand_mapping;

pub struct Setup {
    pub code: LiftedCode,
    pub mode: SignalingMode,
    /// Level per base column.
    pub base_map: BitMapping,
    /// Level per lifted VN.
    pub levels: BitMapping,
    /// BMP, TMP and QMP schedules.
    pub schedules: Vec<WeightSchedule<f64>>,
}

/// (3,6) chain, S = 10, Q = 40, 4-ASK uniform, schedules designed at 8 dB.
pub fn coupled_setup_small() -> Setup {
    let e = sc_ensemble(3, 6).unwrap();
    let mode = SignalingMode::preset("4U-0.50").unwrap();
    let (base, base_map) = coupled_setup(&e, 10, &mode).unwrap();
    let (code, _) = lift(&base, &LiftConfig::new(40, 3)).unwrap();
    let cfg = DeConfig { init_source: InitSource::Surrogate, l_max: 200, ..DeConfig::default() };
    let channels = bit_channels(&mode, 8.0, &cfg).unwrap();
    let schedules = Algorithm::ALL
        .iter()
        .map(|&alg| {
            let mut s = de_run::<f64>(alg, &base, &base_map, &channels, &cfg).unwrap().schedule;
            s.mode = mode.name().to_string();
            s.snr_db = 8.0;
            s
        })
        .collect();
    let levels = expand_mapping(&base_map, 40);
    Setup { code, mode, base_map, levels, schedules }
}

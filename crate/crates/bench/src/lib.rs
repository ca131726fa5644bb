//! Shared inputs for the criterion benchmarks.

use hyperent_core::engineering::assemble_ghz;
use hyperent_core::{Complex64, DegreeEncoding, ModeBasis, PcSetting, SetupConfig, TargetSpec};

/// Balanced setup with the per-arm polarizations `HH, HV, VV`.
pub fn polarization_tagged() -> SetupConfig {
    let v = Some(PcSetting { hwp_angle: std::f64::consts::FRAC_PI_4, qwp_angle: std::f64::consts::FRAC_PI_2, ..PcSetting::default() });
    let mut cfg = SetupConfig::balanced(ModeBasis::default());
    cfg.signal_controls[2].pc = v;
    cfg.idler_controls[1].pc = v;
    cfg.idler_controls[2].pc = v;
    cfg
}

/// Setup whose five-degree reading is a qutrit GHZ state.
pub fn five_degree_ghz() -> SetupConfig {
    assemble_ghz(&DegreeEncoding::ghz(5).expect("standard reading")).expect("GHZ assembly").config
}

/// A fixed full-rank two-photon OAM target.
pub fn oam_target() -> TargetSpec {
    let amps = (0..9).map(|i| Complex64::new(1.0 + i as f64, (i * i % 5) as f64 - 2.0)).collect();
    TargetSpec::new(vec![3, 3], amps).expect("nonzero target")
}

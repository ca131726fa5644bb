//! The post-selected two-photon state.
//!
//! Both photons cross a three-arm interferometer. Keeping only coincidences
//! where the photons took the same arm leaves
//!
//! ```text
//! Σ_a c_a · e^{i(α_a + β_a + Φ_a(j) + Φ_a(k))} · (C_sig,a |a, p, l⟩) ⊗ (C_idl,a |a, p, l⟩)
//! ```
//!
//! with `α`/`β` the signal/idler arm phases (zero on the short arm), `Φ` the
//! tritter output phases for ports `(j, k)`, and `C` the per-arm controls.
//! Cross-arm terms are never materialized.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::hilbert::{tensor, Arm, Mode, ModeBasis, Photon, PhotonOperator, Pol, StateVector};
use crate::optics::{oamc_elements, pc_elements, tritter_matrix, tritter_phase, ArmPhase, NamedElement, OamcSetting, PcSetting};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ControlOrder {
    #[default]
    PcThenOamc,
    OamcThenPc,
}

/// Per-arm, per-photon settings.
#[derive(Debug, Clone, PartialEq)]
pub struct ArmControls {
    pub pc: Option<PcSetting>,
    pub oamc: Option<OamcSetting>,
    pub extra_phase: f64,
    pub input_pol: Pol,
    pub input_oam: i32,
    pub order: ControlOrder,
}

impl Default for ArmControls {
    fn default() -> Self {
        ArmControls { pc: None, oamc: None, extra_phase: 0.0, input_pol: Pol::H, input_oam: 0, order: ControlOrder::PcThenOamc }
    }
}

impl ArmControls {
    /// Elements in application order.
    pub fn elements(&self, basis: ModeBasis) -> Result<Vec<NamedElement>> {
        let pc = match &self.pc {
            Some(s) => pc_elements(basis, s)?,
            None => Vec::new(),
        };
        let oamc = match &self.oamc {
            Some(s) => oamc_elements(basis, s)?.0,
            None => Vec::new(),
        };
        Ok(match self.order {
            ControlOrder::PcThenOamc => pc.into_iter().chain(oamc).collect(),
            ControlOrder::OamcThenPc => oamc.into_iter().chain(pc).collect(),
        })
    }

    pub fn operator(&self, basis: ModeBasis) -> Result<PhotonOperator> {
        let mut acc = PhotonOperator::identity(basis);
        for e in self.elements(basis)? {
            acc = e.operator.after(&acc)?;
        }
        Ok(acc)
    }

    /// Input mode pushed through the controls. A branch removed entirely by
    /// an element reports that element's name.
    pub fn prepare(&self, basis: ModeBasis, arm: Arm) -> Result<PreparedPhoton> {
        let mut state = StateVector::ket(basis, Mode::new(arm, self.input_pol, self.input_oam))?;
        let mut killed_by = None;
        for e in self.elements(basis)? {
            state = e.operator.apply(&state)?;
            if state.is_zero() {
                killed_by = Some(e.name);
                break;
            }
        }
        Ok(PreparedPhoton { state, killed_by })
    }

    fn validate(&self, basis: &ModeBasis) -> Result<()> {
        basis.check_oam(self.input_oam)?;
        if !self.extra_phase.is_finite() {
            return Err(Error::InvalidSetting("extra_phase must be finite".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct PreparedPhoton {
    pub state: StateVector,
    pub killed_by: Option<String>,
}

/// The two coherence conditions under which only same-arm coincidences
/// interfere.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Assumptions {
    /// Down-converted photons' coherence length ≪ arm path differences.
    pub photon_coherence_short: bool,
    /// Pump coherence length ≫ arm path differences.
    pub pump_coherence_long: bool,
}

impl Default for Assumptions {
    fn default() -> Self {
        Assumptions { photon_coherence_short: true, pump_coherence_long: true }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AssumptionReport {
    pub photon_coherence_short: bool,
    pub pump_coherence_long: bool,
    pub failures: Vec<String>,
}

impl AssumptionReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

pub fn validate_assumptions(cfg: &SetupConfig) -> AssumptionReport {
    let a = cfg.assumptions;
    let mut failures = Vec::new();
    if !a.photon_coherence_short {
        failures.push(
            "photon coherence length not asserted shorter than the arm path differences: \
             single photon interference would contaminate the coincidences"
                .to_string(),
        );
    }
    if !a.pump_coherence_long {
        failures.push(
            "pump coherence length not asserted longer than the arm path differences: \
             timing information about the pair creation time would reveal the arm"
                .to_string(),
        );
    }
    AssumptionReport { photon_coherence_short: a.photon_coherence_short, pump_coherence_long: a.pump_coherence_long, failures }
}

/// Full description of one experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct SetupConfig {
    /// `(c_s, c_m, c_l)`; normalized before use.
    pub amplitudes: [Complex64; 3],
    /// `(α_m, α_l)`.
    pub signal_phases: [ArmPhase; 2],
    /// `(β_m, β_l)`.
    pub idler_phases: [ArmPhase; 2],
    /// Tritter output ports `(j, k)` for signal and idler.
    pub ports: (usize, usize),
    pub signal_controls: [ArmControls; 3],
    pub idler_controls: [ArmControls; 3],
    pub basis: ModeBasis,
    pub assumptions: Assumptions,
    /// Same-arm share of coincidences at the chosen ports; `None` uses the
    /// ideal balanced-tritter value from [`same_arm_fraction`].
    pub coincidence_fraction: Option<f64>,
}

impl SetupConfig {
    /// `c = (1, 1, 1)/√3`, zero phases, ports `(0, 0)`, no controls.
    pub fn balanced(basis: ModeBasis) -> Self {
        let w = Complex64::new(1.0 / 3f64.sqrt(), 0.0);
        SetupConfig {
            amplitudes: [w; 3],
            signal_phases: [ArmPhase::ZERO; 2],
            idler_phases: [ArmPhase::ZERO; 2],
            ports: (0, 0),
            signal_controls: Default::default(),
            idler_controls: Default::default(),
            basis,
            assumptions: Assumptions::default(),
            coincidence_fraction: None,
        }
    }

    pub fn controls(&self, photon: Photon) -> &[ArmControls; 3] {
        match photon {
            Photon::Signal => &self.signal_controls,
            Photon::Idler => &self.idler_controls,
        }
    }

    pub fn controls_mut(&mut self, photon: Photon) -> &mut [ArmControls; 3] {
        match photon {
            Photon::Signal => &mut self.signal_controls,
            Photon::Idler => &mut self.idler_controls,
        }
    }

    /// Total phase of the same-arm branch `arm`.
    pub fn branch_phase(&self, arm: Arm) -> f64 {
        let interferometer = match arm {
            Arm::Short => 0.0,
            Arm::Medium => self.signal_phases[0].value() + self.idler_phases[0].value(),
            Arm::Long => self.signal_phases[1].value() + self.idler_phases[1].value(),
        };
        let a = arm.index();
        interferometer
            + tritter_phase(arm, self.ports.0)
            + tritter_phase(arm, self.ports.1)
            + self.signal_controls[a].extra_phase
            + self.idler_controls[a].extra_phase
    }

    pub fn validate(&self) -> Result<()> {
        if self.ports.0 > 2 || self.ports.1 > 2 {
            return Err(Error::InvalidSetting(format!("output ports must be 0, 1 or 2, got {:?}", self.ports)));
        }
        if self.amplitudes.iter().any(|c| !(c.re.is_finite() && c.im.is_finite())) {
            return Err(Error::InvalidSetting("arm amplitudes must be finite".into()));
        }
        if self.amplitudes.iter().map(|c| c.norm_sqr()).sum::<f64>() <= 0.0 {
            return Err(Error::InvalidSetting("arm amplitudes are all zero".into()));
        }
        for p in self.signal_phases.iter().chain(&self.idler_phases) {
            ArmPhase::new(p.value())?;
        }
        if let Some(f) = self.coincidence_fraction {
            if !(f > 0.0 && f <= 1.0) {
                return Err(Error::InvalidSetting(format!("coincidence_fraction must lie in (0, 1], got {f}")));
            }
        }
        for c in self.signal_controls.iter().chain(&self.idler_controls) {
            c.validate(&self.basis)?;
        }
        Ok(())
    }

    fn normalized_amplitudes(&self) -> [Complex64; 3] {
        let n = self.amplitudes.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        self.amplitudes.map(|c| c / n)
    }
}

/// Normalized post-selected state with its success bookkeeping.
#[derive(Debug, Clone, PartialEq)]
pub struct PairState {
    pub state: StateVector,
    /// Squared norm of the same-arm sum before renormalization, with unit
    /// input per branch: the fraction surviving filters and losses.
    pub success_probability: f64,
    /// Share of coincidences at the chosen ports that fall in the same-arm sector.
    pub coincidence_fraction: f64,
}

impl PairState {
    pub fn basis(&self) -> &ModeBasis {
        self.state.basis()
    }

    pub fn overall_probability(&self) -> f64 {
        self.success_probability * self.coincidence_fraction
    }
}

/// Same-arm share of the coincidence weight at ports `(j, k)` for a
/// balanced three-way splitter feeding the tritter. Each of the nine arm
/// pairs reaches a given port pair with equal weight, so the value is 1/3.
pub fn same_arm_fraction(ports: (usize, usize)) -> f64 {
    let u = tritter_matrix();
    let split = 1.0 / 3f64.sqrt();
    let mut same = 0.0;
    let mut total = 0.0;
    for a in 0..3 {
        for b in 0..3 {
            let w = (u[(ports.0 % 3, a)] * split * u[(ports.1 % 3, b)] * split).norm_sqr();
            total += w;
            if a == b {
                same += w;
            }
        }
    }
    same / total
}

/// Unweighted product `C_sig,a|in⟩ ⊗ C_idl,a|in⟩` for one arm, without the
/// arm amplitude or phase. Also returns the name of any blocking element.
pub fn branch_state(cfg: &SetupConfig, arm: Arm) -> Result<(StateVector, Option<String>)> {
    let a = arm.index();
    let sig = cfg.signal_controls[a].prepare(cfg.basis, arm)?;
    let idl = cfg.idler_controls[a].prepare(cfg.basis, arm)?;
    let killer = sig
        .killed_by
        .map(|k| format!("signal arm {}: {k}", arm.label()))
        .or_else(|| idl.killed_by.map(|k| format!("idler arm {}: {k}", arm.label())));
    Ok((tensor(&sig.state, &idl.state)?, killer))
}

/// Builds the normalized post-selected state.
pub fn build_pair_state(cfg: &SetupConfig) -> Result<PairState> {
    cfg.validate()?;
    let report = validate_assumptions(cfg);
    if !report.passed() {
        return Err(Error::AssumptionsNotMet(report.failures));
    }
    let c = cfg.normalized_amplitudes();
    let mut total = StateVector::zeros(cfg.basis, 2);
    let mut killers = Vec::new();
    for arm in Arm::ALL {
        let ca = c[arm.index()];
        if ca.norm() == 0.0 {
            killers.push(format!("arm {}: zero amplitude", arm.label()));
            continue;
        }
        let (branch, killer) = branch_state(cfg, arm)?;
        if let Some(k) = killer {
            killers.push(k);
            continue;
        }
        let weight = ca * Complex64::from_polar(1.0, cfg.branch_phase(arm));
        total = total.add(&branch.scaled(weight))?;
    }
    let success_probability = total.norm_sqr();
    let state = total.normalized().ok_or(Error::ZeroState { killers })?;
    Ok(PairState {
        state,
        success_probability,
        coincidence_fraction: cfg.coincidence_fraction.unwrap_or_else(|| same_arm_fraction(cfg.ports)),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hilbert::inner;
    use crate::optics::{HologramTerm, OamcSetting};
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn same_arm_state(basis: ModeBasis, pols: [(Pol, Pol); 3]) -> StateVector {
        let w = c(1.0 / 3f64.sqrt());
        let terms: Vec<_> = Arm::ALL
            .iter()
            .zip(pols)
            .map(|(&a, (ps, pi))| (Mode::new(a, ps, 0), Mode::new(a, pi, 0), w))
            .collect();
        StateVector::pair_superposition(basis, &terms).unwrap()
    }

    fn fidelity(a: &StateVector, b: &StateVector) -> f64 {
        inner(a, b).unwrap().norm_sqr()
    }

    fn v_pc() -> Option<PcSetting> {
        Some(PcSetting { hwp_angle: FRAC_PI_4, qwp_angle: FRAC_PI_2, ..PcSetting::default() })
    }

    #[test]
    fn balanced_setup_gives_two_qutrit_ghz() {
        let basis = ModeBasis::default();
        let pair = build_pair_state(&SetupConfig::balanced(basis)).unwrap();
        let target = same_arm_state(basis, [(Pol::H, Pol::H); 3]);
        assert!((fidelity(&pair.state, &target) - 1.0).abs() < 1e-12);
        assert!((pair.success_probability - 1.0).abs() < 1e-12);
        assert!((pair.coincidence_fraction - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn single_branch_is_product() {
        let basis = ModeBasis::default();
        let mut cfg = SetupConfig::balanced(basis);
        cfg.amplitudes = [c(1.0), c(0.0), c(0.0)];
        cfg.signal_controls[1].oamc = Some(OamcSetting::preparing(&[(1, c(1.0))]));
        cfg.idler_controls[2].pc = v_pc();
        let pair = build_pair_state(&cfg).unwrap();
        let s = Mode::new(Arm::Short, Pol::H, 0);
        assert!((pair.state.pair_amplitude(s, s).unwrap() - c(1.0)).norm() < 1e-15);
    }

    #[test]
    fn per_arm_settings_give_polarization_tagged_state() {
        let basis = ModeBasis::default();
        let mut cfg = SetupConfig::balanced(basis);
        cfg.signal_controls[2].pc = v_pc();
        cfg.idler_controls[1].pc = v_pc();
        cfg.idler_controls[2].pc = v_pc();
        let pair = build_pair_state(&cfg).unwrap();
        let target = same_arm_state(basis, [(Pol::H, Pol::H), (Pol::H, Pol::V), (Pol::V, Pol::V)]);
        assert!(fidelity(&pair.state, &target) >= 1.0 - 1e-12);
    }

    #[test]
    fn every_port_pair_keeps_balanced_magnitudes() {
        let basis = ModeBasis::default();
        for j in 0..3 {
            for k in 0..3 {
                let mut cfg = SetupConfig::balanced(basis);
                cfg.ports = (j, k);
                let pair = build_pair_state(&cfg).unwrap();
                for arm in Arm::ALL {
                    let m = Mode::new(arm, Pol::H, 0);
                    let a = pair.state.pair_amplitude(m, m).unwrap();
                    assert!((a.norm() - 1.0 / 3f64.sqrt()).abs() < 1e-12);
                    let expected = tritter_phase(arm, j) + tritter_phase(arm, k);
                    assert!((a / a.norm() - Complex64::from_polar(1.0, expected)).norm() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn global_phase_of_amplitudes_is_irrelevant() {
        let basis = ModeBasis::default();
        let mut cfg = SetupConfig::balanced(basis);
        cfg.amplitudes = [c(0.3), Complex64::new(0.2, 0.5), c(-0.7)];
        let a = build_pair_state(&cfg).unwrap();
        let g = Complex64::from_polar(1.0, 1.234);
        cfg.amplitudes = cfg.amplitudes.map(|x| x * g);
        let b = build_pair_state(&cfg).unwrap();
        assert!((fidelity(&a.state, &b.state) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn only_the_phase_sum_enters() {
        let basis = ModeBasis::default();
        let mut cfg = SetupConfig::balanced(basis);
        cfg.signal_phases = [ArmPhase::new(0.4).unwrap(), ArmPhase::new(1.1).unwrap()];
        cfg.idler_phases = [ArmPhase::new(-0.2).unwrap(), ArmPhase::new(0.3).unwrap()];
        let a = build_pair_state(&cfg).unwrap();
        let delta = 0.77;
        cfg.signal_phases[0] = ArmPhase::new(0.4 + delta).unwrap();
        cfg.idler_phases[0] = ArmPhase::new(-0.2 - delta).unwrap();
        let b = build_pair_state(&cfg).unwrap();
        for (x, y) in a.state.amplitudes().iter().zip(b.state.amplitudes()) {
            assert!((x - y).norm() < 1e-12);
        }
    }

    #[test]
    fn efficiencies_multiply_into_success_probability() {
        let basis = ModeBasis::default();
        let mut cfg = SetupConfig::balanced(basis);
        let lossy = |eff| Some(OamcSetting { efficiency: eff, ..OamcSetting::default() });
        for a in 0..3 {
            cfg.signal_controls[a].oamc = lossy(0.8);
            cfg.idler_controls[a].oamc = lossy(0.6);
        }
        let pair = build_pair_state(&cfg).unwrap();
        assert!((pair.success_probability - 0.48).abs() < 1e-12);
        assert!((pair.overall_probability() - 0.16).abs() < 1e-12);
    }

    #[test]
    fn same_arm_fraction_is_a_third_for_all_ports() {
        for j in 0..3 {
            for k in 0..3 {
                assert!((same_arm_fraction((j, k)) - 1.0 / 3.0).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn full_projection_reports_killers() {
        let basis = ModeBasis::default();
        let mut cfg = SetupConfig::balanced(basis);
        for a in 0..3 {
            cfg.signal_controls[a].input_oam = 1;
            cfg.signal_controls[a].oamc = Some(OamcSetting::preparing(&[(0, c(1.0))]));
        }
        match build_pair_state(&cfg).unwrap_err() {
            Error::ZeroState { killers } => {
                assert_eq!(killers.len(), 3);
                assert!(killers.iter().all(|k| k.contains("MMF") && k.starts_with("signal arm")));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn hologram_leaving_window_kills_branch() {
        let basis = ModeBasis::default();
        let mut cfg = SetupConfig::balanced(basis);
        cfg.amplitudes = [c(1.0), c(0.0), c(0.0)];
        cfg.idler_controls[0].input_oam = 2;
        cfg.idler_controls[0].oamc = Some(OamcSetting { use_mmf: false, hologram: vec![HologramTerm::new(1, c(1.0))], efficiency: 1.0 });
        let err = build_pair_state(&cfg).unwrap_err();
        assert!(err.to_string().contains("idler arm s: CGH"), "{err}");
    }

    #[test]
    fn assumption_flags_are_required() {
        let basis = ModeBasis::default();
        let mut cfg = SetupConfig::balanced(basis);
        assert!(validate_assumptions(&cfg).passed());
        cfg.assumptions.photon_coherence_short = false;
        let report = validate_assumptions(&cfg);
        assert_eq!(report.failures.len(), 1);
        assert!(report.failures[0].contains("single photon interference"));
        assert!(matches!(build_pair_state(&cfg), Err(Error::AssumptionsNotMet(_))));
        cfg.assumptions = Assumptions { photon_coherence_short: true, pump_coherence_long: false };
        let report = validate_assumptions(&cfg);
        assert!(report.failures[0].contains("timing information"));
    }

    #[test]
    fn invalid_configs_rejected() {
        let basis = ModeBasis::default();
        let mut cfg = SetupConfig::balanced(basis);
        cfg.amplitudes = [c(0.0); 3];
        assert!(matches!(build_pair_state(&cfg), Err(Error::InvalidSetting(_))));
        let mut cfg = SetupConfig::balanced(basis);
        cfg.ports = (3, 0);
        assert!(matches!(build_pair_state(&cfg), Err(Error::InvalidSetting(_))));
        let mut cfg = SetupConfig::balanced(basis);
        cfg.idler_controls[1].input_oam = 5;
        assert!(matches!(build_pair_state(&cfg), Err(Error::OamOutOfRange { .. })));
    }
}

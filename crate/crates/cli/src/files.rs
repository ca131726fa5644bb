//! JSON file formats. Angles are radians; complex numbers are `[re, im]`.

use hyperent_core::optics::{ArmPhase, HologramTerm};
use hyperent_core::{
    ArmControls, Assumptions, Complex64, ControlOrder, ModeBasis, OamcSetting, PcSetting, Pol, SetupConfig,
};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

pub type ComplexPair = [f64; 2];

fn to_c(z: ComplexPair) -> Complex64 {
    Complex64::new(z[0], z[1])
}

fn from_c(z: Complex64) -> ComplexPair {
    // adding zero turns -0.0 into 0.0
    [z.re + 0.0, z.im + 0.0]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SetupFile {
    pub arms: ArmsFile,
    pub ports: [usize; 2],
    pub controls: ControlsFile,
    pub basis: BasisFile,
    pub assumptions: AssumptionsFile,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coincidence_fraction: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ArmsFile {
    pub amplitudes: [ComplexPair; 3],
    pub signal_phases: [f64; 2],
    pub idler_phases: [f64; 2],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ControlsFile {
    pub signal: [ArmControlsFile; 3],
    pub idler: [ArmControlsFile; 3],
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum PolFile {
    #[default]
    H,
    V,
}

impl From<PolFile> for Pol {
    fn from(p: PolFile) -> Pol {
        match p {
            PolFile::H => Pol::H,
            PolFile::V => Pol::V,
        }
    }
}

impl From<Pol> for PolFile {
    fn from(p: Pol) -> PolFile {
        match p {
            Pol::H => PolFile::H,
            Pol::V => PolFile::V,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OrderFile {
    #[default]
    PcThenOamc,
    OamcThenPc,
}

fn is_default<T: Default + PartialEq>(t: &T) -> bool {
    *t == T::default()
}

fn h() -> PolFile {
    PolFile::H
}

fn is_h(p: &PolFile) -> bool {
    *p == PolFile::H
}

fn one() -> f64 {
    1.0
}

fn is_one(x: &f64) -> bool {
    *x == 1.0
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ArmControlsFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pc: Option<PcFile>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub oamc: Option<OamcFile>,
    #[serde(default, skip_serializing_if = "is_default")]
    pub extra_phase: f64,
    #[serde(default = "h", skip_serializing_if = "is_h")]
    pub input_pol: PolFile,
    #[serde(default, skip_serializing_if = "is_default")]
    pub input_oam: i32,
    #[serde(default, skip_serializing_if = "is_default")]
    pub order: OrderFile,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PcFile {
    #[serde(default, skip_serializing_if = "is_default")]
    pub use_pbs: bool,
    #[serde(default = "h", skip_serializing_if = "is_h")]
    pub pbs_port: PolFile,
    #[serde(default)]
    pub hwp_angle: f64,
    #[serde(default)]
    pub qwp_angle: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OamcFile {
    #[serde(default, skip_serializing_if = "is_default")]
    pub use_mmf: bool,
    pub hologram: Vec<HologramTermFile>,
    #[serde(default = "one", skip_serializing_if = "is_one")]
    pub efficiency: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HologramTermFile {
    pub shift: i32,
    pub weight: ComplexPair,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BasisFile {
    pub oam_min: i32,
    pub oam_max: i32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AssumptionsFile {
    pub photon_coherence_short: bool,
    pub pump_coherence_long: bool,
}

impl ArmControlsFile {
    fn to_core(&self) -> ArmControls {
        ArmControls {
            pc: self.pc.as_ref().map(|p| PcSetting {
                use_pbs: p.use_pbs,
                pbs_port: p.pbs_port.into(),
                hwp_angle: p.hwp_angle,
                qwp_angle: p.qwp_angle,
            }),
            oamc: self.oamc.as_ref().map(|o| OamcSetting {
                use_mmf: o.use_mmf,
                hologram: o.hologram.iter().map(|t| HologramTerm::new(t.shift, to_c(t.weight))).collect(),
                efficiency: o.efficiency,
            }),
            extra_phase: self.extra_phase,
            input_pol: self.input_pol.into(),
            input_oam: self.input_oam,
            order: match self.order {
                OrderFile::PcThenOamc => ControlOrder::PcThenOamc,
                OrderFile::OamcThenPc => ControlOrder::OamcThenPc,
            },
        }
    }

    fn from_core(c: &ArmControls) -> Self {
        ArmControlsFile {
            pc: c.pc.map(|p| PcFile {
                use_pbs: p.use_pbs,
                pbs_port: p.pbs_port.into(),
                hwp_angle: p.hwp_angle,
                qwp_angle: p.qwp_angle,
            }),
            oamc: c.oamc.as_ref().map(|o| OamcFile {
                use_mmf: o.use_mmf,
                hologram: o.hologram.iter().map(|t| HologramTermFile { shift: t.shift, weight: from_c(t.weight) }).collect(),
                efficiency: o.efficiency,
            }),
            extra_phase: c.extra_phase,
            input_pol: c.input_pol.into(),
            input_oam: c.input_oam,
            order: match c.order {
                ControlOrder::PcThenOamc => OrderFile::PcThenOamc,
                ControlOrder::OamcThenPc => OrderFile::OamcThenPc,
            },
        }
    }
}

impl SetupFile {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Schema(e.to_string()))
    }

    pub fn to_config(&self) -> Result<SetupConfig, CliError> {
        let basis = ModeBasis::new(self.basis.oam_min, self.basis.oam_max)?;
        let phase = |p: [f64; 2]| -> Result<[ArmPhase; 2], CliError> { Ok([ArmPhase::new(p[0])?, ArmPhase::new(p[1])?]) };
        let cfg = SetupConfig {
            amplitudes: self.arms.amplitudes.map(to_c),
            signal_phases: phase(self.arms.signal_phases)?,
            idler_phases: phase(self.arms.idler_phases)?,
            ports: (self.ports[0], self.ports[1]),
            signal_controls: [0, 1, 2].map(|a| self.controls.signal[a].to_core()),
            idler_controls: [0, 1, 2].map(|a| self.controls.idler[a].to_core()),
            basis,
            assumptions: Assumptions {
                photon_coherence_short: self.assumptions.photon_coherence_short,
                pump_coherence_long: self.assumptions.pump_coherence_long,
            },
            coincidence_fraction: self.coincidence_fraction,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_config(cfg: &SetupConfig) -> Self {
        SetupFile {
            arms: ArmsFile {
                amplitudes: cfg.amplitudes.map(from_c),
                signal_phases: cfg.signal_phases.map(|p| p.value()),
                idler_phases: cfg.idler_phases.map(|p| p.value()),
            },
            ports: [cfg.ports.0, cfg.ports.1],
            controls: ControlsFile {
                signal: [0, 1, 2].map(|a| ArmControlsFile::from_core(&cfg.signal_controls[a])),
                idler: [0, 1, 2].map(|a| ArmControlsFile::from_core(&cfg.idler_controls[a])),
            },
            basis: BasisFile { oam_min: cfg.basis.oam_min(), oam_max: cfg.basis.oam_max() },
            assumptions: AssumptionsFile {
                photon_coherence_short: cfg.assumptions.photon_coherence_short,
                pump_coherence_long: cfg.assumptions.pump_coherence_long,
            },
            coincidence_fraction: cfg.coincidence_fraction,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TargetKind {
    /// Polarization-pair qutrit (3 coefficients) or ququart (4).
    Qudit,
    /// Signal OAM × idler OAM, 3×3 row-major.
    Oam,
    /// Polarization pair × signal OAM × idler OAM, 3×3×3 row-major.
    Tensor,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TargetFile {
    pub kind: TargetKind,
    pub coefficients: Vec<ComplexPair>,
}

impl TargetFile {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Schema(e.to_string()))
    }

    pub fn dims(&self) -> Result<Vec<usize>, CliError> {
        let n = self.coefficients.len();
        let dims = match (self.kind, n) {
            (TargetKind::Qudit, 3 | 4) => vec![n],
            (TargetKind::Oam, 9) => vec![3, 3],
            (TargetKind::Tensor, 27) => vec![3, 3, 3],
            _ => return Err(CliError::Schema(format!("{:?} target cannot have {n} coefficients", self.kind))),
        };
        Ok(dims)
    }

    pub fn coefficients(&self) -> Vec<Complex64> {
        self.coefficients.iter().copied().map(to_c).collect()
    }
}

//! Optical elements as [`PhotonOperator`]s.
//!
//! Polarization control (PC): optional PBS, then HWP, then QWP, acting on
//! the polarization factor. OAM control (OAMC): optional mono-mode fiber
//! filter, then a computer-generated hologram (weighted OAM shifts), scaled
//! by `√efficiency`. Both act as the identity on the arm label; only the
//! interferometer changes which arm a photon is in.
//!
//! Jones conventions: `HWP(θ) = [[cos2θ, sin2θ], [sin2θ, −cos2θ]]` and
//! `QWP(θ) = R(θ)·diag(1, i)·R(−θ)`, with `R` the counter-clockwise rotation.

mod jones;
mod oam;
mod tritter;

pub use jones::{hwp, hwp_matrix, pbs_project, pc_elements, pc_operator, qwp, qwp_matrix, PcSetting};
pub use oam::{
    cgh, mmf_project, oamc_elements, oamc_operator, CghOperator, HologramTerm, HologramTransfer,
    OamcOperator, OamcSetting,
};
pub use tritter::{tritter_matrix, tritter_phase};

use crate::error::{Error, Result};
use crate::hilbert::PhotonOperator;

/// Phase (radians) of an interferometer arm relative to the short arm.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ArmPhase(f64);

impl ArmPhase {
    pub const ZERO: ArmPhase = ArmPhase(0.0);

    pub fn new(value: f64) -> Result<Self> {
        if !value.is_finite() {
            return Err(Error::InvalidSetting(format!("arm phase must be finite, got {value}")));
        }
        Ok(ArmPhase(value))
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

/// An element together with a human-readable name, used to report which
/// device removed a branch.
#[derive(Debug, Clone)]
pub struct NamedElement {
    pub name: String,
    pub operator: PhotonOperator,
}

pub(crate) fn check_angle(name: &str, value: f64) -> Result<()> {
    if value.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidSetting(format!("{name} must be finite, got {value}")))
    }
}

//! State engineering on top of the post-selected source.
//!
//! A *reading* ([`DegreeEncoding`]) turns a physical two-photon state into a
//! register of logical digits: arm labels, a two-photon polarization-pair
//! digit, per-photon OAM values, or per-photon OAM × polarization digits.
//! Labels that are not read are erased coherently, which is what detection
//! behind the tritter does to the arm label. The design routines choose arm
//! amplitudes and per-arm controls so that a reading of the built state
//! reproduces a requested target.

mod design;
mod ghz;
mod reading;

pub use design::{design_oam_controls, design_qudit_controls, design_tensor_controls, Design};
pub use ghz::assemble_ghz;
pub use reading::{collapse_degrees, encode_polarization_pairs, Degree, DegreeEncoding, PairTable};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::hilbert::QuditState;

/// A user-supplied target, normalized on entry.
#[derive(Debug, Clone, PartialEq)]
pub struct TargetSpec {
    state: QuditState,
    notice: Option<String>,
}

impl TargetSpec {
    pub fn new(dims: Vec<usize>, coefficients: Vec<Complex64>) -> Result<Self> {
        if coefficients.iter().any(|c| !(c.re.is_finite() && c.im.is_finite())) {
            return Err(Error::InvalidSetting("target coefficients must be finite".into()));
        }
        let raw = QuditState::new(dims, coefficients)?;
        let norm = raw.norm();
        let state = raw.normalized().ok_or_else(|| Error::Infeasible("target is the zero vector".into()))?;
        let notice = ((norm - 1.0).abs() >= crate::ALGEBRA_TOL)
            .then(|| format!("target renormalized (input norm {norm})"));
        Ok(TargetSpec { state, notice })
    }

    pub fn from_state(state: QuditState) -> Result<Self> {
        Self::new(state.dims().to_vec(), state.amplitudes().to_vec())
    }

    pub fn state(&self) -> &QuditState {
        &self.state
    }

    pub fn notice(&self) -> Option<&str> {
        self.notice.as_deref()
    }
}

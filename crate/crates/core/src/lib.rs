//! Simulation and analysis of multi-degree entangled photon pairs.
//!
//! A photon pair leaves a down-conversion source and each photon crosses a
//! three-arm (short/medium/long) unbalanced interferometer. Every arm carries
//! its own polarization control (PBS, HWP, QWP) and orbital-angular-momentum
//! control (mono-mode fiber filter and computer-generated holograms).
//! Coincidence post-selection keeps only the terms in which both photons took
//! the same arm, so the engineered state is a coherent sum of three product
//! branches.
//!
//! The crate is organized bottom-up:
//!
//! * [`hilbert`]: mode basis, state vectors, photon operators, qudit registers.
//! * [`optics`]: optical elements as photon operators and the tritter phases.
//! * [`source`]: the post-selected pair state built from a [`SetupConfig`].
//! * [`engineering`]: degree readings, control design, GHZ assemblies and the
//!   OAM × polarization remap.
//! * [`analysis`]: fidelity, Schmidt spectrum, entropy, negativity and
//!   CGLMP Bell values with a seeded multi-restart optimizer.

pub mod analysis;
pub mod engineering;
mod error;
pub mod hilbert;
pub mod optics;
pub mod source;

pub use error::{Error, Result};
pub use hilbert::{
    Arm, Mode, ModeBasis, OperatorKind, Photon, PhotonOperator, Pol, QuditState, Register,
    StateVector,
};
pub use analysis::{AnalysisReport, BellOptimum, BellPhases, BellSettings};
pub use engineering::{Degree, DegreeEncoding, Design, PairTable, TargetSpec};
pub use num_complex::Complex64;
pub use optics::{OamcSetting, PcSetting};
pub use source::{ArmControls, Assumptions, ControlOrder, PairState, SetupConfig};

/// Tolerance for algebraic identities (norms, traces, fidelities).
pub const ALGEBRA_TOL: f64 = 1e-12;

/// Tolerance for classifying operators as unitary or projector.
pub const OPERATOR_TOL: f64 = 1e-10;

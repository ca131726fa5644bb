//! Complex linear algebra for one and two photons.
//!
//! Single-photon modes are labelled by interferometer arm, polarization and
//! OAM quantum number. The index map is row-major with the arm slowest and
//! OAM fastest:
//!
//! ```text
//! index = (arm * 2 + pol) * oam_dim + (l - oam_min)
//! ```
//!
//! Two-photon amplitudes are stored signal-major: `signal_index * dim +
//! idler_index`.

mod basis;
pub(crate) mod operator;
mod qudit;
mod state;

pub use basis::{Arm, Mode, ModeBasis, Photon, Pol};
pub use operator::{OperatorKind, PhotonOperator};
pub use qudit::{QuditState, Register};
pub use state::{apply_to_photon, inner, partial_trace, tensor, StateVector};

use nalgebra::DMatrix;
use num_complex::Complex64;

pub(crate) type CMatrix = DMatrix<Complex64>;

pub(crate) const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Largest entry modulus.
pub(crate) fn max_abs(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

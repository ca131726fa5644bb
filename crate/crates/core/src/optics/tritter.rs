use std::f64::consts::PI;

use num_complex::Complex64;

use crate::hilbert::{Arm, CMatrix};

/// Output-port phase of the symmetric three-port combiner:
/// `2π/3 · (arm · port)`, reduced modulo 2π.
///
/// The combiner is taken to be the three-mode discrete Fourier transform, the
/// balanced lossless 3-port unique up to relabeling.
pub fn tritter_phase(arm: Arm, port: usize) -> f64 {
    2.0 * PI / 3.0 * ((arm.index() * port) % 3) as f64
}

/// `U[port][arm] = e^{i·tritter_phase(arm, port)} / √3`.
pub fn tritter_matrix() -> CMatrix {
    let w = 1.0 / 3f64.sqrt();
    CMatrix::from_fn(3, 3, |port, arm| {
        Complex64::from_polar(w, tritter_phase(Arm::from_index(arm).expect("arm index < 3"), port))
    })
}

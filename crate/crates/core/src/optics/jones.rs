use nalgebra::Matrix2;
use num_complex::Complex64;

use super::{check_angle, NamedElement};
use crate::error::{Error, Result};
use crate::hilbert::{ModeBasis, PhotonOperator, Pol};

/// Polarization control settings. Elements apply in the order PBS → HWP → QWP.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PcSetting {
    pub use_pbs: bool,
    pub pbs_port: Pol,
    pub hwp_angle: f64,
    pub qwp_angle: f64,
}

impl Default for PcSetting {
    fn default() -> Self {
        PcSetting { use_pbs: false, pbs_port: Pol::H, hwp_angle: 0.0, qwp_angle: 0.0 }
    }
}

impl PcSetting {
    /// Waveplate angles that turn `|H⟩` into the Jones vector `target`, up to
    /// a global phase. The HWP rotates H to linear polarization at
    /// `ψ + χ`, then a QWP with its axis along `ψ` opens the ellipse, where
    /// `ψ` and `χ` are the orientation and ellipticity of the target.
    pub fn preparing(target: [Complex64; 2]) -> Result<PcSetting> {
        let [a, b] = target;
        let s0 = a.norm_sqr() + b.norm_sqr();
        if s0 <= 0.0 || !s0.is_finite() {
            return Err(Error::InvalidSetting("target polarization must be nonzero".into()));
        }
        let s1 = a.norm_sqr() - b.norm_sqr();
        let ab = a.conj() * b;
        let s2 = 2.0 * ab.re;
        let s3 = 2.0 * ab.im;
        let orientation = 0.5 * s2.atan2(s1);
        let ellipticity = 0.5 * (s3 / s0).clamp(-1.0, 1.0).asin();
        Ok(PcSetting {
            use_pbs: false,
            pbs_port: Pol::H,
            hwp_angle: 0.5 * (orientation + ellipticity),
            qwp_angle: orientation,
        })
    }

    fn validate(&self) -> Result<()> {
        check_angle("hwp_angle", self.hwp_angle)?;
        check_angle("qwp_angle", self.qwp_angle)
    }
}

pub fn hwp_matrix(theta: f64) -> Matrix2<Complex64> {
    let (s, c) = (2.0 * theta).sin_cos();
    Matrix2::new(
        Complex64::new(c, 0.0),
        Complex64::new(s, 0.0),
        Complex64::new(s, 0.0),
        Complex64::new(-c, 0.0),
    )
}

pub fn qwp_matrix(theta: f64) -> Matrix2<Complex64> {
    let (s, c) = theta.sin_cos();
    let i = Complex64::i();
    let off = Complex64::new(c * s, -c * s);
    Matrix2::new(c * c + i * s * s, off, off, s * s + i * c * c)
}

pub fn hwp(basis: ModeBasis, theta: f64) -> Result<PhotonOperator> {
    check_angle("hwp angle", theta)?;
    PhotonOperator::on_polarization(basis, &hwp_matrix(theta))
}

pub fn qwp(basis: ModeBasis, theta: f64) -> Result<PhotonOperator> {
    check_angle("qwp angle", theta)?;
    PhotonOperator::on_polarization(basis, &qwp_matrix(theta))
}

/// Projector onto the transmitted polarization of a PBS port.
pub fn pbs_project(basis: ModeBasis, port: Pol) -> PhotonOperator {
    let one = Complex64::new(1.0, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    let m = match port {
        Pol::H => Matrix2::new(one, zero, zero, zero),
        Pol::V => Matrix2::new(zero, zero, zero, one),
    };
    PhotonOperator::on_polarization(basis, &m).expect("2x2 lift has the basis shape")
}

/// The PC as an ordered list of named elements (first applied first).
pub fn pc_elements(basis: ModeBasis, setting: &PcSetting) -> Result<Vec<NamedElement>> {
    setting.validate()?;
    let mut out = Vec::with_capacity(3);
    if setting.use_pbs {
        out.push(NamedElement {
            name: format!("PBS({:?})", setting.pbs_port),
            operator: pbs_project(basis, setting.pbs_port),
        });
    }
    out.push(NamedElement { name: "HWP".into(), operator: hwp(basis, setting.hwp_angle)? });
    out.push(NamedElement { name: "QWP".into(), operator: qwp(basis, setting.qwp_angle)? });
    Ok(out)
}

/// `QWP · HWP · PBS`. Unitary without the PBS; with it the product is a
/// rank-one polarization filter, classified as a general operator.
pub fn pc_operator(basis: ModeBasis, setting: &PcSetting) -> Result<PhotonOperator> {
    let mut acc = PhotonOperator::identity(basis);
    for element in pc_elements(basis, setting)? {
        acc = element.operator.after(&acc)?;
    }
    Ok(acc)
}

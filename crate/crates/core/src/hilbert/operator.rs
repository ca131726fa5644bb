use std::fmt;

use nalgebra::Matrix2;
use num_complex::Complex64;

use super::{max_abs, CMatrix, ModeBasis, StateVector, ZERO};
use crate::error::{Error, Result};
use crate::OPERATOR_TOL;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OperatorKind {
    Unitary,
    Projector,
    General,
}

impl fmt::Display for OperatorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OperatorKind::Unitary => "unitary",
            OperatorKind::Projector => "projector",
            OperatorKind::General => "general",
        })
    }
}

/// A linear map on one photon's mode space.
#[derive(Debug, Clone, PartialEq)]
pub struct PhotonOperator {
    basis: ModeBasis,
    matrix: CMatrix,
    kind: OperatorKind,
}

impl PhotonOperator {
    /// Wraps a matrix and classifies it. Unitarity is checked before the
    /// projector property, so the identity is reported as unitary.
    pub fn new(basis: ModeBasis, matrix: CMatrix) -> Result<Self> {
        check_shape(&basis, &matrix)?;
        let kind = if unitarity_defect(&matrix) < OPERATOR_TOL {
            OperatorKind::Unitary
        } else if projector_defect(&matrix) < OPERATOR_TOL {
            OperatorKind::Projector
        } else {
            OperatorKind::General
        };
        Ok(PhotonOperator { basis, matrix, kind })
    }

    /// Wraps a matrix whose kind is asserted by the caller; the claim is verified.
    pub fn with_kind(basis: ModeBasis, matrix: CMatrix, kind: OperatorKind) -> Result<Self> {
        check_shape(&basis, &matrix)?;
        let deviation = match kind {
            OperatorKind::Unitary => unitarity_defect(&matrix),
            OperatorKind::Projector => projector_defect(&matrix),
            OperatorKind::General => 0.0,
        };
        if deviation >= OPERATOR_TOL {
            return Err(Error::OperatorKind { kind: kind_name(kind), deviation });
        }
        Ok(PhotonOperator { basis, matrix, kind })
    }

    pub fn identity(basis: ModeBasis) -> Self {
        let d = basis.dim();
        PhotonOperator { basis, matrix: CMatrix::identity(d, d), kind: OperatorKind::Unitary }
    }

    /// `I_path ⊗ m ⊗ I_oam`.
    pub fn on_polarization(basis: ModeBasis, m: &Matrix2<Complex64>) -> Result<Self> {
        let pol = CMatrix::from_fn(2, 2, |i, j| m[(i, j)]);
        let n = basis.oam_dim();
        let full = CMatrix::identity(3, 3).kronecker(&pol).kronecker(&CMatrix::identity(n, n));
        Self::new(basis, full)
    }

    /// `I_path ⊗ I_pol ⊗ m` for an `oam_dim × oam_dim` matrix.
    pub fn on_oam(basis: ModeBasis, m: &CMatrix) -> Result<Self> {
        let n = basis.oam_dim();
        if m.shape() != (n, n) {
            return Err(Error::DimensionMismatch { expected: vec![n, n], found: vec![m.nrows(), m.ncols()] });
        }
        let full = CMatrix::identity(6, 6).kronecker(m);
        Self::new(basis, full)
    }

    /// `m ⊗ I_pol ⊗ I_oam` for a 3×3 path matrix.
    pub fn on_path(basis: ModeBasis, m: &CMatrix) -> Result<Self> {
        if m.shape() != (3, 3) {
            return Err(Error::DimensionMismatch { expected: vec![3, 3], found: vec![m.nrows(), m.ncols()] });
        }
        let n = basis.oam_dim();
        let full = m.kronecker(&CMatrix::identity(2 * n, 2 * n));
        Self::new(basis, full)
    }

    pub fn basis(&self) -> &ModeBasis {
        &self.basis
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn kind(&self) -> OperatorKind {
        self.kind
    }

    /// `self · first`: apply `first`, then `self`.
    pub fn after(&self, first: &PhotonOperator) -> Result<PhotonOperator> {
        if self.basis != first.basis {
            return Err(Error::BasisMismatch(self.basis.to_string(), first.basis.to_string()));
        }
        Self::new(self.basis, &self.matrix * &first.matrix)
    }

    pub fn scaled(&self, factor: f64) -> Result<PhotonOperator> {
        Self::new(self.basis, self.matrix.map(|z| z * factor))
    }

    /// Action on a single-photon state.
    pub fn apply(&self, state: &StateVector) -> Result<StateVector> {
        state.expect_arity(1)?;
        state.check_basis(&self.basis)?;
        let d = self.basis.dim();
        let amps = state.amplitudes();
        let out = (0..d)
            .map(|i| {
                (0..d)
                    .filter(|&k| amps[k] != ZERO)
                    .map(|k| self.matrix[(i, k)] * amps[k])
                    .sum()
            })
            .collect();
        StateVector::new(self.basis, 1, out)
    }

    /// `max |U†U − I|`.
    pub fn unitarity_defect(&self) -> f64 {
        unitarity_defect(&self.matrix)
    }

    /// `max(max |P² − P|, max |P − P†|)`.
    pub fn projector_defect(&self) -> f64 {
        projector_defect(&self.matrix)
    }

    /// Largest singular value.
    pub fn operator_norm(&self) -> f64 {
        spectral_norm(&self.matrix)
    }
}

fn kind_name(kind: OperatorKind) -> &'static str {
    match kind {
        OperatorKind::Unitary => "unitary",
        OperatorKind::Projector => "projector",
        OperatorKind::General => "general",
    }
}

fn check_shape(basis: &ModeBasis, m: &CMatrix) -> Result<()> {
    let d = basis.dim();
    if m.shape() != (d, d) {
        return Err(Error::DimensionMismatch { expected: vec![d, d], found: vec![m.nrows(), m.ncols()] });
    }
    Ok(())
}

pub(crate) fn unitarity_defect(m: &CMatrix) -> f64 {
    let n = m.nrows();
    max_abs(&(m.adjoint() * m - CMatrix::identity(n, n)))
}

pub(crate) fn projector_defect(m: &CMatrix) -> f64 {
    let idem = max_abs(&(m * m - m));
    let herm = max_abs(&(m - m.adjoint()));
    idem.max(herm)
}

pub(crate) fn spectral_norm(m: &CMatrix) -> f64 {
    m.singular_values().iter().copied().fold(0.0, f64::max)
}

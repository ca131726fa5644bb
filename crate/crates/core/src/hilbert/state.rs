use num_complex::Complex64;

use super::{CMatrix, Mode, ModeBasis, Photon, PhotonOperator, ZERO};
use crate::error::{Error, Result};
use crate::ALGEBRA_TOL;

/// Amplitudes over the one-photon (arity 1) or two-photon (arity 2) space.
///
/// A zero vector is a legal value: it is what a fully blocking filter
/// produces. It is never renormalized silently; see [`StateVector::normalized`].
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    basis: ModeBasis,
    arity: usize,
    amps: Vec<Complex64>,
}

impl StateVector {
    pub fn new(basis: ModeBasis, arity: usize, amps: Vec<Complex64>) -> Result<Self> {
        if !(1..=2).contains(&arity) {
            return Err(Error::InvalidSetting(format!("arity must be 1 or 2, got {arity}")));
        }
        let len = basis.dim().pow(arity as u32);
        if amps.len() != len {
            return Err(Error::DimensionMismatch { expected: vec![len], found: vec![amps.len()] });
        }
        Ok(StateVector { basis, arity, amps })
    }

    pub fn zeros(basis: ModeBasis, arity: usize) -> Self {
        let len = basis.dim().pow(arity as u32);
        StateVector { basis, arity, amps: vec![ZERO; len] }
    }

    pub fn ket(basis: ModeBasis, mode: Mode) -> Result<Self> {
        Self::superposition(basis, &[(mode, Complex64::new(1.0, 0.0))])
    }

    /// One-photon state `Σ w |mode⟩`. Repeated modes add.
    pub fn superposition(basis: ModeBasis, terms: &[(Mode, Complex64)]) -> Result<Self> {
        let mut state = Self::zeros(basis, 1);
        for &(mode, w) in terms {
            state.amps[basis.index(mode)?] += w;
        }
        Ok(state)
    }

    /// Two-photon state `Σ w |signal⟩|idler⟩`.
    pub fn pair_superposition(basis: ModeBasis, terms: &[(Mode, Mode, Complex64)]) -> Result<Self> {
        let mut state = Self::zeros(basis, 2);
        let d = basis.dim();
        for &(s, i, w) in terms {
            state.amps[basis.index(s)? * d + basis.index(i)?] += w;
        }
        Ok(state)
    }

    pub fn basis(&self) -> &ModeBasis {
        &self.basis
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn amplitude(&self, mode: Mode) -> Result<Complex64> {
        self.expect_arity(1)?;
        Ok(self.amps[self.basis.index(mode)?])
    }

    pub fn pair_amplitude(&self, signal: Mode, idler: Mode) -> Result<Complex64> {
        self.expect_arity(2)?;
        let d = self.basis.dim();
        Ok(self.amps[self.basis.index(signal)? * d + self.basis.index(idler)?])
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn is_zero(&self) -> bool {
        self.norm() <= ALGEBRA_TOL
    }

    pub fn is_normalized(&self) -> bool {
        (self.norm() - 1.0).abs() < ALGEBRA_TOL
    }

    /// Unit-norm copy, or `None` for a (numerically) zero vector.
    pub fn normalized(&self) -> Option<StateVector> {
        let n = self.norm();
        if n <= ALGEBRA_TOL {
            return None;
        }
        Some(self.scaled(Complex64::new(1.0 / n, 0.0)))
    }

    pub fn scaled(&self, factor: Complex64) -> StateVector {
        StateVector {
            basis: self.basis,
            arity: self.arity,
            amps: self.amps.iter().map(|a| a * factor).collect(),
        }
    }

    pub fn add(&self, other: &StateVector) -> Result<StateVector> {
        self.check_compatible(other)?;
        Ok(StateVector {
            basis: self.basis,
            arity: self.arity,
            amps: self.amps.iter().zip(&other.amps).map(|(a, b)| a + b).collect(),
        })
    }

    /// Two-photon amplitudes as a `dim × dim` matrix, rows indexed by the signal.
    pub fn pair_matrix(&self) -> Result<CMatrix> {
        self.expect_arity(2)?;
        let d = self.basis.dim();
        Ok(CMatrix::from_row_slice(d, d, &self.amps))
    }

    pub(crate) fn expect_arity(&self, arity: usize) -> Result<()> {
        if self.arity != arity {
            return Err(Error::ArityMismatch { expected: arity, found: self.arity });
        }
        Ok(())
    }

    pub(crate) fn check_basis(&self, basis: &ModeBasis) -> Result<()> {
        if &self.basis != basis {
            return Err(Error::BasisMismatch(self.basis.to_string(), basis.to_string()));
        }
        Ok(())
    }

    fn check_compatible(&self, other: &StateVector) -> Result<()> {
        self.check_basis(&other.basis)?;
        other.expect_arity(self.arity)
    }
}

/// `a ⊗ b` for two single-photon states; `a` becomes the signal.
pub fn tensor(a: &StateVector, b: &StateVector) -> Result<StateVector> {
    a.expect_arity(1)?;
    b.expect_arity(1)?;
    a.check_basis(&b.basis)?;
    let amps = a
        .amps
        .iter()
        .flat_map(|x| b.amps.iter().map(move |y| x * y))
        .collect();
    Ok(StateVector { basis: a.basis, arity: 2, amps })
}

/// `⟨a|b⟩`, conjugate-linear in `a`.
pub fn inner(a: &StateVector, b: &StateVector) -> Result<Complex64> {
    a.check_compatible(b)?;
    Ok(a.amps.iter().zip(&b.amps).map(|(x, y)| x.conj() * y).sum())
}

/// `(op ⊗ I)|ψ⟩` or `(I ⊗ op)|ψ⟩` depending on `which`.
pub fn apply_to_photon(op: &PhotonOperator, which: Photon, state: &StateVector) -> Result<StateVector> {
    state.expect_arity(2)?;
    state.check_basis(op.basis())?;
    let d = state.basis.dim();
    let m = op.matrix();
    let mut out = vec![ZERO; d * d];
    match which {
        Photon::Signal => {
            for k in 0..d {
                for j in 0..d {
                    let a = state.amps[k * d + j];
                    if a == ZERO {
                        continue;
                    }
                    for i in 0..d {
                        out[i * d + j] += m[(i, k)] * a;
                    }
                }
            }
        }
        Photon::Idler => {
            for i in 0..d {
                let row = &state.amps[i * d..(i + 1) * d];
                for (j, slot) in out[i * d..(i + 1) * d].iter_mut().enumerate() {
                    *slot = (0..d).map(|k| m[(j, k)] * row[k]).sum();
                }
            }
        }
    }
    Ok(StateVector { basis: state.basis, arity: 2, amps: out })
}

/// Reduced density matrix of the kept photon. The input must be normalized.
pub fn partial_trace(state: &StateVector, keep: Photon) -> Result<CMatrix> {
    state.expect_arity(2)?;
    if !state.is_normalized() {
        return Err(Error::NotNormalized(state.norm()));
    }
    let psi = state.pair_matrix()?;
    Ok(match keep {
        Photon::Signal => &psi * psi.adjoint(),
        Photon::Idler => psi.transpose() * psi.conjugate(),
    })
}

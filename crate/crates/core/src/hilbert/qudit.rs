use num_complex::Complex64;

use super::{StateVector, ZERO};
use crate::error::{Error, Result};
use crate::ALGEBRA_TOL;

/// Anything that exposes a row-major amplitude array over a list of local
/// dimensions. Analysis routines are written against this trait so they work
/// on physical two-photon states and on logical digit registers alike.
pub trait Register {
    fn dims(&self) -> Vec<usize>;
    fn amplitudes(&self) -> &[Complex64];
}

impl Register for StateVector {
    fn dims(&self) -> Vec<usize> {
        vec![self.basis().dim(); self.arity()]
    }

    fn amplitudes(&self) -> &[Complex64] {
        StateVector::amplitudes(self)
    }
}

/// Amplitudes over a register of logical digits (qudits), row-major with the
/// first digit slowest.
#[derive(Debug, Clone, PartialEq)]
pub struct QuditState {
    dims: Vec<usize>,
    amps: Vec<Complex64>,
}

impl Register for QuditState {
    fn dims(&self) -> Vec<usize> {
        self.dims.clone()
    }

    fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }
}

impl QuditState {
    pub fn new(dims: Vec<usize>, amps: Vec<Complex64>) -> Result<Self> {
        if dims.is_empty() || dims.contains(&0) {
            return Err(Error::InvalidSetting(format!("invalid register dimensions {dims:?}")));
        }
        let len: usize = dims.iter().product();
        if amps.len() != len {
            return Err(Error::DimensionMismatch { expected: vec![len], found: vec![amps.len()] });
        }
        Ok(QuditState { dims, amps })
    }

    pub fn zeros(dims: Vec<usize>) -> Result<Self> {
        let len = dims.iter().product();
        Self::new(dims, vec![ZERO; len])
    }

    /// `Σ w |digits⟩`; repeated digit strings add.
    pub fn from_terms(dims: Vec<usize>, terms: &[(Vec<usize>, Complex64)]) -> Result<Self> {
        let mut state = Self::zeros(dims)?;
        for (digits, w) in terms {
            let idx = state.index_of(digits)?;
            state.amps[idx] += w;
        }
        Ok(state)
    }

    /// `(Σ_n |n n … n⟩)/√d` over `parties` digits of dimension `d`.
    pub fn ghz(parties: usize, d: usize) -> Result<Self> {
        let w = Complex64::new(1.0 / (d as f64).sqrt(), 0.0);
        let terms: Vec<_> = (0..d).map(|n| (vec![n; parties], w)).collect();
        Self::from_terms(vec![d; parties], &terms)
    }

    /// Two-qudit maximally entangled state `Σ_n |n n⟩/√d`.
    pub fn maximally_entangled(d: usize) -> Result<Self> {
        Self::ghz(2, d)
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn amplitude(&self, digits: &[usize]) -> Result<Complex64> {
        Ok(self.amps[self.index_of(digits)?])
    }

    pub fn index_of(&self, digits: &[usize]) -> Result<usize> {
        if digits.len() != self.dims.len() || digits.iter().zip(&self.dims).any(|(d, n)| d >= n) {
            return Err(Error::DimensionMismatch { expected: self.dims.clone(), found: digits.to_vec() });
        }
        Ok(digits.iter().zip(&self.dims).fold(0, |acc, (d, n)| acc * n + d))
    }

    pub fn digits_of(&self, mut index: usize) -> Vec<usize> {
        let mut digits = vec![0; self.dims.len()];
        for (slot, n) in digits.iter_mut().zip(&self.dims).rev() {
            *slot = index % n;
            index /= n;
        }
        digits
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn is_normalized(&self) -> bool {
        (self.norm() - 1.0).abs() < ALGEBRA_TOL
    }

    pub fn normalized(&self) -> Option<QuditState> {
        let n = self.norm();
        if n <= ALGEBRA_TOL {
            return None;
        }
        Some(QuditState { dims: self.dims.clone(), amps: self.amps.iter().map(|a| a / n).collect() })
    }

    pub fn scaled(&self, factor: Complex64) -> QuditState {
        QuditState { dims: self.dims.clone(), amps: self.amps.iter().map(|a| a * factor).collect() }
    }

    /// `self ⊗ other`, concatenating the digit lists.
    pub fn product(&self, other: &QuditState) -> QuditState {
        let mut dims = self.dims.clone();
        dims.extend_from_slice(&other.dims);
        let amps = self
            .amps
            .iter()
            .flat_map(|a| other.amps.iter().map(move |b| a * b))
            .collect();
        QuditState { dims, amps }
    }

    /// Iterator over `(digits, amplitude)` for entries with `|amplitude| > tol`.
    pub fn support(&self, tol: f64) -> impl Iterator<Item = (Vec<usize>, Complex64)> + '_ {
        self.amps
            .iter()
            .enumerate()
            .filter(move |(_, a)| a.norm() > tol)
            .map(|(i, a)| (self.digits_of(i), *a))
    }
}

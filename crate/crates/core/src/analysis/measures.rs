use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::hilbert::{QuditState, Register};
use crate::{ALGEBRA_TOL, OPERATOR_TOL};

fn check_normalized<R: Register + ?Sized>(r: &R) -> Result<()> {
    let n: f64 = r.amplitudes().iter().map(|a| a.norm_sqr()).sum();
    if (n - 1.0).abs() > OPERATOR_TOL {
        return Err(Error::NotNormalized(n.sqrt()));
    }
    Ok(())
}

/// `|⟨target|state⟩|²` for two normalized registers over the same dimensions.
pub fn fidelity<A: Register + ?Sized, B: Register + ?Sized>(state: &A, target: &B) -> Result<f64> {
    if state.dims() != target.dims() {
        return Err(Error::DimensionMismatch { expected: target.dims(), found: state.dims() });
    }
    check_normalized(state)?;
    check_normalized(target)?;
    let ov: Complex64 = target.amplitudes().iter().zip(state.amplitudes()).map(|(t, s)| t.conj() * s).sum();
    Ok(ov.norm_sqr().min(1.0))
}

/// Amplitudes reshaped into a matrix with the parties in `left` on the rows
/// and the remaining parties on the columns, each side row-major in party order.
pub fn bipartite_matrix<R: Register + ?Sized>(state: &R, left: &[usize]) -> Result<DMatrix<Complex64>> {
    let dims = state.dims();
    let mut is_left = vec![false; dims.len()];
    for &p in left {
        if p >= dims.len() || is_left[p] {
            return Err(Error::InvalidSetting(format!("bad party list {left:?} for {} parties", dims.len())));
        }
        is_left[p] = true;
    }
    let rows: usize = (0..dims.len()).filter(|&p| is_left[p]).map(|p| dims[p]).product();
    let cols: usize = (0..dims.len()).filter(|&p| !is_left[p]).map(|p| dims[p]).product();
    let mut m = DMatrix::from_element(rows, cols, Complex64::new(0.0, 0.0));
    let mut digits = vec![0usize; dims.len()];
    for &a in state.amplitudes() {
        let (mut r, mut c) = (0, 0);
        for (p, &d) in digits.iter().enumerate() {
            if is_left[p] {
                r = r * dims[p] + d;
            } else {
                c = c * dims[p] + d;
            }
        }
        m[(r, c)] = a;
        for p in (0..dims.len()).rev() {
            digits[p] += 1;
            if digits[p] < dims[p] {
                break;
            }
            digits[p] = 0;
        }
    }
    Ok(m)
}

/// Schmidt coefficients across the cut `left | rest`, descending, with values
/// at or below the algebraic tolerance dropped.
pub fn schmidt<R: Register + ?Sized>(state: &R, left: &[usize]) -> Result<Vec<f64>> {
    check_normalized(state)?;
    let m = bipartite_matrix(state, left)?;
    let mut sv: Vec<f64> = m.singular_values().iter().cloned().filter(|&s| s > ALGEBRA_TOL).collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    Ok(sv)
}

/// Entanglement entropy `−Σ λ² log₂ λ²` of a Schmidt spectrum, in bits.
pub fn entropy(schmidt: &[f64]) -> f64 {
    let h: f64 = schmidt
        .iter()
        .map(|s| s * s)
        .filter(|&p| p > 0.0)
        .map(|p| -p * p.log2())
        .sum();
    h.max(0.0)
}

/// Two-party state restricted to the rows and columns of the `left | rest`
/// matrix that carry weight. Returns the compact state and the kept indices.
pub fn compact_bipartite<R: Register + ?Sized>(
    state: &R,
    left: &[usize],
) -> Result<(QuditState, Vec<usize>, Vec<usize>)> {
    let m = bipartite_matrix(state, left)?;
    let rows: Vec<usize> = (0..m.nrows()).filter(|&r| m.row(r).iter().any(|a| a.norm() > ALGEBRA_TOL)).collect();
    let cols: Vec<usize> = (0..m.ncols()).filter(|&c| m.column(c).iter().any(|a| a.norm() > ALGEBRA_TOL)).collect();
    if rows.is_empty() {
        return Err(Error::ZeroState { killers: Vec::new() });
    }
    let amps = rows.iter().flat_map(|&r| cols.iter().map(move |&c| (r, c))).map(|(r, c)| m[(r, c)]).collect();
    Ok((QuditState::new(vec![rows.len(), cols.len()], amps)?, rows, cols))
}

/// Negativity `(‖ρ^{T_B}‖₁ − 1)/2` of the pure state across `left | rest`,
/// from the spectrum of the partially transposed density matrix.
///
/// The state is first restricted to its occupied rows and columns, which
/// leaves the spectrum unchanged apart from zeros.
pub fn negativity<R: Register + ?Sized>(state: &R, left: &[usize]) -> Result<f64> {
    check_normalized(state)?;
    let (compact, _, _) = compact_bipartite(state, left)?;
    let (a, b) = (compact.dims()[0], compact.dims()[1]);
    let m = |i: usize, j: usize| compact.amplitudes()[i * b + j];
    let n = a * b;
    let rho_tb = DMatrix::from_fn(n, n, |r, c| {
        let (i, j) = (r / b, r % b);
        let (k, l) = (c / b, c % b);
        m(i, l) * m(k, j).conj()
    });
    let eig = rho_tb.symmetric_eigenvalues();
    let trace_norm: f64 = eig.iter().map(|e| e.abs()).sum();
    Ok(((trace_norm - 1.0) / 2.0).max(0.0))
}

/// How closely a register matches the GHZ pattern `Σ_n c_n |n…n⟩`.
#[derive(Debug, Clone, PartialEq)]
pub struct GhzDiagnostics {
    /// Largest amplitude modulus away from the all-equal digit strings.
    pub off_diagonal_max: f64,
    /// `|c_n|` for `n = 0..min(dims)`.
    pub branch_magnitudes: Vec<f64>,
}

pub fn ghz_diagnostics(state: &QuditState) -> GhzDiagnostics {
    let levels = state.dims().iter().copied().min().unwrap_or(0);
    let mut off = 0.0f64;
    let mut branch = vec![0.0; levels];
    for (i, a) in state.amplitudes().iter().enumerate() {
        let digits = state.digits_of(i);
        if digits.iter().all(|&d| d == digits[0]) {
            branch[digits[0]] = a.norm();
        } else {
            off = off.max(a.norm());
        }
    }
    GhzDiagnostics { off_diagonal_max: off, branch_magnitudes: branch }
}

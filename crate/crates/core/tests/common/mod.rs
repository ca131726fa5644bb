#![allow(dead_code)]

use std::f64::consts::PI;

use hyperent_core::{Complex64, QuditState};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

pub fn random_coeffs(rng: &mut ChaCha8Rng, n: usize) -> Vec<Complex64> {
    (0..n).map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect()
}

pub fn random_state(rng: &mut ChaCha8Rng, dims: Vec<usize>) -> QuditState {
    let n = dims.iter().product();
    QuditState::new(dims, random_coeffs(rng, n)).unwrap().normalized().unwrap()
}

/// Probability table `P[a][b][k][l]` for the Fourier-family measurements,
/// built from explicit basis vectors.
pub fn probabilities(psi: &[Complex64], d: usize, alice: &[Vec<f64>; 2], bob: &[Vec<f64>; 2]) -> Vec<Vec<Vec<Vec<f64>>>> {
    let vec_for = |phases: &[f64], k: usize, sign: f64| -> Vec<Complex64> {
        (0..d)
            .map(|j| Complex64::from_polar(1.0 / (d as f64).sqrt(), phases[j] + sign * 2.0 * PI * (j * k) as f64 / d as f64))
            .collect()
    };
    let mut out = vec![vec![vec![vec![0.0; d]; d]; 2]; 2];
    for a in 0..2 {
        for b in 0..2 {
            for k in 0..d {
                let va = vec_for(&alice[a], k, 1.0);
                for l in 0..d {
                    let vb = vec_for(&bob[b], l, -1.0);
                    let mut z = Complex64::new(0.0, 0.0);
                    for j in 0..d {
                        for jp in 0..d {
                            z += (va[j] * vb[jp]).conj() * psi[j * d + jp];
                        }
                    }
                    out[a][b][k][l] = z.norm_sqr();
                }
            }
        }
    }
    out
}

/// `I_d` written directly from the inequality's definition.
pub fn cglmp_direct(psi: &[Complex64], d: usize, alice: &[Vec<f64>; 2], bob: &[Vec<f64>; 2]) -> f64 {
    let p = probabilities(psi, d, alice, bob);
    // P(A_a = B_b + x mod d)
    let eq = |a: usize, b: usize, x: i64| -> f64 {
        let mut s = 0.0;
        for l in 0..d {
            let k = (l as i64 + x).rem_euclid(d as i64) as usize;
            s += p[a][b][k][l];
        }
        s
    };
    let mut total = 0.0;
    for k in 0..(d / 2) as i64 {
        let w = if d == 2 { 1.0 } else { 1.0 - 2.0 * k as f64 / (d as f64 - 1.0) };
        // A1 = B1 + k, B1 = A2 + k + 1, A2 = B2 + k, B2 = A1 + k
        let plus = eq(0, 0, k) + eq(1, 0, -k - 1) + eq(1, 1, k) + eq(0, 1, -k);
        // A1 = B1 - k - 1, B1 = A2 - k, A2 = B2 - k - 1, B2 = A1 - k - 1
        let minus = eq(0, 0, -k - 1) + eq(1, 0, k) + eq(1, 1, -k - 1) + eq(0, 1, k + 1);
        total += w * (plus - minus);
    }
    total
}

/// CHSH `E₁₁ + E₁₂ − E₂₁ + E₂₂` from ±1 observables `Σ_k (−1)^k |k⟩⟨k|`.
pub fn chsh_correlators(psi: &[Complex64], alice: &[Vec<f64>; 2], bob: &[Vec<f64>; 2]) -> f64 {
    // For basis vectors (e^{iφ₀}|0⟩ ± e^{iφ₁}|1⟩)/√2 the observable is
    // [[0, e^{i(φ₀−φ₁)}], [e^{−i(φ₀−φ₁)}, 0]].
    let obs = |ph: &[f64]| {
        let z = Complex64::from_polar(1.0, ph[0] - ph[1]);
        [[c(0.0), z], [z.conj(), c(0.0)]]
    };
    let corr = |a: usize, b: usize| {
        let (oa, ob) = (obs(&alice[a]), obs(&bob[b]));
        let mut e = Complex64::new(0.0, 0.0);
        for i in 0..2 {
            for j in 0..2 {
                for k in 0..2 {
                    for l in 0..2 {
                        e += psi[i * 2 + j].conj() * oa[i][k] * ob[j][l] * psi[k * 2 + l];
                    }
                }
            }
        }
        e.re
    };
    corr(0, 0) + corr(0, 1) - corr(1, 0) + corr(1, 1)
}

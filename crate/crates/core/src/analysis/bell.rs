//! CGLMP inequality for two qudits with two settings per side.
//!
//! With `P(A_a − B_b ≡ x)` the probability that Alice's outcome for setting
//! `a` exceeds Bob's for setting `b` by `x` modulo `d`,
//!
//! ```text
//! I_d = Σ_{k=0}^{⌊d/2⌋−1} (1 − 2k/(d−1)) · [ P(A₁−B₁≡k) + P(A₂−B₁≡−k−1) + P(A₂−B₂≡k) + P(A₁−B₂≡−k)
//!                                         − P(A₁−B₁≡−k−1) − P(A₂−B₁≡k) − P(A₂−B₂≡−k−1) − P(A₁−B₂≡k+1) ]
//! ```
//!
//! Local hidden-variable models satisfy `I_d ≤ 2`. At `d = 2` this is CHSH.
//!
//! Measurements are drawn from the Fourier family: Alice's setting `a` has
//! basis vectors `|k⟩_a = Σ_j e^{iφ_{a,j}} ω^{jk} |j⟩/√d` and Bob's
//! `|l⟩_b = Σ_j e^{iθ_{b,j}} ω^{−jl} |j⟩/√d`, with `ω = e^{2πi/d}`.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hilbert::Register;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BellSettings {
    /// Local dimension.
    pub d: usize,
    pub restarts: usize,
    pub seed: u64,
    /// Iteration cap for each local search.
    pub max_iterations: usize,
}

impl BellSettings {
    pub const DEFAULT_RESTARTS: usize = 32;

    pub fn new(d: usize, seed: u64) -> Self {
        BellSettings { d, restarts: Self::DEFAULT_RESTARTS, seed, max_iterations: 2000 }
    }

    pub fn validate(&self) -> Result<()> {
        if self.d < 2 {
            return Err(Error::InvalidSetting(format!("Bell dimension must be at least 2, got {}", self.d)));
        }
        if self.restarts == 0 || self.max_iterations == 0 {
            return Err(Error::InvalidSetting("restarts and max_iterations must be positive".into()));
        }
        Ok(())
    }
}

/// Phase vectors for both settings of both parties.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BellPhases {
    pub d: usize,
    pub alice: [Vec<f64>; 2],
    pub bob: [Vec<f64>; 2],
}

impl BellPhases {
    pub fn zeros(d: usize) -> Self {
        BellPhases { d, alice: [vec![0.0; d], vec![0.0; d]], bob: [vec![0.0; d], vec![0.0; d]] }
    }

    /// Flat layout `[A₁, A₂, B₁, B₂]`, `d` entries each.
    pub fn from_flat(d: usize, x: &[f64]) -> Result<Self> {
        if x.len() != 4 * d {
            return Err(Error::DimensionMismatch { expected: vec![4 * d], found: vec![x.len()] });
        }
        let part = |i: usize| x[i * d..(i + 1) * d].to_vec();
        Ok(BellPhases { d, alice: [part(0), part(1)], bob: [part(2), part(3)] })
    }

    pub fn to_flat(&self) -> Vec<f64> {
        self.alice.iter().chain(&self.bob).flatten().copied().collect()
    }

    fn check(&self) -> Result<()> {
        if self.alice.iter().chain(&self.bob).any(|v| v.len() != self.d) {
            return Err(Error::InvalidSetting(format!("every phase vector needs {} entries", self.d)));
        }
        Ok(())
    }
}

/// Weights `w[a][b][k][l]` (flattened, `l` fastest) with `I_d = Σ w · P_ab(k, l)`.
pub fn cglmp_weights(d: usize) -> Vec<f64> {
    let mut w = vec![0.0; 4 * d * d];
    let m = |x: i64| x.rem_euclid(d as i64) as usize;
    let mut add = |a: usize, b: usize, diff: usize, v: f64| {
        for k in 0..d {
            let l = (k + d - diff) % d;
            w[((a * 2 + b) * d + k) * d + l] += v;
        }
    };
    for k in 0..(d / 2) as i64 {
        let c = if d == 2 { 1.0 } else { 1.0 - 2.0 * k as f64 / (d as f64 - 1.0) };
        add(0, 0, m(k), c);
        add(1, 0, m(-k - 1), c);
        add(1, 1, m(k), c);
        add(0, 1, m(-k), c);
        add(0, 0, m(-k - 1), -c);
        add(1, 0, m(k), -c);
        add(1, 1, m(-k - 1), -c);
        add(0, 1, m(k + 1), -c);
    }
    w
}

struct Evaluator {
    d: usize,
    psi: Vec<Complex64>,
    weights: Vec<f64>,
    /// `ω^{jk}` for `j, k ∈ 0..d`.
    omega: Vec<Complex64>,
}

impl Evaluator {
    fn new<R: Register + ?Sized>(state: &R, d: usize) -> Result<Self> {
        if state.dims() != [d, d] {
            return Err(Error::DimensionMismatch { expected: vec![d, d], found: state.dims() });
        }
        let omega = (0..d * d).map(|i| Complex64::from_polar(1.0, 2.0 * PI * ((i / d) * (i % d) % d) as f64 / d as f64)).collect();
        Ok(Evaluator { d, psi: state.amplitudes().to_vec(), weights: cglmp_weights(d), omega })
    }

    fn w(&self, j: usize, k: usize) -> Complex64 {
        self.omega[j * self.d + k]
    }

    /// Value and gradient over the flat phase layout.
    fn eval(&self, x: &[f64], want_grad: bool) -> (f64, Vec<f64>) {
        let d = self.d;
        let mut value = 0.0;
        let mut grad = vec![0.0; if want_grad { 4 * d } else { 0 }];
        let mut row = vec![Complex64::new(0.0, 0.0); d];
        let mut col = vec![Complex64::new(0.0, 0.0); d];
        for a in 0..2 {
            for b in 0..2 {
                let pa = &x[a * d..(a + 1) * d];
                let pb = &x[(2 + b) * d..(3 + b) * d];
                let phased: Vec<Complex64> = (0..d * d)
                    .map(|i| self.psi[i] * Complex64::from_polar(1.0 / d as f64, -pa[i / d] - pb[i % d]))
                    .collect();
                for k in 0..d {
                    for l in 0..d {
                        let wt = self.weights[((a * 2 + b) * d + k) * d + l];
                        if wt == 0.0 {
                            continue;
                        }
                        row.iter_mut().for_each(|r| *r = Complex64::new(0.0, 0.0));
                        col.iter_mut().for_each(|c| *c = Complex64::new(0.0, 0.0));
                        for j in 0..d {
                            let aj = self.w(j, k).conj();
                            for jp in 0..d {
                                let t = aj * self.w(jp, l) * phased[j * d + jp];
                                row[j] += t;
                                col[jp] += t;
                            }
                        }
                        let z: Complex64 = row.iter().sum();
                        value += wt * z.norm_sqr();
                        if want_grad {
                            for j in 0..d {
                                grad[a * d + j] += wt * 2.0 * (z.conj() * row[j]).im;
                                grad[(2 + b) * d + j] += wt * 2.0 * (z.conj() * col[j]).im;
                            }
                        }
                    }
                }
            }
        }
        (value, grad)
    }
}

/// `I_d` for the given measurement phases. The state must be a two-party
/// register with both local dimensions equal to `phases.d`.
pub fn cglmp_value<R: Register + ?Sized>(state: &R, phases: &BellPhases) -> Result<f64> {
    phases.check()?;
    Ok(Evaluator::new(state, phases.d)?.eval(&phases.to_flat(), false).0)
}

/// Gradient of `I_d` with respect to the flat phase layout.
pub fn cglmp_gradient<R: Register + ?Sized>(state: &R, phases: &BellPhases) -> Result<Vec<f64>> {
    phases.check()?;
    Ok(Evaluator::new(state, phases.d)?.eval(&phases.to_flat(), true).1)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BellOptimum {
    pub value: f64,
    pub phases: BellPhases,
    /// Index of the winning restart.
    pub restart: usize,
    pub start_values: Vec<f64>,
    pub restart_values: Vec<f64>,
    /// Max-norm of the analytic gradient at the reported phases.
    pub gradient_max: f64,
}

struct LocalResult {
    start: f64,
    value: f64,
    x: Vec<f64>,
    gradient_max: f64,
}

/// Quasi-Newton ascent (BFGS with Armijo backtracking) from `x0`.
fn local_search(ev: &Evaluator, x0: Vec<f64>, max_iterations: usize) -> LocalResult {
    let n = x0.len();
    let mut x = DVector::from_vec(x0);
    // minimize f = −I
    let f = |x: &DVector<f64>| {
        let (v, g) = ev.eval(x.as_slice(), true);
        (-v, DVector::from_iterator(g.len(), g.into_iter().map(|g| -g)))
    };
    let (mut fx, mut g) = f(&x);
    let start = -fx;
    let mut h = DMatrix::<f64>::identity(n, n);
    for _ in 0..max_iterations {
        if g.amax() < 1e-11 {
            break;
        }
        let mut p = -(&h * &g);
        let mut slope = g.dot(&p);
        if slope >= 0.0 {
            h = DMatrix::identity(n, n);
            p = -g.clone();
            slope = g.dot(&p);
        }
        let mut t = 1.0;
        let (x_new, f_new, g_new) = loop {
            let cand = &x + &p * t;
            let (fc, gc) = f(&cand);
            if fc <= fx + 1e-4 * t * slope || t < 1e-12 {
                break (cand, fc, gc);
            }
            t *= 0.5;
        };
        if f_new > fx {
            break;
        }
        let s = &x_new - &x;
        let y = &g_new - &g;
        let sy = s.dot(&y);
        if sy > 1e-14 {
            let rho = 1.0 / sy;
            let hy = &h * &y;
            let yhy = y.dot(&hy);
            h += (&s * s.transpose()) * (rho * (1.0 + rho * yhy)) - (&hy * s.transpose() + &s * hy.transpose()) * rho;
        }
        let done = fx - f_new <= f64::EPSILON * fx.abs() && g_new.amax() < 1e-9;
        x = x_new;
        fx = f_new;
        g = g_new;
        if done {
            break;
        }
    }
    LocalResult { start, value: -fx, x: x.as_slice().to_vec(), gradient_max: g.amax() }
}

/// Multi-restart maximization of `I_d` over the Fourier family.
///
/// Restart `i` starts from phases drawn uniformly in `[0, 2π)` by a ChaCha8
/// generator seeded with `settings.seed` on stream `i`. Restarts run in
/// parallel; the best value wins, ties going to the lowest restart index, so
/// the result depends only on the settings.
pub fn optimize_bell<R: Register + ?Sized + Sync>(state: &R, settings: &BellSettings) -> Result<BellOptimum> {
    settings.validate()?;
    let d = settings.d;
    let ev = Evaluator::new(state, d)?;
    let results: Vec<LocalResult> = (0..settings.restarts)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(settings.seed);
            rng.set_stream(i as u64);
            let x0 = (0..4 * d).map(|_| rng.gen_range(0.0..2.0 * PI)).collect();
            local_search(&ev, x0, settings.max_iterations)
        })
        .collect();
    let mut best = 0;
    for (i, r) in results.iter().enumerate() {
        if r.value > results[best].value {
            best = i;
        }
    }
    let winner = &results[best];
    Ok(BellOptimum {
        value: winner.value,
        phases: BellPhases::from_flat(d, &winner.x)?,
        restart: best,
        start_values: results.iter().map(|r| r.start).collect(),
        restart_values: results.iter().map(|r| r.value).collect(),
        gradient_max: winner.gradient_max,
    })
}

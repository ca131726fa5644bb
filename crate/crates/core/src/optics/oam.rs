use std::collections::BTreeMap;

use num_complex::Complex64;

use super::NamedElement;
use crate::error::{Error, Result};
use crate::hilbert::operator::spectral_norm;
use crate::hilbert::{max_abs, CMatrix, ModeBasis, PhotonOperator, StateVector, ZERO};

/// One diffraction component of a hologram: shift OAM by `shift` with
/// complex amplitude `weight`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HologramTerm {
    pub shift: i32,
    pub weight: Complex64,
}

impl HologramTerm {
    pub fn new(shift: i32, weight: Complex64) -> Self {
        HologramTerm { shift, weight }
    }
}

/// OAM control settings: optional MMF filter, then the hologram, then a
/// uniform amplitude loss `√efficiency`.
#[derive(Debug, Clone, PartialEq)]
pub struct OamcSetting {
    pub use_mmf: bool,
    pub hologram: Vec<HologramTerm>,
    pub efficiency: f64,
}

impl Default for OamcSetting {
    fn default() -> Self {
        OamcSetting {
            use_mmf: false,
            hologram: vec![HologramTerm::new(0, Complex64::new(1.0, 0.0))],
            efficiency: 1.0,
        }
    }
}

impl OamcSetting {
    /// Filter to `l = 0` and imprint `Σ w_l |l⟩`.
    pub fn preparing(weights: &[(i32, Complex64)]) -> Self {
        OamcSetting {
            use_mmf: true,
            hologram: weights.iter().map(|&(l, w)| HologramTerm::new(l, w)).collect(),
            efficiency: 1.0,
        }
    }

    fn validate(&self) -> Result<()> {
        if !(self.efficiency > 0.0 && self.efficiency <= 1.0) {
            return Err(Error::InvalidSetting(format!(
                "OAMC efficiency must lie in (0, 1], got {}",
                self.efficiency
            )));
        }
        validate_hologram(&self.hologram)
    }
}

fn validate_hologram(terms: &[HologramTerm]) -> Result<()> {
    if terms.iter().any(|t| !(t.weight.re.is_finite() && t.weight.im.is_finite())) {
        return Err(Error::InvalidSetting("hologram weights must be finite".into()));
    }
    if terms.iter().all(|t| t.weight == ZERO) {
        return Err(Error::InvalidSetting("hologram weights are all zero".into()));
    }
    Ok(())
}

/// A hologram operator, normalized so its largest singular value is at most 1.
#[derive(Debug, Clone)]
pub struct CghOperator {
    pub operator: PhotonOperator,
    /// Factor applied to `Σ w_k Shift(Δl_k)` to enforce the norm bound.
    pub scale: f64,
    terms: Vec<HologramTerm>,
}

/// Result of pushing a state through a hologram with explicit bookkeeping of
/// the weight shifted outside the OAM window.
#[derive(Debug, Clone)]
pub struct HologramTransfer {
    pub output: StateVector,
    pub retained_weight: f64,
    pub leaked_weight: f64,
}

impl CghOperator {
    pub fn terms(&self) -> &[HologramTerm] {
        &self.terms
    }

    /// Applies the hologram and reports the (scaled) weight that left the window.
    pub fn transfer(&self, input: &StateVector) -> Result<HologramTransfer> {
        input.expect_arity(1)?;
        let basis = *self.operator.basis();
        input.check_basis(&basis)?;
        let mut out = vec![ZERO; basis.dim()];
        let mut leaked: BTreeMap<(usize, usize, i32), Complex64> = BTreeMap::new();
        for (i, &a) in input.amplitudes().iter().enumerate() {
            if a == ZERO {
                continue;
            }
            let mode = basis.decode(i).expect("index within basis");
            for t in &self.terms {
                let contribution = t.weight * a * self.scale;
                let mut shifted = mode;
                shifted.oam += t.shift;
                if basis.contains_oam(shifted.oam) {
                    out[basis.index(shifted)?] += contribution;
                } else {
                    *leaked.entry((mode.path.index(), mode.pol.index(), shifted.oam)).or_insert(ZERO) += contribution;
                }
            }
        }
        let output = StateVector::new(basis, 1, out)?;
        Ok(HologramTransfer {
            retained_weight: output.norm_sqr(),
            leaked_weight: leaked.values().map(|z| z.norm_sqr()).sum(),
            output,
        })
    }
}

fn shift_matrix(basis: &ModeBasis, terms: &[HologramTerm]) -> CMatrix {
    let n = basis.oam_dim();
    let mut m = CMatrix::zeros(n, n);
    for l in basis.oam_min()..=basis.oam_max() {
        for t in terms {
            let target = l + t.shift;
            if basis.contains_oam(target) {
                let (row, col) = ((target - basis.oam_min()) as usize, (l - basis.oam_min()) as usize);
                m[(row, col)] += t.weight;
            }
        }
    }
    m
}

/// Hologram `Σ w_k Shift(Δl_k)` truncated to the OAM window.
pub fn cgh(basis: ModeBasis, terms: &[HologramTerm]) -> Result<CghOperator> {
    if terms.is_empty() {
        return Err(Error::InvalidSetting("hologram has no terms".into()));
    }
    validate_hologram(terms)?;
    let m = shift_matrix(&basis, terms);
    if max_abs(&m) == 0.0 {
        return Err(Error::EmptyHologram);
    }
    let sigma = spectral_norm(&m);
    let scale = if sigma > 1.0 { 1.0 / sigma } else { 1.0 };
    Ok(CghOperator {
        operator: PhotonOperator::on_oam(basis, &m.map(|z| z * scale))?,
        scale,
        terms: terms.to_vec(),
    })
}

/// Mono-mode fiber: projector onto `l = 0`.
pub fn mmf_project(basis: ModeBasis) -> PhotonOperator {
    let n = basis.oam_dim();
    let slot = basis.oam_slot(0).expect("basis always contains l = 0");
    let mut m = CMatrix::zeros(n, n);
    m[(slot, slot)] = Complex64::new(1.0, 0.0);
    PhotonOperator::on_oam(basis, &m).expect("OAM lift has the basis shape")
}

/// OAMC operator with its amplitude bookkeeping.
#[derive(Debug, Clone)]
pub struct OamcOperator {
    pub operator: PhotonOperator,
    /// `√efficiency × hologram scale`.
    pub amplitude_scale: f64,
}

impl OamcOperator {
    /// Uniform probability factor this control multiplies into the success probability.
    pub fn success_factor(&self) -> f64 {
        self.amplitude_scale * self.amplitude_scale
    }
}

pub fn oamc_elements(basis: ModeBasis, setting: &OamcSetting) -> Result<(Vec<NamedElement>, f64)> {
    setting.validate()?;
    let mut out = Vec::with_capacity(3);
    if setting.use_mmf {
        out.push(NamedElement { name: "MMF".into(), operator: mmf_project(basis) });
    }
    let hologram = cgh(basis, &setting.hologram)?;
    let scale = hologram.scale;
    out.push(NamedElement { name: "CGH".into(), operator: hologram.operator });
    if setting.efficiency < 1.0 {
        out.push(NamedElement {
            name: "OAMC efficiency".into(),
            operator: PhotonOperator::identity(basis).scaled(setting.efficiency.sqrt())?,
        });
    }
    Ok((out, setting.efficiency.sqrt() * scale))
}

/// `√efficiency · CGH · MMF` (MMF only when enabled).
pub fn oamc_operator(basis: ModeBasis, setting: &OamcSetting) -> Result<OamcOperator> {
    let (elements, amplitude_scale) = oamc_elements(basis, setting)?;
    let mut acc = PhotonOperator::identity(basis);
    for element in elements {
        acc = element.operator.after(&acc)?;
    }
    Ok(OamcOperator { operator: acc, amplitude_scale })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hilbert::{Arm, Mode, OperatorKind, Pol};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn oam_ket(basis: ModeBasis, l: i32) -> StateVector {
        StateVector::ket(basis, Mode::new(Arm::Medium, Pol::V, l)).unwrap()
    }

    fn amp(state: &StateVector, l: i32) -> Complex64 {
        state.amplitude(Mode::new(Arm::Medium, Pol::V, l)).unwrap()
    }

    #[test]
    fn single_shift_raises_oam() {
        let basis = ModeBasis::default();
        let h = cgh(basis, &[HologramTerm::new(1, c(1.0))]).unwrap();
        assert_eq!(h.scale, 1.0);
        let out = h.operator.apply(&oam_ket(basis, 0)).unwrap();
        assert_eq!(amp(&out, 1), c(1.0));
        assert!((out.norm_sqr() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn superposition_hologram_is_linear() {
        let basis = ModeBasis::default();
        let h = cgh(basis, &[HologramTerm::new(0, c(FRAC_1_SQRT_2)), HologramTerm::new(1, c(FRAC_1_SQRT_2))]).unwrap();
        assert!(h.scale < 1.0);
        assert!(h.operator.operator_norm() <= 1.0 + 1e-12);
        let out = h.operator.apply(&oam_ket(basis, 0)).unwrap();
        assert!((amp(&out, 0) - c(FRAC_1_SQRT_2 * h.scale)).norm() < 1e-12);
        assert!((amp(&out, 1) - c(FRAC_1_SQRT_2 * h.scale)).norm() < 1e-12);
        let unit = out.normalized().unwrap();
        assert!((amp(&unit, 0) - c(FRAC_1_SQRT_2)).norm() < 1e-12);
    }

    #[test]
    fn shift_past_window_leaks_everything() {
        let basis = ModeBasis::default();
        let h = cgh(basis, &[HologramTerm::new(1, c(1.0))]).unwrap();
        let t = h.transfer(&oam_ket(basis, basis.oam_max())).unwrap();
        assert!(t.output.is_zero());
        assert!((t.leaked_weight - 1.0).abs() < 1e-15);
        assert_eq!(t.retained_weight, 0.0);
    }

    #[test]
    fn hologram_with_nothing_in_window_is_an_error() {
        let basis = ModeBasis::default();
        assert_eq!(cgh(basis, &[HologramTerm::new(9, c(1.0))]).unwrap_err(), Error::EmptyHologram);
        assert!(matches!(cgh(basis, &[HologramTerm::new(0, c(0.0))]), Err(Error::InvalidSetting(_))));
        assert!(matches!(cgh(basis, &[]), Err(Error::InvalidSetting(_))));
    }

    #[test]
    fn transfer_matches_operator_and_conserves_weight() {
        let basis = ModeBasis::default();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..50 {
            let shift = rng.gen_range(-4..=4);
            let phase = rng.gen_range(0.0..std::f64::consts::TAU);
            let h = cgh(basis, &[HologramTerm::new(shift, Complex64::from_polar(1.0, phase))]);
            let Ok(h) = h else { continue };
            let amps = (0..basis.dim()).map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
            let input = StateVector::new(basis, 1, amps).unwrap().normalized().unwrap();
            let t = h.transfer(&input).unwrap();
            let direct = h.operator.apply(&input).unwrap();
            assert!(t.output.amplitudes().iter().zip(direct.amplitudes()).all(|(a, b)| (a - b).norm() < 1e-12));
            assert!((t.retained_weight + t.leaked_weight - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn mmf_passes_only_zero() {
        let basis = ModeBasis::default();
        let p = mmf_project(basis);
        assert_eq!(p.kind(), OperatorKind::Projector);
        assert_eq!(p.apply(&oam_ket(basis, 0)).unwrap(), oam_ket(basis, 0));
        assert!(p.apply(&oam_ket(basis, 2)).unwrap().is_zero());
        let sup = StateVector::superposition(
            basis,
            &[(Mode::new(Arm::Medium, Pol::V, 0), c(FRAC_1_SQRT_2)), (Mode::new(Arm::Medium, Pol::V, 1), c(FRAC_1_SQRT_2))],
        )
        .unwrap();
        let out = p.apply(&sup).unwrap();
        assert!((out.norm_sqr() - 0.5).abs() < 1e-15);
        assert_eq!(amp(&out, 1), c(0.0));
    }

    #[test]
    fn oamc_filter_then_imprint() {
        let basis = ModeBasis::default();
        let setting = OamcSetting::preparing(&[(2, c(1.0))]);
        let op = oamc_operator(basis, &setting).unwrap();
        let out = op.operator.apply(&oam_ket(basis, 0)).unwrap();
        assert_eq!(amp(&out, 2), c(1.0));
        assert_eq!(op.success_factor(), 1.0);
        // MMF first removes l = 1, so the shift has nothing to act on.
        let shift1 = oamc_operator(basis, &OamcSetting::preparing(&[(1, c(1.0))])).unwrap();
        assert!(shift1.operator.apply(&oam_ket(basis, 1)).unwrap().is_zero());
    }

    #[test]
    fn oamc_efficiency_scales_amplitude() {
        let basis = ModeBasis::default();
        let setting = OamcSetting { efficiency: 0.5, ..OamcSetting::default() };
        let op = oamc_operator(basis, &setting).unwrap();
        let out = op.operator.apply(&oam_ket(basis, 0)).unwrap();
        assert!((amp(&out, 0) - c(0.5f64.sqrt())).norm() < 1e-15);
        assert!((op.success_factor() - 0.5).abs() < 1e-15);
        assert!((out.norm_sqr() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn oamc_rejects_bad_efficiency() {
        let basis = ModeBasis::default();
        for eff in [0.0, -0.1, 1.5, f64::NAN] {
            let setting = OamcSetting { efficiency: eff, ..OamcSetting::default() };
            assert!(matches!(oamc_operator(basis, &setting), Err(Error::InvalidSetting(_))));
        }
    }
}

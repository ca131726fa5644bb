use nalgebra::DMatrix;
use num_complex::Complex64;

use super::reading::{Degree, DegreeEncoding, PairTable};
use super::TargetSpec;
use crate::error::{Error, Result};
use crate::hilbert::{Arm, ModeBasis, Photon, Pol, QuditState};
use crate::optics::{OamcSetting, PcSetting};
use crate::source::{branch_state, build_pair_state, PairState, SetupConfig};
use crate::{ALGEBRA_TOL, OPERATOR_TOL};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// A designed setup together with the reading it was designed for.
#[derive(Debug, Clone, PartialEq)]
pub struct Design {
    pub config: SetupConfig,
    pub target: QuditState,
    pub encoding: DegreeEncoding,
    pub notices: Vec<String>,
    /// Number of occupied target rows, for OAM designs.
    pub group: Option<usize>,
}

impl Design {
    pub fn build(&self) -> Result<PairState> {
        build_pair_state(&self.config)
    }

    pub fn read(&self) -> Result<QuditState> {
        self.encoding.read(&self.build()?)
    }

    /// `|⟨target|read(build(config))⟩|²`.
    pub fn round_trip_fidelity(&self) -> Result<f64> {
        let got = self.read()?;
        Ok(overlap(&self.target, &got).norm_sqr().min(1.0))
    }
}

fn overlap(a: &QuditState, b: &QuditState) -> Complex64 {
    a.amplitudes().iter().zip(b.amplitudes()).map(|(x, y)| x.conj() * y).sum()
}

/// Polarization preparation from an H input: `None` for H, waveplates for V.
pub(crate) fn pol_control(pol: Pol) -> Option<PcSetting> {
    match pol {
        Pol::H => None,
        Pol::V => Some(PcSetting { hwp_angle: std::f64::consts::FRAC_PI_4, qwp_angle: std::f64::consts::FRAC_PI_2, ..PcSetting::default() }),
    }
}

/// Idler (or signal) OAM preparation `Σ w_l |l⟩` from `l = 0`, dropping zero weights.
fn oam_control(weights: &[Complex64]) -> Option<OamcSetting> {
    let terms: Vec<(i32, Complex64)> =
        weights.iter().enumerate().filter(|(_, w)| w.norm() > 0.0).map(|(l, &w)| (l as i32, w)).collect();
    if terms.len() == 1 && terms[0].0 == 0 {
        return None;
    }
    Some(OamcSetting::preparing(&terms))
}

/// Sets the arm amplitudes so that the reading of each branch equals
/// `desired[arm]` exactly. Arms without a desired part get zero amplitude.
///
/// The branch reading must already be proportional to the desired part;
/// the proportionality constant and the branch phase are absorbed into `c`.
pub(crate) fn calibrate(
    cfg: &mut SetupConfig,
    encoding: &DegreeEncoding,
    desired: &[Option<QuditState>; 3],
) -> Result<()> {
    let mut amps = [ZERO; 3];
    for arm in Arm::ALL {
        let Some(d) = &desired[arm.index()] else { continue };
        let dd = d.norm_sqr();
        if dd <= ALGEBRA_TOL * ALGEBRA_TOL {
            continue;
        }
        let (branch, killer) = branch_state(cfg, arm)?;
        if let Some(k) = killer {
            return Err(Error::Infeasible(format!("branch {} is blocked by {k}", arm.label())));
        }
        let r = encoding.project(&branch)?;
        let lambda = overlap(d, &r) / dd;
        let residual: f64 = r
            .amplitudes()
            .iter()
            .zip(d.amplitudes())
            .map(|(x, y)| (x - lambda * y).norm_sqr())
            .sum::<f64>()
            .sqrt();
        if lambda.norm() <= ALGEBRA_TOL || residual > OPERATOR_TOL * r.norm().max(1.0) {
            return Err(Error::Infeasible(format!(
                "branch {} cannot be steered onto its share of the target",
                arm.label()
            )));
        }
        amps[arm.index()] = Complex64::from_polar(1.0, -cfg.branch_phase(arm)) / lambda;
    }
    if amps.iter().all(|a| *a == ZERO) {
        return Err(Error::Infeasible("target is the zero vector".into()));
    }
    cfg.amplitudes = amps;
    Ok(())
}

fn unit(dims: Vec<usize>, digits: &[usize], amp: Complex64) -> Result<QuditState> {
    QuditState::from_terms(dims, &[(digits.to_vec(), amp)])
}

fn set_pols(cfg: &mut SetupConfig, arm: Arm, (s, i): (Pol, Pol)) {
    cfg.signal_controls[arm.index()].pc = pol_control(s);
    cfg.idler_controls[arm.index()].pc = pol_control(i);
}

/// Arm settings and amplitudes whose polarization-pair reading is the
/// target qutrit (`dim = 3`) or ququart (`dim = 4`).
///
/// Digit `n` of a qutrit goes to arm `n`; the uniform target reproduces the
/// per-arm polarizations `HH, HV, VV`. A ququart with at most three nonzero
/// digits places them on arms in order. With all four nonzero, the short arm
/// carries `t₀|HH⟩ + t₁|HV⟩` through an idler superposition, the medium arm
/// `VV` and the long arm `VH`.
pub fn design_qudit_controls(target: &TargetSpec, dim: usize) -> Result<Design> {
    if dim != 3 && dim != 4 {
        return Err(Error::InvalidSetting(format!("qudit design supports dimension 3 or 4, got {dim}")));
    }
    let t = target.state();
    if t.dims() != [dim] {
        return Err(Error::DimensionMismatch { expected: vec![dim], found: t.dims().to_vec() });
    }
    let table = if dim == 3 { PairTable::qutrit() } else { PairTable::ququart() };
    let encoding = DegreeEncoding::new(vec![Degree::PolarizationPair], table.clone(), 1)?;
    let mut cfg = SetupConfig::balanced(ModeBasis::default());
    let mut desired: [Option<QuditState>; 3] = Default::default();
    let coeff = t.amplitudes();
    let nonzero: Vec<usize> = (0..dim).filter(|&n| coeff[n].norm() > ALGEBRA_TOL).collect();

    if dim == 3 {
        for arm in Arm::ALL {
            let n = arm.index();
            set_pols(&mut cfg, arm, table.pair(n).expect("qutrit digit"));
            if coeff[n].norm() > ALGEBRA_TOL {
                desired[n] = Some(unit(vec![3], &[n], coeff[n])?);
            }
        }
    } else if nonzero.len() <= 3 {
        for (arm, &n) in Arm::ALL.into_iter().zip(&nonzero) {
            set_pols(&mut cfg, arm, table.pair(n).expect("ququart digit"));
            desired[arm.index()] = Some(unit(vec![4], &[n], coeff[n])?);
        }
    } else {
        let mut amps = vec![ZERO; 4];
        amps[0] = coeff[0];
        amps[1] = coeff[1];
        cfg.idler_controls[0].pc = Some(PcSetting::preparing([coeff[0], coeff[1]])?);
        desired[0] = Some(QuditState::new(vec![4], amps)?);
        set_pols(&mut cfg, Arm::Medium, (Pol::V, Pol::V));
        desired[1] = Some(unit(vec![4], &[2], coeff[2])?);
        set_pols(&mut cfg, Arm::Long, (Pol::V, Pol::H));
        desired[2] = Some(unit(vec![4], &[3], coeff[3])?);
    }
    calibrate(&mut cfg, &encoding, &desired)?;
    Ok(Design {
        config: cfg,
        target: t.clone(),
        encoding,
        notices: target.notice().map(String::from).into_iter().collect(),
        group: None,
    })
}

fn row(t: &QuditState, m: usize) -> Vec<Complex64> {
    t.amplitudes()[3 * m..3 * m + 3].to_vec()
}

/// Arm settings for an arbitrary two-photon OAM qutrit state `Σ α_mn |m⟩|n⟩`
/// (signal OAM `m`, idler OAM `n`).
///
/// Targets are grouped by how many rows `m` are occupied. One row: every arm
/// has signal `l = m` and the idler hologram prepares the row. Two rows
/// `m₁ < m₂`: short and medium arms each carry half of row `m₁`, the long arm
/// carries row `m₂`. Three rows: arm `a` carries row `a`.
pub fn design_oam_controls(target: &TargetSpec) -> Result<Design> {
    let t = target.state();
    if t.dims() != [3, 3] {
        return Err(Error::DimensionMismatch { expected: vec![3, 3], found: t.dims().to_vec() });
    }
    let encoding = DegreeEncoding::new(vec![Degree::Oam(Photon::Signal), Degree::Oam(Photon::Idler)], PairTable::qutrit(), 3)?;
    let rows: Vec<usize> =
        (0..3).filter(|&m| row(t, m).iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt() > ALGEBRA_TOL).collect();
    let assignment: [(usize, f64); 3] = match rows.as_slice() {
        [r] => [(*r, 1.0 / 3.0); 3],
        [r1, r2] => [(*r1, 0.5), (*r1, 0.5), (*r2, 1.0)],
        [_, _, _] => [(0, 1.0), (1, 1.0), (2, 1.0)],
        _ => return Err(Error::Infeasible("target is the zero vector".into())),
    };
    let mut cfg = SetupConfig::balanced(ModeBasis::default());
    let mut desired: [Option<QuditState>; 3] = Default::default();
    for arm in Arm::ALL {
        let (m, share) = assignment[arm.index()];
        let weights = row(t, m);
        cfg.signal_controls[arm.index()].input_oam = m as i32;
        cfg.idler_controls[arm.index()].oamc = oam_control(&weights);
        let mut amps = vec![ZERO; 9];
        for (n, w) in weights.iter().enumerate() {
            amps[3 * m + n] = w * share;
        }
        desired[arm.index()] = Some(QuditState::new(vec![3, 3], amps)?);
    }
    calibrate(&mut cfg, &encoding, &desired)?;
    Ok(Design {
        config: cfg,
        target: t.clone(),
        encoding,
        notices: target.notice().map(String::from).into_iter().collect(),
        group: Some(rows.len()),
    })
}

/// Rank of a matrix at the operator tolerance, relative to its largest singular value.
fn numeric_rank(m: &DMatrix<Complex64>) -> usize {
    let sv = m.clone().singular_values();
    let top = sv.iter().cloned().fold(0.0, f64::max);
    sv.iter().filter(|&&s| s > OPERATOR_TOL * top.max(1.0)).count()
}

/// Arm settings for a three-qutrit state `Σ α_mnp |m⟩|n⟩|p⟩` read as
/// (polarization pair, signal OAM, idler OAM).
///
/// Every branch is a product of one signal and one idler state, so a
/// reachable target must split into at most three such products. The
/// signal|idler amplitude matrix over (polarization, OAM) must have rank at
/// most 3; the construction then uses the singular vectors of each
/// polarization-pair slice and needs the slice ranks to total at most 3.
pub fn design_tensor_controls(target: &TargetSpec) -> Result<Design> {
    let t = target.state();
    if t.dims() != [3, 3, 3] {
        return Err(Error::DimensionMismatch { expected: vec![3, 3, 3], found: t.dims().to_vec() });
    }
    let table = PairTable::qutrit();
    let encoding = DegreeEncoding::new(
        vec![Degree::PolarizationPair, Degree::Oam(Photon::Signal), Degree::Oam(Photon::Idler)],
        table.clone(),
        3,
    )?;
    let slice = |n: usize| DMatrix::from_fn(3, 3, |l, k| t.amplitudes()[9 * n + 3 * l + k]);

    let mut bipartite = DMatrix::from_element(6, 6, ZERO);
    for n in 0..3 {
        let (s, i) = table.pair(n).expect("qutrit digit");
        bipartite.view_mut((3 * s.index(), 3 * i.index()), (3, 3)).copy_from(&slice(n));
    }
    let rank = numeric_rank(&bipartite);
    if rank > 3 {
        return Err(Error::Infeasible(format!(
            "signal|idler Schmidt rank is {rank}, but three same-arm product branches reach at most 3"
        )));
    }

    let mut terms = Vec::new();
    for n in 0..3 {
        let a = slice(n);
        let svd = a.clone().svd(true, true);
        let (u, vt) = (svd.u.expect("u requested"), svd.v_t.expect("v_t requested"));
        let top = svd.singular_values.iter().cloned().fold(0.0, f64::max);
        for (k, &s) in svd.singular_values.iter().enumerate() {
            if s > OPERATOR_TOL * top.max(1.0) && s > ALGEBRA_TOL {
                let sig: Vec<Complex64> = u.column(k).iter().cloned().collect();
                let idl: Vec<Complex64> = vt.row(k).iter().cloned().collect();
                terms.push((n, s, sig, idl));
            }
        }
    }
    if terms.len() > 3 {
        let counts: Vec<usize> = (0..3).map(|n| terms.iter().filter(|t| t.0 == n).count()).collect();
        return Err(Error::Infeasible(format!(
            "polarization-pair slices need {} product branches (ranks {:?}), more than the three arms",
            terms.len(),
            counts
        )));
    }

    let mut cfg = SetupConfig::balanced(ModeBasis::default());
    let mut desired: [Option<QuditState>; 3] = Default::default();
    for (arm, (n, s, sig, idl)) in Arm::ALL.into_iter().zip(&terms) {
        let a = arm.index();
        set_pols(&mut cfg, arm, table.pair(*n).expect("qutrit digit"));
        cfg.signal_controls[a].oamc = oam_control(sig);
        cfg.idler_controls[a].oamc = oam_control(idl);
        let mut amps = vec![ZERO; 27];
        for l in 0..3 {
            for k in 0..3 {
                amps[9 * n + 3 * l + k] = sig[l] * idl[k] * *s;
            }
        }
        desired[a] = Some(QuditState::new(vec![3, 3, 3], amps)?);
    }
    calibrate(&mut cfg, &encoding, &desired)?;
    Ok(Design {
        config: cfg,
        target: t.clone(),
        encoding,
        notices: target.notice().map(String::from).into_iter().collect(),
        group: None,
    })
}

use num_complex::Complex64;

use super::design::{calibrate, pol_control, Design};
use super::reading::{Degree, DegreeEncoding, PairTable};
use crate::error::{Error, Result};
use crate::hilbert::{Arm, ModeBasis, Photon, QuditState};
use crate::source::SetupConfig;

const ALLOWED: [Degree; 5] = [
    Degree::Path(Photon::Signal),
    Degree::Path(Photon::Idler),
    Degree::PolarizationPair,
    Degree::Oam(Photon::Signal),
    Degree::Oam(Photon::Idler),
];

impl DegreeEncoding {
    /// Standard GHZ readings: 3 → (path, path, polarization pair),
    /// 4 → (path, path, OAM, OAM), 5 → all five degrees.
    ///
    /// Both path digits come from the single arm label shared by the pair,
    /// so they are always equal.
    pub fn ghz(parties: usize) -> Result<DegreeEncoding> {
        let [ps, pi, pol, os, oi] = ALLOWED;
        let degrees = match parties {
            3 => vec![ps, pi, pol],
            4 => vec![ps, pi, os, oi],
            5 => vec![ps, pi, pol, os, oi],
            _ => return Err(Error::UnsupportedDegrees(format!("no standard GHZ reading with {parties} degrees"))),
        };
        DegreeEncoding::new(degrees, PairTable::qutrit(), 3)
    }
}

/// Setup whose reading in `encoding` is `(|0…0⟩ + |1…1⟩ + |2…2⟩)/√3`.
///
/// Arm `n` carries polarization pair `n` and OAM `n` on both photons, for
/// whichever of those degrees are read.
pub fn assemble_ghz(encoding: &DegreeEncoding) -> Result<Design> {
    let degrees = encoding.degrees();
    for (i, d) in degrees.iter().enumerate() {
        if !ALLOWED.contains(d) {
            return Err(Error::UnsupportedDegrees(format!("{d:?} is not a qutrit GHZ degree")));
        }
        if degrees[..i].contains(d) {
            return Err(Error::UnsupportedDegrees(format!("{d:?} listed twice")));
        }
    }
    if encoding.table().dim() != 3 || encoding.oam_dim() != 3 {
        return Err(Error::UnsupportedDegrees("GHZ assembly needs qutrit pair table and three OAM values".into()));
    }
    let k = degrees.len();
    let uses_pol = degrees.contains(&Degree::PolarizationPair);
    let w = Complex64::new(1.0 / 3f64.sqrt(), 0.0);
    let mut cfg = SetupConfig::balanced(ModeBasis::default());
    let mut desired: [Option<QuditState>; 3] = Default::default();
    for arm in Arm::ALL {
        let n = arm.index();
        if uses_pol {
            let (s, i) = encoding.table().pair(n).expect("qutrit digit");
            cfg.signal_controls[n].pc = pol_control(s);
            cfg.idler_controls[n].pc = pol_control(i);
        }
        for photon in [Photon::Signal, Photon::Idler] {
            if degrees.contains(&Degree::Oam(photon)) {
                cfg.controls_mut(photon)[n].input_oam = n as i32;
            }
        }
        desired[n] = Some(QuditState::from_terms(vec![3; k], &[(vec![n; k], w)])?);
    }
    calibrate(&mut cfg, encoding, &desired)?;
    Ok(Design { config: cfg, target: QuditState::ghz(k, 3)?, encoding: encoding.clone(), notices: Vec::new(), group: None })
}

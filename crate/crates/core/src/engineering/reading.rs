use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::hilbert::{Mode, ModeBasis, Photon, Pol, QuditState, Register, StateVector};
use crate::source::PairState;
use crate::ALGEBRA_TOL;

/// Injective map from two-photon polarization pairs `(signal, idler)` to
/// digits `0..n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairTable {
    entries: Vec<((Pol, Pol), usize)>,
}

impl PairTable {
    pub fn new(entries: Vec<((Pol, Pol), usize)>) -> Result<Self> {
        let n = entries.len();
        let mut seen_pairs = Vec::with_capacity(n);
        let mut seen_digits = vec![false; n];
        for &(pair, digit) in &entries {
            if seen_pairs.contains(&pair) {
                return Err(Error::InvalidSetting(format!("pair {pair:?} listed twice")));
            }
            if digit >= n || seen_digits[digit] {
                return Err(Error::InvalidSetting(format!("digits must be a permutation of 0..{n}")));
            }
            seen_pairs.push(pair);
            seen_digits[digit] = true;
        }
        if n == 0 {
            return Err(Error::InvalidSetting("empty pair table".into()));
        }
        Ok(PairTable { entries })
    }

    /// `HH → 0, HV → 1, VV → 2`.
    pub fn qutrit() -> Self {
        PairTable { entries: vec![((Pol::H, Pol::H), 0), ((Pol::H, Pol::V), 1), ((Pol::V, Pol::V), 2)] }
    }

    /// The qutrit table plus `VH → 3`.
    pub fn ququart() -> Self {
        let mut t = Self::qutrit();
        t.entries.push(((Pol::V, Pol::H), 3));
        t
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn digit(&self, signal: Pol, idler: Pol) -> Option<usize> {
        self.entries.iter().find(|(p, _)| *p == (signal, idler)).map(|&(_, d)| d)
    }

    pub fn pair(&self, digit: usize) -> Option<(Pol, Pol)> {
        self.entries.iter().find(|(_, d)| *d == digit).map(|&(p, _)| p)
    }
}

/// One logical digit read from a same-arm two-photon component.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Degree {
    /// Arm taken by the photon (`s, m, l → 0, 1, 2`).
    Path(Photon),
    /// Two-photon polarization pair through the encoding's [`PairTable`].
    PolarizationPair,
    /// OAM value `l` of the photon, read as digit `l ∈ 0..oam_dim`.
    Oam(Photon),
    /// Combined per-photon digit `l · 2 + pol` (H = 0, V = 1).
    Mode(Photon),
}

/// An ordered list of degrees read from a two-photon state.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegreeEncoding {
    degrees: Vec<Degree>,
    table: PairTable,
    oam_dim: usize,
}

impl DegreeEncoding {
    pub fn new(degrees: Vec<Degree>, table: PairTable, oam_dim: usize) -> Result<Self> {
        if degrees.is_empty() {
            return Err(Error::UnsupportedDegrees("no degrees to read".into()));
        }
        if oam_dim == 0 {
            return Err(Error::InvalidSetting("oam_dim must be positive".into()));
        }
        Ok(DegreeEncoding { degrees, table, oam_dim })
    }

    pub fn degrees(&self) -> &[Degree] {
        &self.degrees
    }

    pub fn table(&self) -> &PairTable {
        &self.table
    }

    pub fn oam_dim(&self) -> usize {
        self.oam_dim
    }

    pub fn dims(&self) -> Vec<usize> {
        self.degrees
            .iter()
            .map(|d| match d {
                Degree::Path(_) => 3,
                Degree::PolarizationPair => self.table.dim(),
                Degree::Oam(_) => self.oam_dim,
                Degree::Mode(_) => self.oam_dim * ModeBasis::POL_DIM,
            })
            .collect()
    }

    fn oam_digit(&self, l: i32) -> Option<usize> {
        (l >= 0 && (l as usize) < self.oam_dim).then_some(l as usize)
    }

    /// Digits of one component, or a description of why it lies outside the encoding.
    pub fn digits(&self, signal: Mode, idler: Mode) -> std::result::Result<Vec<usize>, String> {
        if signal.path != idler.path {
            return Err(format!("cross-arm component {signal}{idler}"));
        }
        self.degrees
            .iter()
            .map(|d| {
                let pick = |p: &Photon| if *p == Photon::Signal { signal } else { idler };
                match d {
                    Degree::Path(p) => Ok(pick(p).path.index()),
                    Degree::PolarizationPair => self
                        .table
                        .digit(signal.pol, idler.pol)
                        .ok_or_else(|| format!("polarization pair {:?}{:?} not in table", signal.pol, idler.pol)),
                    Degree::Oam(p) => {
                        let m = pick(p);
                        self.oam_digit(m.oam).ok_or_else(|| format!("OAM {} of {m} outside 0..{}", m.oam, self.oam_dim))
                    }
                    Degree::Mode(p) => {
                        let m = pick(p);
                        self.oam_digit(m.oam)
                            .map(|l| l * ModeBasis::POL_DIM + m.pol.index())
                            .ok_or_else(|| format!("OAM {} of {m} outside 0..{}", m.oam, self.oam_dim))
                    }
                }
            })
            .collect()
    }

    /// Unnormalized reading: amplitudes of components sharing the same digit
    /// string add coherently. Components outside the encoding with modulus
    /// above the algebraic tolerance are an error.
    pub fn project(&self, state: &StateVector) -> Result<QuditState> {
        if state.arity() != 2 {
            return Err(Error::ArityMismatch { expected: 2, found: state.arity() });
        }
        let basis = state.basis();
        let d = basis.dim();
        let mut out = QuditState::zeros(self.dims())?;
        let mut amps = out.amplitudes().to_vec();
        for (idx, &a) in Register::amplitudes(state).iter().enumerate() {
            if a == Complex64::new(0.0, 0.0) {
                continue;
            }
            let signal = basis.decode(idx / d).expect("index within basis");
            let idler = basis.decode(idx % d).expect("index within basis");
            match self.digits(signal, idler) {
                Ok(digits) => amps[out.index_of(&digits)?] += a,
                Err(why) if a.norm() > ALGEBRA_TOL => return Err(Error::OutsideEncoding(why)),
                Err(_) => {}
            }
        }
        out = QuditState::new(self.dims(), amps)?;
        Ok(out)
    }

    /// Normalized reading of a built pair state.
    pub fn read(&self, pair: &PairState) -> Result<QuditState> {
        self.project(&pair.state)?
            .normalized()
            .ok_or_else(|| Error::OutsideEncoding("state has no weight inside the encoding".into()))
    }
}

/// Logical state carried by the two-photon polarization pair, path and OAM erased.
pub fn encode_polarization_pairs(pair: &PairState, table: &PairTable) -> Result<QuditState> {
    DegreeEncoding::new(vec![Degree::PolarizationPair], table.clone(), 1)?.read(pair)
}

/// Two-partite qudit state with per-photon digit `l · pol_dim + pol`,
/// `l ∈ 0..oam_dim`; the arm label is erased.
pub fn collapse_degrees(pair: &PairState, oam_dim: usize, pol_dim: usize) -> Result<QuditState> {
    if pol_dim != ModeBasis::POL_DIM {
        return Err(Error::InvalidSetting(format!("polarization dimension is {}, got {pol_dim}", ModeBasis::POL_DIM)));
    }
    DegreeEncoding::new(vec![Degree::Mode(Photon::Signal), Degree::Mode(Photon::Idler)], PairTable::qutrit(), oam_dim)?
        .read(pair)
}

use std::fmt;

use crate::error::{Error, Result};

/// Interferometer arm. Phases are referenced to the short arm.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Arm {
    Short,
    Medium,
    Long,
}

impl Arm {
    pub const ALL: [Arm; 3] = [Arm::Short, Arm::Medium, Arm::Long];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Option<Arm> {
        Arm::ALL.get(i).copied()
    }

    pub fn label(self) -> &'static str {
        match self {
            Arm::Short => "s",
            Arm::Medium => "m",
            Arm::Long => "l",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Pol {
    H,
    V,
}

impl Pol {
    pub const ALL: [Pol; 2] = [Pol::H, Pol::V];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Option<Pol> {
        Pol::ALL.get(i).copied()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Photon {
    Signal,
    Idler,
}

impl Photon {
    pub fn label(self) -> &'static str {
        match self {
            Photon::Signal => "signal",
            Photon::Idler => "idler",
        }
    }
}

/// A single-photon mode `|arm, pol, l⟩`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Mode {
    pub path: Arm,
    pub pol: Pol,
    pub oam: i32,
}

impl Mode {
    pub fn new(path: Arm, pol: Pol, oam: i32) -> Self {
        Mode { path, pol, oam }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "|{},{:?},{}⟩", self.path.label(), self.pol, self.oam)
    }
}

/// Truncated single-photon basis: 3 arms × 2 polarizations × OAM window.
///
/// The window always contains `l = 0`, the only mode a mono-mode fiber passes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ModeBasis {
    oam_min: i32,
    oam_max: i32,
}

impl Default for ModeBasis {
    fn default() -> Self {
        ModeBasis { oam_min: -2, oam_max: 2 }
    }
}

impl fmt::Display for ModeBasis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ModeBasis(l in {}..={})", self.oam_min, self.oam_max)
    }
}

impl ModeBasis {
    pub const PATH_DIM: usize = 3;
    pub const POL_DIM: usize = 2;

    pub fn new(oam_min: i32, oam_max: i32) -> Result<Self> {
        if oam_min > 0 || oam_max < 0 {
            return Err(Error::InvalidBasis(format!(
                "OAM window [{oam_min}, {oam_max}] must contain l = 0"
            )));
        }
        Ok(ModeBasis { oam_min, oam_max })
    }

    pub fn oam_min(&self) -> i32 {
        self.oam_min
    }

    pub fn oam_max(&self) -> i32 {
        self.oam_max
    }

    pub fn oam_dim(&self) -> usize {
        (self.oam_max - self.oam_min + 1) as usize
    }

    /// Single-photon dimension.
    pub fn dim(&self) -> usize {
        Self::PATH_DIM * Self::POL_DIM * self.oam_dim()
    }

    pub fn contains_oam(&self, l: i32) -> bool {
        (self.oam_min..=self.oam_max).contains(&l)
    }

    pub fn check_oam(&self, l: i32) -> Result<()> {
        if self.contains_oam(l) {
            Ok(())
        } else {
            Err(Error::OamOutOfRange { l, min: self.oam_min, max: self.oam_max })
        }
    }

    /// Position of `l` inside the OAM factor.
    pub fn oam_slot(&self, l: i32) -> Result<usize> {
        self.check_oam(l)?;
        Ok((l - self.oam_min) as usize)
    }

    pub fn index(&self, mode: Mode) -> Result<usize> {
        let slot = self.oam_slot(mode.oam)?;
        Ok((mode.path.index() * Self::POL_DIM + mode.pol.index()) * self.oam_dim() + slot)
    }

    /// Inverse of [`ModeBasis::index`]; `None` past the end of the basis.
    pub fn decode(&self, index: usize) -> Option<Mode> {
        if index >= self.dim() {
            return None;
        }
        let n = self.oam_dim();
        let slot = index % n;
        let rest = index / n;
        Some(Mode {
            path: Arm::from_index(rest / Self::POL_DIM)?,
            pol: Pol::from_index(rest % Self::POL_DIM)?,
            oam: self.oam_min + slot as i32,
        })
    }

    pub fn modes(&self) -> impl Iterator<Item = Mode> + '_ {
        (0..self.dim()).filter_map(move |i| self.decode(i))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn index_bijection_over_window() {
        let basis = ModeBasis::new(-3, 3).unwrap();
        assert_eq!(basis.dim(), 3 * 2 * 7);
        for i in 0..basis.dim() {
            let mode = basis.decode(i).unwrap();
            assert_eq!(basis.index(mode).unwrap(), i);
        }
        assert!(basis.decode(basis.dim()).is_none());
    }

    #[test]
    fn ordering_is_path_slowest_oam_fastest() {
        let basis = ModeBasis::default();
        assert_eq!(basis.index(Mode::new(Arm::Short, Pol::H, -2)).unwrap(), 0);
        assert_eq!(basis.index(Mode::new(Arm::Short, Pol::H, -1)).unwrap(), 1);
        assert_eq!(basis.index(Mode::new(Arm::Short, Pol::V, -2)).unwrap(), 5);
        assert_eq!(basis.index(Mode::new(Arm::Medium, Pol::H, -2)).unwrap(), 10);
    }

    #[test]
    fn window_must_contain_zero() {
        assert!(ModeBasis::new(1, 3).is_err());
        assert!(ModeBasis::new(-2, -1).is_err());
        assert!(ModeBasis::new(0, 0).is_ok());
    }

    #[test]
    fn out_of_window_oam_rejected() {
        let basis = ModeBasis::default();
        let err = basis.index(Mode::new(Arm::Long, Pol::V, 3)).unwrap_err();
        assert_eq!(err, Error::OamOutOfRange { l: 3, min: -2, max: 2 });
    }
}

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("basis mismatch: {0} vs {1}")]
    BasisMismatch(String, String),

    #[error("arity mismatch: expected {expected}-photon state, found {found}-photon state")]
    ArityMismatch { expected: usize, found: usize },

    #[error("dimension mismatch: expected {expected:?}, found {found:?}")]
    DimensionMismatch { expected: Vec<usize>, found: Vec<usize> },

    #[error("state is not normalized (norm {0})")]
    NotNormalized(f64),

    #[error("invalid mode basis: {0}")]
    InvalidBasis(String),

    #[error("OAM value {l} outside truncation window [{min}, {max}]")]
    OamOutOfRange { l: i32, min: i32, max: i32 },

    #[error("operator does not satisfy the {kind} property (deviation {deviation:e})")]
    OperatorKind { kind: &'static str, deviation: f64 },

    #[error("invalid setting: {0}")]
    InvalidSetting(String),

    #[error("hologram leaves no component inside the OAM window")]
    EmptyHologram,

    #[error("post-selected state is zero; killed by: {}", .killers.join("; "))]
    ZeroState { killers: Vec<String> },

    #[error("coherence assumptions not met: {}", .0.join("; "))]
    AssumptionsNotMet(Vec<String>),

    #[error("infeasible target: {0}")]
    Infeasible(String),

    #[error("unsupported degree list: {0}")]
    UnsupportedDegrees(String),

    #[error("amplitude outside the encoding domain: {0}")]
    OutsideEncoding(String),
}

//! Entanglement measures and Bell tests for engineered states.
//!
//! All routines accept any [`Register`](crate::hilbert::Register): a physical
//! two-photon [`StateVector`](crate::hilbert::StateVector) or a logical
//! [`QuditState`](crate::hilbert::QuditState). Entropies are in bits.

mod bell;
mod measures;
mod report;

pub use bell::{cglmp_gradient, cglmp_value, cglmp_weights, optimize_bell, BellOptimum, BellPhases, BellSettings};
pub use measures::{
    bipartite_matrix, compact_bipartite, entropy, fidelity, ghz_diagnostics, negativity, schmidt, GhzDiagnostics,
};
pub use report::AnalysisReport;

use serde::{Deserialize, Serialize};

use super::bell::BellOptimum;
use super::measures::{entropy, fidelity, negativity, schmidt};
use crate::error::Result;
use crate::hilbert::StateVector;
use crate::source::PairState;

/// Summary of one analyzed pair state. Bipartite quantities use the
/// signal | idler cut.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub fidelity: Option<f64>,
    pub schmidt_coefficients: Vec<f64>,
    pub entropy_bits: f64,
    pub negativity: f64,
    pub bell_dimension: Option<usize>,
    pub bell_value: Option<f64>,
    pub bell_classical_bound: f64,
    pub success_probability: f64,
}

impl AnalysisReport {
    pub const CLASSICAL_BOUND: f64 = 2.0;

    pub fn new(pair: &PairState, target: Option<&StateVector>) -> Result<Self> {
        let sv = schmidt(&pair.state, &[0])?;
        Ok(AnalysisReport {
            fidelity: target.map(|t| fidelity(&pair.state, t)).transpose()?,
            entropy_bits: entropy(&sv),
            schmidt_coefficients: sv,
            negativity: negativity(&pair.state, &[0])?,
            bell_dimension: None,
            bell_value: None,
            bell_classical_bound: Self::CLASSICAL_BOUND,
            success_probability: pair.success_probability,
        })
    }

    pub fn with_bell(mut self, d: usize, optimum: &BellOptimum) -> Self {
        self.bell_dimension = Some(d);
        self.bell_value = Some(optimum.value);
        self
    }
}

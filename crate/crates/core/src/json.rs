//! JSON formats for states and Hamiltonians.
//!
//! ```text
//! dense:        {"dims": [2,2,2], "re": [[...], ...], "im": [[...], ...]}
//! preset state: {"preset": "W" | "GHZ" | "mixed8", "white": 0.25}
//! Pauli terms:  {"terms": [{"c": 0.5, "ops": ["Z","I","I"]}, ...]}
//! ```
//!
//! Floats are written with serde_json's shortest round-trip formatting, so a
//! matrix written and read back is bit-identical.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, DensityMatrix, HermitianOperator};
use crate::model::{self, HamiltonianSpec, PauliString};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DenseMatrix {
    pub dims: Vec<usize>,
    pub re: Vec<Vec<f64>>,
    pub im: Vec<Vec<f64>>,
}

impl DenseMatrix {
    pub fn from_matrix(m: &ComplexMatrix, dims: &[usize]) -> Self {
        Self {
            dims: dims.to_vec(),
            re: m.real_parts(),
            im: m.imag_parts(),
        }
    }

    pub fn to_matrix(&self) -> Result<ComplexMatrix> {
        ComplexMatrix::from_parts(&self.re, &self.im)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum StateSource {
    Dense(DenseMatrix),
    Preset {
        preset: String,
        #[serde(default)]
        white: f64,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum HamiltonianSource {
    Dense(DenseMatrix),
    Terms { terms: Vec<PauliString> },
}

/// Resolves a named preset state, optionally mixed with white noise.
pub fn preset_state(name: &str, white: f64) -> Result<DensityMatrix> {
    let base = match name {
        "W" | "w" => model::w_state(),
        "GHZ" | "ghz" => model::ghz_state(),
        "mixed8" => model::maximally_mixed3(),
        other => return Err(Error::Parse(format!("unknown preset state '{other}'"))),
    };
    model::white_noise(&base, white)
}

impl StateSource {
    pub fn resolve(&self) -> Result<DensityMatrix> {
        match self {
            StateSource::Dense(d) => DensityMatrix::new(d.to_matrix()?, d.dims.clone()),
            StateSource::Preset { preset, white } => preset_state(preset, *white),
        }
    }
}

impl HamiltonianSource {
    pub fn resolve(&self) -> Result<HermitianOperator> {
        match self {
            HamiltonianSource::Dense(d) => HermitianOperator::new(d.to_matrix()?, d.dims.clone()),
            HamiltonianSource::Terms { terms } => {
                Ok(HamiltonianSpec::from_terms(terms.clone())?.assemble())
            }
        }
    }
}

pub fn parse_state(text: &str) -> Result<DensityMatrix> {
    serde_json::from_str::<StateSource>(text)
        .map_err(|e| Error::Parse(e.to_string()))?
        .resolve()
}

pub fn parse_hamiltonian(text: &str) -> Result<HermitianOperator> {
    serde_json::from_str::<HamiltonianSource>(text)
        .map_err(|e| Error::Parse(e.to_string()))?
        .resolve()
}

pub fn state_to_json(rho: &DensityMatrix) -> String {
    serde_json::to_string(&DenseMatrix::from_matrix(rho.matrix(), rho.dims()))
        .expect("dense matrices serialize")
}

pub fn operator_to_json(h: &HermitianOperator) -> String {
    serde_json::to_string(&DenseMatrix::from_matrix(h.matrix(), h.dims()))
        .expect("dense matrices serialize")
}

pub fn spec_to_json(spec: &HamiltonianSpec) -> String {
    serde_json::to_string(&HamiltonianSource::Terms {
        terms: spec.terms().to_vec(),
    })
    .expect("Pauli terms serialize")
}

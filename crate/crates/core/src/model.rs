//! States, Hamiltonians and noise channels for three-qubit batteries.
//!
//! Hamiltonians are written as real-weighted Pauli strings and assembled
//! into dense operators on demand. The preset builders reproduce the two
//! model families used throughout the crate:
//!
//! * example 1: local `σ₃` fields plus pairwise `σ₁⊗σ₁` couplings, with the
//!   pair Hamiltonian on `AB` keeping only the `J_AB` coupling;
//! * example 2: local `σ₃` fields plus a three-body `σ₁⊗σ₁⊗σ₁` coupling, with
//!   a non-interacting pair Hamiltonian on `AB`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{kron_all, pauli, ComplexMatrix, DensityMatrix, HermitianOperator, C64};
use crate::xstate::XStateParams;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PauliOp {
    I,
    X,
    Y,
    Z,
}

impl PauliOp {
    pub fn matrix(self) -> ComplexMatrix {
        match self {
            PauliOp::I => pauli(0),
            PauliOp::X => pauli(1),
            PauliOp::Y => pauli(2),
            PauliOp::Z => pauli(3),
        }
    }
}

/// `coefficient · (factors[0] ⊗ factors[1] ⊗ …)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PauliString {
    #[serde(rename = "c")]
    pub coefficient: f64,
    #[serde(rename = "ops")]
    pub factors: Vec<PauliOp>,
}

impl PauliString {
    pub fn new(coefficient: f64, factors: Vec<PauliOp>) -> Self {
        Self {
            coefficient,
            factors,
        }
    }

    pub fn matrix(&self) -> ComplexMatrix {
        let mats: Vec<ComplexMatrix> = self.factors.iter().map(|p| p.matrix()).collect();
        kron_all(&mats).scale(self.coefficient)
    }
}

/// A qubit Hamiltonian as a sum of Pauli strings over `n_sites` qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct HamiltonianSpec {
    n_sites: usize,
    terms: Vec<PauliString>,
}

impl HamiltonianSpec {
    pub fn new(n_sites: usize, terms: Vec<PauliString>) -> Result<Self> {
        if n_sites == 0 {
            return Err(Error::InvalidSubsystems(
                "Hamiltonian needs at least one site".into(),
            ));
        }
        for t in &terms {
            if t.factors.len() != n_sites {
                return Err(Error::PauliLength {
                    expected: n_sites,
                    found: t.factors.len(),
                });
            }
            if !t.coefficient.is_finite() {
                return Err(Error::Parse(format!(
                    "non-finite coefficient {}",
                    t.coefficient
                )));
            }
        }
        Ok(Self { n_sites, terms })
    }

    /// Infers the number of sites from the first term.
    pub fn from_terms(terms: Vec<PauliString>) -> Result<Self> {
        let n = terms
            .first()
            .map(|t| t.factors.len())
            .ok_or_else(|| Error::Parse("Hamiltonian has no terms".into()))?;
        Self::new(n, terms)
    }

    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    pub fn dims(&self) -> Vec<usize> {
        vec![2; self.n_sites]
    }

    pub fn terms(&self) -> &[PauliString] {
        &self.terms
    }

    /// Dense matrix `Σ_k c_k P_k`.
    pub fn assemble(&self) -> HermitianOperator {
        let n = 1 << self.n_sites;
        let m = self
            .terms
            .iter()
            .fold(ComplexMatrix::zeros(n), |acc, t| &acc + &t.matrix());
        HermitianOperator::new(m, self.dims()).expect("real-weighted Pauli strings are Hermitian")
    }
}

pub fn assemble(spec: &HamiltonianSpec) -> HermitianOperator {
    spec.assemble()
}

/// Local field strengths `ε^A, ε^B, ε^C`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Energies {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl Energies {
    pub const DEFAULT: Energies = Energies {
        a: 0.5,
        b: 0.3,
        c: 0.1,
    };
}

/// Pairwise couplings `J_AB, J_AC, J_BC`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Couplings {
    pub ab: f64,
    pub ac: f64,
    pub bc: f64,
}

impl Couplings {
    pub fn uniform(j: f64) -> Self {
        Self {
            ab: j,
            ac: j,
            bc: j,
        }
    }
}

fn local_fields(e: Energies) -> Vec<PauliString> {
    use PauliOp::*;
    vec![
        PauliString::new(e.a, vec![Z, I, I]),
        PauliString::new(e.b, vec![I, Z, I]),
        PauliString::new(e.c, vec![I, I, Z]),
    ]
}

/// Local fields with pairwise `σ₁⊗σ₁` couplings.
pub fn example1_spec(e: Energies, j: Couplings) -> HamiltonianSpec {
    use PauliOp::*;
    let mut terms = local_fields(e);
    terms.push(PauliString::new(j.ab, vec![X, X, I]));
    terms.push(PauliString::new(j.ac, vec![X, I, X]));
    terms.push(PauliString::new(j.bc, vec![I, X, X]));
    HamiltonianSpec::new(3, terms).unwrap()
}

/// Pair Hamiltonian on `AB` for the example-1 family.
pub fn example1_pair_spec(e: Energies, j_ab: f64) -> HamiltonianSpec {
    use PauliOp::*;
    HamiltonianSpec::new(
        2,
        vec![
            PauliString::new(e.a, vec![Z, I]),
            PauliString::new(e.b, vec![I, Z]),
            PauliString::new(j_ab, vec![X, X]),
        ],
    )
    .unwrap()
}

/// Local fields with a three-body `σ₁⊗σ₁⊗σ₁` coupling.
pub fn example2_spec(e: Energies, j_abc: f64) -> HamiltonianSpec {
    use PauliOp::*;
    let mut terms = local_fields(e);
    terms.push(PauliString::new(j_abc, vec![X, X, X]));
    HamiltonianSpec::new(3, terms).unwrap()
}

/// Non-interacting pair Hamiltonian on `AB` for the example-2 family.
pub fn example2_pair_spec(e: Energies) -> HamiltonianSpec {
    use PauliOp::*;
    HamiltonianSpec::new(
        2,
        vec![
            PauliString::new(e.a, vec![Z, I]),
            PauliString::new(e.b, vec![I, Z]),
        ],
    )
    .unwrap()
}

/// `ε σ₃` on a single qubit.
pub fn local_spec(epsilon: f64) -> HamiltonianSpec {
    HamiltonianSpec::new(1, vec![PauliString::new(epsilon, vec![PauliOp::Z])]).unwrap()
}

pub fn example1_hamiltonian(e: Energies, j: Couplings) -> HermitianOperator {
    example1_spec(e, j).assemble()
}

pub fn example1_pair_hamiltonian(e: Energies, j_ab: f64) -> HermitianOperator {
    example1_pair_spec(e, j_ab).assemble()
}

pub fn example2_hamiltonian(e: Energies, j_abc: f64) -> HermitianOperator {
    example2_spec(e, j_abc).assemble()
}

pub fn example2_pair_hamiltonian(e: Energies) -> HermitianOperator {
    example2_pair_spec(e).assemble()
}

pub fn local_hamiltonian(epsilon: f64) -> HermitianOperator {
    local_spec(epsilon).assemble()
}

const QUBITS3: [usize; 3] = [2, 2, 2];

/// `(|001⟩ + |010⟩ + |100⟩)/√3`.
pub fn w_state() -> DensityMatrix {
    let mut amps = vec![C64::new(0.0, 0.0); 8];
    for i in [0b001, 0b010, 0b100] {
        amps[i] = C64::new(1.0, 0.0);
    }
    DensityMatrix::pure(&amps, QUBITS3.to_vec()).unwrap()
}

/// `(|000⟩ + |111⟩)/√2`.
pub fn ghz_state() -> DensityMatrix {
    let mut amps = vec![C64::new(0.0, 0.0); 8];
    amps[0] = C64::new(1.0, 0.0);
    amps[7] = C64::new(1.0, 0.0);
    DensityMatrix::pure(&amps, QUBITS3.to_vec()).unwrap()
}

pub fn maximally_mixed3() -> DensityMatrix {
    DensityMatrix::maximally_mixed(QUBITS3.to_vec()).unwrap()
}

fn check_unit(name: &'static str, value: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&value) {
        return Err(Error::OutOfRange { name, value });
    }
    Ok(())
}

/// `(1 − f) ρ + f 𝟙/n`.
pub fn white_noise(rho: &DensityMatrix, f: f64) -> Result<DensityMatrix> {
    check_unit("white-noise strength", f)?;
    let n = rho.dim();
    let mixed = f / n as f64;
    let m = ComplexMatrix::from_fn(n, |i, j| {
        let z = rho.matrix()[(i, j)] * (1.0 - f);
        if i == j {
            z + mixed
        } else {
            z
        }
    });
    DensityMatrix::new(m, rho.dims().to_vec())
}

/// Dephasing `(1 − γ) ρ + γ Δ(ρ)` in the computational basis.
///
/// The diagonal is copied unchanged and coherences are scaled by `1 − γ`,
/// so states that are already diagonal come back bit-identical.
pub fn dephase(rho: &DensityMatrix, gamma: f64) -> Result<DensityMatrix> {
    check_unit("dephasing strength", gamma)?;
    let n = rho.dim();
    let m = ComplexMatrix::from_fn(n, |i, j| {
        let z = rho.matrix()[(i, j)];
        if i == j {
            z
        } else {
            z * (1.0 - gamma)
        }
    });
    DensityMatrix::new(m, rho.dims().to_vec())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoiseParams {
    white: f64,
    dephase: f64,
}

impl NoiseParams {
    pub fn new(white: f64, dephase: f64) -> Result<Self> {
        check_unit("white-noise strength", white)?;
        check_unit("dephasing strength", dephase)?;
        Ok(Self { white, dephase })
    }

    pub fn white(&self) -> f64 {
        self.white
    }

    pub fn dephase(&self) -> f64 {
        self.dephase
    }

    /// White noise followed by dephasing (the two channels commute).
    pub fn apply(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        dephase(&white_noise(rho, self.white)?, self.dephase)
    }
}

/// Dense three-qubit X-state.
pub fn x_state(p: &XStateParams) -> Result<DensityMatrix> {
    let mut m = ComplexMatrix::from_real_diagonal(p.diag());
    for (i, &z) in p.anti().iter().enumerate() {
        m[(i, 7 - i)] = z;
        m[(7 - i, i)] = z.conj();
    }
    DensityMatrix::new(m, QUBITS3.to_vec())
}

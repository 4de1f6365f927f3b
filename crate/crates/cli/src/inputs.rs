//! Resolution of `--state`, `--ham` and `--ham-sub` arguments.

use std::fs;

use anyhow::{bail, Context, Result};

use qbcap::json::{parse_hamiltonian, parse_state, preset_state};
use qbcap::linalg::{DensityMatrix, HermitianOperator};
use qbcap::model::{self, white_noise, Couplings, Energies};

#[derive(Debug, Clone, Copy)]
pub struct ModelParams {
    pub energies: Energies,
    pub couplings: Couplings,
    pub triple: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Preset {
    Ex1,
    Ex2,
}

/// A Hamiltonian on the first `keep.len()` subsystems.
pub struct SubHamiltonian {
    pub keep: Vec<usize>,
    pub label: String,
    pub op: HermitianOperator,
}

fn read(path: &str) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read '{path}'"))
}

/// `preset:W|GHZ|mixed8` or a JSON file. `white` is applied on top.
pub fn load_state(source: &str, white: f64) -> Result<DensityMatrix> {
    let rho = match source.strip_prefix("preset:") {
        Some(name) => preset_state(name, 0.0)?,
        None => parse_state(&read(source)?).with_context(|| format!("in state file '{source}'"))?,
    };
    Ok(white_noise(&rho, white)?)
}

pub fn preset_of(source: Option<&str>) -> Option<Preset> {
    match source {
        None | Some("preset:ex1") => Some(Preset::Ex1),
        Some("preset:ex2") => Some(Preset::Ex2),
        _ => None,
    }
}

/// `preset:ex1|ex2` or a JSON file; `ex1` when absent.
pub fn load_hamiltonian(source: Option<&str>, p: &ModelParams) -> Result<HermitianOperator> {
    match source {
        None | Some("preset:ex1") => Ok(model::example1_hamiltonian(p.energies, p.couplings)),
        Some("preset:ex2") => Ok(model::example2_hamiltonian(p.energies, p.triple)),
        Some(other) if other.starts_with("preset:") => {
            bail!("unknown Hamiltonian preset '{other}'; expected preset:ex1 or preset:ex2")
        }
        Some(path) => {
            parse_hamiltonian(&read(path)?).with_context(|| format!("in Hamiltonian file '{path}'"))
        }
    }
}

/// `A`, `AB`, or a JSON file acting on the leading subsystems. The `AB`
/// preset follows the family of the total Hamiltonian.
pub fn load_sub_hamiltonian(
    source: &str,
    family: Option<Preset>,
    p: &ModelParams,
) -> Result<SubHamiltonian> {
    let (keep, op) = match source {
        "A" => (vec![0], model::local_hamiltonian(p.energies.a)),
        "AB" => match family {
            Some(Preset::Ex2) => (vec![0, 1], model::example2_pair_hamiltonian(p.energies)),
            _ => (
                vec![0, 1],
                model::example1_pair_hamiltonian(p.energies, p.couplings.ab),
            ),
        },
        path => {
            let op = parse_hamiltonian(&read(path)?)
                .with_context(|| format!("in Hamiltonian file '{path}'"))?;
            ((0..op.dims().len()).collect(), op)
        }
    };
    Ok(SubHamiltonian {
        keep,
        label: source.to_string(),
        op,
    })
}

/// Subsystem letters for the leading `n` subsystems.
pub fn subsystem_name(keep: &[usize]) -> String {
    keep.iter().map(|&k| char::from(b'A' + k as u8)).collect()
}

//! Battery capacity: the gap between the highest and lowest mean energy
//! reachable from a state by unitary evolution.
//!
//! With state eigenvalues `λ` and energy levels `ε`, both ascending,
//!
//! ```text
//! C(ρ; H) = Σ_i ε_i (λ_i − λ_{d−1−i}) = Σ_i λ_i (ε_i − ε_{d−1−i})
//! ```
//!
//! Capacity depends on `ρ` only through its spectrum and is Schur-convex,
//! so majorization of spectra orders capacities for every Hamiltonian.

use crate::error::{Error, Result};
use crate::linalg::{DensityMatrix, HermitianOperator, Spectrum, TOL};
use crate::model::white_noise;

#[derive(Debug, Clone, PartialEq)]
pub struct CapacityReport {
    pub capacity: f64,
    pub state_spectrum: Spectrum,
    pub energy_spectrum: Spectrum,
}

/// `Σ ε_i (λ_i − λ_{d−1−i})`.
pub fn capacity_energy_form(state: &Spectrum, energy: &Spectrum) -> f64 {
    let (l, e) = (state.values(), energy.values());
    let d = l.len();
    (0..d).map(|i| e[i] * (l[i] - l[d - 1 - i])).sum()
}

/// `Σ λ_i (ε_i − ε_{d−1−i})`.
pub fn capacity_state_form(state: &Spectrum, energy: &Spectrum) -> f64 {
    let (l, e) = (state.values(), energy.values());
    let d = l.len();
    (0..d).map(|i| l[i] * (e[i] - e[d - 1 - i])).sum()
}

/// Capacity from precomputed ascending spectra.
pub fn capacity_from_spectra(state: &Spectrum, energy: &Spectrum) -> Result<f64> {
    if state.len() != energy.len() {
        return Err(Error::DimensionMismatch {
            expected: energy.len(),
            found: state.len(),
        });
    }
    let c = capacity_energy_form(state, energy);
    debug_assert!(
        (c - capacity_state_form(state, energy)).abs()
            <= 1e-12 * (1.0 + energy.values().iter().fold(0.0_f64, |m, v| m.max(v.abs()))),
        "the two capacity sums disagree"
    );
    Ok(c)
}

pub fn capacity(rho: &DensityMatrix, h: &HermitianOperator) -> Result<CapacityReport> {
    if rho.dim() != h.dim() {
        return Err(Error::DimensionMismatch {
            expected: h.dim(),
            found: rho.dim(),
        });
    }
    let state_spectrum = rho.spectrum()?;
    let energy_spectrum = h.spectrum()?;
    let capacity = capacity_from_spectra(&state_spectrum, &energy_spectrum)?;
    Ok(CapacityReport {
        capacity,
        state_spectrum,
        energy_spectrum,
    })
}

/// Capacity against a Hamiltonian whose spectrum is already known.
pub fn capacity_with_energies(rho: &DensityMatrix, energy: &Spectrum) -> Result<f64> {
    capacity_from_spectra(&rho.spectrum()?, energy)
}

/// `x ≻ y`: every sum of the `k` largest entries of `x` is at least the
/// corresponding sum for `y` (within 1e-10) and the totals agree within 1e-9.
pub fn majorizes(x: &Spectrum, y: &Spectrum) -> Result<bool> {
    if x.len() != y.len() {
        return Err(Error::LengthMismatch {
            left: x.len(),
            right: y.len(),
        });
    }
    if (x.sum() - y.sum()).abs() > TOL.comparison {
        return Ok(false);
    }
    let (mut sx, mut sy) = (0.0, 0.0);
    for (a, b) in x.values().iter().rev().zip(y.values().iter().rev()) {
        sx += a;
        sy += b;
        if sx < sy - 1e-10 {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Capacities at or below this magnitude are treated as zero in ratios.
pub const ZERO_CAPACITY: f64 = 1e-12;

/// Fraction of the rated capacity destroyed by white noise of strength `f`.
pub fn loss_rate(rho: &DensityMatrix, h: &HermitianOperator, f: f64) -> Result<f64> {
    let energy = h.spectrum()?;
    let rated = capacity_with_energies(rho, &energy)?;
    if rated.abs() <= ZERO_CAPACITY {
        return Err(Error::ZeroCapacity);
    }
    let noisy = capacity_with_energies(&white_noise(rho, f)?, &energy)?;
    Ok((rated - noisy) / rated)
}

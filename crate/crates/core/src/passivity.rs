//! Passive states and ergotropy.
//!
//! The passive counterpart π of ρ with respect to H has the eigenvalues of ρ,
//! sorted in non-increasing order, placed on the eigenstates of H sorted in
//! non-decreasing energy. Ergotropy is Tr(ρH) − Tr(πH): the largest energy a
//! cyclic unitary can extract.

use alloc::vec::Vec;

use crate::operator::{DensityMatrix, EigenSystem, HermitianOperator};
use crate::{Error, Result};

/// Default tolerance for [`is_passive`].
pub const DEFAULT_PASSIVITY_TOL: f64 = 1e-9;

#[derive(Clone, Debug)]
pub struct PassiveDecomposition {
    pub passive_state: DensityMatrix,
    /// Tr(ρH) − Tr(πH), never negative.
    pub ergotropy: f64,
    /// Tr(πH).
    pub passive_energy: f64,
    /// `permutation[i]` is the energy level (ascending) that receives the
    /// i-th eigenvalue of ρ in ascending order.
    pub permutation: Vec<usize>,
    /// Populations of π along ascending energies (non-increasing).
    pub populations: Vec<f64>,
    /// Energies of H, ascending.
    pub energies: Vec<f64>,
}

/// Builds π from the ascending spectrum of ρ and the eigensystem of H.
///
/// Ties in ρ's spectrum keep their ascending-order position (stable sort);
/// ties in energy keep the eigensolver's column order.
pub fn passive_from_spectrum(
    state_eigenvalues: &[f64],
    hamiltonian: &EigenSystem,
) -> (DensityMatrix, Vec<f64>, Vec<usize>) {
    let n = state_eigenvalues.len();
    let mut order: Vec<usize> = (0..n).collect();
    // descending, stable
    order.sort_by(|&i, &j| state_eigenvalues[j].total_cmp(&state_eigenvalues[i]));
    let mut permutation = alloc::vec![0; n];
    for (level, &i) in order.iter().enumerate() {
        permutation[i] = level;
    }
    let populations: Vec<f64> = order.iter().map(|&i| state_eigenvalues[i].max(0.0)).collect();
    let total: f64 = populations.iter().sum();
    let populations: Vec<f64> = populations.iter().map(|p| p / total).collect();
    let mut m = hamiltonian.reconstruct_from_weights(&populations);
    m.hermitize();
    (DensityMatrix::from_trusted(m), populations, permutation)
}

/// Passive energy Σ_k p↓_k E↑_k without building π.
pub fn passive_energy_from_spectrum(state_eigenvalues: &[f64], energies: &[f64]) -> f64 {
    // Ascending spectrum reversed gives the descending populations.
    state_eigenvalues.iter().rev().zip(energies).map(|(p, e)| p * e).sum()
}

pub fn passive_state(rho: &DensityMatrix, h: &HermitianOperator) -> Result<PassiveDecomposition> {
    if rho.dim() != h.dim() {
        return Err(Error::DimensionMismatch { expected: h.dim(), found: rho.dim() });
    }
    let spectrum = rho.eigenvalues()?;
    let es = h.eigh()?;
    let (passive_state, populations, permutation) = passive_from_spectrum(&spectrum, &es);
    let passive_energy: f64 = populations.iter().zip(&es.values).map(|(p, e)| p * e).sum();
    let energy = rho.expectation(h);
    let ergotropy = (energy - passive_energy).max(0.0);
    Ok(PassiveDecomposition {
        passive_state,
        ergotropy,
        passive_energy,
        permutation,
        populations,
        energies: es.values,
    })
}

pub fn ergotropy(rho: &DensityMatrix, h: &HermitianOperator) -> Result<f64> {
    Ok(passive_state(rho, h)?.ergotropy)
}

/// True iff the ergotropy and ‖[ρ, H]‖_F are both at most `tol`.
pub fn is_passive(rho: &DensityMatrix, h: &HermitianOperator, tol: f64) -> Result<bool> {
    if !(tol > 0.0) {
        return Err(Error::domain("passivity tolerance must be positive"));
    }
    let w = ergotropy(rho, h)?;
    let comm = rho.matrix().commutator(h.matrix()).frobenius_norm();
    Ok(w <= tol && comm <= tol)
}

use alloc::format;
use alloc::vec::Vec;

use super::eigen::{hermitian_eigen, hermitian_eigenvalues};
use super::hermitian::{check_dim, HermitianOperator};
use super::matrix::CMatrix;
use crate::{Error, Result, C64};

pub const STATE_HERMITIAN_TOL: f64 = 1e-12;
pub const STATE_TRACE_TOL: f64 = 1e-10;
/// Eigenvalues down to minus this value are accepted as numerically zero.
pub const STATE_POSITIVITY_TOL: f64 = 1e-10;
/// Eigenvalues of the entropy sum below this are treated as exact zeros.
pub const ENTROPY_CUTOFF: f64 = 1e-14;

/// A density matrix: Hermitian, unit trace, positive semidefinite.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    matrix: CMatrix,
}

impl DensityMatrix {
    /// Validates all three invariants; the stored matrix is the exact
    /// Hermitian part of the input.
    pub fn new(mut matrix: CMatrix) -> Result<Self> {
        check_dim(matrix.dim())?;
        let dev = matrix.hermitian_deviation();
        if dev > STATE_HERMITIAN_TOL {
            return Err(Error::InvalidState(format!("not Hermitian (deviation {dev:e})")));
        }
        matrix.hermitize();
        let tr = matrix.trace().re;
        if (tr - 1.0).abs() > STATE_TRACE_TOL {
            return Err(Error::InvalidState(format!("trace {tr} differs from 1")));
        }
        let min = hermitian_eigenvalues(&matrix)?[0];
        if min < -STATE_POSITIVITY_TOL {
            return Err(Error::InvalidState(format!("negative eigenvalue {min:e}")));
        }
        Ok(DensityMatrix { matrix })
    }

    /// Wraps a matrix the caller has already made Hermitian with unit trace
    /// and non-negative spectrum.
    pub(crate) fn from_trusted(matrix: CMatrix) -> Self {
        DensityMatrix { matrix }
    }

    /// Hermitizes, clamps eigenvalues in `[-max_clamp, 0)` to zero and
    /// renormalises the trace. Returns the state together with the magnitude
    /// of the most negative eigenvalue that was removed (0 when none).
    pub fn clamped(mut matrix: CMatrix, max_clamp: f64) -> Result<(Self, f64)> {
        check_dim(matrix.dim())?;
        matrix.hermitize();
        let es = hermitian_eigen(&matrix)?;
        let min = es.values[0];
        if min < -max_clamp {
            return Err(Error::InvalidState(format!("negative eigenvalue {min:e}")));
        }
        let clamped_mag = if min < 0.0 { -min } else { 0.0 };
        let weights: Vec<f64> = es.values.iter().map(|&v| v.max(0.0)).collect();
        let total: f64 = weights.iter().sum();
        if !(total > 0.0) {
            return Err(Error::InvalidState(format!("non-positive trace {total}")));
        }
        let weights: Vec<f64> = weights.iter().map(|w| w / total).collect();
        let mut m = es.reconstruct_from_weights(&weights);
        m.hermitize();
        Ok((DensityMatrix { matrix: m }, clamped_mag))
    }

    /// |ψ⟩⟨ψ| for a (not necessarily normalised) state vector.
    pub fn pure(psi: &[C64]) -> Result<Self> {
        check_dim(psi.len())?;
        let norm = libm::sqrt(psi.iter().map(|z| z.norm_sqr()).sum::<f64>());
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::domain("state vector must have finite non-zero norm"));
        }
        let unit: Vec<C64> = psi.iter().map(|z| z / norm).collect();
        let mut m = CMatrix::outer(&unit, &unit);
        m.hermitize();
        Ok(DensityMatrix { matrix: m })
    }

    /// The basis projector |k⟩⟨k|.
    pub fn basis(dim: usize, k: usize) -> Result<Self> {
        check_dim(dim)?;
        if k >= dim {
            return Err(Error::domain(format!("basis index {k} out of range for dim {dim}")));
        }
        let mut m = CMatrix::zeros(dim);
        m[(k, k)] = C64::new(1.0, 0.0);
        Ok(DensityMatrix { matrix: m })
    }

    pub fn maximally_mixed(dim: usize) -> Result<Self> {
        check_dim(dim)?;
        Ok(DensityMatrix { matrix: CMatrix::identity(dim).scale_real(1.0 / dim as f64) })
    }

    /// diag(p) for a probability vector.
    pub fn from_populations(p: &[f64]) -> Result<Self> {
        check_dim(p.len())?;
        if p.iter().any(|&x| x < -STATE_POSITIVITY_TOL || !x.is_finite()) {
            return Err(Error::InvalidState("negative or non-finite population".into()));
        }
        let total: f64 = p.iter().sum();
        if (total - 1.0).abs() > STATE_TRACE_TOL {
            return Err(Error::InvalidState(format!("populations sum to {total}")));
        }
        Ok(DensityMatrix { matrix: CMatrix::from_real_diagonal(p) })
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMatrix {
        self.matrix
    }

    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        hermitian_eigenvalues(&self.matrix)
    }

    pub fn populations(&self) -> Vec<f64> {
        self.matrix.diagonal().iter().map(|z| z.re).collect()
    }

    /// Tr(ρ A).
    pub fn expectation(&self, op: &HermitianOperator) -> f64 {
        op.expectation(&self.matrix)
    }

    /// U ρ U† for a unitary `u` (not checked).
    pub fn transformed(&self, u: &CMatrix) -> Result<Self> {
        if u.dim() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: u.dim() });
        }
        let mut m = u.matmul(&self.matrix).matmul(&u.adjoint());
        m.hermitize();
        Ok(DensityMatrix { matrix: m })
    }

    /// ½‖ρ − σ‖₁.
    pub fn trace_distance(&self, other: &DensityMatrix) -> Result<f64> {
        if other.dim() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: other.dim() });
        }
        let mut diff = &self.matrix - &other.matrix;
        diff.hermitize();
        let vals = hermitian_eigenvalues(&diff)?;
        Ok(0.5 * vals.iter().map(|v| v.abs()).sum::<f64>())
    }

    /// Tr ρ².
    pub fn purity(&self) -> f64 {
        self.matrix.trace_product(&self.matrix).re
    }
}

/// S(ρ) = −Σ λ ln λ over eigenvalues above [`ENTROPY_CUTOFF`].
pub fn von_neumann_entropy(rho: &DensityMatrix) -> Result<f64> {
    Ok(entropy_of_spectrum(&rho.eigenvalues()?))
}

/// Entropy of a probability spectrum with the same cutoff rule.
pub fn entropy_of_spectrum(values: &[f64]) -> f64 {
    values.iter().filter(|&&l| l > ENTROPY_CUTOFF).map(|&l| -l * libm::log(l)).sum()
}

/// exp(−H/T)/Z, built in the eigenbasis of H.
pub fn gibbs_state(h: &HermitianOperator, temperature: f64) -> Result<DensityMatrix> {
    if !(temperature > 0.0) || !temperature.is_finite() {
        return Err(Error::domain(format!("temperature must be positive, got {temperature}")));
    }
    let es = h.eigh()?;
    let ground = es.values[0];
    let weights: Vec<f64> =
        es.values.iter().map(|&e| libm::exp(-(e - ground) / temperature)).collect();
    let z: f64 = weights.iter().sum();
    let weights: Vec<f64> = weights.iter().map(|w| w / z).collect();
    let mut m = es.reconstruct_from_weights(&weights);
    m.hermitize();
    Ok(DensityMatrix::from_trusted(m))
}

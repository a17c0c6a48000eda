use super::eigen::{hermitian_eigen, hermitian_eigenvalues, EigenSystem};
use super::matrix::CMatrix;
use super::MAX_DIM;
use crate::{Error, Result};

/// Relative Hermiticity tolerance applied at construction.
pub const HERMITIAN_TOL: f64 = 1e-12;

/// A Hermitian observable (a Hamiltonian, a number operator, ...).
///
/// Construction checks Hermiticity and then stores the exact Hermitian part,
/// so downstream code may rely on `A == A†` bitwise.
#[derive(Clone, Debug, PartialEq)]
pub struct HermitianOperator {
    matrix: CMatrix,
}

impl HermitianOperator {
    pub fn new(mut matrix: CMatrix) -> Result<Self> {
        check_dim(matrix.dim())?;
        let scale = matrix.max_abs().max(1.0);
        let deviation = matrix.hermitian_deviation();
        if deviation > HERMITIAN_TOL * scale {
            return Err(Error::NotHermitian { deviation });
        }
        matrix.hermitize();
        Ok(HermitianOperator { matrix })
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Result<Self> {
        Self::new(CMatrix::from_real_diagonal(diag))
    }

    pub fn zeros(dim: usize) -> Result<Self> {
        Self::new(CMatrix::zeros(dim))
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

    pub fn eigh(&self) -> Result<EigenSystem> {
        hermitian_eigen(&self.matrix)
    }

    pub fn eigenvalues(&self) -> Result<alloc::vec::Vec<f64>> {
        hermitian_eigenvalues(&self.matrix)
    }

    /// Largest |eigenvalue|.
    pub fn spectral_norm(&self) -> Result<f64> {
        let vals = self.eigenvalues()?;
        Ok(vals.iter().fold(0.0, |m: f64, v| m.max(v.abs())))
    }

    pub fn scaled(&self, s: f64) -> HermitianOperator {
        HermitianOperator { matrix: self.matrix.scale_real(s) }
    }

    /// a·self + b·other, which stays Hermitian for real coefficients.
    pub fn linear_combination(&self, a: f64, other: &HermitianOperator, b: f64) -> Result<Self> {
        if other.dim() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: other.dim() });
        }
        let mut m = self.matrix.scale_real(a);
        m.add_scaled(other.matrix(), crate::C64::new(b, 0.0));
        Ok(HermitianOperator { matrix: m })
    }

    /// Tr(ρ A) for any matrix ρ (real part).
    pub fn expectation(&self, rho: &CMatrix) -> f64 {
        rho.trace_product(&self.matrix).re
    }
}

pub(crate) fn check_dim(dim: usize) -> Result<()> {
    if dim == 0 {
        return Err(Error::domain("dimension must be at least 1"));
    }
    if dim > MAX_DIM {
        return Err(Error::domain(alloc::format!(
            "dimension {dim} exceeds the dense-storage cap of {MAX_DIM}"
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::C64;

    #[test]
    fn rejects_non_hermitian() {
        let m = CMatrix::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]);
        assert!(matches!(HermitianOperator::new(m), Err(Error::NotHermitian { .. })));
    }

    #[test]
    fn rejects_empty_and_oversized() {
        assert!(HermitianOperator::new(CMatrix::zeros(0)).is_err());
        assert!(HermitianOperator::new(CMatrix::zeros(MAX_DIM + 1)).is_err());
    }

    #[test]
    fn stores_exact_hermitian_part() {
        let mut m = CMatrix::from_real_rows(&[&[1.0, 0.5], &[0.5, 2.0]]);
        m[(0, 1)] += C64::new(1e-14, 0.0);
        let h = HermitianOperator::new(m).unwrap();
        assert_eq!(h.matrix().hermitian_deviation(), 0.0);
    }
}

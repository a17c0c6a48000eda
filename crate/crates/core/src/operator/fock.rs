use alloc::vec::Vec;

use super::density::DensityMatrix;
use super::hermitian::{check_dim, HermitianOperator};
use super::matrix::CMatrix;
use crate::{Error, Result, C64};

/// Ladder and number operators on the truncated basis |0⟩ … |dim−1⟩.
#[derive(Clone, Debug)]
pub struct FockSpace {
    pub annihilation: CMatrix,
    pub number: HermitianOperator,
}

impl FockSpace {
    pub fn dim(&self) -> usize {
        self.annihilation.dim()
    }

    pub fn creation(&self) -> CMatrix {
        self.annihilation.adjoint()
    }

    /// ω·a†a.
    pub fn oscillator_hamiltonian(&self, omega: f64) -> HermitianOperator {
        self.number.scaled(omega)
    }
}

/// a|n⟩ = √n |n−1⟩ and a†a on a `dim`-level truncation.
pub fn fock_space(dim: usize) -> Result<FockSpace> {
    if dim < 2 {
        return Err(Error::domain("Fock space needs at least two levels"));
    }
    check_dim(dim)?;
    let mut a = CMatrix::zeros(dim);
    for n in 1..dim {
        a[(n - 1, n)] = C64::new(libm::sqrt(n as f64), 0.0);
    }
    let levels: Vec<f64> = (0..dim).map(|n| n as f64).collect();
    let number = HermitianOperator::from_real_diagonal(&levels)?;
    Ok(FockSpace { annihilation: a, number })
}

/// Amplitudes e^{−|α|²/2} αⁿ/√n! on the truncated basis, renormalised.
pub fn coherent_amplitudes(alpha: C64, dim: usize) -> Vec<C64> {
    let mut amps = Vec::with_capacity(dim);
    let mut c = C64::new(libm::exp(-0.5 * alpha.norm_sqr()), 0.0);
    for n in 0..dim {
        amps.push(c);
        c = c * alpha / libm::sqrt((n + 1) as f64);
    }
    amps
}

/// The coherent state |α⟩⟨α| truncated to `dim` levels and renormalised.
pub fn coherent_state(alpha: C64, dim: usize) -> Result<DensityMatrix> {
    if dim < 2 {
        return Err(Error::domain("Fock space needs at least two levels"));
    }
    DensityMatrix::pure(&coherent_amplitudes(alpha, dim))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_level_lowering() {
        let f = fock_space(2).unwrap();
        assert_eq!(f.annihilation[(0, 1)], C64::new(1.0, 0.0));
        assert_eq!(f.annihilation[(1, 0)], C64::new(0.0, 0.0));
    }

    #[test]
    fn commutator_is_identity_except_last_level() {
        let dim = 6;
        let f = fock_space(dim).unwrap();
        let a = &f.annihilation;
        let comm = a.commutator(&f.creation());
        for i in 0..dim {
            for j in 0..dim {
                let expected = if i != j {
                    0.0
                } else if i == dim - 1 {
                    -((dim - 1) as f64)
                } else {
                    1.0
                };
                assert!((comm[(i, j)].re - expected).abs() < 1e-12);
            }
        }
        let n = f.creation().matmul(a);
        assert!((&n - f.number.matrix()).max_abs() < 1e-12);
    }

    #[test]
    fn coherent_state_mean_occupation() {
        // Poisson(1) truncated at 30 levels: the dropped tail is < 1e-30.
        let f = fock_space(30).unwrap();
        let rho = coherent_state(C64::new(1.0, 0.0), 30).unwrap();
        assert!((rho.expectation(&f.number) - 1.0).abs() < 1e-8);
    }

    #[test]
    fn rejects_single_level() {
        assert!(fock_space(1).is_err());
    }
}

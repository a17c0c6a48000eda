//! Dense complex linear algebra on small Hilbert spaces.

mod density;
mod eigen;
mod fock;
mod hermitian;
mod matrix;

pub use density::{
    entropy_of_spectrum, gibbs_state, von_neumann_entropy, DensityMatrix, ENTROPY_CUTOFF,
    STATE_HERMITIAN_TOL, STATE_POSITIVITY_TOL, STATE_TRACE_TOL,
};
pub use eigen::{hermitian_eigen, hermitian_eigenvalues, EigenSystem};
pub use fock::{coherent_amplitudes, coherent_state, fock_space, FockSpace};
pub(crate) use hermitian::check_dim;
pub use hermitian::{HermitianOperator, HERMITIAN_TOL};
pub use matrix::CMatrix;

/// Largest Hilbert-space dimension accepted by the dense constructors.
pub const MAX_DIM: usize = 256;

/// Eigendecomposition of a Hermitian operator.
pub fn eigh(a: &HermitianOperator) -> crate::Result<EigenSystem> {
    a.eigh()
}

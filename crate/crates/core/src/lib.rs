//! Heat, work and ergotropy accounting for small open quantum systems.
//!
//! The crate is `no_std` (it needs `alloc`) and carries no IO. It provides
//!
//! * [`operator`]: dense complex matrices, Hermitian eigendecomposition,
//!   density matrices, entropy, Gibbs and Fock-space constructors;
//! * [`passivity`]: passive states and ergotropy;
//! * [`dynamics`]: GKLS propagation with time-dependent Hamiltonians and
//!   direct steady-state solves;
//! * [`ledger`]: energy, work, heat and dissipated-ergotropy series along a
//!   trajectory, and the entropy inequalities built on them;
//! * [`machines`]: the two-bath modulated qubit machine and the oscillator
//!   Otto cycle with a squeezed-thermal hot bath.
//!
//! Units: ħ = k_B = 1, so frequencies, energies and temperatures share one unit.
#![cfg_attr(not(test), no_std)]
#![forbid(unsafe_code)]
#![allow(clippy::needless_range_loop, clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

mod error;

pub mod dynamics;
pub mod ledger;
pub mod machines;
pub mod operator;
pub mod passivity;

pub use error::{Error, Result};
pub use num_complex::Complex64 as C64;

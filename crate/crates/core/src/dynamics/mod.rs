//! Markovian open-system dynamics: the GKLS generator, fixed-step RK4
//! propagation under time-dependent Hamiltonians, and stationary states.

mod band;
mod channel;
mod evolve;
mod generator;
mod schedule;
mod steady;

pub use channel::{BathChannel, ChannelSchedule};
pub use evolve::{
    evolve, evolve_with, stable_step, Diagnostics, EvolveOptions, Trajectory, CLAMP_THRESHOLD,
    POSITIVITY_FAILURE,
};
pub use generator::{lindblad_rhs, Dissipator, Generator, Workspace};
pub use schedule::HamiltonianSchedule;
pub use steady::{steady_state, STEADY_RESIDUAL_TOL};

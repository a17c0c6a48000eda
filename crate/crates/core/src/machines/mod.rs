//! Machine models: the two-bath modulated qubit and the oscillator Otto
//! cycle with a squeezed-thermal hot bath.

mod minimal;
mod occupancy;
mod otto;
mod squeezed;

pub use minimal::{
    bisect_power_zero, minimal_machine_steady_state, MinimalMachineParams, Regime,
    SteadyStateReport, IDLE_TOL,
};
pub use occupancy::{bose_occupancy, critical_modulation};
pub use otto::{
    efficiency_bound, otto_cycle, otto_cycle_moments, CycleReport, OttoBackend, OttoParams, Stroke,
    StrokeKind,
};
pub use squeezed::{
    fock_dim_for_tail, squeezed_mean_quanta, squeezed_thermal_state,
    squeezed_thermal_state_with_occupancy, TAIL_TOL,
};

mod common;

use common::random_state;
use proptest::prelude::*;
use qthermo_core::dynamics::{
    evolve, stable_step, BathChannel, ChannelSchedule, EvolveOptions, HamiltonianSchedule,
};
use qthermo_core::ledger::{build_ledger, check_inequalities, counterfactual_exchange, EvolutionSpec};
use qthermo_core::operator::{fock_space, HermitianOperator};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn relaxation(dim: usize, omega: f64, gamma: f64, t: f64) -> (HermitianOperator, BathChannel) {
    let f = fock_space(dim).unwrap();
    let ch = BathChannel::thermal(f.annihilation.clone(), gamma, omega, t).unwrap();
    (f.oscillator_hamiltonian(omega), ch)
}

/// Qubit whose splitting ramps from ω₀ to ω₁, with a bath that stays
/// resonant so the instantaneous Gibbs state is always a fixed point.
fn driven_qubit(w0: f64, w1: f64, ramp: f64, gamma: f64, t: f64) -> (HamiltonianSchedule, ChannelSchedule, f64) {
    let f = fock_space(2).unwrap();
    let sched = HamiltonianSchedule::linear_ramp(
        f.oscillator_hamiltonian(w0),
        f.oscillator_hamiltonian(w1),
        ramp,
    )
    .unwrap();
    let lowering = f.annihilation.clone();
    let channels = ChannelSchedule::driven(move |time| {
        let w = w0 + (w1 - w0) * (time / ramp).clamp(0.0, 1.0);
        Ok(vec![BathChannel::thermal(lowering.clone(), gamma, w, t)?])
    });
    let probe = BathChannel::thermal(f.annihilation.clone(), gamma, w0.max(w1), t).unwrap();
    let dt = stable_step(w0.max(w1), &[probe]).unwrap();
    (sched, channels, dt)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn constant_h_ledger_closes(seed in any::<u64>(), osc in any::<bool>(), gamma in 0.05f64..1.0, t in 0.2f64..3.0) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let dim = if osc { 8 } else { 2 };
        let (h, ch) = relaxation(dim, 1.0, gamma, t);
        let dt = stable_step(h.spectral_norm().unwrap(), std::slice::from_ref(&ch)).unwrap();
        let traj = evolve(&random_state(&mut rng, dim), &HamiltonianSchedule::constant(h), &vec![ch].into(), 3.0 / gamma, dt).unwrap();
        let l = build_ledger(&traj).unwrap();
        let r = &l.residuals;
        prop_assert!(l.work.iter().all(|&w| w == 0.0));
        prop_assert!(r.first_law < 1e-12 * r.energy_scale && r.split < 1e-12 * r.energy_scale);
        prop_assert!(r.exchange_direct < 1e-10 * r.energy_scale);
        prop_assert!(r.dissipated_direct < 1e-10 * r.energy_scale);
        // heat is the change of passive energy
        let dq = l.passive_energy[l.len() - 1] - l.passive_energy[0];
        prop_assert!((l.final_heat() - dq).abs() < 1e-12 * r.energy_scale);
    }

    #[test]
    fn relaxation_obeys_both_bounds(seed in any::<u64>(), osc in any::<bool>(), gamma in 0.1f64..1.0) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let dim = if osc { 5 } else { 2 };
        let (h, ch) = relaxation(dim, 1.0, gamma, 1.0);
        let dt = stable_step(h.spectral_norm().unwrap(), std::slice::from_ref(&ch)).unwrap();
        let traj = evolve(&random_state(&mut rng, dim), &HamiltonianSchedule::constant(h), &vec![ch].into(), 4.0 / gamma, dt).unwrap();
        let rep = check_inequalities(&build_ledger(&traj).unwrap(), 1.0, None).unwrap();
        prop_assert!(rep.slack_tight >= -1e-8, "{:?}", rep);
        prop_assert!(rep.slack_spohn >= -1e-8);
        prop_assert!(rep.slack_tight <= rep.slack_spohn + 1e-8);
        prop_assert!(rep.dissipated_ergotropy <= 1e-8);
    }

    #[test]
    fn driven_counterfactual_bound(seed in any::<u64>(), up in any::<bool>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (w0, w1) = if up { (1.0, 2.0) } else { (2.0, 1.0) };
        let (schedule, channels, dt) = driven_qubit(w0, w1, 2.0, 0.5, 1.0);
        let spec = EvolutionSpec { initial: random_state(&mut rng, 2), schedule, channels, options: EvolveOptions::new(4.0, dt) };
        let l = build_ledger(&spec.run().unwrap()).unwrap();
        let e_prime = counterfactual_exchange(&spec).unwrap();
        let rep = check_inequalities(&l, 1.0, Some(e_prime)).unwrap();
        prop_assert!(rep.slack_tight >= -1e-8, "{:?}", rep);
        prop_assert!(rep.slack_spohn >= -1e-8, "{:?}", rep);
    }
}

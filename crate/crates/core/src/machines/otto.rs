//! Four-stroke Otto cycle of an oscillator between a cold thermal bath and a
//! (possibly squeezed) hot bath.
//!
//! Strokes: compression ω₁ → ω₂ with the state held fixed, full contact with
//! the hot bath at ω₂, expansion ω₂ → ω₁, full contact with the cold bath at
//! ω₁. Since H ∝ a†a throughout, the ideal frequency ramps leave the state
//! unchanged and only rescale its energy.

use alloc::format;
use alloc::vec::Vec;

use super::minimal::Regime;
use super::occupancy::bose_occupancy;
use super::squeezed::{fock_dim_for_tail, squeezed_mean_quanta, TAIL_TOL};
use crate::dynamics::{steady_state, BathChannel};
use crate::operator::{fock_space, DensityMatrix, HermitianOperator, MAX_DIM};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OttoParams {
    pub omega_cold: f64,
    pub omega_hot: f64,
    pub t_hot: f64,
    pub t_cold: f64,
    pub squeezing: f64,
    /// Fock truncation; `None` picks the smallest one meeting the tail rule.
    pub fock_dim: Option<usize>,
}

impl OttoParams {
    pub fn validate(&self) -> Result<()> {
        let vals = [self.omega_cold, self.omega_hot, self.t_hot, self.t_cold, self.squeezing];
        if vals.iter().any(|x| !x.is_finite()) {
            return Err(Error::domain("cycle parameters must be finite"));
        }
        if !(self.omega_cold > 0.0) || !(self.omega_hot > self.omega_cold) {
            return Err(Error::domain(format!(
                "need 0 < omega_cold < omega_hot, got {} and {}",
                self.omega_cold, self.omega_hot
            )));
        }
        if !(self.t_cold > 0.0) || !(self.t_hot > self.t_cold) {
            return Err(Error::domain(format!(
                "need T_H > T_C > 0, got T_H={}, T_C={}",
                self.t_hot, self.t_cold
            )));
        }
        if !(self.squeezing >= 0.0) {
            return Err(Error::domain("squeezing must be non-negative"));
        }
        Ok(())
    }

    pub fn carnot(&self) -> f64 {
        1.0 - self.t_cold / self.t_hot
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StrokeKind {
    Compression,
    HotContact,
    Expansion,
    ColdContact,
}

impl StrokeKind {
    pub fn as_str(self) -> &'static str {
        match self {
            StrokeKind::Compression => "compression",
            StrokeKind::HotContact => "hot_contact",
            StrokeKind::Expansion => "expansion",
            StrokeKind::ColdContact => "cold_contact",
        }
    }
}

/// Energy bookkeeping of one stroke. For ramps `change` is work done on the
/// oscillator; for bath contacts it is the energy exchanged with the bath.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Stroke {
    pub kind: StrokeKind,
    pub energy_before: f64,
    pub energy_after: f64,
    pub change: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OttoBackend {
    /// Truncated Fock space with steady states from the dynamics module.
    Fock,
    /// Closed-form mean occupations (exact for ideal strokes).
    Moments,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CycleReport {
    pub strokes: Vec<Stroke>,
    /// Sum of the ramp works; negative when the cycle delivers work.
    pub total_work: f64,
    pub exchange_hot: f64,
    pub exchange_cold: f64,
    /// Hot-contact exchange of the same cycle with an unsqueezed hot bath.
    pub counterfactual_heat: f64,
    pub regime: Regime,
    pub eta: Option<f64>,
    /// Generalised bound; `None` when the hot contact delivers no energy.
    pub eta_max: Option<f64>,
    pub carnot: f64,
    pub backend: OttoBackend,
    pub fock_dim: Option<usize>,
}

impl CycleReport {
    /// Total work plus all bath exchanges; zero over a closed cycle.
    pub fn first_law_residual(&self) -> f64 {
        self.total_work + self.exchange_hot + self.exchange_cold
    }
}

/// 1 − (T_C/T_H)·(ℰ′/ℰ), capped at 1.
pub fn efficiency_bound(exchange_prime: f64, exchange: f64, t_cold: f64, t_hot: f64) -> Result<f64> {
    if !(exchange > 0.0) || !exchange.is_finite() || !exchange_prime.is_finite() {
        return Err(Error::domain(format!("hot exchange must be positive, got {exchange}")));
    }
    if !(t_cold > 0.0) || !(t_hot > t_cold) {
        return Err(Error::domain(format!("need 0 < T_C < T_H, got T_C={t_cold}, T_H={t_hot}")));
    }
    Ok((1.0 - (t_cold / t_hot) * (exchange_prime / exchange)).min(1.0))
}

struct Bookkeeping {
    strokes: Vec<Stroke>,
    total_work: f64,
    exchange_hot: f64,
    exchange_cold: f64,
}

/// Strokes from the mean quanta after cold and hot contact.
fn book(p: &OttoParams, n_cold_state: f64, n_hot_state: f64) -> Bookkeeping {
    let (w1, w2) = (p.omega_cold, p.omega_hot);
    let e_a = w1 * n_cold_state;
    let e_b = w2 * n_cold_state;
    let e_c = w2 * n_hot_state;
    let e_d = w1 * n_hot_state;
    let stroke = |kind, before: f64, after: f64| Stroke {
        kind,
        energy_before: before,
        energy_after: after,
        change: after - before,
    };
    let strokes = alloc::vec![
        stroke(StrokeKind::Compression, e_a, e_b),
        stroke(StrokeKind::HotContact, e_b, e_c),
        stroke(StrokeKind::Expansion, e_c, e_d),
        stroke(StrokeKind::ColdContact, e_d, e_a),
    ];
    Bookkeeping {
        total_work: strokes[0].change + strokes[2].change,
        exchange_hot: strokes[1].change,
        exchange_cold: strokes[3].change,
        strokes,
    }
}

fn finish(
    p: &OttoParams,
    b: Bookkeeping,
    counterfactual_heat: f64,
    backend: OttoBackend,
    fock_dim: Option<usize>,
) -> Result<CycleReport> {
    let eta_max = if b.exchange_hot > 0.0 {
        Some(efficiency_bound(counterfactual_heat, b.exchange_hot, p.t_cold, p.t_hot)?)
    } else {
        None
    };
    let (regime, eta) = if b.total_work < 0.0 && b.exchange_hot > 0.0 {
        (Regime::Engine, Some(-b.total_work / b.exchange_hot))
    } else if b.total_work == 0.0 {
        (Regime::Idle, None)
    } else {
        (Regime::Refrigerator, None)
    };
    Ok(CycleReport {
        strokes: b.strokes,
        total_work: b.total_work,
        exchange_hot: b.exchange_hot,
        exchange_cold: b.exchange_cold,
        counterfactual_heat,
        regime,
        eta,
        eta_max,
        carnot: p.carnot(),
        backend,
        fock_dim,
    })
}

/// Hot-contact fixed point on `dim` levels. The squeezed channel is defined
/// in the frame rotating at ω₂, where the oscillator Hamiltonian vanishes.
fn hot_state(dim: usize, p: &OttoParams, squeezing: f64) -> Result<DensityMatrix> {
    let f = fock_space(dim)?;
    let ch = BathChannel::squeezed(f.annihilation, 1.0, p.omega_hot, p.t_hot, squeezing)?;
    steady_state(&HermitianOperator::zeros(dim)?, &[ch])
}

fn cold_state(dim: usize, p: &OttoParams) -> Result<DensityMatrix> {
    let f = fock_space(dim)?;
    let h = f.oscillator_hamiltonian(p.omega_cold);
    let ch = BathChannel::thermal(f.annihilation, 1.0, p.omega_cold, p.t_cold)?;
    steady_state(&h, &[ch])
}

fn tail(state: &DensityMatrix) -> f64 {
    let pops = state.populations();
    let d = pops.len();
    pops[d - 1] + pops[d - 2]
}

/// Runs the cycle on a truncated Fock space. Both bath contacts are solved
/// to their exact fixed points; the counterfactual cycle repeats the hot
/// contact with r = 0.
pub fn otto_cycle(p: &OttoParams) -> Result<CycleReport> {
    p.validate()?;
    let n_hot = bose_occupancy(p.omega_hot, p.t_hot)?;
    let n_cold = bose_occupancy(p.omega_cold, p.t_cold)?;
    let dim = match p.fock_dim {
        Some(d) => d,
        None => fock_dim_for_tail(n_hot, p.squeezing, TAIL_TOL)?
            .max(fock_dim_for_tail(n_cold, 0.0, TAIL_TOL)?)
            .min(MAX_DIM),
    };
    let number = fock_space(dim)?.number;

    let cold = cold_state(dim, p)?;
    let hot = hot_state(dim, p, p.squeezing)?;
    for s in [&cold, &hot] {
        let t = tail(s);
        if !(t <= TAIL_TOL) {
            return Err(Error::Truncation { dim, tail: t });
        }
    }
    let nc = cold.expectation(&number);
    let b = book(p, nc, hot.expectation(&number));

    let counterfactual = if p.squeezing == 0.0 {
        b.exchange_hot
    } else {
        let thermal_hot = hot_state(dim, p, 0.0)?;
        book(p, nc, thermal_hot.expectation(&number)).exchange_hot
    };
    finish(p, b, counterfactual, OttoBackend::Fock, Some(dim))
}

/// The same cycle from closed-form mean occupations: ⟨a†a⟩ = n_C after cold
/// contact and n_H·cosh 2r + sinh² r after hot contact. Valid for any r.
pub fn otto_cycle_moments(p: &OttoParams) -> Result<CycleReport> {
    p.validate()?;
    let n_hot = bose_occupancy(p.omega_hot, p.t_hot)?;
    let n_cold = bose_occupancy(p.omega_cold, p.t_cold)?;
    let b = book(p, n_cold, squeezed_mean_quanta(n_hot, p.squeezing));
    let counterfactual = book(p, n_cold, n_hot).exchange_hot;
    finish(p, b, counterfactual, OttoBackend::Moments, None)
}

//! The two-bath qubit machine: a qubit of resonance ω₀ whose frequency is
//! modulated at Δ, so that it exchanges quanta ω₀ + Δ with the hot bath and
//! ω₀ − Δ with the cold bath.

use alloc::format;

use super::occupancy::{bose_occupancy, critical_modulation};
use crate::dynamics::{steady_state, BathChannel};
use crate::operator::{CMatrix, HermitianOperator};
use crate::{Error, Result};

/// Occupancies closer than this are treated as equal.
pub const IDLE_TOL: f64 = 1e-14;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MinimalMachineParams {
    pub omega0: f64,
    pub delta: f64,
    pub gamma_hot: f64,
    pub gamma_cold: f64,
    pub t_hot: f64,
    pub t_cold: f64,
}

impl MinimalMachineParams {
    pub fn validate(&self) -> Result<()> {
        let all = [self.omega0, self.delta, self.gamma_hot, self.gamma_cold, self.t_hot, self.t_cold];
        if all.iter().any(|x| !x.is_finite()) {
            return Err(Error::domain("machine parameters must be finite"));
        }
        if !(self.omega0 > 0.0) || !(self.delta > 0.0) || !(self.delta < self.omega0) {
            return Err(Error::domain(format!(
                "need 0 < delta < omega0, got delta={}, omega0={}",
                self.delta, self.omega0
            )));
        }
        if !(self.gamma_hot > 0.0) || !(self.gamma_cold > 0.0) {
            return Err(Error::domain("coupling rates must be positive"));
        }
        if !(self.t_cold > 0.0) || !(self.t_hot > self.t_cold) {
            return Err(Error::domain(format!(
                "need T_H > T_C > 0, got T_H={}, T_C={}",
                self.t_hot, self.t_cold
            )));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Regime {
    Engine,
    Refrigerator,
    Idle,
}

impl Regime {
    pub fn as_str(self) -> &'static str {
        match self {
            Regime::Engine => "engine",
            Regime::Refrigerator => "refrigerator",
            Regime::Idle => "idle",
        }
    }
}

/// Steady-state currents. Energy currents are positive into the qubit;
/// `power` is positive when consumed from the drive.
#[derive(Clone, Debug, PartialEq)]
pub struct SteadyStateReport {
    pub p_excited: f64,
    pub n_hot: f64,
    pub n_cold: f64,
    /// Net quanta per unit time absorbed from the hot bath.
    pub flux_hot: f64,
    pub j_hot: f64,
    pub j_cold: f64,
    pub power: f64,
    pub regime: Regime,
    /// −power/J_H for an engine; the limiting value when idle.
    pub efficiency: Option<f64>,
    /// J_C/power for a refrigerator; the limiting value when idle.
    pub cop: Option<f64>,
    pub carnot: f64,
    pub carnot_cop: f64,
    pub delta_cr: f64,
}

impl SteadyStateReport {
    /// J_H + J_C + power, zero in steady state.
    pub fn first_law_residual(&self) -> f64 {
        self.j_hot + self.j_cold + self.power
    }
}

/// Solves the qubit's stationary state under the two shifted-frequency
/// channels and derives the currents from it.
pub fn minimal_machine_steady_state(params: &MinimalMachineParams) -> Result<SteadyStateReport> {
    params.validate()?;
    let MinimalMachineParams { omega0, delta, gamma_hot, gamma_cold, t_hot, t_cold } = *params;
    let w_hot = omega0 + delta;
    let w_cold = omega0 - delta;
    let n_hot = bose_occupancy(w_hot, t_hot)?;
    let n_cold = bose_occupancy(w_cold, t_cold)?;

    let lowering = CMatrix::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]);
    let hot = BathChannel::thermal(lowering.clone(), gamma_hot, w_hot, t_hot)?;
    let cold = BathChannel::thermal(lowering, gamma_cold, w_cold, t_cold)?;
    let h = HermitianOperator::from_real_diagonal(&[0.0, omega0])?;
    let rho = steady_state(&h, &[hot, cold])?;
    let p = rho.populations()[1];

    let flux_hot = gamma_hot * (n_hot * (1.0 - p) - (n_hot + 1.0) * p);
    let j_hot = w_hot * flux_hot;
    let j_cold = -w_cold * flux_hot;
    let power = -2.0 * delta * flux_hot;

    let regime = if (n_hot - n_cold).abs() <= IDLE_TOL {
        Regime::Idle
    } else if n_hot > n_cold {
        Regime::Engine
    } else {
        Regime::Refrigerator
    };
    let limit_eff = 2.0 * delta / w_hot;
    let limit_cop = w_cold / (2.0 * delta);
    let (efficiency, cop) = match regime {
        Regime::Engine => (Some(-power / j_hot), None),
        Regime::Refrigerator => (None, Some(j_cold / power)),
        Regime::Idle => (Some(limit_eff), Some(limit_cop)),
    };
    Ok(SteadyStateReport {
        p_excited: p,
        n_hot,
        n_cold,
        flux_hot,
        j_hot,
        j_cold,
        power,
        regime,
        efficiency,
        cop,
        carnot: 1.0 - t_cold / t_hot,
        carnot_cop: t_cold / (t_hot - t_cold),
        delta_cr: critical_modulation(omega0, t_hot, t_cold)?,
    })
}

/// Locates the modulation where the power changes sign by bisection on
/// (lo, hi), which must bracket it.
pub fn bisect_power_zero(
    base: &MinimalMachineParams,
    mut lo: f64,
    mut hi: f64,
    tol: f64,
) -> Result<f64> {
    let sign = |d: f64| -> Result<f64> {
        let r = minimal_machine_steady_state(&MinimalMachineParams { delta: d, ..*base })?;
        Ok(r.power)
    };
    let (p_lo, p_hi) = (sign(lo)?, sign(hi)?);
    if p_lo.signum() == p_hi.signum() {
        return Err(Error::domain(format!("power does not change sign on [{lo}, {hi}]")));
    }
    let neg_at_lo = p_lo < 0.0;
    let mut iterations = 0;
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        let p = sign(mid)?;
        iterations += 1;
        if p == 0.0 {
            return Ok(mid);
        }
        if (p < 0.0) == neg_at_lo {
            lo = mid;
        } else {
            hi = mid;
        }
        if iterations > 200 {
            return Err(Error::numerical("bisection did not converge"));
        }
    }
    Ok(0.5 * (lo + hi))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(delta: f64) -> MinimalMachineParams {
        MinimalMachineParams {
            omega0: 3.0,
            delta,
            gamma_hot: 1.0,
            gamma_cold: 1.0,
            t_hot: 2.0,
            t_cold: 1.0,
        }
    }

    #[test]
    fn engine_example() {
        let r = minimal_machine_steady_state(&params(0.5)).unwrap();
        assert_eq!(r.regime, Regime::Engine);
        let eta = r.efficiency.unwrap();
        assert!((eta - 1.0 / 3.5).abs() < 1e-12);
        assert!((eta - 0.285714).abs() < 1e-6);
        assert!(eta <= r.carnot + 1e-12);
        assert!(r.power < 0.0 && r.j_hot > 0.0);
        assert!(r.first_law_residual().abs() < 1e-12);
    }

    #[test]
    fn refrigerator_example() {
        let r = minimal_machine_steady_state(&params(1.5)).unwrap();
        assert_eq!(r.regime, Regime::Refrigerator);
        let cop = r.cop.unwrap();
        assert!((cop - 0.5).abs() < 1e-12);
        assert!((r.carnot_cop - 1.0).abs() < 1e-15);
        assert!(r.j_cold > 0.0 && r.power > 0.0);
    }

    #[test]
    fn critical_point_is_idle_at_carnot() {
        let r = minimal_machine_steady_state(&params(1.0)).unwrap();
        assert_eq!(r.regime, Regime::Idle);
        assert!(r.flux_hot.abs() < 1e-14);
        assert!(r.power.abs() < 1e-13);
        assert!((r.efficiency.unwrap() - r.carnot).abs() < 1e-12);
    }

    #[test]
    fn excited_population_matches_rate_equation() {
        let p = MinimalMachineParams { gamma_hot: 0.05, gamma_cold: 3.0, ..params(0.7) };
        let r = minimal_machine_steady_state(&p).unwrap();
        let (gh, gc, nh, nc) = (p.gamma_hot, p.gamma_cold, r.n_hot, r.n_cold);
        let want = (gh * nh + gc * nc) / (gh * (2.0 * nh + 1.0) + gc * (2.0 * nc + 1.0));
        assert!((r.p_excited - want).abs() < 1e-13);
    }

    #[test]
    fn invalid_parameters_are_rejected() {
        assert!(minimal_machine_steady_state(&params(3.0)).is_err());
        assert!(minimal_machine_steady_state(&params(0.0)).is_err());
        let swapped = MinimalMachineParams { t_hot: 1.0, t_cold: 2.0, ..params(0.5) };
        assert!(minimal_machine_steady_state(&swapped).is_err());
    }

    #[test]
    fn bisection_finds_critical_modulation() {
        let d = bisect_power_zero(&params(0.5), 0.1, 2.9, 1e-12).unwrap();
        assert!((d - 1.0).abs() < 1e-9);
    }
}

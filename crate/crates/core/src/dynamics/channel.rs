use alloc::format;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

use crate::machines::bose_occupancy;
use crate::operator::{check_dim, hermitian_eigenvalues, CMatrix};
use crate::{Error, Result};

/// One dissipative coupling to a bosonic reservoir.
///
/// The jump operator `L` lowers the system by one transition quantum. A
/// thermal channel acts with rate γ(n+1) through `L` and γn through `L†`.
/// With squeezing r > 0 the reservoir is a squeezed-thermal state: the
/// occupancy becomes N = n·cosh 2r + sinh² r and the anomalous correlation
/// M = −(n + ½)·sinh 2r (squeezing phase 0) couples `L²` and `L†²`.
/// Squeezed channels are written in the frame rotating at the transition
/// frequency, so their fixed point is only stationary under a Hamiltonian
/// that vanishes in that frame.
#[derive(Clone, Debug, PartialEq)]
pub struct BathChannel {
    jump: CMatrix,
    rate: f64,
    temperature: Option<f64>,
    occupancy: f64,
    squeezing: f64,
}

impl BathChannel {
    /// Thermal reservoir at `temperature` coupled at transition `frequency`.
    pub fn thermal(jump: CMatrix, rate: f64, frequency: f64, temperature: f64) -> Result<Self> {
        Self::squeezed(jump, rate, frequency, temperature, 0.0)
    }

    pub fn squeezed(
        jump: CMatrix,
        rate: f64,
        frequency: f64,
        temperature: f64,
        squeezing: f64,
    ) -> Result<Self> {
        let n = bose_occupancy(frequency, temperature)?;
        let mut ch = Self::from_occupancy(jump, rate, n, squeezing)?;
        ch.temperature = Some(temperature);
        Ok(ch)
    }

    /// A channel specified by its thermal occupancy directly (no temperature).
    pub fn from_occupancy(jump: CMatrix, rate: f64, occupancy: f64, squeezing: f64) -> Result<Self> {
        check_dim(jump.dim())?;
        if !(rate >= 0.0) || !rate.is_finite() {
            return Err(Error::domain(format!("rate must be non-negative, got {rate}")));
        }
        if !(occupancy >= 0.0) || !occupancy.is_finite() {
            return Err(Error::domain(format!("occupancy must be non-negative, got {occupancy}")));
        }
        if !(squeezing >= 0.0) || !squeezing.is_finite() {
            return Err(Error::domain(format!("squeezing must be non-negative, got {squeezing}")));
        }
        Ok(BathChannel { jump, rate, temperature: None, occupancy, squeezing })
    }

    pub fn dim(&self) -> usize {
        self.jump.dim()
    }

    pub fn jump(&self) -> &CMatrix {
        &self.jump
    }

    pub fn rate(&self) -> f64 {
        self.rate
    }

    pub fn temperature(&self) -> Option<f64> {
        self.temperature
    }

    /// Thermal occupancy n before squeezing.
    pub fn occupancy(&self) -> f64 {
        self.occupancy
    }

    pub fn squeezing(&self) -> f64 {
        self.squeezing
    }

    /// N = n·cosh 2r + sinh² r.
    pub fn effective_occupancy(&self) -> f64 {
        let r = self.squeezing;
        let s = libm::sinh(r);
        self.occupancy * libm::cosh(2.0 * r) + s * s
    }

    /// M = −(n + ½)·sinh 2r.
    pub fn anomalous(&self) -> f64 {
        -(self.occupancy + 0.5) * libm::sinh(2.0 * self.squeezing)
    }

    /// Upper bound on the decay rates this channel induces, used for step
    /// size selection: γ(2N + 1 + 2|M|)·‖L‖₂².
    pub fn rate_scale(&self) -> Result<f64> {
        if self.rate == 0.0 {
            return Ok(0.0);
        }
        let ltl = self.jump.adjoint().matmul(&self.jump);
        let top = *hermitian_eigenvalues(&ltl)?.last().unwrap_or(&0.0);
        let n = self.effective_occupancy();
        Ok(self.rate * (2.0 * n + 1.0 + 2.0 * self.anomalous().abs()) * top)
    }
}

/// Channels either fixed for the whole evolution or re-evaluated at each
/// time (for baths whose occupancy follows a driven transition frequency).
#[derive(Clone)]
pub enum ChannelSchedule {
    Constant(Vec<BathChannel>),
    Driven(Arc<dyn Fn(f64) -> Result<Vec<BathChannel>> + Send + Sync>),
}

impl ChannelSchedule {
    pub fn driven(f: impl Fn(f64) -> Result<Vec<BathChannel>> + Send + Sync + 'static) -> Self {
        ChannelSchedule::Driven(Arc::new(f))
    }

    pub fn at(&self, t: f64) -> Result<Vec<BathChannel>> {
        match self {
            ChannelSchedule::Constant(chs) => Ok(chs.clone()),
            ChannelSchedule::Driven(f) => f(t),
        }
    }

    pub fn is_constant(&self) -> bool {
        matches!(self, ChannelSchedule::Constant(_))
    }
}

impl From<Vec<BathChannel>> for ChannelSchedule {
    fn from(chs: Vec<BathChannel>) -> Self {
        ChannelSchedule::Constant(chs)
    }
}

impl fmt::Debug for ChannelSchedule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ChannelSchedule::Constant(chs) => f.debug_tuple("Constant").field(chs).finish(),
            ChannelSchedule::Driven(_) => f.write_str("Driven(..)"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operator::fock_space;

    #[test]
    fn squeezed_coefficients() {
        let a = fock_space(4).unwrap().annihilation;
        let ch = BathChannel::from_occupancy(a.clone(), 1.0, 0.5, 1.0).unwrap();
        let n = 0.5 * (2.0f64).cosh() + 1.0f64.sinh().powi(2);
        assert!((ch.effective_occupancy() - n).abs() < 1e-14);
        assert!((ch.anomalous() + (2.0f64).sinh()).abs() < 1e-14);
        // N(N+1) − M² = n(n+1) keeps the dissipator completely positive.
        let gap = n * (n + 1.0) - ch.anomalous().powi(2);
        assert!((gap - 0.75).abs() < 1e-12);
        let thermal = BathChannel::from_occupancy(a, 1.0, 0.5, 0.0).unwrap();
        assert_eq!(thermal.effective_occupancy(), 0.5);
        assert_eq!(thermal.anomalous(), 0.0);
    }

    #[test]
    fn rejects_invalid_parameters() {
        let a = fock_space(3).unwrap().annihilation;
        assert!(BathChannel::from_occupancy(a.clone(), -1.0, 0.0, 0.0).is_err());
        assert!(BathChannel::from_occupancy(a.clone(), 1.0, -0.1, 0.0).is_err());
        assert!(BathChannel::from_occupancy(a.clone(), 1.0, 0.0, -0.1).is_err());
        assert!(BathChannel::thermal(a, 1.0, 0.0, 1.0).is_err());
    }

    #[test]
    fn rate_scale_of_truncated_lowering() {
        let a = fock_space(5).unwrap().annihilation;
        let ch = BathChannel::from_occupancy(a, 2.0, 0.0, 0.0).unwrap();
        assert!((ch.rate_scale().unwrap() - 8.0).abs() < 1e-12);
    }
}

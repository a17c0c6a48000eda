use alloc::sync::Arc;
use core::fmt;

use crate::operator::HermitianOperator;
use crate::{Error, Result};

type Evaluator = Arc<dyn Fn(f64) -> Result<HermitianOperator> + Send + Sync>;

/// A time-dependent Hamiltonian H(t) of fixed dimension.
#[derive(Clone)]
pub struct HamiltonianSchedule {
    dim: usize,
    period: Option<f64>,
    kind: Kind,
}

#[derive(Clone)]
enum Kind {
    Constant(HermitianOperator),
    Function(Evaluator),
}

impl HamiltonianSchedule {
    pub fn constant(h: HermitianOperator) -> Self {
        HamiltonianSchedule { dim: h.dim(), period: None, kind: Kind::Constant(h) }
    }

    /// Wraps an arbitrary evaluator; its dimension is taken from t = 0 and
    /// checked at every later evaluation.
    pub fn from_fn(
        f: impl Fn(f64) -> Result<HermitianOperator> + Send + Sync + 'static,
    ) -> Result<Self> {
        let dim = f(0.0)?.dim();
        Ok(HamiltonianSchedule { dim, period: None, kind: Kind::Function(Arc::new(f)) })
    }

    /// H(t) = f(t mod period), periodic by construction.
    pub fn periodic(
        period: f64,
        f: impl Fn(f64) -> Result<HermitianOperator> + Send + Sync + 'static,
    ) -> Result<Self> {
        if !(period > 0.0) || !period.is_finite() {
            return Err(Error::domain(alloc::format!("period must be positive, got {period}")));
        }
        let mut s = Self::from_fn(move |t| {
            let r = libm::fmod(t, period);
            f(if r < 0.0 { r + period } else { r })
        })?;
        s.period = Some(period);
        Ok(s)
    }

    /// Linear interpolation from `start` at t = 0 to `end` at `duration`,
    /// constant afterwards.
    pub fn linear_ramp(
        start: HermitianOperator,
        end: HermitianOperator,
        duration: f64,
    ) -> Result<Self> {
        if start.dim() != end.dim() {
            return Err(Error::DimensionMismatch { expected: start.dim(), found: end.dim() });
        }
        if !(duration > 0.0) || !duration.is_finite() {
            return Err(Error::domain(alloc::format!("ramp duration must be positive, got {duration}")));
        }
        Self::from_fn(move |t| {
            let s = (t / duration).clamp(0.0, 1.0);
            start.linear_combination(1.0 - s, &end, s)
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn period(&self) -> Option<f64> {
        self.period
    }

    pub fn is_constant(&self) -> bool {
        matches!(self.kind, Kind::Constant(_))
    }

    pub fn at(&self, t: f64) -> Result<HermitianOperator> {
        match &self.kind {
            Kind::Constant(h) => Ok(h.clone()),
            Kind::Function(f) => {
                let h = f(t)?;
                if h.dim() != self.dim {
                    return Err(Error::DimensionMismatch { expected: self.dim, found: h.dim() });
                }
                Ok(h)
            }
        }
    }
}

impl fmt::Debug for HamiltonianSchedule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("HamiltonianSchedule")
            .field("dim", &self.dim)
            .field("period", &self.period)
            .field("constant", &self.is_constant())
            .finish()
    }
}

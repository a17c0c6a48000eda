use alloc::format;
use alloc::vec::Vec;

use super::channel::{BathChannel, ChannelSchedule};
use super::generator::{Dissipator, Generator, Workspace};
use super::schedule::HamiltonianSchedule;
use crate::operator::{hermitian_eigenvalues, CMatrix, DensityMatrix, HermitianOperator};
use crate::{Error, Result};

/// Stored states with a most negative eigenvalue below this are rejected.
pub const POSITIVITY_FAILURE: f64 = 1e-6;
/// Negative eigenvalues smaller in magnitude than this are left in place;
/// larger ones (up to [`POSITIVITY_FAILURE`]) are clamped.
pub const CLAMP_THRESHOLD: f64 = 1e-12;

/// Drift statistics collected while integrating.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Diagnostics {
    pub steps: usize,
    pub dt: f64,
    /// Largest |Tr ρ − 1| seen at a stored sample before renormalisation.
    pub max_trace_drift: f64,
    /// Largest max|ρ − ρ†| seen at a stored sample before hermitization.
    pub max_hermitian_drift: f64,
    /// Most negative eigenvalue seen at a stored sample (0 if none).
    pub min_eigenvalue: f64,
    /// Number of stored samples whose spectrum was clamped.
    pub clamped_samples: usize,
}

/// Time grid with the matching states and Hamiltonians.
#[derive(Clone, Debug)]
pub struct Trajectory {
    times: Vec<f64>,
    states: Vec<DensityMatrix>,
    hamiltonians: Vec<HermitianOperator>,
    diagnostics: Diagnostics,
}

impl Trajectory {
    /// Assembles a trajectory from samples, e.g. a closed-form solution.
    pub fn new(
        times: Vec<f64>,
        states: Vec<DensityMatrix>,
        hamiltonians: Vec<HermitianOperator>,
    ) -> Result<Self> {
        if times.len() != states.len() || times.len() != hamiltonians.len() {
            return Err(Error::domain(format!(
                "sample counts differ: {} times, {} states, {} Hamiltonians",
                times.len(),
                states.len(),
                hamiltonians.len()
            )));
        }
        if times.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::domain("sample times must be strictly increasing"));
        }
        if let Some(first) = states.first() {
            let d = first.dim();
            if let Some(bad) = states
                .iter()
                .map(|s| s.dim())
                .chain(hamiltonians.iter().map(|h| h.dim()))
                .find(|&x| x != d)
            {
                return Err(Error::DimensionMismatch { expected: d, found: bad });
            }
        }
        Ok(Trajectory { times, states, hamiltonians, diagnostics: Diagnostics::default() })
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.states.first().map_or(0, |s| s.dim())
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn states(&self) -> &[DensityMatrix] {
        &self.states
    }

    pub fn hamiltonians(&self) -> &[HermitianOperator] {
        &self.hamiltonians
    }

    pub fn diagnostics(&self) -> &Diagnostics {
        &self.diagnostics
    }

    pub fn final_state(&self) -> Option<&DensityMatrix> {
        self.states.last()
    }
}

/// Integration grid: `steps` RK4 steps of size `t_end / steps`, storing every
/// `stride`-th state and always the last one.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EvolveOptions {
    pub t_end: f64,
    pub dt: f64,
    pub stride: usize,
}

impl EvolveOptions {
    pub fn new(t_end: f64, dt: f64) -> Self {
        EvolveOptions { t_end, dt, stride: 1 }
    }

    pub fn with_stride(mut self, stride: usize) -> Self {
        self.stride = stride;
        self
    }

    fn steps(&self) -> Result<usize> {
        if !(self.t_end > 0.0) || !self.t_end.is_finite() {
            return Err(Error::domain(format!("t_end must be positive, got {}", self.t_end)));
        }
        if !(self.dt > 0.0) || !self.dt.is_finite() {
            return Err(Error::domain(format!("dt must be positive, got {}", self.dt)));
        }
        if self.stride == 0 {
            return Err(Error::domain("stride must be at least 1"));
        }
        let ratio = self.t_end / self.dt;
        let rounded = libm::round(ratio);
        // Accept grids that are integer multiples up to rounding.
        let steps = if (ratio - rounded).abs() <= 1e-9 * ratio.max(1.0) {
            rounded
        } else {
            libm::ceil(ratio)
        };
        if steps > 1e9 {
            return Err(Error::domain("step count exceeds 1e9"));
        }
        Ok(steps.max(1.0) as usize)
    }
}

/// Step size giving |λ|·dt ≤ 0.1 for the fastest generator eigenvalue scale,
/// well inside the RK4 stability region.
pub fn stable_step(h_norm: f64, channels: &[BathChannel]) -> Result<f64> {
    let mut scale = h_norm.abs();
    let mut total = 0.0;
    for ch in channels {
        total += ch.rate_scale()?;
    }
    scale = scale.max(total);
    if scale == 0.0 {
        return Err(Error::domain("generator vanishes; no time scale to resolve"));
    }
    Ok(0.1 / scale)
}

pub fn evolve(
    rho0: &DensityMatrix,
    schedule: &HamiltonianSchedule,
    channels: &ChannelSchedule,
    t_end: f64,
    dt: f64,
) -> Result<Trajectory> {
    evolve_with(rho0, schedule, channels, EvolveOptions::new(t_end, dt))
}

struct GeneratorSource<'a> {
    schedule: &'a HamiltonianSchedule,
    channels: &'a ChannelSchedule,
    dim: usize,
    fixed_dissipator: Option<Dissipator>,
    fixed: Option<Generator>,
}

impl<'a> GeneratorSource<'a> {
    fn new(schedule: &'a HamiltonianSchedule, channels: &'a ChannelSchedule) -> Result<Self> {
        let dim = schedule.dim();
        let fixed_dissipator = match channels {
            ChannelSchedule::Constant(chs) => Some(Dissipator::new(dim, chs)?),
            ChannelSchedule::Driven(_) => None,
        };
        let fixed = match (&fixed_dissipator, schedule.is_constant()) {
            (Some(d), true) => Some(Generator::from_parts(&schedule.at(0.0)?, d)?),
            _ => None,
        };
        Ok(GeneratorSource { schedule, channels, dim, fixed_dissipator, fixed })
    }

    fn at(&self, t: f64) -> Result<Generator> {
        if let Some(g) = &self.fixed {
            return Ok(g.clone());
        }
        let h = self.schedule.at(t)?;
        match &self.fixed_dissipator {
            Some(d) => Generator::from_parts(&h, d),
            None => Generator::from_parts(&h, &Dissipator::new(self.dim, &self.channels.at(t)?)?),
        }
    }
}

/// Fixed-step classical RK4 on the GKLS equation.
///
/// Stored samples are hermitized and renormalised; a negative eigenvalue
/// below −[`POSITIVITY_FAILURE`] aborts with [`Error::Integration`], and
/// smaller violations beyond [`CLAMP_THRESHOLD`] are clamped to zero.
/// Integration continues from the stored (cleaned) state.
pub fn evolve_with(
    rho0: &DensityMatrix,
    schedule: &HamiltonianSchedule,
    channels: &ChannelSchedule,
    opts: EvolveOptions,
) -> Result<Trajectory> {
    let dim = schedule.dim();
    if rho0.dim() != dim {
        return Err(Error::DimensionMismatch { expected: dim, found: rho0.dim() });
    }
    let steps = opts.steps()?;
    let dt = opts.t_end / steps as f64;
    let source = GeneratorSource::new(schedule, channels)?;
    let constant = source.fixed.is_some();

    let capacity = steps / opts.stride + 2;
    let mut times = Vec::with_capacity(capacity);
    let mut states = Vec::with_capacity(capacity);
    let mut hams = Vec::with_capacity(capacity);
    let mut diag = Diagnostics { dt, ..Diagnostics::default() };

    times.push(0.0);
    states.push(rho0.clone());
    hams.push(schedule.at(0.0)?);

    let mut ws = Workspace::new(dim);
    let mut rho = rho0.matrix().clone();
    let (mut k1, mut k2, mut k3, mut k4) =
        (CMatrix::zeros(dim), CMatrix::zeros(dim), CMatrix::zeros(dim), CMatrix::zeros(dim));
    let mut stage = CMatrix::zeros(dim);
    let mut g_start = source.at(0.0)?;
    for step in 0..steps {
        let t = step as f64 * dt;
        let (g_mid, g_end) = if constant {
            (g_start.clone(), g_start.clone())
        } else {
            (source.at(t + 0.5 * dt)?, source.at(t + dt)?)
        };
        g_start.apply_into(&rho, &mut k1, &mut ws);
        axpy_into(&rho, &k1, 0.5 * dt, &mut stage);
        g_mid.apply_into(&stage, &mut k2, &mut ws);
        axpy_into(&rho, &k2, 0.5 * dt, &mut stage);
        g_mid.apply_into(&stage, &mut k3, &mut ws);
        axpy_into(&rho, &k3, dt, &mut stage);
        g_end.apply_into(&stage, &mut k4, &mut ws);
        {
            let r = rho.as_mut_slice();
            let (a, b, c, d) = (k1.as_slice(), k2.as_slice(), k3.as_slice(), k4.as_slice());
            let w = dt / 6.0;
            for i in 0..r.len() {
                r[i] += (a[i] + (b[i] + c[i]) * 2.0 + d[i]) * w;
            }
        }
        if !constant {
            g_start = g_end;
        }

        let done = step + 1;
        if done % opts.stride == 0 || done == steps {
            let t_next = if done == steps { opts.t_end } else { done as f64 * dt };
            let state = clean_sample(&mut rho, t_next, &mut diag)?;
            rho = state.matrix().clone();
            times.push(t_next);
            states.push(state);
            hams.push(schedule.at(t_next)?);
        }
    }
    diag.steps = steps;
    Ok(Trajectory { times, states, hamiltonians: hams, diagnostics: diag })
}

fn axpy_into(x: &CMatrix, y: &CMatrix, a: f64, out: &mut CMatrix) {
    if out.dim() != x.dim() {
        *out = CMatrix::zeros(x.dim());
    }
    for ((o, xi), yi) in out.as_mut_slice().iter_mut().zip(x.as_slice()).zip(y.as_slice()) {
        *o = xi + yi * a;
    }
}

fn clean_sample(rho: &mut CMatrix, t: f64, diag: &mut Diagnostics) -> Result<DensityMatrix> {
    diag.max_hermitian_drift = diag.max_hermitian_drift.max(rho.hermitian_deviation());
    rho.hermitize();
    let tr = rho.trace().re;
    diag.max_trace_drift = diag.max_trace_drift.max((tr - 1.0).abs());
    if !(tr > 0.0) || !tr.is_finite() {
        return Err(Error::Integration { time: t, min_eigenvalue: f64::NAN });
    }
    let m = rho.scale_real(1.0 / tr);
    let min = hermitian_eigenvalues(&m)?[0];
    diag.min_eigenvalue = diag.min_eigenvalue.min(min);
    if min < -POSITIVITY_FAILURE {
        return Err(Error::Integration { time: t, min_eigenvalue: min });
    }
    if min < -CLAMP_THRESHOLD {
        diag.clamped_samples += 1;
        let (state, _) = DensityMatrix::clamped(m, POSITIVITY_FAILURE)?;
        return Ok(state);
    }
    Ok(DensityMatrix::from_trusted(m))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operator::{coherent_state, fock_space, gibbs_state};
    use crate::C64;

    fn sigma_minus() -> CMatrix {
        CMatrix::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]])
    }

    fn qubit_h(w: f64) -> HermitianOperator {
        HermitianOperator::from_real_diagonal(&[0.0, w]).unwrap()
    }

    #[test]
    fn excited_qubit_reaches_half_population_at_ln2() {
        let ch = BathChannel::thermal(sigma_minus(), 1.0, 1.0, 0.0).unwrap();
        let rho0 = DensityMatrix::basis(2, 1).unwrap();
        let t_end = core::f64::consts::LN_2;
        let traj = evolve(
            &rho0,
            &HamiltonianSchedule::constant(qubit_h(1.0)),
            &vec![ch].into(),
            t_end,
            1e-3,
        )
        .unwrap();
        let pe = traj.final_state().unwrap().populations()[1];
        assert!((pe - 0.5).abs() < 1e-6);
        assert_eq!(*traj.times().last().unwrap(), t_end);
    }

    #[test]
    fn coherent_amplitude_decays() {
        let dim = 20;
        let gamma = 0.8;
        let omega = 1.0;
        let f = fock_space(dim).unwrap();
        let h = f.oscillator_hamiltonian(omega);
        let ch = BathChannel::thermal(f.annihilation.clone(), gamma, omega, 0.0).unwrap();
        let rho0 = coherent_state(C64::new(1.0, 0.0), dim).unwrap();
        let traj = evolve_with(
            &rho0,
            &HamiltonianSchedule::constant(h),
            &vec![ch].into(),
            EvolveOptions::new(2.0, 1e-3 / gamma).with_stride(250),
        )
        .unwrap();
        for (t, s) in traj.times().iter().zip(traj.states()) {
            let amp = s.matrix().trace_product(&f.annihilation);
            let want = C64::from_polar(libm::exp(-0.5 * gamma * t), -omega * t);
            assert!((amp - want).norm() < 1e-6, "t={t}: {amp} vs {want}");
        }
    }

    #[test]
    fn thermal_state_is_stationary() {
        let dim = 6;
        let f = fock_space(dim).unwrap();
        let h = f.oscillator_hamiltonian(1.0);
        let rho0 = gibbs_state(&h, 0.7).unwrap();
        let ch = BathChannel::thermal(f.annihilation.clone(), 1.0, 1.0, 0.7).unwrap();
        let traj =
            evolve(&rho0, &HamiltonianSchedule::constant(h), &vec![ch].into(), 3.0, 0.01).unwrap();
        for s in traj.states() {
            assert!((s.matrix() - rho0.matrix()).max_abs() < 1e-8);
        }
    }

    #[test]
    fn fourth_order_convergence() {
        let ch = BathChannel::thermal(sigma_minus(), 1.0, 1.0, 0.0).unwrap();
        let s = 0.5f64.sqrt();
        let rho0 = DensityMatrix::pure(&[C64::new(s, 0.0), C64::new(s, 0.0)]).unwrap();
        let sched = HamiltonianSchedule::constant(qubit_h(1.0));
        let err = |dt: f64| {
            let traj = evolve(&rho0, &sched, &vec![ch.clone()].into(), 2.0, dt).unwrap();
            let pe = traj.final_state().unwrap().populations()[1];
            (pe - 0.5 * libm::exp(-2.0)).abs()
        };
        let (e1, e2) = (err(0.2), err(0.1));
        let ratio = e1 / e2;
        assert!(ratio > 12.0 && ratio < 20.0, "ratio {ratio}");
    }

    #[test]
    fn stride_thins_samples_and_keeps_endpoint() {
        let ch = BathChannel::thermal(sigma_minus(), 1.0, 1.0, 0.5).unwrap();
        let rho0 = DensityMatrix::basis(2, 1).unwrap();
        let traj = evolve_with(
            &rho0,
            &HamiltonianSchedule::constant(qubit_h(1.0)),
            &vec![ch].into(),
            EvolveOptions::new(1.05, 0.1).with_stride(4),
        )
        .unwrap();
        // 11 steps of 1.05/11: samples after steps 4, 8 and 11.
        assert_eq!(traj.len(), 4);
        assert_eq!(traj.diagnostics().steps, 11);
    }

    #[test]
    fn unstable_step_is_reported() {
        let ch = BathChannel::thermal(sigma_minus(), 1.0, 1.0, 0.0).unwrap();
        let rho0 = DensityMatrix::basis(2, 1).unwrap();
        let out = evolve(
            &rho0,
            &HamiltonianSchedule::constant(qubit_h(1.0)),
            &vec![ch].into(),
            20.0,
            4.0,
        );
        assert!(matches!(out, Err(Error::Integration { .. })), "{out:?}");
    }

    #[test]
    fn driven_channels_follow_the_schedule() {
        // Ramp ω from 1 to 2 with a bath whose occupancy tracks ω(t).
        let t_end = 2.0;
        let sched = HamiltonianSchedule::linear_ramp(qubit_h(1.0), qubit_h(2.0), t_end).unwrap();
        let chans = ChannelSchedule::driven(move |t| {
            let w = 1.0 + (t / t_end).clamp(0.0, 1.0);
            Ok(vec![BathChannel::thermal(sigma_minus(), 1.0, w, 1.0)?])
        });
        let rho0 = DensityMatrix::basis(2, 1).unwrap();
        let traj = evolve(&rho0, &sched, &chans, t_end, 0.01).unwrap();
        assert_eq!(traj.len(), 201);
        let h_end = &traj.hamiltonians()[200];
        assert!((h_end.matrix()[(1, 1)].re - 2.0).abs() < 1e-12);
    }

    #[test]
    fn trajectory_validation() {
        let s = DensityMatrix::basis(2, 0).unwrap();
        let h = qubit_h(1.0);
        assert!(Trajectory::new(vec![0.0, 0.0], vec![s.clone(), s.clone()], vec![h.clone(), h.clone()])
            .is_err());
        assert!(Trajectory::new(vec![0.0], vec![s], vec![]).is_err());
    }
}

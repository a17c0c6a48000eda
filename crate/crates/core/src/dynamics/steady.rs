//! Stationary states by a direct solve of L(ρ) = 0.
//!
//! Only the unknowns reachable from the populations through the generator's
//! coupling graph can be nonzero in a unique stationary state; they are
//! ordered by (m + n, m) so that ladder-operator generators become banded.
//! One population equation is redundant (trace preservation) and is replaced
//! by the normalisation ρ_pp = 1; the trace is fixed afterwards.

use alloc::collections::VecDeque;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use super::band::{BandMatrix, Scalar};
use super::channel::BathChannel;
use super::generator::Generator;
use crate::operator::{CMatrix, DensityMatrix, HermitianOperator};
use crate::{Error, Result, C64};

/// Required ‖L(ρ)‖_F of the returned state.
pub const STEADY_RESIDUAL_TOL: f64 = 1e-8;

/// Negative eigenvalues of the solved state up to this size are clamped.
const STEADY_CLAMP: f64 = 1e-8;

pub fn steady_state(h: &HermitianOperator, channels: &[BathChannel]) -> Result<DensityMatrix> {
    if !channels.iter().any(|c| c.rate() > 0.0) {
        return Err(Error::domain("steady state needs at least one channel with positive rate"));
    }
    let dim = h.dim();
    let gen = Generator::new(h, channels)?;
    let triplets = merge(gen.superoperator_triplets());

    let comp = population_component(dim, &triplets);
    let mut position = vec![usize::MAX; dim * dim];
    for (p, &u) in comp.iter().enumerate() {
        position[u] = p;
    }
    let mut kl = 0;
    let mut ku = 0;
    let mut real = true;
    for &(r, c, v) in &triplets {
        let (pr, pc) = (position[r], position[c]);
        if pr == usize::MAX {
            continue;
        }
        if pr > pc {
            kl = kl.max(pr - pc);
        } else {
            ku = ku.max(pc - pr);
        }
        real &= v.im == 0.0;
    }

    let mut candidates = vec![0, dim - 1, dim / 2];
    candidates.dedup();
    let mut last_err = None;
    for &p in &candidates {
        let pin = position[p * dim + p];
        let solved = if real {
            solve_pinned::<f64>(&triplets, &position, comp.len(), kl, ku, pin, |z| z.re)
                .map(|x| x.into_iter().map(|v| C64::new(v, 0.0)).collect::<Vec<_>>())
        } else {
            solve_pinned::<C64>(&triplets, &position, comp.len(), kl, ku, pin, |z| z)
        };
        let Some(x) = solved else {
            last_err = Some(Error::numerical(format!("singular system with ρ_{p}{p} pinned")));
            continue;
        };
        match assemble(dim, &comp, &x, &gen) {
            Ok(state) => return Ok(state),
            Err(e) => last_err = Some(e),
        }
    }
    Err(last_err.unwrap_or_else(|| Error::numerical("steady-state solve failed")))
}

/// Sorts by (row, column) and sums duplicates, dropping exact zeros.
fn merge(mut t: Vec<(usize, usize, C64)>) -> Vec<(usize, usize, C64)> {
    t.sort_unstable_by_key(|&(r, c, _)| (r, c));
    let mut out: Vec<(usize, usize, C64)> = Vec::with_capacity(t.len());
    for (r, c, v) in t {
        match out.last_mut() {
            Some(last) if last.0 == r && last.1 == c => last.2 += v,
            _ => out.push((r, c, v)),
        }
    }
    out.retain(|&(_, _, v)| v.re != 0.0 || v.im != 0.0);
    out
}

/// Unknowns connected to a population, ordered by (m + n, m).
fn population_component(dim: usize, triplets: &[(usize, usize, C64)]) -> Vec<usize> {
    let n2 = dim * dim;
    let mut adj: Vec<Vec<u32>> = vec![Vec::new(); n2];
    for &(r, c, _) in triplets {
        if r != c {
            adj[r].push(c as u32);
            adj[c].push(r as u32);
        }
    }
    let mut seen = vec![false; n2];
    let mut queue = VecDeque::new();
    for m in 0..dim {
        let u = m * dim + m;
        seen[u] = true;
        queue.push_back(u);
    }
    while let Some(u) = queue.pop_front() {
        for &v in &adj[u] {
            let v = v as usize;
            if !seen[v] {
                seen[v] = true;
                queue.push_back(v);
            }
        }
    }
    let mut comp: Vec<usize> = (0..n2).filter(|&u| seen[u]).collect();
    comp.sort_by_key(|&u| {
        let (m, n) = (u / dim, u % dim);
        (m + n, m)
    });
    comp
}

fn solve_pinned<T: Scalar>(
    triplets: &[(usize, usize, C64)],
    position: &[usize],
    size: usize,
    kl: usize,
    ku: usize,
    pin: usize,
    conv: impl Fn(C64) -> T,
) -> Option<Vec<T>> {
    let mut band = BandMatrix::<T>::zeros(size, kl, ku);
    for &(r, c, v) in triplets {
        let pr = position[r];
        if pr == usize::MAX || pr == pin {
            continue;
        }
        band.add(pr, position[c], conv(v));
    }
    band.clear_row(pin);
    let one = conv(C64::new(1.0, 0.0));
    band.add(pin, pin, one);
    let tiny = 1e-14 * band.max_magnitude();
    let lu = band.factor(tiny)?;
    let mut rhs = vec![T::ZERO; size];
    rhs[pin] = one;
    lu.solve(&mut rhs);
    Some(rhs)
}

fn assemble(dim: usize, comp: &[usize], x: &[C64], gen: &Generator) -> Result<DensityMatrix> {
    let mut m = CMatrix::zeros(dim);
    for (&u, &v) in comp.iter().zip(x) {
        m.as_mut_slice()[u] = v;
    }
    let tr = m.trace().re;
    if !(tr > 0.0) || !tr.is_finite() {
        return Err(Error::numerical(format!("steady-state solve produced trace {tr}")));
    }
    let m = m.scale_real(1.0 / tr);
    let (state, _) = DensityMatrix::clamped(m, STEADY_CLAMP)
        .map_err(|e| Error::numerical(format!("steady state is not a valid state: {e}")))?;
    let residual = gen.apply(state.matrix()).frobenius_norm();
    if !(residual <= STEADY_RESIDUAL_TOL) {
        return Err(Error::numerical(format!(
            "steady-state residual {residual:e} exceeds {STEADY_RESIDUAL_TOL:e}"
        )));
    }
    Ok(state)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operator::{fock_space, gibbs_state};

    fn sigma_minus() -> CMatrix {
        CMatrix::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]])
    }

    #[test]
    fn single_thermal_channel_gives_gibbs() {
        let h = HermitianOperator::from_real_diagonal(&[0.0, 1.3]).unwrap();
        let ch = BathChannel::thermal(sigma_minus(), 0.4, 1.3, 0.9).unwrap();
        let ss = steady_state(&h, &[ch]).unwrap();
        let g = gibbs_state(&h, 0.9).unwrap();
        assert!((ss.matrix() - g.matrix()).max_abs() < 1e-8);
    }

    #[test]
    fn zero_temperature_gives_ground_state() {
        let f = fock_space(10).unwrap();
        let h = f.oscillator_hamiltonian(1.0);
        let ch = BathChannel::thermal(f.annihilation.clone(), 1.0, 1.0, 0.0).unwrap();
        let ss = steady_state(&h, &[ch]).unwrap();
        assert!((ss.populations()[0] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn two_baths_follow_rate_equation() {
        let (gh, gc, nh, nc) = (0.3, 2.0, 1.7, 0.2);
        let h = HermitianOperator::from_real_diagonal(&[0.0, 2.0]).unwrap();
        let hot = BathChannel::from_occupancy(sigma_minus(), gh, nh, 0.0).unwrap();
        let cold = BathChannel::from_occupancy(sigma_minus(), gc, nc, 0.0).unwrap();
        let ss = steady_state(&h, &[hot, cold]).unwrap();
        let up = gh * nh + gc * nc;
        let down = gh * (nh + 1.0) + gc * (nc + 1.0);
        assert!((ss.populations()[1] - up / (up + down)).abs() < 1e-12);
    }

    #[test]
    fn coherent_hamiltonian_with_thermal_bath() {
        // Driven qubit: compare with the fixed point of long propagation.
        let h = HermitianOperator::new(CMatrix::from_fn(2, |i, j| match (i, j) {
            (1, 1) => C64::new(1.0, 0.0),
            (0, 1) => C64::new(0.3, 0.2),
            (1, 0) => C64::new(0.3, -0.2),
            _ => C64::new(0.0, 0.0),
        }))
        .unwrap();
        let ch = BathChannel::thermal(sigma_minus(), 0.5, 1.0, 0.6).unwrap();
        let ss = steady_state(&h, core::slice::from_ref(&ch)).unwrap();
        let gen = Generator::new(&h, core::slice::from_ref(&ch)).unwrap();
        assert!(gen.apply(ss.matrix()).frobenius_norm() < 1e-12);
        let traj = crate::dynamics::evolve(
            &DensityMatrix::basis(2, 0).unwrap(),
            &crate::dynamics::HamiltonianSchedule::constant(h),
            &vec![ch].into(),
            80.0,
            0.01,
        )
        .unwrap();
        assert!((traj.final_state().unwrap().matrix() - ss.matrix()).max_abs() < 1e-8);
    }

    #[test]
    fn requires_an_active_channel() {
        let h = HermitianOperator::from_real_diagonal(&[0.0, 1.0]).unwrap();
        assert!(steady_state(&h, &[]).is_err());
        let idle = BathChannel::thermal(sigma_minus(), 0.0, 1.0, 1.0).unwrap();
        assert!(steady_state(&h, &[idle]).is_err());
    }

    #[test]
    fn inverted_pumping_uses_another_pin() {
        // Only upward transitions: the steady state is the top level, so the
        // ground population cannot serve as the normalisation.
        let h = HermitianOperator::from_real_diagonal(&[0.0, 1.0]).unwrap();
        let up = BathChannel::from_occupancy(sigma_minus().adjoint(), 1.0, 0.0, 0.0).unwrap();
        let ss = steady_state(&h, &[up]).unwrap();
        assert!((ss.populations()[1] - 1.0).abs() < 1e-12);
    }
}

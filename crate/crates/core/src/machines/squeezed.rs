//! Squeezed-thermal oscillator states S ρ_th S† with S = exp(½r(a² − a†²)),
//! built from exact matrix elements of S rather than a truncated exponential.

use alloc::vec;
use alloc::vec::Vec;

use super::occupancy::bose_occupancy;
use crate::operator::{check_dim, CMatrix, DensityMatrix, MAX_DIM};
use crate::{Error, Result, C64};

/// Largest acceptable truncation loss and top-two-level population.
pub const TAIL_TOL: f64 = 1e-8;

/// ⟨m|S|k⟩ for m, k < dim (real for squeezing phase 0), row-major.
///
/// Column 0 is the squeezed vacuum; later columns follow from
/// S a† S† = a† cosh r − a sinh r applied to |k⟩.
fn squeeze_elements(r: f64, dim: usize) -> Vec<f64> {
    let (c, s, t) = (libm::cosh(r), libm::sinh(r), libm::tanh(r));
    let mut el = vec![0.0; dim * dim];
    let at = |m: usize, k: usize| m * dim + k;
    el[at(0, 0)] = 1.0 / libm::sqrt(c);
    for m in 1..dim - 1 {
        el[at(m + 1, 0)] = -t * libm::sqrt(m as f64 / (m + 1) as f64) * el[at(m - 1, 0)];
    }
    for m in 1..dim {
        el[at(m, 1)] = libm::sqrt(m as f64) * el[at(m - 1, 0)] / c;
    }
    for k in 1..dim - 1 {
        let norm = c * libm::sqrt((k + 1) as f64);
        for m in 0..dim {
            let up = if m > 0 { libm::sqrt(m as f64) * el[at(m - 1, k)] } else { 0.0 };
            let down = s * libm::sqrt(k as f64) * el[at(m, k - 1)];
            el[at(m, k + 1)] = (up + down) / norm;
        }
    }
    el
}

fn thermal_weights(n: f64, dim: usize) -> Vec<f64> {
    // p_k = n^k / (n+1)^{k+1}
    let q = n / (n + 1.0);
    let mut p = Vec::with_capacity(dim);
    let mut w = 1.0 / (n + 1.0);
    for _ in 0..dim {
        p.push(w);
        w *= q;
    }
    p
}

/// Untruncated-basis populations ρ_mm for m < dim, using thermal levels
/// k < dim; their deficit from 1 is the truncation loss.
fn raw_populations(el: &[f64], p: &[f64], dim: usize) -> Vec<f64> {
    (0..dim)
        .map(|m| (0..dim).map(|k| p[k] * el[m * dim + k] * el[m * dim + k]).sum())
        .collect()
}

fn tail_of(pops: &[f64]) -> f64 {
    let d = pops.len();
    let loss = 1.0 - pops.iter().sum::<f64>();
    let top = pops[d - 1] + pops[d - 2];
    loss.abs().max(top)
}

/// The squeezed thermal state for thermal occupancy `n` on `dim` levels.
pub fn squeezed_thermal_state_with_occupancy(n: f64, r: f64, dim: usize) -> Result<DensityMatrix> {
    if !(n >= 0.0) || !n.is_finite() {
        return Err(Error::domain(alloc::format!("occupancy must be non-negative, got {n}")));
    }
    if !(r >= 0.0) || !r.is_finite() {
        return Err(Error::domain(alloc::format!("squeezing must be non-negative, got {r}")));
    }
    if dim < 2 {
        return Err(Error::domain("Fock space needs at least two levels"));
    }
    check_dim(dim)?;
    let el = squeeze_elements(r, dim);
    let p = thermal_weights(n, dim);
    let tail = tail_of(&raw_populations(&el, &p, dim));
    if !(tail <= TAIL_TOL) {
        return Err(Error::Truncation { dim, tail });
    }
    let mut m = CMatrix::zeros(dim);
    for i in 0..dim {
        for j in i..dim {
            let v: f64 = (0..dim).map(|k| p[k] * el[i * dim + k] * el[j * dim + k]).sum();
            m[(i, j)] = C64::new(v, 0.0);
            m[(j, i)] = C64::new(v, 0.0);
        }
    }
    let tr = m.trace().re;
    let (state, _) = DensityMatrix::clamped(m.scale_real(1.0 / tr), 1e-12)?;
    Ok(state)
}

/// S ρ_th S† for the oscillator at `omega` and temperature `temperature`.
pub fn squeezed_thermal_state(
    omega: f64,
    temperature: f64,
    r: f64,
    dim: usize,
) -> Result<DensityMatrix> {
    squeezed_thermal_state_with_occupancy(bose_occupancy(omega, temperature)?, r, dim)
}

/// ⟨a†a⟩ = n·cosh 2r + sinh² r of the untruncated squeezed thermal state.
pub fn squeezed_mean_quanta(n: f64, r: f64) -> f64 {
    let s = libm::sinh(r);
    n * libm::cosh(2.0 * r) + s * s
}

/// Smallest truncation whose loss and top-two-level population are both at
/// most `tol`.
pub fn fock_dim_for_tail(n: f64, r: f64, tol: f64) -> Result<usize> {
    if !(tol > 0.0) {
        return Err(Error::domain("tail tolerance must be positive"));
    }
    if !(n >= 0.0) || !(r >= 0.0) || !n.is_finite() || !r.is_finite() {
        return Err(Error::domain("occupancy and squeezing must be non-negative"));
    }
    // Elements of S for a smaller truncation are a corner of the larger one.
    let big = MAX_DIM;
    let el = squeeze_elements(r, big);
    let p = thermal_weights(n, big);
    for d in 2..=big {
        let mut pops = Vec::with_capacity(d);
        for m in 0..d {
            pops.push((0..d).map(|k| p[k] * el[m * big + k] * el[m * big + k]).sum::<f64>());
        }
        if tail_of(&pops) <= tol {
            return Ok(d);
        }
    }
    let pops = raw_populations(&el, &p, big);
    Err(Error::Truncation { dim: big, tail: tail_of(&pops) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operator::{fock_space, gibbs_state, von_neumann_entropy};

    #[test]
    fn zero_squeezing_is_thermal() {
        let dim = 40;
        let st = squeezed_thermal_state(1.0, 0.8, 0.0, dim).unwrap();
        let h = fock_space(dim).unwrap().oscillator_hamiltonian(1.0);
        let g = gibbs_state(&h, 0.8).unwrap();
        assert!((st.matrix() - g.matrix()).max_abs() < 1e-10);
    }

    #[test]
    fn squeezed_vacuum_mean_quanta() {
        let dim = 80;
        let st = squeezed_thermal_state(1.0, 0.0, 1.0, dim).unwrap();
        let f = fock_space(dim).unwrap();
        let mean = st.expectation(&f.number);
        assert!((mean - 1.0f64.sinh().powi(2)).abs() < 1e-7);
        assert!((mean - 1.381098).abs() < 1e-6);
        // pure state
        assert!(von_neumann_entropy(&st).unwrap().abs() < 1e-8);
    }

    /// exp(½r(a² − a†²))|j⟩ on a generous truncation, by 64 short Taylor
    /// steps, as an independent construction.
    fn squeeze_column_by_series(r: f64, j: usize, dim: usize, big: usize) -> Vec<f64> {
        let a = fock_space(big).unwrap().annihilation;
        let ad = a.adjoint();
        let steps = 64;
        let gen = (&a.matmul(&a) - &ad.matmul(&ad)).scale_real(0.5 * r / steps as f64);
        let mut v = vec![C64::new(0.0, 0.0); big];
        v[j] = C64::new(1.0, 0.0);
        for _ in 0..steps {
            let mut term = v.clone();
            let mut acc = v.clone();
            for k in 1..30 {
                let mut next = vec![C64::new(0.0, 0.0); big];
                for (i, x) in next.iter_mut().enumerate() {
                    for (l, t) in term.iter().enumerate() {
                        *x += gen[(i, l)] * t;
                    }
                    *x /= k as f64;
                }
                term = next;
                for (s, t) in acc.iter_mut().zip(&term) {
                    *s += t;
                }
            }
            v = acc;
        }
        v.iter().take(dim).map(|z| z.re).collect()
    }

    #[test]
    fn matrix_elements_match_series_oracle() {
        let r = 0.7;
        let dim = 30;
        let el = squeeze_elements(r, dim);
        for j in [0, 1, 2, 5, 9] {
            let col = squeeze_column_by_series(r, j, dim, 160);
            for m in 0..dim {
                assert!((el[m * dim + j] - col[m]).abs() < 1e-10, "m={m}, j={j}");
            }
        }
    }

    #[test]
    fn entropy_matches_thermal() {
        let dim = 90;
        let st = squeezed_thermal_state(1.0, 1.0, 0.5, dim).unwrap();
        let h = fock_space(dim).unwrap().oscillator_hamiltonian(1.0);
        let g = gibbs_state(&h, 1.0).unwrap();
        let (s1, s0) = (von_neumann_entropy(&st).unwrap(), von_neumann_entropy(&g).unwrap());
        assert!((s1 - s0).abs() < 1e-8);
        let n = bose_occupancy(1.0, 1.0).unwrap();
        let f = fock_space(dim).unwrap();
        assert!((st.expectation(&f.number) - squeezed_mean_quanta(n, 0.5)).abs() < 1e-7);
    }

    #[test]
    fn insufficient_truncation_is_reported() {
        let out = squeezed_thermal_state_with_occupancy(1.0, 1.0, 30);
        assert!(matches!(out, Err(Error::Truncation { dim: 30, .. })));
    }

    #[test]
    fn tail_rule_dimension_is_minimal() {
        let d = fock_dim_for_tail(0.5, 0.5, TAIL_TOL).unwrap();
        assert!(squeezed_thermal_state_with_occupancy(0.5, 0.5, d).is_ok());
        assert!(squeezed_thermal_state_with_occupancy(0.5, 0.5, d - 1).is_err());
    }
}

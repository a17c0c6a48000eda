//! Hermitian eigensolver: Householder reduction to a real symmetric
//! tridiagonal matrix followed by implicit QL iterations.
//!
//! The reduction uses complex reflectors `I − τ v v†`; the complex
//! subdiagonal is then made real by a diagonal phase similarity. The QL
//! sweep follows the EISPACK `tql2` recurrences with Wilkinson-like shifts.
//! Everything is deterministic: no randomised pivots, and eigenpairs are
//! sorted ascending with a stable sort, so degenerate eigenvalues keep the
//! order in which the iteration produced them (basis order for diagonal
//! input).

use alloc::vec;
use alloc::vec::Vec;

use super::matrix::CMatrix;
use crate::{Error, Result, C64};

const MAX_QL_ITERATIONS: usize = 60;

/// Eigenvalues in ascending order with the matching unitary of column
/// eigenvectors.
#[derive(Clone, Debug, PartialEq)]
pub struct EigenSystem {
    pub values: Vec<f64>,
    pub vectors: CMatrix,
}

impl EigenSystem {
    pub fn dim(&self) -> usize {
        self.values.len()
    }

    /// V · diag(f(λ)) · V†.
    pub fn reconstruct_with(&self, mut f: impl FnMut(f64) -> f64) -> CMatrix {
        let weights: Vec<f64> = self.values.iter().map(|&v| f(v)).collect();
        self.reconstruct_from_weights(&weights)
    }

    /// V · diag(values) · V†.
    pub fn reconstruct(&self) -> CMatrix {
        self.reconstruct_from_weights(&self.values)
    }

    /// V · diag(weights) · V†, skipping zero weights.
    pub fn reconstruct_from_weights(&self, weights: &[f64]) -> CMatrix {
        let n = self.dim();
        assert_eq!(weights.len(), n);
        let v = &self.vectors;
        let mut out = CMatrix::zeros(n);
        for (k, &w) in weights.iter().enumerate() {
            if w == 0.0 {
                continue;
            }
            for i in 0..n {
                let vik = v[(i, k)] * w;
                if vik == C64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..n {
                    out[(i, j)] += vik * v[(j, k)].conj();
                }
            }
        }
        out
    }

    /// Column `k` as a vector.
    pub fn vector(&self, k: usize) -> Vec<C64> {
        self.vectors.column(k)
    }
}

/// Full eigendecomposition of a matrix assumed Hermitian (only the lower
/// triangle and the real part of the diagonal are read).
pub fn hermitian_eigen(a: &CMatrix) -> Result<EigenSystem> {
    let (mut d, mut e, z) = tridiagonalize(a, true);
    let mut z = z.expect("requested accumulation");
    ql_implicit(&mut d, &mut e, Some(&mut z))?;
    Ok(sort_pairs(d, z))
}

/// Eigenvalues only, ascending.
pub fn hermitian_eigenvalues(a: &CMatrix) -> Result<Vec<f64>> {
    let (mut d, mut e, _) = tridiagonalize(a, false);
    ql_implicit(&mut d, &mut e, None)?;
    let mut order: Vec<usize> = (0..d.len()).collect();
    order.sort_by(|&i, &j| d[i].total_cmp(&d[j]));
    Ok(order.into_iter().map(|i| d[i]).collect())
}

/// Reduces Hermitian `a` to real tridiagonal form `T` with `a = Z T Z†`.
/// Returns the diagonal, the subdiagonal (`e[k] = T[k+1][k]`, last entry 0)
/// and, when requested, `Z`.
fn tridiagonalize(a: &CMatrix, accumulate: bool) -> (Vec<f64>, Vec<f64>, Option<CMatrix>) {
    let n = a.dim();
    // Work on a Hermitian copy built from the lower triangle.
    let mut w = CMatrix::from_fn(n, |i, j| {
        if i > j {
            a[(i, j)]
        } else if i < j {
            a[(j, i)].conj()
        } else {
            C64::new(a[(i, i)].re, 0.0)
        }
    });
    let mut q = if accumulate { Some(CMatrix::identity(n)) } else { None };
    let mut sub = vec![C64::new(0.0, 0.0); n];

    let mut v = vec![C64::new(0.0, 0.0); n];
    let mut p = vec![C64::new(0.0, 0.0); n];
    for k in 0..n.saturating_sub(2) {
        let lo = k + 1;
        let m = n - lo;
        // Scaled by the largest entry so tiny columns do not underflow in
        // the squared norms; the reflector does not depend on the scale.
        let scale = (lo..n).map(|i| w[(i, k)].norm()).fold(0.0, f64::max);
        if scale == 0.0 {
            sub[k] = C64::new(0.0, 0.0);
            continue;
        }
        for i in 0..m {
            v[i] = w[(lo + i, k)] / scale;
        }
        let xnorm = libm::sqrt(v[..m].iter().map(|z| z.norm_sqr()).sum::<f64>());
        let x0 = v[0];
        let phase = if x0.norm() > 0.0 { x0 / x0.norm() } else { C64::new(1.0, 0.0) };
        let alpha_scaled = -phase * xnorm;
        let alpha = alpha_scaled * scale;
        v[0] = x0 - alpha_scaled;
        let vnorm2: f64 = v[..m].iter().map(|z| z.norm_sqr()).sum();
        if vnorm2 == 0.0 {
            sub[k] = x0 * scale;
            continue;
        }
        let tau = 2.0 / vnorm2;

        // p = τ A v on the trailing block.
        for i in 0..m {
            let mut acc = C64::new(0.0, 0.0);
            for j in 0..m {
                acc += w[(lo + i, lo + j)] * v[j];
            }
            p[i] = acc * tau;
        }
        let beta: f64 = (0..m).map(|i| (v[i].conj() * p[i]).re).sum();
        let kappa = 0.5 * tau * beta;
        for i in 0..m {
            p[i] -= v[i] * kappa;
        }
        // A ← A − v p† − p v†
        for i in 0..m {
            for j in 0..m {
                let upd = v[i] * p[j].conj() + p[i] * v[j].conj();
                w[(lo + i, lo + j)] -= upd;
            }
        }
        w[(lo, k)] = alpha;
        w[(k, lo)] = alpha.conj();
        for i in lo + 1..n {
            w[(i, k)] = C64::new(0.0, 0.0);
            w[(k, i)] = C64::new(0.0, 0.0);
        }
        sub[k] = alpha;

        if let Some(q) = q.as_mut() {
            // Q ← Q (I − τ v v†) on columns lo..n.
            for r in 0..n {
                let mut s = C64::new(0.0, 0.0);
                for j in 0..m {
                    s += q[(r, lo + j)] * v[j];
                }
                s *= tau;
                if s == C64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..m {
                    q[(r, lo + j)] -= s * v[j].conj();
                }
            }
        }
    }
    if n >= 2 {
        sub[n - 2] = w[(n - 1, n - 2)];
    }

    let d: Vec<f64> = (0..n).map(|i| w[(i, i)].re).collect();
    // Phase similarity D† T D makes the subdiagonal real and non-negative.
    let mut e = vec![0.0; n];
    let mut phases = vec![C64::new(1.0, 0.0); n];
    for k in 0..n.saturating_sub(1) {
        let t = sub[k];
        let mag = t.norm();
        e[k] = mag;
        phases[k + 1] = if mag > 0.0 { phases[k] * (t / mag) } else { phases[k] };
    }
    if let Some(q) = q.as_mut() {
        for r in 0..n {
            for c in 0..n {
                q[(r, c)] *= phases[c];
            }
        }
    }
    (d, e, q)
}

/// Implicit QL on the symmetric tridiagonal (d, e); rotations are applied to
/// the columns of `z` when given.
fn ql_implicit(d: &mut [f64], e: &mut [f64], mut z: Option<&mut CMatrix>) -> Result<()> {
    let n = d.len();
    if n == 0 {
        return Ok(());
    }
    e[n - 1] = 0.0;
    let eps = f64::EPSILON;
    let mut f = 0.0;
    let mut tst1: f64 = 0.0;
    for l in 0..n {
        tst1 = tst1.max(d[l].abs() + e[l].abs());
        let mut m = l;
        while m < n - 1 {
            if e[m].abs() <= eps * tst1 {
                break;
            }
            m += 1;
        }
        if m > l {
            let mut iter = 0;
            loop {
                iter += 1;
                if iter > MAX_QL_ITERATIONS {
                    return Err(Error::numerical("Hermitian eigensolver did not converge"));
                }
                let g = d[l];
                let mut p = (d[l + 1] - g) / (2.0 * e[l]);
                let mut r = libm::hypot(p, 1.0);
                if p < 0.0 {
                    r = -r;
                }
                d[l] = e[l] / (p + r);
                d[l + 1] = e[l] * (p + r);
                let dl1 = d[l + 1];
                let mut h = g - d[l];
                for di in d.iter_mut().skip(l + 2) {
                    *di -= h;
                }
                f += h;

                p = d[m];
                let mut c = 1.0;
                let mut c2 = c;
                let mut c3 = c;
                let el1 = e[l + 1];
                let mut s = 0.0;
                let mut s2 = 0.0;
                for i in (l..m).rev() {
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    let g = c * e[i];
                    h = c * p;
                    r = libm::hypot(p, e[i]);
                    e[i + 1] = s * r;
                    s = e[i] / r;
                    c = p / r;
                    p = c * d[i] - s * g;
                    d[i + 1] = h + s * (c * g + s * d[i]);
                    if let Some(z) = z.as_deref_mut() {
                        for k in 0..n {
                            let zk1 = z[(k, i + 1)];
                            let zk = z[(k, i)];
                            z[(k, i + 1)] = zk * s + zk1 * c;
                            z[(k, i)] = zk * c - zk1 * s;
                        }
                    }
                }
                p = -s * s2 * c3 * el1 * e[l] / dl1;
                e[l] = s * p;
                d[l] = c * p;
                if e[l].abs() <= eps * tst1 {
                    break;
                }
            }
        }
        d[l] += f;
        e[l] = 0.0;
    }
    Ok(())
}

fn sort_pairs(d: Vec<f64>, z: CMatrix) -> EigenSystem {
    let n = d.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| d[i].total_cmp(&d[j]));
    let values = order.iter().map(|&i| d[i]).collect();
    let vectors = CMatrix::from_fn(n, |r, c| z[(r, order[c])]);
    EigenSystem { values, vectors }
}

//! Banded LU factorisation with partial pivoting (the LAPACK `gbtf2` scheme)
//! for real or complex entries.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Add, Div, Mul, Neg, Sub};

use crate::C64;

pub(crate) trait Scalar:
    Copy
    + PartialEq
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    const ZERO: Self;
    fn magnitude(self) -> f64;
}

impl Scalar for f64 {
    const ZERO: Self = 0.0;
    fn magnitude(self) -> f64 {
        self.abs()
    }
}

impl Scalar for C64 {
    const ZERO: Self = C64 { re: 0.0, im: 0.0 };
    fn magnitude(self) -> f64 {
        // |re| + |im| is enough for pivot selection and avoids a sqrt.
        self.re.abs() + self.im.abs()
    }
}

/// An n×n matrix with `kl` sub- and `ku` super-diagonals, stored column by
/// column with room for the `kl` extra super-diagonals created by pivoting.
pub(crate) struct BandMatrix<T> {
    n: usize,
    kl: usize,
    ku: usize,
    ld: usize,
    data: Vec<T>,
}

impl<T: Scalar> BandMatrix<T> {
    pub(crate) fn zeros(n: usize, kl: usize, ku: usize) -> Self {
        let ld = 2 * kl + ku + 1;
        BandMatrix { n, kl, ku, ld, data: vec![T::ZERO; ld * n] }
    }

    #[inline]
    fn pos(&self, r: usize, c: usize) -> usize {
        c * self.ld + (self.kl + self.ku + r - c)
    }

    /// Adds `v` to entry (r, c), which must lie inside the declared band.
    pub(crate) fn add(&mut self, r: usize, c: usize, v: T) {
        debug_assert!(r <= c + self.kl && c <= r + self.ku);
        let p = self.pos(r, c);
        self.data[p] = self.data[p] + v;
    }

    /// Overwrites row `r` inside the band with zeros.
    pub(crate) fn clear_row(&mut self, r: usize) {
        let lo = r.saturating_sub(self.kl);
        let hi = (r + self.ku).min(self.n - 1);
        for c in lo..=hi {
            let p = self.pos(r, c);
            self.data[p] = T::ZERO;
        }
    }

    pub(crate) fn max_magnitude(&self) -> f64 {
        self.data.iter().map(|x| x.magnitude()).fold(0.0, f64::max)
    }

    /// Factorises in place. Returns `None` if a pivot column is (relative to
    /// `tiny`) zero.
    pub(crate) fn factor(mut self, tiny: f64) -> Option<BandLu<T>> {
        let (n, kl, ld) = (self.n, self.kl, self.ld);
        let kv = self.ku + kl;
        let mut ipiv = vec![0usize; n];
        let mut ju = 0usize;
        for j in 0..n {
            let km = kl.min(n - 1 - j);
            let col = j * ld;
            let mut jp = 0;
            let mut best = -1.0;
            for t in 0..=km {
                let m = self.data[col + kv + t].magnitude();
                if m > best {
                    best = m;
                    jp = t;
                }
            }
            ipiv[j] = j + jp;
            if !(best > tiny) {
                return None;
            }
            ju = ju.max((j + self.ku + jp).min(n - 1));
            if jp != 0 {
                for c in j..=ju {
                    let a = c * ld + kv + j + jp - c;
                    let b = c * ld + kv + j - c;
                    self.data.swap(a, b);
                }
            }
            if km > 0 {
                let piv = self.data[col + kv];
                for t in 1..=km {
                    self.data[col + kv + t] = self.data[col + kv + t] / piv;
                }
                for c in j + 1..=ju {
                    let u = self.data[c * ld + kv + j - c];
                    if u == T::ZERO {
                        continue;
                    }
                    let base = c * ld + kv + j - c;
                    for t in 1..=km {
                        let l = self.data[col + kv + t];
                        self.data[base + t] = self.data[base + t] - l * u;
                    }
                }
            }
        }
        Some(BandLu { m: self, ipiv })
    }
}

pub(crate) struct BandLu<T> {
    m: BandMatrix<T>,
    ipiv: Vec<usize>,
}

impl<T: Scalar> BandLu<T> {
    pub(crate) fn solve(&self, b: &mut [T]) {
        let BandMatrix { n, kl, ku, ld, ref data } = self.m;
        let kv = kl + ku;
        for j in 0..n {
            let l = self.ipiv[j];
            if l != j {
                b.swap(l, j);
            }
            let lm = kl.min(n - 1 - j);
            let bj = b[j];
            if bj != T::ZERO {
                for t in 1..=lm {
                    b[j + t] = b[j + t] - data[j * ld + kv + t] * bj;
                }
            }
        }
        for j in (0..n).rev() {
            b[j] = b[j] / data[j * ld + kv];
            let bj = b[j];
            if bj != T::ZERO {
                for r in j.saturating_sub(kv)..j {
                    b[r] = b[r] - data[j * ld + kv + r - j] * bj;
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Dense Gaussian elimination as the oracle.
    fn dense_solve(a: &[Vec<f64>], b: &[f64]) -> Vec<f64> {
        let n = b.len();
        let mut m: Vec<Vec<f64>> = a.to_vec();
        let mut x = b.to_vec();
        for k in 0..n {
            let p = (k..n).max_by(|&i, &j| m[i][k].abs().total_cmp(&m[j][k].abs())).unwrap();
            m.swap(k, p);
            x.swap(k, p);
            for i in k + 1..n {
                let f = m[i][k] / m[k][k];
                for j in k..n {
                    m[i][j] -= f * m[k][j];
                }
                x[i] -= f * x[k];
            }
        }
        for k in (0..n).rev() {
            for j in k + 1..n {
                x[k] -= m[k][j] * x[j];
            }
            x[k] /= m[k][k];
        }
        x
    }

    #[test]
    fn matches_dense_solver_with_pivoting() {
        let (n, kl, ku) = (9, 2, 3);
        let mut dense = vec![vec![0.0; n]; n];
        let mut band = BandMatrix::<f64>::zeros(n, kl, ku);
        let mut s: u64 = 7;
        for r in 0..n {
            for c in r.saturating_sub(kl)..=(r + ku).min(n - 1) {
                s = s.wrapping_mul(6364136223846793005).wrapping_add(1);
                // small diagonal forces row exchanges
                let v = ((s >> 20) as f64 / (1u64 << 44) as f64) - 0.5;
                let v = if r == c { 0.01 * v } else { v };
                dense[r][c] = v;
                band.add(r, c, v);
            }
        }
        let b: Vec<f64> = (0..n).map(|i| (i as f64).sin()).collect();
        let want = dense_solve(&dense, &b);
        let lu = band.factor(0.0).unwrap();
        let mut got = b.clone();
        lu.solve(&mut got);
        for (g, w) in got.iter().zip(&want) {
            assert!((g - w).abs() < 1e-10, "{g} vs {w}");
        }
    }

    #[test]
    fn complex_tridiagonal() {
        let n = 5;
        let mut band = BandMatrix::<C64>::zeros(n, 1, 1);
        for i in 0..n {
            band.add(i, i, C64::new(2.0, 1.0));
            if i + 1 < n {
                band.add(i, i + 1, C64::new(-1.0, 0.0));
                band.add(i + 1, i, C64::new(0.0, -1.0));
            }
        }
        let x: Vec<C64> = (0..n).map(|i| C64::new(i as f64, 1.0)).collect();
        let mut b = vec![C64::new(0.0, 0.0); n];
        for i in 0..n {
            b[i] = C64::new(2.0, 1.0) * x[i];
            if i + 1 < n {
                b[i] += C64::new(-1.0, 0.0) * x[i + 1];
            }
            if i > 0 {
                b[i] += C64::new(0.0, -1.0) * x[i - 1];
            }
        }
        band.factor(0.0).unwrap().solve(&mut b);
        for (g, w) in b.iter().zip(&x) {
            assert!((g - w).norm() < 1e-12);
        }
    }

    #[test]
    fn singular_matrix_is_detected() {
        let mut band = BandMatrix::<f64>::zeros(3, 1, 1);
        band.add(0, 0, 1.0);
        band.add(1, 1, 1.0);
        assert!(band.factor(1e-14).is_none());
    }
}

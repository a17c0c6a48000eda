//! Seeded random states: a flat Dirichlet spectrum conjugated by a Haar
//! unitary.

use qthermo_core::operator::{CMatrix, DensityMatrix};
use qthermo_core::C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1, StandardNormal};

use crate::error::CliResult;

/// Generator for the `index`-th draw of a suite, independent of how draws
/// are spread over workers.
pub fn stream_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Uniform point on the probability simplex (Dirichlet with unit
/// concentration), from normalised exponential variates.
pub fn flat_dirichlet<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> Vec<f64> {
    let mut p: Vec<f64> = (0..dim).map(|_| Exp1.sample(rng)).collect();
    let s: f64 = p.iter().sum();
    p.iter_mut().for_each(|x| *x /= s);
    p
}

/// Haar-random unitary: Gram–Schmidt on the columns of a complex Gaussian
/// matrix, which leaves R with a positive diagonal.
pub fn haar_unitary<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> CMatrix {
    let mut cols: Vec<Vec<C64>> = Vec::with_capacity(dim);
    for _ in 0..dim {
        let mut v: Vec<C64> = (0..dim)
            .map(|_| C64::new(StandardNormal.sample(rng), StandardNormal.sample(rng)))
            .collect();
        // twice is enough to restore orthogonality lost to rounding
        for _ in 0..2 {
            for q in &cols {
                let proj: C64 = q.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
                for (x, y) in v.iter_mut().zip(q) {
                    *x -= proj * y;
                }
            }
        }
        let n = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        cols.push(v.into_iter().map(|z| z / n).collect());
    }
    CMatrix::from_fn(dim, |i, j| cols[j][i])
}

pub fn random_state<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> CliResult<DensityMatrix> {
    let p = flat_dirichlet(rng, dim);
    let u = haar_unitary(rng, dim);
    Ok(DensityMatrix::from_populations(&p)?.transformed(&u)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unitary_is_unitary() {
        let mut rng = stream_rng(3, 0);
        for dim in [1, 2, 5, 12] {
            let u = haar_unitary(&mut rng, dim);
            let g = u.adjoint().matmul(&u);
            assert!((&g - &CMatrix::identity(dim)).max_abs() < 1e-13);
        }
    }

    #[test]
    fn simplex_point() {
        let mut rng = stream_rng(1, 0);
        let p = flat_dirichlet(&mut rng, 6);
        assert!(p.iter().all(|&x| x > 0.0));
        assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn streams_are_reproducible_and_distinct() {
        let a = random_state(&mut stream_rng(9, 4), 3).unwrap();
        let b = random_state(&mut stream_rng(9, 4), 3).unwrap();
        let c = random_state(&mut stream_rng(9, 5), 3).unwrap();
        assert_eq!(a, b);
        assert!(a.trace_distance(&c).unwrap() > 1e-6);
    }

    #[test]
    fn haar_qubit_bloch_vectors_are_isotropic() {
        // Pure states U|0⟩: ⟨σ_z⟩ is uniform on [−1, 1], so its mean is 0 and
        // its second moment is 1/3.
        let mut rng = stream_rng(11, 0);
        let n = 20000;
        let (mut m1, mut m2) = (0.0, 0.0);
        for _ in 0..n {
            let u = haar_unitary(&mut rng, 2);
            let z = u[(0, 0)].norm_sqr() - u[(1, 0)].norm_sqr();
            m1 += z;
            m2 += z * z;
        }
        assert!((m1 / n as f64).abs() < 0.02);
        assert!((m2 / n as f64 - 1.0 / 3.0).abs() < 0.01);
    }
}

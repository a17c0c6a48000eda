#![allow(dead_code)]

use qthermo_core::operator::{CMatrix, DensityMatrix, HermitianOperator};
use qthermo_core::C64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

pub fn gaussian_matrix(rng: &mut ChaCha8Rng, dim: usize) -> CMatrix {
    CMatrix::from_fn(dim, |_, _| {
        C64::new(StandardNormal.sample(&mut *rng), StandardNormal.sample(&mut *rng))
    })
}

pub fn random_hermitian(rng: &mut ChaCha8Rng, dim: usize) -> HermitianOperator {
    let g = gaussian_matrix(rng, dim);
    HermitianOperator::new((&g + &g.adjoint()).scale_real(0.5)).unwrap()
}

/// Haar unitary by Gram–Schmidt on the columns of a Gaussian matrix.
pub fn random_unitary(rng: &mut ChaCha8Rng, dim: usize) -> CMatrix {
    let g = gaussian_matrix(rng, dim);
    let mut cols: Vec<Vec<C64>> = Vec::with_capacity(dim);
    for j in 0..dim {
        let mut v: Vec<C64> = (0..dim).map(|i| g[(i, j)]).collect();
        for q in &cols {
            let proj: C64 = q.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
            for (x, y) in v.iter_mut().zip(q) {
                *x -= proj * y;
            }
        }
        let n = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        cols.push(v.into_iter().map(|z| z / n).collect());
    }
    CMatrix::from_fn(dim, |i, j| cols[j][i])
}

/// Random full-rank or low-rank state: U diag(p) U† with p uniform on the simplex.
pub fn random_state(rng: &mut ChaCha8Rng, dim: usize) -> DensityMatrix {
    let rank = if rng.random_bool(0.2) { rng.random_range(1..=dim) } else { dim };
    let mut p: Vec<f64> = (0..dim)
        .map(|k| if k < rank { -rng.random::<f64>().max(1e-300).ln() } else { 0.0 })
        .collect();
    let s: f64 = p.iter().sum();
    p.iter_mut().for_each(|x| *x /= s);
    let d = DensityMatrix::from_populations(&p).unwrap();
    d.transformed(&random_unitary(rng, dim)).unwrap()
}

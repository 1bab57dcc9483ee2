use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::channel::{NormalizedCovariance, WiretapChannel};
use crate::matrix::{ComplexMatrix, HermitianMatrix};

pub use crate::presets::reference_channel_3x3 as golden_channel;

pub fn random_complex_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> ComplexMatrix {
    let data = (0..rows * cols)
        .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
        .collect();
    ComplexMatrix::new(rows, cols, data).unwrap()
}

/// Random channel with every antenna count in `1..=max_dim`.
pub fn random_channel(rng: &mut ChaCha8Rng, max_dim: usize) -> WiretapChannel {
    let nt = rng.random_range(1..=max_dim);
    let nr = rng.random_range(1..=max_dim);
    let ne = rng.random_range(1..=max_dim);
    let hm = random_complex_matrix(rng, nr, nt);
    let he = random_complex_matrix(rng, ne, nt);
    let nm = rng.random_range(0.5..2.0);
    let noise_e = rng.random_range(0.5..2.0);
    WiretapChannel::new(hm, he, nm, noise_e).unwrap()
}

pub fn random_covariance(rng: &mut ChaCha8Rng, n: usize) -> NormalizedCovariance {
    let rank = rng.random_range(1..=n);
    let g = random_complex_matrix(rng, n, rank);
    let k = HermitianMatrix::new(g.matmul(&g.adjoint()).unwrap()).unwrap();
    NormalizedCovariance::from_unnormalized(k).unwrap()
}

//! Seeded random matrices and vectors for tests and sampled suprema.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::eigen::expm_skew;
use super::matrix::{ComplexMatrix, C64};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn gauss(r: &mut ChaCha8Rng) -> f64 {
    // Box-Muller; u1 is kept away from zero.
    let u1: f64 = r.gen_range(f64::EPSILON..1.0);
    let u2: f64 = r.gen();
    (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
}

/// Entries with independent standard normal real and imaginary parts.
pub fn random_matrix(rows: usize, cols: usize, seed: u64) -> ComplexMatrix {
    let mut r = rng(seed);
    ComplexMatrix::from_fn(rows, cols, |_, _| C64::new(gauss(&mut r), gauss(&mut r)))
}

pub fn random_vector(n: usize, seed: u64) -> Vec<C64> {
    let mut r = rng(seed);
    (0..n).map(|_| C64::new(gauss(&mut r), gauss(&mut r))).collect()
}

pub fn random_unit_vector(n: usize, seed: u64) -> Vec<C64> {
    let v = random_vector(n, seed);
    let nv = super::matrix::norm(&v);
    v.iter().map(|z| z / nv).collect()
}

pub fn random_hermitian(n: usize, seed: u64) -> ComplexMatrix {
    random_matrix(n, n, seed).hermitian_part()
}

/// `e^{iH}` for a random Hermitian `H`; not Haar-distributed, but generic.
pub fn random_unitary(n: usize, seed: u64) -> ComplexMatrix {
    let h = random_hermitian(n, seed);
    expm_skew(&h, 1.0).expect("random Hermitian input")
}

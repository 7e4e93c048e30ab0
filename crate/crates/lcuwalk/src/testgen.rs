//! Seeded generators for random Hermitian matrices, unitaries, sparse draws
//! and states. Used by the verification suites and by the CLI's ensemble
//! subcommands, so identical seeds give identical draws everywhere.

use num_complex::Complex64;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::linalg::{validate_hermitian, HermitianOperator, HERMITICITY_TOL};
use crate::matrix::{ComplexMatrix, ZERO};
use crate::sum::norm2;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn uniform_complex(rng: &mut impl Rng) -> Complex64 {
    Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
}

/// Random Hermitian draw (A + A†)/2 with entries uniform in the unit square.
pub fn random_hermitian(rng: &mut impl Rng, n: usize) -> HermitianOperator {
    let a = ComplexMatrix::from_fn(n, |_, _| uniform_complex(rng));
    validate_hermitian(&a.add(&a.adjoint()).scale(Complex64::new(0.5, 0.0)), HERMITICITY_TOL)
        .expect("symmetrized draw is Hermitian")
}

/// Random unitary from Gram-Schmidt on a random complex matrix.
pub fn random_unitary(rng: &mut impl Rng, n: usize) -> ComplexMatrix {
    loop {
        let mut cols: Vec<Vec<Complex64>> = (0..n)
            .map(|_| (0..n).map(|_| uniform_complex(rng)).collect())
            .collect();
        let mut ok = true;
        for j in 0..n {
            for i in 0..j {
                let proj = crate::sum::inner(&cols[i], &cols[j]);
                for r in 0..n {
                    let c = cols[i][r];
                    cols[j][r] -= proj * c;
                }
            }
            let nrm = norm2(&cols[j]);
            if nrm < 1e-6 {
                ok = false;
                break;
            }
            for r in 0..n {
                cols[j][r] /= nrm;
            }
        }
        if ok {
            return ComplexMatrix::from_fn(n, |i, j| cols[j][i]);
        }
    }
}

/// Random matrix with exactly `d` nonzeros in every row.
pub fn random_d_sparse(rng: &mut impl Rng, n: usize, d: usize) -> ComplexMatrix {
    assert!(d <= n);
    let mut m = ComplexMatrix::zeros(n);
    let all: Vec<usize> = (0..n).collect();
    for i in 0..n {
        let cols: Vec<usize> = all.choose_multiple(rng, d).copied().collect();
        for &j in &cols {
            let mut v = uniform_complex(rng);
            while v == ZERO {
                v = uniform_complex(rng);
            }
            m.set(i, j, v);
        }
    }
    m
}

/// Random normalized state vector.
pub fn random_state(rng: &mut impl Rng, n: usize) -> Vec<Complex64> {
    loop {
        let v: Vec<Complex64> = (0..n).map(|_| uniform_complex(rng)).collect();
        let nrm = norm2(&v);
        if nrm > 1e-3 {
            return v.into_iter().map(|c| c / nrm).collect();
        }
    }
}

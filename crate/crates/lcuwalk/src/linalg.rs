//! Hermitian validation, norms, eigendecomposition and the exact
//! matrix-exponential oracle.
//!
//! The spectral norm is computed exactly from a full eigendecomposition
//! (cyclic complex Jacobi) rather than by power iteration, so no iterative
//! convergence tolerance enters the trust chain. All reductions use the fixed
//! pairwise tree from [`crate::sum`].

use num_complex::Complex64;
#[cfg(feature = "parallel")]
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::matrix::{ComplexMatrix, ZERO};
use crate::sum::{pairwise_map, pairwise_sum};

/// Default relative hermiticity tolerance.
pub const HERMITICITY_TOL: f64 = 1e-12;

const JACOBI_MAX_SWEEPS: usize = 64;

/// Hermitian matrix with cached row sums and norms.
///
/// `lambda = max(‖H‖₁, ‖H‖)` is the walk normalization scale; the cached
/// values are those used everywhere downstream, so they are computed once
/// here and never re-derived ad hoc.
#[derive(Debug, Clone)]
pub struct HermitianOperator {
    matrix: ComplexMatrix,
    row_sums: Vec<f64>,
    lambda: f64,
    spectral_norm: f64,
    induced_one_norm: f64,
    max_norm: f64,
}

impl HermitianOperator {
    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    /// σ_j = Σ_k |H_jk|
    pub fn row_sum(&self, j: usize) -> f64 {
        self.row_sums[j]
    }

    pub fn row_sums(&self) -> &[f64] {
        &self.row_sums
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn spectral_norm(&self) -> f64 {
        self.spectral_norm
    }

    pub fn induced_one_norm(&self) -> f64 {
        self.induced_one_norm
    }

    pub fn max_norm(&self) -> f64 {
        self.max_norm
    }
}

/// Eigendecomposition H = V diag(λ) V†, eigenvalues ascending, `V` unitary.
#[derive(Debug, Clone)]
pub struct EigenDecomposition {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: ComplexMatrix,
}

impl EigenDecomposition {
    pub fn eigenvector(&self, i: usize) -> Vec<Complex64> {
        let n = self.eigenvectors.dim();
        (0..n).map(|r| self.eigenvectors.get(r, i)).collect()
    }
}

/// Check hermiticity against `tol` (relative to the max norm), symmetrize and
/// cache σ_j, ‖H‖₁, ‖H‖, ‖H‖_max and Λ.
pub fn validate_hermitian(m: &ComplexMatrix, tol: f64) -> Result<HermitianOperator> {
    if tol <= 0.0 {
        return Err(Error::InvalidArgument("tolerance must be positive".into()));
    }
    if !m.is_finite() {
        return Err(Error::NonFinite);
    }
    let n = m.dim();
    let max_norm = m.max_norm();
    let deviation = m.sub(&m.adjoint()).max_norm();
    let tolerance = tol * max_norm.max(1.0);
    if deviation > tolerance {
        return Err(Error::NonHermitian {
            deviation,
            tolerance,
        });
    }
    // Within tolerance: take the Hermitian part (M + M†)/2.
    let adj = m.adjoint();
    let matrix = m.add(&adj).scale(Complex64::new(0.5, 0.0));

    let row_sums: Vec<f64> = (0..n)
        .map(|j| pairwise_map(0, n, 0.0, &|k| matrix.get(j, k).norm()))
        .collect();
    let induced_one_norm = row_sums.iter().fold(0.0_f64, |a, &s| a.max(s));
    let eig = jacobi_hermitian(&matrix)?;
    let spectral_norm = eig
        .eigenvalues
        .iter()
        .fold(0.0_f64, |a, &l| a.max(l.abs()));
    let lambda = induced_one_norm.max(spectral_norm);
    Ok(HermitianOperator {
        max_norm: matrix.max_norm(),
        matrix,
        row_sums,
        lambda,
        spectral_norm,
        induced_one_norm,
    })
}

/// Full eigendecomposition of a validated operator.
pub fn eigendecompose(h: &HermitianOperator) -> Result<EigenDecomposition> {
    jacobi_hermitian(h.matrix())
}

/// Spectral norm of an arbitrary square matrix, via the eigenvalues of A†A.
pub fn spectral_norm(a: &ComplexMatrix) -> Result<f64> {
    let gram = a.adjoint().mul(a);
    let eig = jacobi_hermitian(&gram)?;
    let top = eig.eigenvalues.iter().fold(0.0_f64, |acc, &l| acc.max(l));
    Ok(top.max(0.0).sqrt())
}

/// ‖A‖₁ = max_j Σ_k |A_jk|
pub fn induced_one_norm(a: &ComplexMatrix) -> f64 {
    let n = a.dim();
    (0..n)
        .map(|j| pairwise_map(0, n, 0.0, &|k| a.get(j, k).norm()))
        .fold(0.0_f64, |acc, s| acc.max(s))
}

pub fn max_norm(a: &ComplexMatrix) -> f64 {
    a.max_norm()
}

/// Exact evolution oracle: V diag(e^{-iλt}) V†.
pub fn matrix_exponential(h: &HermitianOperator, t: f64) -> Result<ComplexMatrix> {
    let eig = eigendecompose(h)?;
    let n = h.dim();
    let phases: Vec<Complex64> = eig
        .eigenvalues
        .iter()
        .map(|&l| Complex64::from_polar(1.0, -l * t))
        .collect();
    let v = &eig.eigenvectors;
    let row = |i: usize| -> Vec<Complex64> {
        (0..n)
            .map(|j| pairwise_map(0, n, ZERO, &|l| v.get(i, l) * phases[l] * v.get(j, l).conj()))
            .collect()
    };
    #[cfg(feature = "parallel")]
    let rows: Vec<Vec<Complex64>> = (0..n).into_par_iter().map(row).collect();
    #[cfg(not(feature = "parallel"))]
    let rows: Vec<Vec<Complex64>> = (0..n).map(row).collect();
    ComplexMatrix::from_rows(&rows)
}

/// Result of the d-sparse norm inequality check ‖A‖₁ ≤ √d‖A‖.
#[derive(Debug, Clone, Copy)]
pub struct NormBoundCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
}

/// Verify ‖A‖₁ ≤ √d·‖A‖ for a matrix with at most `d` nonzeros per row.
pub fn check_sparse_norm_bound(a: &ComplexMatrix, d: usize) -> Result<NormBoundCheck> {
    if d == 0 {
        return Err(Error::InvalidArgument("sparsity d must be positive".into()));
    }
    if !a.is_finite() {
        return Err(Error::NonFinite);
    }
    let n = a.dim();
    for row in 0..n {
        let found = (0..n).filter(|&k| a.get(row, k) != ZERO).count();
        if found > d {
            return Err(Error::SparsityExceeded {
                row,
                found,
                declared: d,
            });
        }
    }
    let lhs = induced_one_norm(a);
    let rhs = (d as f64).sqrt() * spectral_norm(a)?;
    Ok(NormBoundCheck {
        lhs,
        rhs,
        holds: lhs <= rhs + 1e-12,
    })
}

/// Cyclic complex Jacobi for Hermitian matrices.
///
/// Rotations zero a_pq with the unitary [[c, s e^{iφ}], [−s e^{−iφ}, c]],
/// φ = arg(a_pq). Quadratic convergence; non-convergence after
/// `JACOBI_MAX_SWEEPS` sweeps is reported, never silently accepted.
fn jacobi_hermitian(m: &ComplexMatrix) -> Result<EigenDecomposition> {
    let n = m.dim();
    let mut a = m.clone();
    let mut v = ComplexMatrix::identity(n);
    let scale = a.max_norm().max(f64::MIN_POSITIVE);
    let stop = 1e-15 * scale;

    let mut converged = false;
    for _ in 0..JACOBI_MAX_SWEEPS {
        let mut off = 0.0_f64;
        for p in 0..n {
            for q in (p + 1)..n {
                off = off.max(a.get(p, q).norm());
            }
        }
        if off <= stop {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a.get(p, q);
                let mag = apq.norm();
                if mag <= stop * 1e-2 {
                    continue;
                }
                let phi = apq.arg();
                let app = a.get(p, p).re;
                let aqq = a.get(q, q).re;
                let tau = (aqq - app) / (2.0 * mag);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                let e_pos = Complex64::from_polar(1.0, phi);
                let e_neg = e_pos.conj();

                // Column update A <- A R.
                for i in 0..n {
                    let aip = a.get(i, p);
                    let aiq = a.get(i, q);
                    a.set(i, p, c * aip - s * e_neg * aiq);
                    a.set(i, q, s * e_pos * aip + c * aiq);
                }
                // Row update A <- R† A.
                for j in 0..n {
                    let apj = a.get(p, j);
                    let aqj = a.get(q, j);
                    a.set(p, j, c * apj - s * e_pos * aqj);
                    a.set(q, j, s * e_neg * apj + c * aqj);
                }
                // Accumulate eigenvectors V <- V R.
                for i in 0..n {
                    let vip = v.get(i, p);
                    let viq = v.get(i, q);
                    v.set(i, p, c * vip - s * e_neg * viq);
                    v.set(i, q, s * e_pos * vip + c * viq);
                }
            }
        }
    }
    if !converged {
        return Err(Error::EigenNonConvergence(JACOBI_MAX_SWEEPS));
    }

    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<f64> = (0..n).map(|i| a.get(i, i).re).collect();
    order.sort_by(|&i, &j| diag[i].partial_cmp(&diag[j]).unwrap());
    let eigenvalues: Vec<f64> = order.iter().map(|&i| diag[i]).collect();
    let eigenvectors = ComplexMatrix::from_fn(n, |r, cidx| v.get(r, order[cidx]));
    Ok(EigenDecomposition {
        eigenvalues,
        eigenvectors,
    })
}

/// ℓ₂ residual ‖Hv − λv‖ of an eigenpair candidate.
pub fn eigenpair_residual(h: &HermitianOperator, lambda: f64, vec: &[Complex64]) -> f64 {
    let hv = h.matrix().matvec(vec);
    let r: Vec<f64> = hv
        .iter()
        .zip(vec)
        .map(|(a, b)| (a - b * lambda).norm_sqr())
        .collect();
    pairwise_sum(&r).sqrt()
}

//! Isometry, swap and the quantum walk operator U = iS(2TT† − I).
//!
//! The doubled register space has layout [(row, N), (flag, 2), (row', N),
//! (flag', 2)], dimension 4N². Column (j, b) of the isometry T is
//! |j⟩|b⟩⊗|φ_{jb}⟩ with |φ_{j0}⟩ the prepared row state and |φ_{j1}⟩ = |0⟩|1⟩.
//! U is held matrix-free (apply T, T†, the reflection, the swap and the
//! phase i); a dense copy is assembled for N ≤ 8 where exact spectral checks
//! are cheap.

use num_complex::Complex64;
#[cfg(feature = "parallel")]
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::linalg::HermitianOperator;
use crate::matrix::{ComplexMatrix, ZERO};
use crate::rowtree::RowTreeArray;
use crate::stateprep::prepare_row_state_direct;
use crate::sum::{norm2, pairwise_map};

const DENSE_LIMIT: usize = 8;

/// Threshold below the degeneracy edge |λ|/Λ = 1 where μ₊ and μ₋ merge.
pub const DEGENERACY_MARGIN: f64 = 1e-6;

#[derive(Debug, Clone)]
pub struct WalkOperator {
    dim_sys: usize,
    lambda: f64,
    /// Row states |φ_{j0}⟩, each of length 2N.
    row_states: Vec<Vec<Complex64>>,
    /// neg_real[j·N + k]: H_jk is exactly a negative real. The square-root
    /// branch seam at arg = π makes the T†ST matrix element come out as
    /// +|H_jk| for these entries (on the diagonal it is |amplitude|² for any
    /// branch), so the sign is restored by a ±1 phase folded into the swap.
    /// The phased swap is still a Hermitian involution, so every spectral
    /// statement about U holds unchanged.
    neg_real: Vec<bool>,
    dense: Option<ComplexMatrix>,
}

/// Build the walk operator from a sealed row-tree array.
pub fn build_walk(ds: &RowTreeArray) -> Result<WalkOperator> {
    let n = ds.dim();
    #[cfg(feature = "parallel")]
    let row_states: Vec<Vec<Complex64>> = (0..n)
        .into_par_iter()
        .map(|j| prepare_row_state_direct(ds, j).map(|s| s.amplitudes().to_vec()))
        .collect::<Result<_>>()?;
    #[cfg(not(feature = "parallel"))]
    let row_states: Vec<Vec<Complex64>> = (0..n)
        .map(|j| prepare_row_state_direct(ds, j).map(|s| s.amplitudes().to_vec()))
        .collect::<Result<_>>()?;

    // Leaf (j, k) holds H_jk*; conjugation does not move the negative reals.
    let mut neg_real = vec![false; n * n];
    for j in 0..n {
        for k in 0..n {
            let (v, _) = ds.tree(j).leaf(k);
            neg_real[j * n + k] = v.im == 0.0 && v.re < 0.0;
        }
    }
    let mut w = WalkOperator {
        dim_sys: n,
        lambda: ds.lambda(),
        row_states,
        neg_real,
        dense: None,
    };
    if n <= DENSE_LIMIT {
        let d = w.walk_dim();
        let mut u = ComplexMatrix::zeros(d);
        for col in 0..d {
            let mut e = vec![ZERO; d];
            e[col] = Complex64::new(1.0, 0.0);
            let uc = w.apply(&e);
            for r in 0..d {
                u.set(r, col, uc[r]);
            }
        }
        w.dense = Some(u);
    }
    Ok(w)
}

impl WalkOperator {
    /// System dimension N.
    pub fn dim_sys(&self) -> usize {
        self.dim_sys
    }

    /// Walk-space dimension 4N².
    pub fn walk_dim(&self) -> usize {
        4 * self.dim_sys * self.dim_sys
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    /// Dense U, available for N ≤ 8.
    pub fn dense(&self) -> Option<&ComplexMatrix> {
        self.dense.as_ref()
    }

    fn phi(&self, j: usize, b: usize) -> std::borrow::Cow<'_, [Complex64]> {
        if b == 0 {
            std::borrow::Cow::Borrowed(&self.row_states[j])
        } else {
            let mut e = vec![ZERO; 2 * self.dim_sys];
            e[1] = Complex64::new(1.0, 0.0); // |0⟩|1⟩
            std::borrow::Cow::Owned(e)
        }
    }

    /// T: 2N → 4N². Column (j,b) occupies the contiguous block
    /// [(2j+b)·2N, (2j+b)·2N + 2N).
    pub fn apply_t(&self, x: &[Complex64]) -> Vec<Complex64> {
        let n = self.dim_sys;
        debug_assert_eq!(x.len(), 2 * n);
        let mut out = vec![ZERO; self.walk_dim()];
        for col in 0..2 * n {
            let c = x[col];
            if c == ZERO {
                continue;
            }
            let phi = self.phi(col / 2, col % 2);
            let base = col * 2 * n;
            for (m, &p) in phi.iter().enumerate() {
                out[base + m] += c * p;
            }
        }
        out
    }

    /// T†: 4N² → 2N.
    pub fn apply_t_dag(&self, v: &[Complex64]) -> Vec<Complex64> {
        let n = self.dim_sys;
        debug_assert_eq!(v.len(), self.walk_dim());
        (0..2 * n)
            .map(|col| {
                let phi = self.phi(col / 2, col % 2);
                let base = col * 2 * n;
                pairwise_map(0, 2 * n, ZERO, &|m| phi[m].conj() * v[base + m])
            })
            .collect()
    }

    /// S: |j₀⟩|b₀⟩|j₁⟩|b₁⟩ → σ(j₀,j₁)|j₁⟩|b₁⟩|j₀⟩|b₀⟩, where σ = −1 on
    /// flag-00 components whose (j₀, j₁) entry is an exact negative real and
    /// +1 otherwise. σ is symmetric (H is Hermitian), so S stays a Hermitian
    /// involution; the phase restores the sign the square-root branch seam
    /// strips from negative-real matrix elements in T†ST.
    pub fn apply_swap(&self, v: &[Complex64]) -> Vec<Complex64> {
        let n = self.dim_sys;
        let mut out = vec![ZERO; v.len()];
        for c0 in 0..2 * n {
            for c1 in 0..2 * n {
                let x = v[c0 * 2 * n + c1];
                let flip =
                    c0 % 2 == 0 && c1 % 2 == 0 && self.neg_real[(c0 / 2) * n + c1 / 2];
                out[c1 * 2 * n + c0] = if flip { -x } else { x };
            }
        }
        out
    }

    /// Reflection 2TT† − I.
    pub fn apply_reflection(&self, v: &[Complex64]) -> Vec<Complex64> {
        let proj = self.apply_t(&self.apply_t_dag(v));
        proj.iter().zip(v).map(|(p, x)| 2.0 * p - x).collect()
    }

    /// U = iS(2TT† − I).
    pub fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        let i = Complex64::new(0.0, 1.0);
        self.apply_swap(&self.apply_reflection(v))
            .into_iter()
            .map(|x| i * x)
            .collect()
    }

    /// U† = −i(2TT† − I)S.
    pub fn apply_dag(&self, v: &[Complex64]) -> Vec<Complex64> {
        let mi = Complex64::new(0.0, -1.0);
        self.apply_reflection(&self.apply_swap(v))
            .into_iter()
            .map(|x| mi * x)
            .collect()
    }

    /// Dense T (4N² × 2N columns packed into a 4N²-dim square is wasteful,
    /// so columns are returned directly).
    pub fn isometry_columns(&self) -> Vec<Vec<Complex64>> {
        let n = self.dim_sys;
        (0..2 * n)
            .map(|col| {
                let mut e = vec![ZERO; 2 * n];
                e[col] = Complex64::new(1.0, 0.0);
                self.apply_t(&e)
            })
            .collect()
    }

    /// ‖T†T − I‖_max.
    pub fn isometry_residual(&self) -> f64 {
        let n = self.dim_sys;
        let cols = self.isometry_columns();
        let mut worst = 0.0_f64;
        for a in 0..2 * n {
            for b in 0..2 * n {
                let want = if a == b { 1.0 } else { 0.0 };
                let got = crate::sum::inner(&cols[a], &cols[b]);
                worst = worst.max((got - want).norm());
            }
        }
        worst
    }
}

/// ‖(I⊗⟨0|)T†ST(I⊗|0⟩) − H/Λ‖_max, the block-encoding identity residual.
pub fn verify_block_encoding(w: &WalkOperator, h: &HermitianOperator) -> f64 {
    let n = w.dim_sys;
    debug_assert_eq!(n, h.dim());
    let mut worst = 0.0_f64;
    for k in 0..n {
        let mut e = vec![ZERO; 2 * n];
        e[2 * k] = Complex64::new(1.0, 0.0); // |k⟩|0⟩
        let col = w.apply_t_dag(&w.apply_swap(&w.apply_t(&e)));
        for j in 0..n {
            let want = h.matrix().get(j, k) / w.lambda;
            worst = worst.max((col[2 * j] - want).norm());
        }
    }
    worst
}

/// Walk eigenvalue μ± = ±e^{±i·arcsin(λ/Λ)}.
pub fn walk_eigenvalue(lambda_over_big_lambda: f64, sign: i8) -> Complex64 {
    let theta = lambda_over_big_lambda.clamp(-1.0, 1.0).asin();
    if sign >= 0 {
        Complex64::from_polar(1.0, theta)
    } else {
        -Complex64::from_polar(1.0, -theta)
    }
}

/// Residual ‖U|μ±⟩ − μ±|μ±⟩‖ / ‖|μ±⟩‖ for |μ±⟩ = (T + iμ±ST)|λ⟩|0⟩.
///
/// The input must be an eigenpair of `h`; pairs within `DEGENERACY_MARGIN`
/// of |λ|/Λ = 1 are flagged rather than checked.
pub fn walk_eigenpair_check(
    w: &WalkOperator,
    h: &HermitianOperator,
    lambda: f64,
    vec: &[Complex64],
    sign: i8,
) -> Result<f64> {
    let input_residual = crate::linalg::eigenpair_residual(h, lambda, vec);
    if input_residual > 1e-8 * h.spectral_norm().max(1.0) {
        return Err(Error::BadEigenpair(input_residual));
    }
    let nu = lambda / w.lambda;
    if nu.abs() > 1.0 - DEGENERACY_MARGIN {
        return Err(Error::NearDegenerateEigenvalue);
    }
    let mu = walk_eigenvalue(nu, sign);
    let n = w.dim_sys;
    let mut emb = vec![ZERO; 2 * n];
    for j in 0..n {
        emb[2 * j] = vec[j];
    }
    let tv = w.apply_t(&emb);
    let stv = w.apply_swap(&tv);
    let i_mu = Complex64::new(0.0, 1.0) * mu;
    let eig_vec: Vec<Complex64> = tv.iter().zip(&stv).map(|(a, b)| a + i_mu * b).collect();
    let u_vec = w.apply(&eig_vec);
    let diff: Vec<Complex64> = u_vec
        .iter()
        .zip(&eig_vec)
        .map(|(a, b)| a - mu * b)
        .collect();
    Ok(norm2(&diff) / norm2(&eig_vec))
}

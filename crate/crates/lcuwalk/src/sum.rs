//! Deterministic pairwise reductions.
//!
//! Every norm, row sum and inner product in this crate goes through the same
//! fixed summation tree: split at `len/2`, recurse, add. For power-of-two
//! lengths this is exactly the binary tree of the row-tree data structure, so
//! sums computed here and sums read off tree roots agree bitwise. The tree
//! does not depend on thread count.

use num_complex::Complex64;

/// Sum `f(lo)..f(hi-1)` over the fixed pairwise tree.
pub fn pairwise_map<T, F>(lo: usize, hi: usize, zero: T, f: &F) -> T
where
    T: Copy + std::ops::Add<Output = T>,
    F: Fn(usize) -> T,
{
    match hi - lo {
        0 => zero,
        1 => f(lo),
        2 => f(lo) + f(lo + 1),
        n => {
            let mid = lo + n / 2;
            pairwise_map(lo, mid, zero, f) + pairwise_map(mid, hi, zero, f)
        }
    }
}

pub fn pairwise_sum(xs: &[f64]) -> f64 {
    pairwise_map(0, xs.len(), 0.0, &|i| xs[i])
}

pub fn pairwise_sum_complex(xs: &[Complex64]) -> Complex64 {
    pairwise_map(0, xs.len(), Complex64::new(0.0, 0.0), &|i| xs[i])
}

/// ℓ₂ norm with the fixed reduction tree.
pub fn norm2(xs: &[Complex64]) -> f64 {
    pairwise_map(0, xs.len(), 0.0, &|i| xs[i].norm_sqr()).sqrt()
}

/// ⟨x|y⟩ = Σ conj(x_i) y_i with the fixed reduction tree.
pub fn inner(x: &[Complex64], y: &[Complex64]) -> Complex64 {
    debug_assert_eq!(x.len(), y.len());
    pairwise_map(0, x.len(), Complex64::new(0.0, 0.0), &|i| x[i].conj() * y[i])
}

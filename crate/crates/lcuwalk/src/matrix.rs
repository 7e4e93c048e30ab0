//! Dense square complex matrices, row-major.
//!
//! Matrix-vector and matrix-matrix products are parallel over output rows
//! under the `parallel` feature; each row uses the fixed pairwise reduction,
//! so results are bitwise identical to the sequential path.

use num_complex::Complex64;
#[cfg(feature = "parallel")]
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::sum::pairwise_map;

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);

#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            data: vec![ZERO; dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.set(i, i, ONE);
        }
        m
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            for j in 0..dim {
                m.set(i, j, f(i, j));
            }
        }
        m
    }

    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        let dim = rows.len();
        if rows.iter().any(|r| r.len() != dim) {
            return Err(Error::InvalidArgument("matrix is not square".into()));
        }
        Ok(Self {
            dim,
            data: rows.iter().flatten().copied().collect(),
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.dim + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Complex64) {
        self.data[i * self.dim + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Complex64] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|c| c.re.is_finite() && c.im.is_finite())
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self.get(j, i).conj())
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|x| x * c).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        Self {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        Self {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    /// max_{i,j} |m_{ij}|
    pub fn max_norm(&self) -> f64 {
        self.data.iter().fold(0.0, |acc, c| acc.max(c.norm()))
    }

    fn matvec_row(&self, i: usize, x: &[Complex64]) -> Complex64 {
        let row = self.row(i);
        pairwise_map(0, self.dim, ZERO, &|k| row[k] * x[k])
    }

    pub fn matvec_serial(&self, x: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(x.len(), self.dim);
        (0..self.dim).map(|i| self.matvec_row(i, x)).collect()
    }

    pub fn matvec(&self, x: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(x.len(), self.dim);
        #[cfg(feature = "parallel")]
        {
            (0..self.dim)
                .into_par_iter()
                .map(|i| self.matvec_row(i, x))
                .collect()
        }
        #[cfg(not(feature = "parallel"))]
        {
            self.matvec_serial(x)
        }
    }

    fn mul_row(&self, other: &Self, i: usize) -> Vec<Complex64> {
        (0..self.dim)
            .map(|j| pairwise_map(0, self.dim, ZERO, &|k| self.get(i, k) * other.get(k, j)))
            .collect()
    }

    pub fn mul_serial(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        let data = (0..self.dim).flat_map(|i| self.mul_row(other, i)).collect();
        Self {
            dim: self.dim,
            data,
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        #[cfg(feature = "parallel")]
        {
            let rows: Vec<Vec<Complex64>> = (0..self.dim)
                .into_par_iter()
                .map(|i| self.mul_row(other, i))
                .collect();
            Self {
                dim: self.dim,
                data: rows.into_iter().flatten().collect(),
            }
        }
        #[cfg(not(feature = "parallel"))]
        {
            self.mul_serial(other)
        }
    }

    /// ‖M†M − I‖_max, zero for a unitary matrix.
    pub fn unitarity_residual(&self) -> f64 {
        self.adjoint().mul(self).sub(&Self::identity(self.dim)).max_norm()
    }
}

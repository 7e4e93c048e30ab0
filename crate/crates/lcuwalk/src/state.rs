//! Multi-register statevector with a named layout.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::sum::norm2;

/// Complex amplitude vector over an ordered list of named registers whose
/// dimensions multiply to the vector length.
#[derive(Debug, Clone)]
pub struct RegisterState {
    amplitudes: Vec<Complex64>,
    layout: Vec<(String, usize)>,
}

impl RegisterState {
    pub fn new(amplitudes: Vec<Complex64>, layout: Vec<(String, usize)>) -> Result<Self> {
        let prod: usize = layout.iter().map(|(_, d)| d).product();
        if layout.iter().any(|(_, d)| *d == 0) || prod != amplitudes.len() {
            return Err(Error::InvalidArgument(format!(
                "layout product {prod} does not match vector length {}",
                amplitudes.len()
            )));
        }
        let n = norm2(&amplitudes);
        if (n - 1.0).abs() > 1e-12 {
            return Err(Error::NotNormalized(n));
        }
        Ok(Self { amplitudes, layout })
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn layout(&self) -> &[(String, usize)] {
        &self.layout
    }

    pub fn norm(&self) -> f64 {
        norm2(&self.amplitudes)
    }

    /// ℓ₂ distance to another state.
    pub fn l2_distance(&self, other: &Self) -> f64 {
        debug_assert_eq!(self.amplitudes.len(), other.amplitudes.len());
        let diff: Vec<Complex64> = self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a - b)
            .collect();
        norm2(&diff)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_layout_and_norm() {
        let one = Complex64::new(1.0, 0.0);
        assert!(RegisterState::new(vec![one, one], vec![("a".into(), 3)]).is_err());
        assert!(matches!(
            RegisterState::new(vec![one, one], vec![("a".into(), 2)]),
            Err(Error::NotNormalized(_))
        ));
        assert!(RegisterState::new(
            vec![one, Complex64::new(0.0, 0.0)],
            vec![("a".into(), 2)]
        )
        .is_ok());
    }
}

//! File formats. Everything is JSON; floats survive a round trip bitwise
//! (serde_json prints shortest-round-trip decimals).

use std::collections::HashMap;
use std::fs;
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use lcuwalk::{validate_hermitian, ComplexMatrix, HermitianOperator};

/// Hermitian matrix as a sparse entry list. Only j ≤ k is required; (k, j)
/// is mirrored by conjugation. Full listings are accepted if consistent.
#[derive(Debug, Serialize, Deserialize)]
pub struct HamiltonianFile {
    /// Qubit count; the matrix is N×N with N = 2^n.
    pub n: u32,
    /// (row, col, re, im)
    pub entries: Vec<(usize, usize, f64, f64)>,
}

/// Complex state vector as (re, im) pairs.
#[derive(Debug, Serialize, Deserialize)]
pub struct StateFile {
    pub amplitudes: Vec<(f64, f64)>,
}

/// Full dense matrix listing (used for unitaries and norm-check inputs).
#[derive(Debug, Serialize, Deserialize)]
pub struct MatrixFile {
    pub dim: usize,
    /// (row, col, re, im); omitted entries are zero.
    pub entries: Vec<(usize, usize, f64, f64)>,
}

pub fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T, String> {
    let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    serde_json::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), String> {
    let text = serde_json::to_string_pretty(value).map_err(|e| e.to_string())?;
    fs::write(path, text).map_err(|e| format!("{}: {e}", path.display()))
}

impl HamiltonianFile {
    pub fn to_operator(&self) -> Result<HermitianOperator, String> {
        let n = 1usize << self.n;
        let mut seen: HashMap<(usize, usize), Complex64> = HashMap::new();
        for &(j, k, re, im) in &self.entries {
            if j >= n || k >= n {
                return Err(format!("entry ({j}, {k}) out of range for N = {n}"));
            }
            let v = Complex64::new(re, im);
            if seen.insert((j, k), v).is_some() {
                return Err(format!("duplicate entry ({j}, {k})"));
            }
        }
        // Mirror j ≤ k entries; explicit (k, j) listings must be consistent.
        let mut m = ComplexMatrix::zeros(n);
        for (&(j, k), &v) in &seen {
            if j > k {
                continue;
            }
            if let Some(&w) = seen.get(&(k, j)) {
                if k != j && (w - v.conj()).norm() > 1e-12 {
                    return Err(format!(
                        "entries ({j}, {k}) and ({k}, {j}) are not conjugate"
                    ));
                }
            }
            m.set(j, k, v);
            m.set(k, j, v.conj());
        }
        for (&(j, k), &v) in &seen {
            if j > k && !seen.contains_key(&(k, j)) {
                m.set(j, k, v);
                m.set(k, j, v.conj());
            }
        }
        validate_hermitian(&m, 1e-12).map_err(|e| e.to_string())
    }

    #[cfg(test)]
    pub fn from_operator(h: &HermitianOperator) -> Self {
        let n = h.dim();
        let mut entries = Vec::new();
        for j in 0..n {
            for k in j..n {
                let v = h.matrix().get(j, k);
                if v != Complex64::new(0.0, 0.0) {
                    entries.push((j, k, v.re, v.im));
                }
            }
        }
        HamiltonianFile {
            n: n.trailing_zeros(),
            entries,
        }
    }
}

impl StateFile {
    pub fn from_amplitudes(psi: &[Complex64]) -> Self {
        StateFile {
            amplitudes: psi.iter().map(|a| (a.re, a.im)).collect(),
        }
    }

    /// Decode and normalize. Norm must be within 1e-6 of 1 (renormalized
    /// with a warning on stderr) unless `strict`, which rejects any
    /// deviation beyond 1e-12.
    pub fn to_amplitudes(&self, expect_len: usize, strict: bool) -> Result<Vec<Complex64>, String> {
        if self.amplitudes.len() != expect_len {
            return Err(format!(
                "state has {} amplitudes, expected {expect_len}",
                self.amplitudes.len()
            ));
        }
        let mut psi: Vec<Complex64> = self
            .amplitudes
            .iter()
            .map(|&(re, im)| Complex64::new(re, im))
            .collect();
        let nrm = psi.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if !nrm.is_finite() || nrm == 0.0 {
            return Err("state norm is zero or non-finite".into());
        }
        let dev = (nrm - 1.0).abs();
        if strict && dev > 1e-12 {
            return Err(format!("state norm {nrm} deviates from 1 (strict mode)"));
        }
        if dev > 1e-6 {
            return Err(format!("state norm {nrm} more than 1e-6 away from 1"));
        }
        if dev > 1e-12 {
            eprintln!("warning: renormalizing input state (norm {nrm})");
            for a in &mut psi {
                *a /= nrm;
            }
        }
        Ok(psi)
    }
}

impl MatrixFile {
    pub fn to_matrix(&self) -> Result<ComplexMatrix, String> {
        let mut m = ComplexMatrix::zeros(self.dim);
        let mut seen = std::collections::HashSet::new();
        for &(j, k, re, im) in &self.entries {
            if j >= self.dim || k >= self.dim {
                return Err(format!("entry ({j}, {k}) out of range"));
            }
            if !seen.insert((j, k)) {
                return Err(format!("duplicate entry ({j}, {k})"));
            }
            m.set(j, k, Complex64::new(re, im));
        }
        Ok(m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use lcuwalk::testgen;

    #[test]
    fn hamiltonian_round_trip_is_bitwise() {
        let mut rng = testgen::rng(11);
        let h = testgen::random_hermitian(&mut rng, 8);
        let file = HamiltonianFile::from_operator(&h);
        let text = serde_json::to_string(&file).unwrap();
        let back: HamiltonianFile = serde_json::from_str(&text).unwrap();
        let h2 = back.to_operator().unwrap();
        for j in 0..8 {
            for k in 0..8 {
                assert_eq!(h.matrix().get(j, k), h2.matrix().get(j, k));
            }
        }
    }
}

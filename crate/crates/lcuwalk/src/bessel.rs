//! Bessel coefficients of the first kind for small arguments, computed two
//! independent ways: the ascending power series (the oracle) and Miller-style
//! backward recurrence with even-order normalization (the production route).
//! Cross-agreement of the two is part of the verification suite.

use crate::error::{Error, Result};

const MAX_ORDER: i64 = 60;
const SERIES_CUTOFF: f64 = 1e-18;

/// J_m(z) by the ascending power series. |z| ≤ 1, |m| ≤ 60.
pub fn bessel_series(m: i64, z: f64) -> Result<f64> {
    if z.abs() > 1.0 {
        return Err(Error::BesselRange(format!("|z| = {} > 1", z.abs())));
    }
    if m.abs() > MAX_ORDER {
        return Err(Error::BesselRange(format!("|m| = {} > {MAX_ORDER}", m.abs())));
    }
    let n = m.unsigned_abs() as u32;
    let half = z / 2.0;
    // Leading term (z/2)^n / n!.
    let mut term = 1.0_f64;
    for i in 1..=n {
        term *= half / i as f64;
    }
    let mut sum = term;
    let mut i = 1.0_f64;
    while term.abs() >= SERIES_CUTOFF {
        term *= -(half * half) / (i * (i + n as f64));
        sum += term;
        i += 1.0;
    }
    // J_{−m} = (−1)^m J_m.
    if m < 0 && m % 2 != 0 {
        sum = -sum;
    }
    Ok(sum)
}

/// J_0(z)..J_k(z) by backward recurrence from order k + max(16, k),
/// normalized with J_0 + 2·Σ_{even m} J_m = 1.
pub fn bessel_backward(z: f64, k: usize) -> Result<Vec<f64>> {
    if z.abs() > 1.0 {
        return Err(Error::BesselRange(format!("|z| = {} > 1", z.abs())));
    }
    if k == 0 || k as i64 > MAX_ORDER {
        return Err(Error::BesselRange(format!("k = {k} outside [1, {MAX_ORDER}]")));
    }
    if z == 0.0 {
        let mut out = vec![0.0; k + 1];
        out[0] = 1.0;
        return Ok(out);
    }
    let start = k + 16.max(k);
    let mut out = vec![0.0_f64; k + 1];
    let mut jp = 0.0_f64; // J̃_{m+1}
    let mut jc = 1e-30_f64; // J̃_m, arbitrary seed
    let mut norm = 0.0_f64;
    for m in (0..=start).rev() {
        if m <= k {
            out[m] = jc;
        }
        if m > 0 && m % 2 == 0 {
            norm += 2.0 * jc;
        }
        if m == 0 {
            norm += jc;
            break;
        }
        let jm = (2.0 * m as f64 / z) * jc - jp;
        jp = jc;
        jc = jm;
        // Rescale to avoid overflow in the unnormalized recurrence.
        if jc.abs() > 1e250 {
            jp /= 1e250;
            jc /= 1e250;
            norm /= 1e250;
            for v in &mut out {
                *v /= 1e250;
            }
        }
    }
    for v in &mut out {
        *v /= norm;
    }
    Ok(out)
}

/// Σ_{m=-k}^{k} J_m(z) from a backward-recurrence table; odd orders cancel in
/// pairs, leaving J_0 + 2·Σ_{even m ≥ 2} J_m.
pub fn truncated_sum(values: &[f64]) -> f64 {
    let mut s = values[0];
    for (m, &v) in values.iter().enumerate().skip(1) {
        if m % 2 == 0 {
            s += 2.0 * v;
        }
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn series_at_zero() {
        assert_eq!(bessel_series(0, 0.0).unwrap(), 1.0);
        for m in 1..=10 {
            assert_eq!(bessel_series(m, 0.0).unwrap(), 0.0);
            assert_eq!(bessel_series(-m, 0.0).unwrap(), 0.0);
        }
    }

    #[test]
    fn parity_identities() {
        let a = bessel_series(1, -0.5).unwrap();
        let b = bessel_series(1, 0.5).unwrap();
        assert!((a + b).abs() < 1e-16); // J_1(−z) = −J_1(z)
        let c = bessel_series(-1, -0.5).unwrap();
        assert!((c - b).abs() < 1e-16); // J_{−1}(−z) = J_1(z)
    }

    #[test]
    fn backward_at_zero() {
        let v = bessel_backward(0.0, 5).unwrap();
        assert_eq!(v, vec![1.0, 0.0, 0.0, 0.0, 0.0, 0.0]);
    }

    #[test]
    fn backward_agrees_with_series() {
        for &z in &[-0.5, -0.25, -0.1, 0.3, 1.0] {
            let v = bessel_backward(z, 25).unwrap();
            for m in 0..=25 {
                let s = bessel_series(m as i64, z).unwrap();
                assert!(
                    (v[m] - s).abs() <= 1e-13,
                    "m={m} z={z}: {} vs {}",
                    v[m],
                    s
                );
            }
        }
    }

    #[test]
    fn truncated_sum_close_to_one() {
        for &z in &[-0.5_f64, -0.25, -0.1] {
            for k in 2..=20 {
                let v = bessel_backward(z, k).unwrap();
                let s = truncated_sum(&v);
                let mut fact = 1.0;
                for i in 2..=(k + 1) {
                    fact *= i as f64;
                }
                // The analytic bound underflows below double-precision
                // rounding of the sum itself for large k; floor it at a few
                // ulps of 1.
                let bound = (4.0 * (z.abs() / 2.0).powi(k as i32 + 1) / fact)
                    .max(4.0 * f64::EPSILON);
                assert!((s - 1.0).abs() <= bound, "z={z} k={k}: |{s}-1| > {bound}");
            }
        }
    }

    #[test]
    fn known_value_j0_half() {
        // J_0(0.5) = 0.938469807240813 (Abramowitz & Stegun style reference,
        // recomputed with the series to full precision).
        let v = bessel_series(0, 0.5).unwrap();
        assert!((v - 0.938469807240813).abs() < 1e-14);
        assert!((bessel_series(0, -0.5).unwrap() - v).abs() < 1e-16);
    }

    #[test]
    fn out_of_range_rejected() {
        assert!(bessel_series(0, 1.5).is_err());
        assert!(bessel_series(61, 0.5).is_err());
        assert!(bessel_backward(1.5, 5).is_err());
    }
}

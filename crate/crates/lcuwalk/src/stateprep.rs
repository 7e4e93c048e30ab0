//! Row-state preparation, two ways.
//!
//! The target mapping sends `|j⟩|0^{log N}⟩|0⟩` to
//!
//! ```text
//!   (1/√Λ) |j⟩ Σ_k |k⟩ ( √(H_jk*) |0⟩ + √((Λ−σ_j)/N) |1⟩ )
//! ```
//!
//! [`prepare_row_state_direct`] writes the amplitudes down;
//! [`prepare_row_state_cascade`] descends the row tree with one conditional
//! rotation per level, applying phases only at the leaf level, and optionally
//! quantizes every rotation angle to `b` fractional bits. With exact angles
//! the two agree to 1e-12 in ℓ₂ distance; the cascade is the circuit-faithful
//! route and the direct constructor is its oracle.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::matrix::ComplexMatrix;
use crate::rowtree::RowTreeArray;
use crate::state::RegisterState;

/// Angle precision for the rotation cascade.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PrecisionConfig {
    Exact,
    /// Angles rounded to the nearest multiple of 2π·2^{−b}, round-half-even.
    Bits(u32),
}

impl PrecisionConfig {
    pub fn quantize(&self, angle: f64) -> f64 {
        match self {
            PrecisionConfig::Exact => angle,
            PrecisionConfig::Bits(b) => {
                let step = 2.0 * PI / f64::powi(2.0, *b as i32);
                let q = angle / step;
                // Round half to even.
                let r = q.round();
                let rounded = if (q - q.trunc()).abs() == 0.5 {
                    let down = q.trunc();
                    if (down as i64) % 2 == 0 {
                        down
                    } else {
                        down + q.signum()
                    }
                } else {
                    r
                };
                rounded * step
            }
        }
    }
}

/// Square root of a conjugated complex number under the fixed branch rule:
/// for c = r·e^{iφ} with φ ∈ (−π, π], returns √r·e^{−iφ/2}; negative reals
/// (φ = π) give −i√r. Satisfies √c·(sqrt_conj(c))* = c.
pub fn sqrt_conj(c: Complex64) -> Complex64 {
    let r = c.norm();
    if r == 0.0 {
        return Complex64::new(0.0, 0.0);
    }
    let mut phi = c.im.atan2(c.re);
    // atan2 returns −π for (−x, −0.0); the branch rule wants φ = π there.
    if phi == -PI {
        phi = PI;
    }
    Complex64::from_polar(r.sqrt(), -phi / 2.0)
}

/// Forward square root on the same branch, so that
/// `sqrt_forward(c) * sqrt_conj(c).conj() == c`.
pub fn sqrt_forward(c: Complex64) -> Complex64 {
    sqrt_conj(c).conj()
}

/// The conditional-rotation unitary with first column
/// (e^{iφ₀}cosθ, e^{iφ₁}sinθ), angles quantized per `cfg`.
pub fn conditional_rotation(
    theta: f64,
    phi0: f64,
    phi1: f64,
    cfg: PrecisionConfig,
) -> ComplexMatrix {
    let t = cfg.quantize(theta);
    let p0 = Complex64::from_polar(1.0, cfg.quantize(phi0));
    let p1 = Complex64::from_polar(1.0, cfg.quantize(phi1));
    let (c, s) = (t.cos(), t.sin());
    let mut m = ComplexMatrix::zeros(2);
    m.set(0, 0, p0 * c);
    m.set(1, 0, p1 * s);
    m.set(0, 1, -p0 * s);
    m.set(1, 1, p1 * c);
    m
}

fn row_layout(n: usize) -> Vec<(String, usize)> {
    vec![("col".into(), n), ("flag".into(), 2)]
}

/// Direct amplitude constructor for the row state of row `j`.
pub fn prepare_row_state_direct(ds: &RowTreeArray, j: usize) -> Result<RegisterState> {
    let n = ds.dim();
    if j >= n {
        return Err(Error::IndexOutOfRange(format!("row {j} of {n}")));
    }
    let lambda = ds.lambda();
    let (sigma, _) = ds.tree(j).root();
    if sigma > lambda * (1.0 + 1e-9) {
        return Err(Error::CorruptStructure { sigma, lambda });
    }
    let slack_amp = ((lambda - sigma).max(0.0) / n as f64).sqrt() / lambda.sqrt();
    let mut amps = vec![Complex64::new(0.0, 0.0); 2 * n];
    for k in 0..n {
        let (leaf, _) = ds.tree(j).leaf(k);
        // Leaf stores H_jk*; √(H_jk*) = sqrt_conj(H_jk).
        amps[2 * k] = sqrt_conj(leaf.conj()) / lambda.sqrt();
        amps[2 * k + 1] = Complex64::new(slack_amp, 0.0);
    }
    RegisterState::new(amps, row_layout(n))
}

/// Circuit-faithful preparation: root rotation on the flag, then one
/// conditional rotation per tree level, leaf-level phases via the
/// conditional-rotation unitary.
pub fn prepare_row_state_cascade(
    ds: &RowTreeArray,
    j: usize,
    cfg: PrecisionConfig,
) -> Result<RegisterState> {
    let n = ds.dim();
    if j >= n {
        return Err(Error::IndexOutOfRange(format!("row {j} of {n}")));
    }
    let depth = ds.depth();
    let lambda = ds.lambda();
    let tree = ds.tree(j);
    let (sigma, slack_total) = tree.root();
    if sigma > lambda * (1.0 + 1e-9) {
        return Err(Error::CorruptStructure { sigma, lambda });
    }

    // Root rotation splits the flag by (σ_j, Λ−σ_j).
    let theta = cfg.quantize(split_angle(sigma, slack_total));
    let mut amp0 = vec![Complex64::new(theta.cos(), 0.0)];
    let mut amp1 = vec![Complex64::new(theta.sin(), 0.0)];

    for level in 1..=depth {
        let width = 1usize << level;
        let mut next0 = vec![Complex64::new(0.0, 0.0); width];
        let mut next1 = vec![Complex64::new(0.0, 0.0); width];
        for p in 0..width / 2 {
            let (w0, w1) = level_weights(ds, j, level, p);
            if level == depth {
                // Leaf level: split by magnitude and attach the sqrt_conj
                // phases of the two children on the flag-0 branch.
                let a = tree.leaf(2 * p).0.conj();
                let b = tree.leaf(2 * p + 1).0.conj();
                let rot = conditional_rotation(
                    split_angle(w0.0, w0.1),
                    sqrt_conj(a).arg(),
                    sqrt_conj(b).arg(),
                    cfg,
                );
                next0[2 * p] = rot.get(0, 0) * amp0[p];
                next0[2 * p + 1] = rot.get(1, 0) * amp0[p];
            } else {
                let t0 = cfg.quantize(split_angle(w0.0, w0.1));
                next0[2 * p] = amp0[p] * t0.cos();
                next0[2 * p + 1] = amp0[p] * t0.sin();
            }
            let t1 = cfg.quantize(split_angle(w1.0, w1.1));
            next1[2 * p] = amp1[p] * t1.cos();
            next1[2 * p + 1] = amp1[p] * t1.sin();
        }
        amp0 = next0;
        amp1 = next1;
    }

    let mut amps = vec![Complex64::new(0.0, 0.0); 2 * n];
    for k in 0..n {
        amps[2 * k] = amp0[k];
        amps[2 * k + 1] = amp1[k];
    }
    // Quantized angles preserve the norm exactly (each rotation is unitary).
    RegisterState::new(amps, row_layout(n))
}

/// θ = arctan2(√w_R, √w_L); degenerate zero-weight branches use θ = 0.
fn split_angle(w_left: f64, w_right: f64) -> f64 {
    if w_left <= 0.0 && w_right <= 0.0 {
        0.0
    } else {
        w_right.max(0.0).sqrt().atan2(w_left.max(0.0).sqrt())
    }
}

/// Children weights at (level, parent p): (abs pair, slack pair).
fn level_weights(
    ds: &RowTreeArray,
    j: usize,
    level: usize,
    p: usize,
) -> ((f64, f64), (f64, f64)) {
    let depth = ds.depth();
    let tree = ds.tree(j);
    if level == depth {
        let (a, sa) = tree.leaf(2 * p);
        let (b, sb) = tree.leaf(2 * p + 1);
        ((a.norm(), b.norm()), (sa, sb))
    } else {
        let left = match crate::rowtree::node_query(ds, j, level, 2 * p).unwrap() {
            crate::rowtree::NodeData::Internal { abs_sum, slack_sum } => (abs_sum, slack_sum),
            _ => unreachable!(),
        };
        let right = match crate::rowtree::node_query(ds, j, level, 2 * p + 1).unwrap() {
            crate::rowtree::NodeData::Internal { abs_sum, slack_sum } => (abs_sum, slack_sum),
            _ => unreachable!(),
        };
        ((left.0, right.0), (left.1, right.1))
    }
}

//! Row-tree memory structure: one binary tree per row of the Hamiltonian.
//!
//! Leaf `k` of tree `j` stores `(H_jk*, (Λ−σ_j)/N)`. A parent of two leaves
//! `(a, s)`, `(b, s)` stores `(|a|+|b|, 2s)`; every higher internal node
//! stores the componentwise sum of its children. The root of tree `j` is
//! therefore `(σ_j, Λ−σ_j)` and the two components sum to Λ.
//!
//! Λ depends on the whole matrix through the spectral norm, so the structure
//! is built in two passes and "sealed": a single-entry update walks the
//! `log₂N + 1` nodes on the leaf-to-root path (that count is the per-update
//! cost model and is returned to the caller), then reseals by recomputing Λ
//! and refreshing the slack component of every node.
//!
//! Levels are stored as contiguous arrays; parent/child navigation is index
//! arithmetic. Each tree has `2N − 1` nodes.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{validate_hermitian, HermitianOperator, HERMITICITY_TOL};

/// Tuple stored at one tree node.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NodeData {
    /// Internal node: (abs_sum, slack_sum).
    Internal { abs_sum: f64, slack_sum: f64 },
    /// Leaf k: (H_jk*, (Λ−σ_j)/N).
    Leaf { value: Complex64, slack: f64 },
}

#[derive(Debug, Clone)]
pub struct RowTree {
    /// Internal levels 0 (root) .. n−1; level l holds 2^l nodes.
    internal: Vec<Vec<(f64, f64)>>,
    /// Level n: N leaves.
    leaves: Vec<(Complex64, f64)>,
}

impl RowTree {
    fn build(row_conj: &[Complex64], slack: f64) -> Self {
        let n_leaves = row_conj.len();
        let depth = n_leaves.trailing_zeros() as usize;
        let leaves: Vec<(Complex64, f64)> = row_conj.iter().map(|&v| (v, slack)).collect();
        let mut internal: Vec<Vec<(f64, f64)>> = vec![Vec::new(); depth];
        // Parents of leaves: (|a|+|b|, 2s).
        let mut level: Vec<(f64, f64)> = leaves
            .chunks(2)
            .map(|c| (c[0].0.norm() + c[1].0.norm(), c[0].1 + c[1].1))
            .collect();
        for l in (0..depth).rev() {
            if l == depth - 1 {
                internal[l] = level.clone();
            } else {
                level = level
                    .chunks(2)
                    .map(|c| (c[0].0 + c[1].0, c[0].1 + c[1].1))
                    .collect();
                internal[l] = level.clone();
            }
        }
        RowTree { internal, leaves }
    }

    fn depth(&self) -> usize {
        self.internal.len()
    }

    pub fn root(&self) -> (f64, f64) {
        self.internal[0][0]
    }

    pub fn leaf(&self, k: usize) -> (Complex64, f64) {
        self.leaves[k]
    }

    pub fn node_count(&self) -> usize {
        self.leaves.len() * 2 - 1
    }

    /// Recompute the abs components on the path from leaf `k` to the root.
    /// Returns the number of touched nodes (leaf + one per internal level).
    fn update_abs_path(&mut self, k: usize, value: Complex64) -> usize {
        let depth = self.depth();
        self.leaves[k] = (value, self.leaves[k].1);
        let mut touched = 1;
        for level in (0..depth).rev() {
            let idx = k >> (depth - level);
            let abs = if level == depth - 1 {
                let (a, b) = (self.leaves[2 * idx].0, self.leaves[2 * idx + 1].0);
                a.norm() + b.norm()
            } else {
                self.internal[level + 1][2 * idx].0 + self.internal[level + 1][2 * idx + 1].0
            };
            self.internal[level][idx].0 = abs;
            touched += 1;
        }
        touched
    }

    /// Refresh every slack component from a new per-leaf slack value.
    fn refresh_slack(&mut self, slack: f64) {
        for leaf in &mut self.leaves {
            leaf.1 = slack;
        }
        let depth = self.depth();
        let mut level_sum: Vec<f64> = self.leaves.chunks(2).map(|c| c[0].1 + c[1].1).collect();
        for l in (0..depth).rev() {
            if l < depth - 1 {
                level_sum = level_sum.chunks(2).map(|c| c[0] + c[1]).collect();
            }
            for (node, &s) in self.internal[l].iter_mut().zip(&level_sum) {
                node.1 = s;
            }
        }
    }
}

/// Array of N row trees sharing one Λ.
#[derive(Debug, Clone)]
pub struct RowTreeArray {
    trees: Vec<RowTree>,
    operator: HermitianOperator,
    sealed: bool,
    update_log: Vec<usize>,
}

impl RowTreeArray {
    pub fn dim(&self) -> usize {
        self.operator.dim()
    }

    /// n = log₂N
    pub fn depth(&self) -> usize {
        self.dim().trailing_zeros() as usize
    }

    pub fn lambda(&self) -> f64 {
        self.operator.lambda()
    }

    pub fn operator(&self) -> &HermitianOperator {
        &self.operator
    }

    pub fn sealed(&self) -> bool {
        self.sealed
    }

    pub fn tree(&self, j: usize) -> &RowTree {
        &self.trees[j]
    }

    /// Touched-node counts, one entry per update.
    pub fn update_log(&self) -> &[usize] {
        &self.update_log
    }

    /// Total node count N(2N−1).
    pub fn node_count(&self) -> usize {
        self.trees.iter().map(RowTree::node_count).sum()
    }
}

/// Build the sealed structure from a validated operator.
pub fn build(h: &HermitianOperator) -> Result<RowTreeArray> {
    let n = h.dim();
    if n < 2 || !n.is_power_of_two() {
        return Err(Error::NotPowerOfTwo(n));
    }
    let lambda = h.lambda();
    let trees = (0..n)
        .map(|j| {
            let row_conj: Vec<Complex64> = (0..n).map(|k| h.matrix().get(j, k).conj()).collect();
            // Λ ≥ σ_j by construction; clamp guards rounding at equality.
            let slack = (lambda - h.row_sum(j)).max(0.0) / n as f64;
            RowTree::build(&row_conj, slack)
        })
        .collect();
    Ok(RowTreeArray {
        trees,
        operator: h.clone(),
        sealed: true,
        update_log: Vec::new(),
    })
}

/// Set H_jk (and H_kj = H_jk*, keeping the matrix Hermitian), update the
/// leaf-to-root path in each affected tree, then reseal: recompute Λ and σ
/// and refresh all slack components. Returns the touched-node count per
/// affected tree, always `log₂N + 1`.
pub fn update_entry(
    ds: &mut RowTreeArray,
    j: usize,
    k: usize,
    value: Complex64,
) -> Result<usize> {
    let n = ds.dim();
    if j >= n || k >= n {
        return Err(Error::IndexOutOfRange(format!(
            "({j}, {k}) outside {n}x{n}"
        )));
    }
    let mut value = value;
    if j == k {
        let scale = ds.operator.max_norm().max(1.0);
        if value.im.abs() > 1e-12 * scale {
            return Err(Error::NonHermitianUpdate(value.im));
        }
        value.im = 0.0;
    }

    let mut matrix = ds.operator.matrix().clone();
    matrix.set(j, k, value);
    matrix.set(k, j, value.conj());
    let operator = validate_hermitian(&matrix, HERMITICITY_TOL)?;

    // Leaf k of tree j stores H_jk*; leaf j of tree k stores H_kj* = H_jk.
    let touched = ds.trees[j].update_abs_path(k, value.conj());
    if j != k {
        let t2 = ds.trees[k].update_abs_path(j, value);
        debug_assert_eq!(touched, t2);
    }
    debug_assert_eq!(touched, ds.depth() + 1);

    // Reseal: Λ changed in general, so every tree's slack is refreshed.
    let lambda = operator.lambda();
    for (row, tree) in ds.trees.iter_mut().enumerate() {
        let slack = (lambda - operator.row_sum(row)).max(0.0) / n as f64;
        tree.refresh_slack(slack);
    }
    ds.operator = operator;
    ds.sealed = true;
    ds.update_log.push(touched);
    Ok(touched)
}

/// Read the tuple at (level, index) of tree `j`; level 0 is the root, level
/// n holds the leaves.
pub fn node_query(ds: &RowTreeArray, j: usize, level: usize, index: usize) -> Result<NodeData> {
    let n = ds.dim();
    let depth = ds.depth();
    if j >= n || level > depth || index >= (1usize << level) {
        return Err(Error::IndexOutOfRange(format!(
            "tree {j}, level {level}, index {index}"
        )));
    }
    let tree = &ds.trees[j];
    if level == depth {
        let (value, slack) = tree.leaves[index];
        Ok(NodeData::Leaf { value, slack })
    } else {
        let (abs_sum, slack_sum) = tree.internal[level][index];
        Ok(NodeData::Internal { abs_sum, slack_sum })
    }
}

/// Recompute every node of every tree bottom-up from the leaves and Λ.
/// Independent consistency oracle for the incremental updates.
pub fn recompute_all(ds: &RowTreeArray) -> Vec<RowTree> {
    let n = ds.dim();
    let lambda = ds.lambda();
    (0..n)
        .map(|j| {
            let row_conj: Vec<Complex64> = (0..n)
                .map(|k| ds.operator.matrix().get(j, k).conj())
                .collect();
            let slack = (lambda - ds.operator.row_sum(j)).max(0.0) / n as f64;
            RowTree::build(&row_conj, slack)
        })
        .collect()
}

/// Max relative deviation between the stored trees and a bottom-up rebuild.
pub fn consistency_residual(ds: &RowTreeArray) -> f64 {
    let rebuilt = recompute_all(ds);
    let scale = ds.lambda().max(1.0);
    let mut worst = 0.0_f64;
    for (t, r) in ds.trees.iter().zip(&rebuilt) {
        for (a, b) in t.leaves.iter().zip(&r.leaves) {
            worst = worst.max((a.0 - b.0).norm() / scale).max((a.1 - b.1).abs() / scale);
        }
        for (la, lb) in t.internal.iter().zip(&r.internal) {
            for (a, b) in la.iter().zip(lb) {
                worst = worst
                    .max((a.0 - b.0).abs() / scale)
                    .max((a.1 - b.1).abs() / scale);
            }
        }
    }
    worst
}

//! Desk-scale simulator for non-sparse Hamiltonian evolution by a linear
//! combination of quantum walks.
//!
//! The pipeline: a Hermitian matrix is validated and its norms cached
//! ([`linalg`]), loaded into an array of row binary trees ([`rowtree`]),
//! turned into row states ([`stateprep`]) that define an isometry `T` and the
//! walk operator `U = iS(2TT† − I)` ([`walk`]), and finally driven through a
//! Bessel-coefficient LCU circuit with oblivious amplitude amplification to
//! realise `e^{-iHt}` segment by segment ([`lcu`]). Every stage is checked
//! against an exact matrix-exponential oracle built from a dense
//! eigendecomposition.
//!
//! Dense kernels are data-parallel over rows when the `parallel` feature
//! (default) is enabled; the reduction tree inside each row is fixed, so the
//! parallel and sequential paths are bitwise identical.

pub mod bessel;
pub mod error;
pub mod lcu;
pub mod linalg;
pub mod matrix;
pub mod plan;
pub mod rowtree;
pub mod state;
pub mod stateprep;
pub mod sum;
pub mod testgen;
pub mod walk;

pub use error::{Error, Result};
pub use linalg::{
    check_sparse_norm_bound, matrix_exponential, validate_hermitian, EigenDecomposition,
    HermitianOperator,
};
pub use matrix::ComplexMatrix;
pub use plan::{choose_truncation, eigenvalue_sum_check, make_plan, LcuPlan};
pub use rowtree::RowTreeArray;
pub use state::RegisterState;
pub use stateprep::PrecisionConfig;
pub use walk::WalkOperator;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not Hermitian: max deviation {deviation:.3e} exceeds tolerance {tolerance:.3e}")]
    NonHermitian { deviation: f64, tolerance: f64 },

    #[error("matrix contains non-finite entries")]
    NonFinite,

    #[error("dimension {0} is not a power of two")]
    NotPowerOfTwo(usize),

    #[error("index out of range: {0}")]
    IndexOutOfRange(String),

    #[error("row {row} has {found} nonzeros, more than the declared sparsity {declared}")]
    SparsityExceeded {
        row: usize,
        found: usize,
        declared: usize,
    },

    #[error("eigendecomposition did not converge after {0} sweeps")]
    EigenNonConvergence(usize),

    #[error("matrix is not unitary: residual {0:.3e}")]
    NotUnitary(f64),

    #[error("row sum {sigma:.6e} exceeds lambda {lambda:.6e}; row-tree structure is corrupt")]
    CorruptStructure { sigma: f64, lambda: f64 },

    #[error("update breaks Hermiticity: diagonal entry has imaginary part {0:.3e}")]
    NonHermitianUpdate(f64),

    #[error("coefficient register carries amplitude {0:.3e} on padding indices")]
    PaddingAmplitude(f64),

    #[error("leakage {leakage:.3e} exceeds budget {budget:.3e}")]
    LeakageBudget { leakage: f64, budget: f64 },

    #[error("coefficient one-norm {0} exceeds 2")]
    CoefficientNorm(f64),

    #[error("|lambda|/Lambda within 1e-6 of the walk degeneracy edge")]
    NearDegenerateEigenvalue,

    #[error("eigenpair residual {0:.3e} too large on input")]
    BadEigenpair(f64),

    #[error("state is not normalized: norm {0}")]
    NotNormalized(f64),

    #[error("bessel argument out of range: {0}")]
    BesselRange(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

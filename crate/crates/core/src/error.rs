use thiserror::Error;

/// Errors shared by all modules of the core library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),

    #[error("level mismatch: k={0} vs k={1}")]
    LevelMismatch(u32, u32),

    #[error("matrix is not Hermitian: max asymmetry {asym:.3e} exceeds {tol:.3e}")]
    NotHermitian { asym: f64, tol: f64 },

    #[error("matrix is not positive definite: min eigenvalue {min_eig:.3e} (max {max_eig:.3e})")]
    NotPositiveDefinite { min_eig: f64, max_eig: f64 },

    #[error("operator is not self-adjoint for the given form: residual {res:.3e} exceeds {tol:.3e}")]
    NotSelfAdjoint { res: f64, tol: f64 },

    #[error("scalar function undefined at eigenvalue {0}")]
    FunctionUndefined(f64),

    #[error("majorization precondition failed: {0}")]
    NotMajorized(String),

    #[error("ordering precondition failed: {0}")]
    NotOrdered(String),

    #[error("invalid Young weight: {0}")]
    InvalidWeight(String),

    #[error("{0} failed to converge")]
    NoConvergence(&'static str),

    #[error("input not convex near x={x:.6}: second-difference violation {violation:.3e}")]
    NotConvex { x: f64, violation: f64 },

    #[error("not finite energy: {0}")]
    NotFiniteEnergy(String),

    #[error("quadrature did not stabilize: {0}")]
    QuadratureUnstable(String),

    #[error("invalid potential spec `{spec}`: {reason}")]
    InvalidSpec { spec: String, reason: String },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

use thiserror::Error;

/// Errors raised while building or analysing pcubed channels.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix is not Hermitian (max |M - M^H| = {deviation:e})")]
    NonHermitian { deviation: f64 },

    #[error("matrix contains NaN or infinite entries")]
    NonFinite,

    #[error("diagonal entry {index} is {value}, expected 1")]
    NotUnitDiagonal { index: usize, value: f64 },

    #[error("matrix is not positive semidefinite (min eigenvalue {min_eig:e})")]
    NotPsd { min_eig: f64 },

    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("entry ({row}, {col}) divides a nonzero value by zero")]
    InconsistentQuotient { row: usize, col: usize },

    #[error("ket {index} is not normalized (norm {norm})")]
    NotNormalized { index: usize, norm: f64 },

    #[error("ket family is empty")]
    EmptyFamily,

    #[error("Gram matrices violate A = B*C (max deviation {deviation:e})")]
    GramMismatch { deviation: f64 },

    #[error("input kets span {rank} of {dim} dimensions")]
    AlphaDeficient { rank: usize, dim: usize },

    #[error("A = B*C is singular (min eigenvalue {min_eig:e})")]
    ADegenerate { min_eig: f64 },

    #[error("embedding is not isometric (max |E^H E - I| = {defect:e})")]
    NotIsometricEmbedding { defect: f64 },

    #[error("channel is not degradable: {reason}")]
    NotDegradable { reason: String },

    #[error("output kets of the direct channel are linearly dependent (rank {rank} of {count})")]
    BetaDependent { rank: usize, count: usize },

    #[error("channel is not twisted diagonal: {reason}")]
    NotTwistedDiagonal { reason: String },

    #[error("invalid density operator: {reason}")]
    InvalidState { reason: String },

    #[error("parameter {name} = {value} is out of range")]
    OutOfRange { name: &'static str, value: f64 },

    #[error("{curve} is not defined at b = {b}")]
    OutOfDomain { curve: &'static str, b: f64 },

    #[error("{curve}: no root bracketed at b = {b}")]
    NoRoot { curve: &'static str, b: f64 },

    #[error("isometry is not pcubed: {reason}")]
    NotPcubed { reason: String },

    #[error("POVM is incomplete (max |sum - I| = {defect:e})")]
    IncompletePovm { defect: f64 },

    #[error("need at least {needed} POVM elements, got {found}")]
    DimensionTooSmall { needed: usize, found: usize },
}

pub type Result<T> = std::result::Result<T, Error>;

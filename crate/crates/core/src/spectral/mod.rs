//! Eigenstructure of B, the generalized exponential `e_{−γB}` and its bounds.

mod bounds;
pub mod conditions;
mod exponential;
mod gain;
mod linalg;

pub use bounds::{BoundConstants, NormBounds};
pub use conditions::{check_gain_sign, check_graininess_gain, ConditionCheck};
pub use exponential::{
    gronwall_envelope, scalar_exponential, scalar_exponential_with, TsExponential, REGRESSIVITY_TOL,
};
pub use gain::GammaSpec;
pub use linalg::{eigendecompose, EigenSystem, Matrix, SymmetricMatrix, MAX_SWEEPS};

use thiserror::Error;

use crate::timescale::TimeScaleError;

/// Default Jacobi tolerance, relative to `‖B‖_F`.
pub const EIGEN_TOL: f64 = 1e-14;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpectralError {
    #[error("matrix is empty")]
    Empty,
    #[error("row {row} has {len} entries, expected {n}")]
    NotSquare { row: usize, len: usize, n: usize },
    #[error("entry ({row}, {col}) is not finite")]
    NonFinite { row: usize, col: usize },
    #[error("entries ({row}, {col}) and ({col}, {row}) differ")]
    NotSymmetric { row: usize, col: usize },
    #[error("Jacobi iteration did not converge after {sweeps} sweeps (off-diagonal norm {off:e})")]
    NoConvergence { sweeps: usize, off: f64 },
    #[error("-gamma*B is not regressive at t={at}: factor {factor:e} for eigenvalue {index}")]
    NonRegressive { at: f64, index: usize, factor: f64 },
    #[error("condition {condition} violated: {witness}")]
    ConditionsViolated { condition: String, witness: String },
    #[error(transparent)]
    Window(#[from] TimeScaleError),
}

pub type Result<T> = std::result::Result<T, SpectralError>;

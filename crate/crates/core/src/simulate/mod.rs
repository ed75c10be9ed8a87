//! Numerical solution of the error system: exact Δ-steps at right-scattered
//! points, classical RK4 on dense runs.

mod dynamics;
mod run;
mod voc;

pub use dynamics::{DynamicsSpec, LeaderTrajectory, Profile};
pub use run::{Sample, SampleClass, Simulator, Trajectory};
pub use voc::{variation_of_constants, variation_of_constants_many};

use thiserror::Error;

use crate::spectral::SpectralError;
use crate::timescale::TimeScaleError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SimulateError {
    #[error("{0} is not right-scattered")]
    NotScattered(f64),
    #[error("[{from}, {to}] is not inside one dense run")]
    NotDense { from: f64, to: f64 },
    #[error("step size must be positive, got {0}")]
    Step(f64),
    #[error("window is unbounded; set a horizon")]
    UnboundedWindow,
    #[error("dynamics are singular at t=0 but the window starts at {0}")]
    SingularDynamics(f64),
    #[error("variation of constants needs affine dynamics, got {0}")]
    UnsupportedDynamics(String),
    #[error("query times must be ascending")]
    Unsorted,
    #[error(transparent)]
    TimeScale(#[from] TimeScaleError),
    #[error(transparent)]
    Spectral(#[from] SpectralError),
}

pub type Result<T> = std::result::Result<T, SimulateError>;

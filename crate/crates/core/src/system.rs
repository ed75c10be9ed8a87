//! The error system `eps^Δ = F(t, eps + x0·1) − F(t, x0·1) − γ(t)·B·eps`.

use thiserror::Error;

use crate::numeric::norm2;
use crate::simulate::{DynamicsSpec, LeaderTrajectory};
use crate::spectral::{eigendecompose, EigenSystem, GammaSpec, SpectralError, SymmetricMatrix, EIGEN_TOL};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SystemError {
    #[error("epsilon0 has {got} entries but B is {n}x{n}")]
    Dimension { n: usize, got: usize },
    #[error("Lipschitz constant must be finite and >= 0, got {0}")]
    Lipschitz(f64),
    #[error("mu_star must be finite and >= 0, got {0}")]
    MuStar(f64),
    #[error("initial error has a non-finite entry")]
    NonFinite,
    #[error(transparent)]
    Spectral(#[from] SpectralError),
}

#[derive(Debug, Clone)]
pub struct StabilitySystem {
    pub b: SymmetricMatrix,
    pub eig: EigenSystem,
    pub gamma: GammaSpec,
    pub dynamics: DynamicsSpec,
    pub leader: LeaderTrajectory,
    pub lip: f64,
    /// Analytic graininess bound overriding the window supremum.
    pub mu_star: Option<f64>,
    pub epsilon0: Vec<f64>,
}

impl StabilitySystem {
    pub fn new(
        b: SymmetricMatrix,
        gamma: GammaSpec,
        dynamics: DynamicsSpec,
        leader: LeaderTrajectory,
        lip: f64,
        mu_star: Option<f64>,
        epsilon0: Vec<f64>,
    ) -> Result<Self, SystemError> {
        if epsilon0.len() != b.n() {
            return Err(SystemError::Dimension {
                n: b.n(),
                got: epsilon0.len(),
            });
        }
        if epsilon0.iter().any(|x| !x.is_finite()) {
            return Err(SystemError::NonFinite);
        }
        if !(lip >= 0.0 && lip.is_finite()) {
            return Err(SystemError::Lipschitz(lip));
        }
        if let Some(m) = mu_star {
            if !(m >= 0.0 && m.is_finite()) {
                return Err(SystemError::MuStar(m));
            }
        }
        let eig = eigendecompose(&b, EIGEN_TOL)?;
        Ok(StabilitySystem {
            b,
            eig,
            gamma,
            dynamics,
            leader,
            lip,
            mu_star,
            epsilon0,
        })
    }

    pub fn n(&self) -> usize {
        self.epsilon0.len()
    }

    pub fn eps0_norm(&self) -> f64 {
        norm2(&self.epsilon0)
    }

    /// Right-hand side `F(t, eps + x0·1) − F(t, x0·1) − g·B·eps` for the gain value `g`.
    pub fn rhs(&self, t: f64, g: f64, eps: &[f64]) -> Vec<f64> {
        let mut out = self.dynamics.forcing(t, eps, self.leader.at(t));
        let be = self.b.as_matrix().mul_vec(eps);
        for (o, v) in out.iter_mut().zip(be) {
            *o -= g * v;
        }
        out
    }
}

//! Agent dynamics `F(t, x)` and leader trajectories.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Profile {
    /// `a / t^2`
    InverseSquare,
    /// `a / sqrt(t)`
    InverseSqrt,
}

impl Profile {
    fn weight(self, t: f64) -> f64 {
        match self {
            Profile::InverseSquare => 1.0 / (t * t),
            Profile::InverseSqrt => 1.0 / t.sqrt(),
        }
    }

    fn power(self) -> f64 {
        match self {
            Profile::InverseSquare => 2.0,
            Profile::InverseSqrt => 0.5,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum DynamicsSpec {
    Zero,
    /// `a · x`
    Linear { a: f64 },
    /// `a · x / t^2`
    LinearDecay { a: f64 },
    /// `a · x / t`
    ScaledLinear { a: f64 },
    /// `a · w(t) · (sin x_1, ..., sin x_n)` with `w` given by `profile`
    SineField { a: f64, profile: Profile },
}

impl DynamicsSpec {
    /// True when `F` blows up at `t = 0`.
    pub fn singular_at_zero(&self) -> bool {
        matches!(
            self,
            DynamicsSpec::LinearDecay { .. } | DynamicsSpec::ScaledLinear { .. } | DynamicsSpec::SineField { .. }
        )
    }

    pub fn eval(&self, t: f64, x: &[f64]) -> Vec<f64> {
        match self {
            DynamicsSpec::SineField { a, profile } => {
                let w = a * profile.weight(t);
                x.iter().map(|xi| w * xi.sin()).collect()
            }
            _ => {
                let c = self.affine_coefficient(t).unwrap_or(0.0);
                x.iter().map(|xi| c * xi).collect()
            }
        }
    }

    /// `F(t, eps + x0·1) − F(t, x0·1)`.
    pub fn forcing(&self, t: f64, eps: &[f64], leader: f64) -> Vec<f64> {
        match self {
            DynamicsSpec::SineField { a, profile } => {
                let w = a * profile.weight(t);
                let base = leader.sin();
                eps.iter().map(|e| w * ((e + leader).sin() - base)).collect()
            }
            _ => {
                let c = self.affine_coefficient(t).unwrap_or(0.0);
                eps.iter().map(|e| c * e).collect()
            }
        }
    }

    /// `c(t)` when `F(t, x) = c(t)·x`.
    pub fn affine_coefficient(&self, t: f64) -> Option<f64> {
        match self {
            DynamicsSpec::Zero => Some(0.0),
            DynamicsSpec::Linear { a } => Some(*a),
            DynamicsSpec::LinearDecay { a } => Some(a / (t * t)),
            DynamicsSpec::ScaledLinear { a } => Some(a / t),
            DynamicsSpec::SineField { .. } => None,
        }
    }

    /// `∫_s^t c(r) dr` for affine kinds.
    pub fn coefficient_integral(&self, s: f64, t: f64) -> Option<f64> {
        if s == t {
            return self.affine_coefficient(t).map(|_| 0.0);
        }
        match self {
            DynamicsSpec::Zero => Some(0.0),
            DynamicsSpec::Linear { a } => Some(a * (t - s)),
            DynamicsSpec::LinearDecay { a } => Some(a * (1.0 / s - 1.0 / t)),
            DynamicsSpec::ScaledLinear { a } => Some(a * (t / s).ln()),
            DynamicsSpec::SineField { .. } => None,
        }
    }

    /// Lipschitz constant valid for all `t >= min(t0, 1)`.
    pub fn analytic_lipschitz(&self, t0: f64) -> f64 {
        let floor = t0.min(1.0);
        match self {
            DynamicsSpec::Zero => 0.0,
            DynamicsSpec::Linear { a } => a.abs(),
            DynamicsSpec::LinearDecay { a } => a.abs() / floor.powi(2),
            DynamicsSpec::ScaledLinear { a } => a.abs() / floor,
            DynamicsSpec::SineField { a, profile } => a.abs() / floor.powf(profile.power()),
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum LeaderTrajectory {
    #[default]
    Zero,
    Constant { value: f64 },
}

impl LeaderTrajectory {
    pub fn at(&self, _t: f64) -> f64 {
        match self {
            LeaderTrajectory::Zero => 0.0,
            LeaderTrajectory::Constant { value } => *value,
        }
    }
}

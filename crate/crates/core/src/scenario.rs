//! JSON scenario files and the built-in examples.

use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::certify::Thresholds;
use crate::simulate::{DynamicsSpec, LeaderTrajectory};
use crate::spectral::{GammaSpec, SymmetricMatrix};
use crate::system::{StabilitySystem, SystemError};
use crate::timescale::{FamilyName, FamilySpec, TimeScale, TimeScaleError};

#[derive(Debug, Error)]
pub enum ScenarioError {
    #[error("{origin}: at `{path}` (line {line}, column {column}): {message}")]
    Parse {
        origin: String,
        path: String,
        line: usize,
        column: usize,
        message: String,
    },
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("unknown example `{0}` (known: {known})", known = BUILTIN_NAMES.join(", "))]
    UnknownExample(String),
    #[error("horizon {horizon} must exceed T0 = {t0}")]
    Horizon { horizon: f64, t0: f64 },
    #[error("time scale is unbounded; a horizon is required")]
    MissingHorizon,
    #[error(transparent)]
    TimeScale(#[from] TimeScaleError),
    #[error(transparent)]
    System(#[from] SystemError),
}

pub type Result<T> = std::result::Result<T, ScenarioError>;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum TimeScaleSpec {
    Explicit {
        intervals: Vec<[f64; 2]>,
        #[serde(default)]
        unbounded_tail: bool,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        horizon: Option<f64>,
    },
    Family {
        name: FamilyName,
        index_start: u32,
        index_max: u32,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        inner_index_max: Option<u32>,
    },
}

impl TimeScaleSpec {
    pub fn build(&self) -> std::result::Result<TimeScale, TimeScaleError> {
        match self {
            TimeScaleSpec::Explicit {
                intervals,
                unbounded_tail,
                ..
            } => {
                let pairs: Vec<(f64, f64)> = intervals.iter().map(|p| (p[0], p[1])).collect();
                TimeScale::from_pairs(&pairs, *unbounded_tail)
            }
            TimeScaleSpec::Family {
                name,
                index_start,
                index_max,
                inner_index_max,
            } => FamilySpec::new(*name, *index_start, *index_max, *inner_index_max).build(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    /// RK4 step cap on dense runs.
    pub h: f64,
    /// Uniform samples per dense run.
    pub dense_samples: usize,
    pub thresholds: Thresholds,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            h: 1e-3,
            dense_samples: 64,
            thresholds: Thresholds::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
    pub timescale: TimeScaleSpec,
    #[serde(rename = "B")]
    pub b: SymmetricMatrix,
    pub gamma: GammaSpec,
    #[serde(rename = "F")]
    pub dynamics: DynamicsSpec,
    #[serde(default)]
    pub leader: LeaderTrajectory,
    pub lip: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mu_star: Option<f64>,
    pub epsilon0: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub horizon: Option<f64>,
    #[serde(default)]
    pub config: RunConfig,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl Scenario {
    pub fn from_json(text: &str, origin: &str) -> Result<Self> {
        let de = &mut serde_json::Deserializer::from_str(text);
        serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            let inner = e.into_inner();
            ScenarioError::Parse {
                origin: origin.to_string(),
                path,
                line: inner.line(),
                column: inner.column(),
                message: inner.to_string(),
            }
        })
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| ScenarioError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Scenario::from_json(&text, &path.display().to_string())
    }

    pub fn builtin(name: &str) -> Result<Self> {
        let text = BUILTINS
            .iter()
            .find(|(n, _)| *n == name)
            .map(|(_, t)| *t)
            .ok_or_else(|| ScenarioError::UnknownExample(name.to_string()))?;
        Scenario::from_json(text, name)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("scenario serializes")
    }

    /// Effective horizon: the top-level value, else the explicit time scale's.
    pub fn horizon(&self) -> Option<f64> {
        self.horizon.or(match &self.timescale {
            TimeScaleSpec::Explicit { horizon, .. } => *horizon,
            TimeScaleSpec::Family { .. } => None,
        })
    }

    /// The time scale restricted to `[T0, horizon]`.
    pub fn window(&self) -> Result<TimeScale> {
        let ts = self.timescale.build()?;
        match self.horizon() {
            Some(h) if h <= ts.start() => Err(ScenarioError::Horizon {
                horizon: h,
                t0: ts.start(),
            }),
            Some(h) => Ok(ts.restrict(h)?),
            None if ts.end().is_finite() => Ok(ts),
            None => Err(ScenarioError::MissingHorizon),
        }
    }

    pub fn system(&self) -> Result<StabilitySystem> {
        Ok(StabilitySystem::new(
            self.b.clone(),
            self.gamma.clone(),
            self.dynamics,
            self.leader,
            self.lip,
            self.mu_star,
            self.epsilon0.clone(),
        )?)
    }
}

pub const BUILTIN_NAMES: [&str; 12] = [
    "inline1",
    "ex1",
    "ex2",
    "ex5",
    "ex6",
    "ex8",
    "ex9",
    "steady_gain",
    "wobbly_gain",
    "ex6_tuned",
    "ex9_tuned",
    "dense_damping",
];

const BUILTINS: [(&str, &str); 12] = [
    ("inline1", include_str!("../scenarios/inline1.json")),
    ("ex1", include_str!("../scenarios/ex1.json")),
    ("ex2", include_str!("../scenarios/ex2.json")),
    ("ex5", include_str!("../scenarios/ex5.json")),
    ("ex6", include_str!("../scenarios/ex6.json")),
    ("ex8", include_str!("../scenarios/ex8.json")),
    ("ex9", include_str!("../scenarios/ex9.json")),
    ("steady_gain", include_str!("../scenarios/steady_gain.json")),
    ("wobbly_gain", include_str!("../scenarios/wobbly_gain.json")),
    ("ex6_tuned", include_str!("../scenarios/ex6_tuned.json")),
    ("ex9_tuned", include_str!("../scenarios/ex9_tuned.json")),
    ("dense_damping", include_str!("../scenarios/dense_damping.json")),
];

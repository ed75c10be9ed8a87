//! Feedback gain γ(t).

use serde::{Deserialize, Serialize};

use crate::numeric::adaptive_simpson;

/// Quadrature tolerance for ∫|γ| when γ may change sign.
pub const ABS_INTEGRAL_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum GammaSpec {
    Constant { value: f64 },
    /// `Σ coeffs[k] · t^k`
    Polynomial { coeffs: Vec<f64> },
    /// `offset + amplitude · cos(frequency · t)`
    Harmonic { offset: f64, amplitude: f64, frequency: f64 },
    /// Separate gains on right-scattered and right-dense points.
    PerBranch {
        scattered: Box<GammaSpec>,
        dense: Box<GammaSpec>,
    },
    /// `scale/μ(t)` on right-scattered points, 0 on right-dense points.
    InverseGraininess {
        #[serde(default = "unit")]
        scale: f64,
    },
}

fn unit() -> f64 {
    1.0
}

impl GammaSpec {
    /// γ(t) at a point of graininess `mu`.
    pub fn at(&self, t: f64, mu: f64) -> f64 {
        if mu > 0.0 {
            self.scattered_value(t, mu)
        } else {
            self.dense_value(t)
        }
    }

    pub fn scattered_value(&self, t: f64, mu: f64) -> f64 {
        match self {
            GammaSpec::PerBranch { scattered, .. } => scattered.scattered_value(t, mu),
            GammaSpec::InverseGraininess { scale } => scale / mu,
            _ => self.dense_value(t),
        }
    }

    pub fn dense_value(&self, t: f64) -> f64 {
        match self {
            GammaSpec::Constant { value } => *value,
            GammaSpec::Polynomial { coeffs } => coeffs.iter().rev().fold(0.0, |acc, c| acc * t + c),
            GammaSpec::Harmonic {
                offset,
                amplitude,
                frequency,
            } => offset + amplitude * (frequency * t).cos(),
            GammaSpec::PerBranch { dense, .. } => dense.dense_value(t),
            GammaSpec::InverseGraininess { .. } => 0.0,
        }
    }

    fn antiderivative(&self, t: f64) -> f64 {
        match self {
            GammaSpec::Constant { value } => value * t,
            GammaSpec::Polynomial { coeffs } => coeffs
                .iter()
                .enumerate()
                .rev()
                .fold(0.0, |acc, (k, c)| acc * t + c / (k + 1) as f64)
                * t,
            GammaSpec::Harmonic {
                offset,
                amplitude,
                frequency,
            } => {
                if *frequency == 0.0 {
                    (offset + amplitude) * t
                } else {
                    offset * t + amplitude * (frequency * t).sin() / frequency
                }
            }
            GammaSpec::PerBranch { dense, .. } => dense.antiderivative(t),
            GammaSpec::InverseGraininess { .. } => 0.0,
        }
    }

    /// `∫_a^b γ(s) ds` over a dense stretch, in closed form.
    pub fn integral(&self, a: f64, b: f64) -> f64 {
        if a == b {
            return 0.0;
        }
        self.antiderivative(b) - self.antiderivative(a)
    }

    /// `∫_a^b |γ(s)| ds`; closed form when γ keeps one sign on `[a, b]`.
    pub fn abs_integral(&self, a: f64, b: f64) -> f64 {
        if a == b {
            return 0.0;
        }
        match self {
            GammaSpec::PerBranch { dense, .. } => dense.abs_integral(a, b),
            GammaSpec::Constant { .. } | GammaSpec::InverseGraininess { .. } => self.integral(a, b).abs(),
            GammaSpec::Harmonic {
                offset, amplitude, ..
            } if amplitude.abs() <= offset.abs() => self.integral(a, b).abs(),
            GammaSpec::Polynomial { coeffs }
                if a >= 0.0 && (coeffs.iter().all(|c| *c >= 0.0) || coeffs.iter().all(|c| *c <= 0.0)) =>
            {
                self.integral(a, b).abs()
            }
            _ => adaptive_simpson(|s| self.dense_value(s).abs(), a, b, ABS_INTEGRAL_TOL),
        }
    }

    /// The value when γ is the same constant on both point types.
    pub fn constant_value(&self) -> Option<f64> {
        match self {
            GammaSpec::Constant { value } => Some(*value),
            GammaSpec::Polynomial { coeffs } => match coeffs.as_slice() {
                [] => Some(0.0),
                [c, rest @ ..] if rest.iter().all(|x| *x == 0.0) => Some(*c),
                _ => None,
            },
            GammaSpec::Harmonic {
                offset, amplitude, ..
            } if *amplitude == 0.0 => Some(*offset),
            GammaSpec::PerBranch { scattered, dense } => {
                match (scattered.constant_value(), dense.constant_value()) {
                    (Some(s), Some(d)) if s == d => Some(s),
                    _ => None,
                }
            }
            _ => None,
        }
    }
}

//! Sign and graininess conditions on γ(t)·λ_i.

use serde::Serialize;

use crate::timescale::{Run, TimeScale};

use super::{EigenSystem, GammaSpec};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConditionCheck {
    pub name: String,
    pub pass: bool,
    pub witness: Option<String>,
}

impl ConditionCheck {
    pub fn pass(name: &str, witness: Option<String>) -> Self {
        ConditionCheck {
            name: name.into(),
            pass: true,
            witness,
        }
    }

    pub fn fail(name: &str, witness: String) -> Self {
        ConditionCheck {
            name: name.into(),
            pass: false,
            witness: Some(witness),
        }
    }
}

pub const GAIN_SIGN: &str = "gain_sign";
pub const GRAININESS_GAIN: &str = "graininess_gain";

/// `γ(t)·λ_i > 0` at every scattered point and on a `grid`-point sample of
/// every dense run of positive length. Zero-length dense runs carry no
/// measure and are not sampled.
pub fn check_gain_sign(ts: &TimeScale, eig: &EigenSystem, gamma: &GammaSpec, grid: usize) -> ConditionCheck {
    let bad = |t: f64, g: f64| {
        eig.lambdas
            .iter()
            .enumerate()
            .find(|(_, l)| !(g * **l > 0.0) || !(g * **l).is_finite())
            .map(|(i, l)| format!("t={t}: gamma={g}, lambda_{}={l}, product={}", i + 1, g * l))
    };
    let grid = grid.max(2);
    for run in ts.runs() {
        match run {
            Run::Scattered { points, .. } => {
                for (t, mu) in points {
                    if let Some(w) = bad(t, gamma.scattered_value(t, mu)) {
                        return ConditionCheck::fail(GAIN_SIGN, w);
                    }
                }
            }
            Run::Dense { start, end } => {
                let end = if end.is_finite() { end } else { ts.end().min(start + 1.0) };
                if end <= start {
                    continue;
                }
                for k in 0..grid {
                    let t = start + (end - start) * k as f64 / (grid - 1) as f64;
                    if let Some(w) = bad(t, gamma.dense_value(t)) {
                        return ConditionCheck::fail(GAIN_SIGN, w);
                    }
                }
            }
        }
    }
    ConditionCheck::pass(GAIN_SIGN, None)
}

/// `0 < μ(t)γ(t)λ_i < 1` at every right-scattered point for every i.
/// Returns the windowed `δ = min μγλ_i` (None without scattered points).
pub fn check_graininess_gain(ts: &TimeScale, eig: &EigenSystem, gamma: &GammaSpec) -> (ConditionCheck, Option<f64>) {
    let points = ts.scattered_points();
    if points.is_empty() {
        return (
            ConditionCheck::pass(GRAININESS_GAIN, Some("no right-scattered points in window".into())),
            None,
        );
    }
    let mut delta = f64::INFINITY;
    let mut first_bad = None;
    for (t, mu) in points {
        let g = gamma.scattered_value(t, mu);
        for (i, l) in eig.lambdas.iter().enumerate() {
            let x = mu * g * l;
            delta = delta.min(x);
            if first_bad.is_none() && !(x > 0.0 && x < 1.0) {
                first_bad = Some(format!(
                    "t={t}: mu={mu}, gamma={g}, lambda_{}={l}, product={x}",
                    i + 1
                ));
            }
        }
    }
    let check = match first_bad {
        Some(w) => ConditionCheck::fail(GRAININESS_GAIN, w),
        None => ConditionCheck::pass(GRAININESS_GAIN, Some(format!("delta={delta}"))),
    };
    (check, Some(delta))
}

//! Contraction constants and per-segment norm bounds for `e_{−γB}`.

use serde::Serialize;

use crate::timescale::{Piece, Run, TimeScale};

use super::conditions::{check_gain_sign, check_graininess_gain};
use super::{EigenSystem, GammaSpec, Result, SpectralError};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundConstants {
    /// Windowed `min μγλ_i` over right-scattered points.
    pub delta: Option<f64>,
    /// `1 − δ`
    pub m_star: Option<f64>,
    /// `exp(−min |λ_i|)`
    pub m_star_star: f64,
    pub m: f64,
    pub mu_star: f64,
    pub lip: f64,
}

impl BoundConstants {
    pub fn from_parts(delta: Option<f64>, min_abs_lambda: f64, mu_star: f64, lip: f64) -> Self {
        let m_star = delta.map(|d| 1.0 - d);
        let m_star_star = (-min_abs_lambda).exp();
        let m = m_star.map_or(m_star_star, |s| s.max(m_star_star));
        BoundConstants {
            delta,
            m_star,
            m_star_star,
            m,
            mu_star,
            lip,
        }
    }

    /// Constants on the window `ts`. `mu_star` overrides the window supremum
    /// of μ over right-scattered points.
    pub fn compute(ts: &TimeScale, eig: &EigenSystem, gamma: &GammaSpec, lip: f64, mu_star: Option<f64>) -> Self {
        let (_, delta) = check_graininess_gain(ts, eig, gamma);
        let window_mu = ts.scattered_points().iter().map(|p| p.1).fold(0.0, f64::max);
        BoundConstants::from_parts(delta, eig.min_abs(), mu_star.unwrap_or(window_mu), lip)
    }

    /// Per-point factor `M + μ*·L` of the envelope.
    pub fn scattered_factor(&self) -> f64 {
        self.m + self.mu_star * self.lip
    }

    /// Per-unit dense rate `L/M + |γ|·ln M` for a constant gain.
    pub fn constant_gain_rate(&self, gamma: f64) -> f64 {
        self.lip / self.m + gamma.abs() * self.m.ln()
    }
}

/// Norm bounds valid once the sign and graininess conditions hold.
#[derive(Debug, Clone)]
pub struct NormBounds<'a> {
    ts: &'a TimeScale,
    gamma: &'a GammaSpec,
    runs: Vec<Run>,
    pub constants: BoundConstants,
}

impl<'a> NormBounds<'a> {
    pub fn new(
        ts: &'a TimeScale,
        eig: &EigenSystem,
        gamma: &'a GammaSpec,
        constants: BoundConstants,
        grid: usize,
    ) -> Result<Self> {
        let sign = check_gain_sign(ts, eig, gamma, grid);
        if !sign.pass {
            return Err(SpectralError::ConditionsViolated {
                condition: sign.name,
                witness: sign.witness.unwrap_or_default(),
            });
        }
        let (gg, _) = check_graininess_gain(ts, eig, gamma);
        if !gg.pass {
            return Err(SpectralError::ConditionsViolated {
                condition: gg.name,
                witness: gg.witness.unwrap_or_default(),
            });
        }
        Ok(NormBounds {
            ts,
            gamma,
            runs: ts.runs(),
            constants,
        })
    }

    /// Bound on `‖e_{−γB}(t, s)‖` where `s` is the start of the run holding
    /// `t`: `M^k` after k scattered points, `M^{∫|γ|}` on a dense run.
    /// Returns `(s, bound)`.
    pub fn segment_bound(&self, t: f64) -> Result<(f64, f64)> {
        let t = self.ts.snap(t)?;
        let m = self.constants.m;
        let k = self.ts.run_index_of(&self.runs, t)?;
        Ok(match &self.runs[k] {
            Run::Scattered { start, points, .. } => {
                let passed = points.iter().filter(|p| p.0 < t).count();
                (*start, m.powi(passed as i32))
            }
            Run::Dense { start, .. } => (*start, m.powf(self.gamma.abs_integral(*start, t))),
        })
    }

    /// Bound on `‖e_{−γB}(t, t0)‖`: `M` raised to the dense `∫|γ|` plus the
    /// number of right-scattered points in `[t0, t)`.
    pub fn cumulative_bound(&self, t0: f64, t: f64) -> Result<f64> {
        let mut exponent = 0.0;
        for piece in self.ts.pieces(t0, t)? {
            match piece {
                Piece::Flow { from, to } => exponent += self.gamma.abs_integral(from, to),
                Piece::Jump { .. } => exponent += 1.0,
                Piece::Gap { .. } => {}
            }
        }
        Ok(self.constants.m.powf(exponent))
    }
}

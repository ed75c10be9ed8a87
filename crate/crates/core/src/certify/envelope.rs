//! The decay envelope `e_d(t, T0)` and the partial sums `sum(i)`.
//!
//! With `a = L/M` and `b = ln M`,
//! `ln e_d(t, T0) = a·(dense length of [T0, t)) + b·∫|γ| over that dense part
//!                  + (number of right-scattered points in [T0, t))·ln(M + μ*·L)`.

use crate::spectral::{BoundConstants, GammaSpec, Result};
use crate::timescale::{Piece, Run, TimeScale};

#[derive(Debug, Clone, Copy)]
pub struct Envelope<'a> {
    gamma: &'a GammaSpec,
    l_over_m: f64,
    ln_m: f64,
    log_factor: f64,
}

impl<'a> Envelope<'a> {
    pub fn new(gamma: &'a GammaSpec, bc: &BoundConstants) -> Self {
        Envelope {
            gamma,
            l_over_m: bc.lip / bc.m,
            ln_m: bc.m.ln(),
            log_factor: bc.scattered_factor().ln(),
        }
    }

    /// Contribution of the dense stretch `[from, to]` to `ln e_d`.
    pub fn log_flow(&self, from: f64, to: f64) -> f64 {
        self.l_over_m * (to - from) + self.ln_m * self.gamma.abs_integral(from, to)
    }

    /// Contribution of one right-scattered point to `ln e_d`.
    pub fn log_jump(&self) -> f64 {
        self.log_factor
    }

    pub fn log_at(&self, ts: &TimeScale, t0: f64, t: f64) -> Result<f64> {
        let mut acc = 0.0;
        for piece in ts.pieces(t0, t)? {
            match piece {
                Piece::Flow { from, to } => acc += self.log_flow(from, to),
                Piece::Jump { .. } => acc += self.log_jump(),
                Piece::Gap { .. } => {}
            }
        }
        Ok(acc)
    }

    pub fn at(&self, ts: &TimeScale, t0: f64, t: f64) -> Result<f64> {
        Ok(self.log_at(ts, t0, t)?.exp())
    }
}

/// A dense run clipped to the window.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DenseRun {
    pub start: f64,
    pub end: f64,
    pub abs_gain: f64,
}

impl DenseRun {
    pub fn len(&self) -> f64 {
        self.end - self.start
    }
}

pub fn dense_runs(ts: &TimeScale, gamma: &GammaSpec) -> Vec<DenseRun> {
    ts.runs()
        .into_iter()
        .filter_map(|r| match r {
            Run::Dense { start, end } => {
                let end = if end.is_finite() { end } else { ts.end() };
                Some(DenseRun {
                    start,
                    end,
                    abs_gain: gamma.abs_integral(start, end),
                })
            }
            Run::Scattered { .. } => None,
        })
        .collect()
}

/// `(i, sum(i))` for `i = 0..=number of dense runs`, where
/// `sum(i) = Σ_{j<=i} (L/M·len_j + ln M·∫_j |γ|)`.
pub fn sum_samples(runs: &[DenseRun], bc: &BoundConstants) -> Vec<(usize, f64)> {
    let (a, b) = (bc.lip / bc.m, bc.m.ln());
    let mut acc = 0.0;
    let mut out = vec![(0, 0.0)];
    for (j, r) in runs.iter().enumerate() {
        acc += a * r.len() + b * r.abs_gain;
        out.push((j + 1, acc));
    }
    out
}

//! Stepping the error system across a time scale.

use std::fmt::Write as _;

use crate::certify::Envelope;
use crate::numeric::norm2;
use crate::spectral::BoundConstants;
use crate::system::StabilitySystem;
use crate::timescale::{Boundary, Piece, TimeScale};

use super::{Result, SimulateError};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SampleClass {
    Scattered,
    Dense,
    Boundary,
}

impl SampleClass {
    pub fn code(self) -> char {
        match self {
            SampleClass::Scattered => 'S',
            SampleClass::Dense => 'D',
            SampleClass::Boundary => 'B',
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Sample {
    pub t: f64,
    pub class: SampleClass,
    pub eps: Vec<f64>,
    pub eps_norm: f64,
    pub envelope: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub samples: Vec<Sample>,
    pub eps0_norm: f64,
}

impl Trajectory {
    pub fn final_norm(&self) -> f64 {
        self.samples.last().map_or(0.0, |s| s.eps_norm)
    }

    /// `max ‖eps(t)‖ / (‖eps0‖ · e_d(t, T0))`; zero for a zero initial error.
    pub fn empirical_c(&self) -> f64 {
        if self.eps0_norm == 0.0 {
            return 0.0;
        }
        self.samples
            .iter()
            .map(|s| s.eps_norm / (self.eps0_norm * s.envelope))
            .fold(0.0, f64::max)
    }

    pub fn to_csv(&self) -> String {
        let n = self.samples.first().map_or(0, |s| s.eps.len());
        let mut out = String::from("t,class,eps_norm,envelope");
        for i in 1..=n {
            let _ = write!(out, ",eps_{i}");
        }
        out.push('\n');
        for s in &self.samples {
            let _ = write!(out, "{:.16e},{},{:.16e},{:.16e}", s.t, s.class.code(), s.eps_norm, s.envelope);
            for e in &s.eps {
                let _ = write!(out, ",{e:.16e}");
            }
            out.push('\n');
        }
        out
    }
}

pub struct Simulator<'a> {
    pub sys: &'a StabilitySystem,
    pub ts: &'a TimeScale,
    pub constants: BoundConstants,
    pub dense_samples: usize,
}

impl<'a> Simulator<'a> {
    pub fn new(sys: &'a StabilitySystem, ts: &'a TimeScale, dense_samples: usize) -> Result<Self> {
        if !ts.end().is_finite() {
            return Err(SimulateError::UnboundedWindow);
        }
        if sys.dynamics.singular_at_zero() && ts.start() <= 0.0 {
            return Err(SimulateError::SingularDynamics(ts.start()));
        }
        let constants = BoundConstants::compute(ts, &sys.eig, &sys.gamma, sys.lip, sys.mu_star);
        Ok(Simulator {
            sys,
            ts,
            constants,
            dense_samples: dense_samples.max(1),
        })
    }

    /// `eps(σ(t)) = eps(t) + μ(t)·[F(t, x) − F(t, x0·1) − γ(t)·B·eps(t)]`.
    pub fn delta_step(&self, t: f64, eps: &[f64]) -> Result<Vec<f64>> {
        let mu = self.ts.mu(t)?;
        if mu <= 0.0 {
            return Err(SimulateError::NotScattered(t));
        }
        let g = self.sys.gamma.scattered_value(t, mu);
        let rhs = self.sys.rhs(t, g, eps);
        Ok(eps.iter().zip(rhs).map(|(e, r)| e + mu * r).collect())
    }

    /// Classical RK4 across `[t_start, t_end]` inside one dense run, with
    /// `max(ceil(len/h), 8)` equal steps.
    pub fn dense_integrate(&self, t_start: f64, t_end: f64, eps: &[f64], h: f64) -> Result<Vec<f64>> {
        if !(h > 0.0) {
            return Err(SimulateError::Step(h));
        }
        let pieces = self.ts.pieces(t_start, t_end)?;
        match pieces.as_slice() {
            [] => Ok(eps.to_vec()),
            [Piece::Flow { from, to }] => {
                let n = ((to - from) / h).ceil().max(8.0) as usize;
                Ok(self.rk4(*from, *to, n, eps))
            }
            _ => Err(SimulateError::NotDense { from: t_start, to: t_end }),
        }
    }

    fn field(&self, t: f64, eps: &[f64]) -> Vec<f64> {
        self.sys.rhs(t, self.sys.gamma.dense_value(t), eps)
    }

    fn rk4(&self, from: f64, to: f64, steps: usize, eps: &[f64]) -> Vec<f64> {
        let dt = (to - from) / steps as f64;
        let mut y = eps.to_vec();
        let axpy = |y: &[f64], k: &[f64], a: f64| -> Vec<f64> { y.iter().zip(k).map(|(y, k)| y + a * k).collect() };
        for s in 0..steps {
            let t = from + dt * s as f64;
            let k1 = self.field(t, &y);
            let k2 = self.field(t + 0.5 * dt, &axpy(&y, &k1, 0.5 * dt));
            let k3 = self.field(t + 0.5 * dt, &axpy(&y, &k2, 0.5 * dt));
            let k4 = self.field(t + dt, &axpy(&y, &k3, dt));
            for i in 0..y.len() {
                y[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
            }
        }
        y
    }

    /// Steps from `T0` to the end of the window, sampling every scattered
    /// point, every run start, `dense_samples` points per dense run and the
    /// final point.
    pub fn run(&self, h: f64) -> Result<Trajectory> {
        if !(h > 0.0) {
            return Err(SimulateError::Step(h));
        }
        let ts = self.ts;
        let env = Envelope::new(&self.sys.gamma, &self.constants);
        let boundaries: Vec<f64> = ts
            .decompose()
            .boundaries
            .iter()
            .filter_map(|b| match b {
                Boundary::Finite(x) => Some(*x),
                _ => None,
            })
            .collect();
        let classify = |t: f64, scattered: bool| {
            if boundaries.contains(&t) {
                SampleClass::Boundary
            } else if scattered {
                SampleClass::Scattered
            } else {
                SampleClass::Dense
            }
        };
        let mut samples: Vec<Sample> = Vec::new();
        let mut push = |t: f64, class: SampleClass, eps: &[f64], log_env: f64| {
            if samples.last().is_some_and(|s| s.t >= t) {
                return;
            }
            samples.push(Sample {
                t,
                class,
                eps: eps.to_vec(),
                eps_norm: norm2(eps),
                envelope: log_env.exp(),
            });
        };

        let mut eps = self.sys.epsilon0.clone();
        let mut log_env = 0.0;
        for piece in ts.pieces(ts.start(), ts.end())? {
            match piece {
                Piece::Flow { from, to } => {
                    let m = self.dense_samples;
                    let total = ((to - from) / h).ceil().max(8.0) as usize;
                    let per = total.div_ceil(m);
                    let dt_sample = (to - from) / m as f64;
                    for k in 0..m {
                        let a = from + dt_sample * k as f64;
                        let b = if k + 1 == m { to } else { from + dt_sample * (k + 1) as f64 };
                        push(a, classify(a, false), &eps, log_env);
                        eps = self.rk4(a, b, per, &eps);
                        log_env += env.log_flow(a, b);
                    }
                }
                Piece::Jump { at, .. } => {
                    push(at, classify(at, true), &eps, log_env);
                    eps = self.delta_step(at, &eps)?;
                    log_env += env.log_jump();
                }
                Piece::Gap { from, .. } => push(from, classify(from, false), &eps, log_env),
            }
        }
        let end = ts.end();
        let end_scattered = ts.mu(end)? > 0.0;
        push(end, classify(end, end_scattered), &eps, log_env);
        Ok(Trajectory {
            samples,
            eps0_norm: self.sys.eps0_norm(),
        })
    }
}

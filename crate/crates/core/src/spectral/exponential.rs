//! Generalized exponentials on a time scale.

use crate::timescale::{Piece, TimeScale};

use super::{EigenSystem, GammaSpec, Matrix, Result, SpectralError};

/// Factors `|1 − μγλ|` below this count as non-regressive.
pub const REGRESSIVITY_TOL: f64 = 1e-14;

/// `e_{−γB}(t, t0)`, evaluated in the eigenbasis of B.
#[derive(Debug, Clone, Copy)]
pub struct TsExponential<'a> {
    pub ts: &'a TimeScale,
    pub eig: &'a EigenSystem,
    pub gamma: &'a GammaSpec,
}

impl<'a> TsExponential<'a> {
    pub fn new(ts: &'a TimeScale, eig: &'a EigenSystem, gamma: &'a GammaSpec) -> Self {
        TsExponential { ts, eig, gamma }
    }

    /// Eigenvalues `d_i` of `e_{−γB}(t, t0)`.
    pub fn diagonal(&self, t0: f64, t: f64) -> Result<Vec<f64>> {
        let lambdas = &self.eig.lambdas;
        let mut d = vec![1.0; lambdas.len()];
        for piece in self.ts.pieces(t0, t)? {
            match piece {
                Piece::Flow { from, to } => {
                    let ig = self.gamma.integral(from, to);
                    for (di, l) in d.iter_mut().zip(lambdas) {
                        *di *= (-l * ig).exp();
                    }
                }
                Piece::Jump { at, mu } => {
                    let g = self.gamma.scattered_value(at, mu);
                    for (i, (di, l)) in d.iter_mut().zip(lambdas).enumerate() {
                        let f = 1.0 - mu * g * l;
                        if f.abs() < REGRESSIVITY_TOL {
                            return Err(SpectralError::NonRegressive { at, index: i, factor: f });
                        }
                        *di *= f;
                    }
                }
                Piece::Gap { .. } => {}
            }
        }
        Ok(d)
    }

    pub fn matrix(&self, t0: f64, t: f64) -> Result<Matrix> {
        Ok(self.eig.compose(&self.diagonal(t0, t)?))
    }

    pub fn spectral_norm(&self, t0: f64, t: f64) -> Result<f64> {
        Ok(self.diagonal(t0, t)?.iter().fold(0.0, |m, d| m.max(d.abs())))
    }
}

/// Scalar exponential `e_p(t, t0)` for a constant `p`:
/// `exp(p · dense length) · ∏ (1 + μ(s) p)` over right-scattered `s ∈ [t0, t)`.
pub fn scalar_exponential(ts: &TimeScale, p: f64, t0: f64, t: f64) -> Result<f64> {
    scalar_exponential_with(ts, t0, t, |_, _| p, |a, b| p * (b - a))
}

/// Scalar exponential of a variable coefficient: `jump(s, μ)` gives `p(s)` at
/// right-scattered points and `flow(a, b)` gives `∫_a^b p`.
pub fn scalar_exponential_with<J, F>(ts: &TimeScale, t0: f64, t: f64, jump: J, flow: F) -> Result<f64>
where
    J: Fn(f64, f64) -> f64,
    F: Fn(f64, f64) -> f64,
{
    let mut log_dense = 0.0;
    let mut prod = 1.0;
    for piece in ts.pieces(t0, t)? {
        match piece {
            Piece::Flow { from, to } => log_dense += flow(from, to),
            Piece::Jump { at, mu } => prod *= 1.0 + mu * jump(at, mu),
            Piece::Gap { .. } => {}
        }
    }
    Ok(log_dense.exp() * prod)
}

/// Right-hand side of the discrete Grönwall inequality:
/// `a · ∏_{k<j} (1 + μ_k p)` for `j = 0..=mus.len()`.
pub fn gronwall_envelope(a: f64, p: f64, mus: &[f64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(mus.len() + 1);
    let mut acc = a;
    out.push(acc);
    for mu in mus {
        acc *= 1.0 + mu * p;
        out.push(acc);
    }
    out
}

//! Variation-of-constants evaluation for affine `F(t, x) = c(t)·x`.
//!
//! In eigen-coordinates every mode obeys `z^Δ = (c − γλ) z`, and
//! `z(t) = e(t)·[z0 + ∫_{T0}^{t} c(τ) z(τ) / e(σ(τ)) Δτ]` with `e = e_{−γλ}(·, T0)`.
//! The Δ-integral is a μ-weighted sum at right-scattered points plus adaptive
//! Simpson on dense stretches, with `z` taken from its exact product form.

use crate::numeric::adaptive_simpson;
use crate::spectral::TsExponential;
use crate::system::StabilitySystem;
use crate::timescale::{Piece, TimeScale, MEMBERSHIP_TOL};

use super::{Result, SimulateError};

const QUAD_TOL: f64 = 1e-9;

/// `eps(t)` at each of `times` (ascending, all in the window).
pub fn variation_of_constants_many(sys: &StabilitySystem, ts: &TimeScale, times: &[f64]) -> Result<Vec<Vec<f64>>> {
    let f = &sys.dynamics;
    if f.affine_coefficient(ts.start()).is_none() {
        return Err(SimulateError::UnsupportedDynamics(format!("{f:?}")));
    }
    if f.singular_at_zero() && ts.start() <= 0.0 {
        return Err(SimulateError::SingularDynamics(ts.start()));
    }
    if times.windows(2).any(|w| w[1] < w[0]) {
        return Err(SimulateError::Unsorted);
    }
    let t0 = ts.start();
    let n = sys.n();
    let z0 = sys.eig.to_modes(&sys.epsilon0);
    let c = |t: f64| f.affine_coefficient(t).unwrap();
    let c_int = |a: f64, b: f64| f.coefficient_integral(a, b).unwrap();
    let gamma = &sys.gamma;

    // per mode: running integral I and ratio R = z / e
    let mut integral = vec![0.0; n];
    let mut ratio = z0.clone();
    let mut values: Vec<Vec<f64>> = Vec::with_capacity(times.len());
    let mut q = 0;
    let end = times.last().copied().unwrap_or(t0);

    let exp = TsExponential::new(ts, &sys.eig, gamma);
    let emit = |t: f64, integral: &[f64], values: &mut Vec<Vec<f64>>| -> Result<()> {
        let e = exp.diagonal(t0, t)?;
        let z: Vec<f64> = (0..n).map(|i| e[i] * (z0[i] + integral[i])).collect();
        values.push(sys.eig.from_modes(&z));
        Ok(())
    };

    for piece in ts.pieces(t0, ts.snap(end)?)? {
        match piece {
            Piece::Flow { from, to } => {
                let mut cursor = from;
                let mut advance = |upto: f64, integral: &mut [f64]| {
                    for i in 0..n {
                        let r0 = ratio[i];
                        integral[i] += adaptive_simpson(|s| c(s) * r0 * c_int(from, s).exp(), cursor, upto, QUAD_TOL);
                    }
                    cursor = upto;
                };
                while q < times.len() && times[q] <= to + MEMBERSHIP_TOL {
                    let tq = times[q].min(to);
                    advance(tq, &mut integral);
                    emit(tq, &integral, &mut values)?;
                    q += 1;
                }
                advance(to, &mut integral);
                let growth = c_int(from, to).exp();
                for r in ratio.iter_mut() {
                    *r *= growth;
                }
            }
            Piece::Jump { at, mu } => {
                while q < times.len() && times[q] <= at + MEMBERSHIP_TOL {
                    emit(times[q], &integral, &mut values)?;
                    q += 1;
                }
                let g = gamma.scattered_value(at, mu);
                let cs = c(at);
                for (i, l) in sys.eig.lambdas.iter().enumerate() {
                    let damp = 1.0 - mu * g * l;
                    integral[i] += mu * cs * ratio[i] / damp;
                    ratio[i] *= (1.0 + mu * (cs - g * l)) / damp;
                }
            }
            Piece::Gap { from, .. } => {
                while q < times.len() && times[q] <= from + MEMBERSHIP_TOL {
                    emit(times[q], &integral, &mut values)?;
                    q += 1;
                }
            }
        }
    }
    while q < times.len() {
        emit(times[q], &integral, &mut values)?;
        q += 1;
    }
    Ok(values)
}

pub fn variation_of_constants(sys: &StabilitySystem, ts: &TimeScale, t: f64) -> Result<Vec<f64>> {
    Ok(variation_of_constants_many(sys, ts, &[t])?.remove(0))
}

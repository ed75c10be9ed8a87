//! Leader-following multi-agent dynamics on time scales.
//!
//! The crate simulates the error dynamics
//! `eps^Δ = F(t, x) - F(t, x0·1) - γ(t)·B·eps` on truncated time scales,
//! evaluates the generalized matrix exponential `e_{-γB}` and its norm bounds,
//! and checks sufficient conditions for exponential stability.

// `!(x < y)` is used on purpose so that NaN fails a check
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod numeric;
pub mod timescale;
pub mod spectral;
pub mod certify;
pub mod simulate;
pub mod system;
pub mod scenario;
pub mod cli;

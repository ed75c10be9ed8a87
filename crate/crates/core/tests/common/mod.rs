#![allow(dead_code)]

use proptest::prelude::*;
use tsconsensus::spectral::{eigendecompose, EigenSystem, SymmetricMatrix, EIGEN_TOL};
use tsconsensus::timescale::TimeScale;

/// Alternating dense blocks and gaps; a zero-length block is an isolated point.
pub fn interval_pairs(max_blocks: usize) -> impl Strategy<Value = Vec<(f64, f64)>> {
    (
        0.0..5.0f64,
        prop::collection::vec((prop_oneof![Just(0.0), 0.0..2.0f64], 0.05..1.0f64), 1..max_blocks),
    )
        .prop_map(|(t0, blocks)| {
            let mut t = t0;
            let mut out = Vec::with_capacity(blocks.len());
            for (len, gap) in blocks {
                out.push((t, t + len));
                t += len + gap;
            }
            out
        })
}

pub fn time_scale() -> impl Strategy<Value = TimeScale> {
    (interval_pairs(12), any::<bool>()).prop_map(|(p, tail)| TimeScale::from_pairs(&p, tail).unwrap())
}

/// Bounded window of a random scale.
pub fn finite_time_scale() -> impl Strategy<Value = TimeScale> {
    interval_pairs(12).prop_map(|p| TimeScale::from_pairs(&p, false).unwrap())
}

/// Purely discrete scale with the given graininess sequence.
pub fn scattered_grid(mus: &[f64]) -> TimeScale {
    let mut t = 0.0;
    let mut pts = vec![(t, t)];
    for mu in mus {
        t += mu;
        pts.push((t, t));
    }
    TimeScale::from_pairs(&pts, false).unwrap()
}

/// Points of `ts` chosen by fractions of its stored extent, snapped onto it.
pub fn points_of(ts: &TimeScale, fracs: &[f64]) -> Vec<f64> {
    let lo = ts.start();
    let hi = if ts.end().is_finite() { ts.end() } else { lo + 20.0 };
    let mut pts: Vec<f64> = fracs
        .iter()
        .map(|f| {
            let t = lo + f * (hi - lo);
            nearest(ts, t)
        })
        .collect();
    pts.sort_by(f64::total_cmp);
    pts
}

fn nearest(ts: &TimeScale, t: f64) -> f64 {
    let mut best = ts.start();
    for iv in ts.intervals() {
        let end = if iv.end.is_finite() { iv.end } else { t.max(iv.start) };
        let c = t.clamp(iv.start, end);
        if (c - t).abs() < (best - t).abs() {
            best = c;
        }
    }
    best
}

/// Symmetric positive-definite `AᵀA + I/10` of size 1..=4.
pub fn spd_matrix() -> impl Strategy<Value = SymmetricMatrix> {
    (1usize..=4)
        .prop_flat_map(|n| prop::collection::vec(-1.5..1.5f64, n * n).prop_map(move |a| (n, a)))
        .prop_map(|(n, a)| {
            let rows: Vec<Vec<f64>> = (0..n)
                .map(|i| {
                    (0..n)
                        .map(|j| {
                            let s: f64 = (0..n).map(|k| a[k * n + i] * a[k * n + j]).sum();
                            s + if i == j { 0.1 } else { 0.0 }
                        })
                        .collect()
                })
                .collect();
            let sym: Vec<Vec<f64>> = (0..n)
                .map(|i| (0..n).map(|j| if i <= j { rows[i][j] } else { rows[j][i] }).collect())
                .collect();
            SymmetricMatrix::new(&sym).unwrap()
        })
}

pub fn eig(b: &SymmetricMatrix) -> EigenSystem {
    eigendecompose(b, EIGEN_TOL).unwrap()
}

/// The weight matrix used by the built-in examples.
pub fn weights() -> SymmetricMatrix {
    SymmetricMatrix::new(&[
        vec![2.0, 0.0, -1.0, -1.0],
        vec![0.0, 3.0, 0.0, 0.0],
        vec![-1.0, 0.0, 3.0, -1.0],
        vec![-1.0, 0.0, -1.0, 3.0],
    ])
    .unwrap()
}

pub fn max_mu(ts: &TimeScale) -> f64 {
    ts.scattered_points().iter().map(|p| p.1).fold(0.0, f64::max)
}

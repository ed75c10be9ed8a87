mod common;

use common::*;
use proptest::prelude::*;
use tsconsensus::simulate::{DynamicsSpec, LeaderTrajectory, Simulator};
use tsconsensus::spectral::{
    gronwall_envelope, scalar_exponential, BoundConstants, GammaSpec, NormBounds, SymmetricMatrix, TsExponential,
};
use tsconsensus::system::StabilitySystem;
use tsconsensus::timescale::{Boundary, FamilyName, FamilySpec, PointClass, Run, TimeScale};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn jump_operator_invariants(ts in time_scale(), fracs in prop::collection::vec(0.0..1.0f64, 1..12)) {
        for t in points_of(&ts, &fracs) {
            let s = ts.sigma(t).unwrap();
            let mu = ts.mu(t).unwrap();
            prop_assert!(s >= t);
            prop_assert_eq!(mu, s - t);
            prop_assert!(ts.contains(s));
            match ts.classify(t).unwrap() {
                PointClass::RightScattered => {
                    prop_assert!(mu > 0.0);
                    // nothing of the scale lies strictly between t and σ(t)
                    prop_assert!(!ts.contains(t + 0.5 * mu));
                }
                PointClass::RightDense => prop_assert_eq!(mu, 0.0),
            }
        }
    }

    #[test]
    fn runs_alternate_and_cover(ts in finite_time_scale()) {
        let runs = ts.runs();
        for w in runs.windows(2) {
            let both_dense = matches!((&w[0], &w[1]), (Run::Dense { .. }, Run::Dense { .. }));
            let both_scattered = matches!((&w[0], &w[1]), (Run::Scattered { .. }, Run::Scattered { .. }));
            prop_assert!(!both_dense && !both_scattered);
            prop_assert!(w[0].start() < w[1].start());
        }
        let from_runs: Vec<f64> = runs
            .iter()
            .flat_map(|r| match r {
                Run::Scattered { points, .. } => points.iter().map(|p| p.0).collect(),
                Run::Dense { .. } => vec![],
            })
            .collect();
        let all: Vec<f64> = ts.scattered_points().iter().filter(|p| p.1 > 0.0).map(|p| p.0).collect();
        prop_assert_eq!(from_runs, all);
    }

    #[test]
    fn decomposition_is_monotone_and_reconstructs(ts in time_scale()) {
        let d = ts.decompose();
        prop_assert_eq!(d.boundaries[0], Boundary::Finite(ts.start()));
        let finite: Vec<f64> = d.boundaries.iter().filter_map(|b| match b {
            Boundary::Finite(x) => Some(*x),
            _ => None,
        }).collect();
        prop_assert!(finite.windows(2).all(|w| w[0] <= w[1]));
        prop_assert!(!d.boundaries.last().unwrap().is_finite());
        // odd boundaries are right-dense when finite
        for (j, b) in d.boundaries.iter().enumerate() {
            if let (1, Boundary::Finite(x)) = (j % 2, b) {
                prop_assert_eq!(ts.classify(*x).unwrap(), PointClass::RightDense);
            }
        }
        let mut pts: Vec<f64> = d.scattered.iter().flatten().map(|p| p.0).collect();
        let want: Vec<f64> = ts.scattered_points().iter().filter(|p| p.1 > 0.0).map(|p| p.0).collect();
        pts.sort_by(f64::total_cmp);
        prop_assert_eq!(pts, want);
        let dense_len: f64 = d.dense.iter().map(|(a, b)| b - a).sum();
        let stored: f64 = ts.intervals().iter().map(|iv| iv.end - iv.start).sum();
        if stored.is_finite() {
            prop_assert!((dense_len - stored).abs() <= 1e-9 * (1.0 + stored));
        }
    }

    #[test]
    fn families_grow_by_superset(name in prop::sample::select(vec![FamilyName::Ex1, FamilyName::Ex5, FamilyName::Ex8, FamilyName::Ex2]),
                                 n in 4u32..20, extra in 1u32..10) {
        let inner = (name == FamilyName::Ex2).then_some(4);
        let small = FamilySpec::new(name, 3, n, inner).build().unwrap();
        let big = FamilySpec::new(name, 3, n + extra, inner).build().unwrap();
        for iv in small.intervals() {
            prop_assert!(big.contains(iv.start) && big.contains(iv.end));
        }
    }

    #[test]
    fn exponential_semigroup(b in spd_matrix(), ts in finite_time_scale(), c in 0.05..0.95f64,
                             fracs in prop::collection::vec(0.0..1.0f64, 3)) {
        let e = eig(&b);
        let mu = max_mu(&ts);
        let g = if mu > 0.0 { c / (mu * e.lambda_max()) } else { c };
        let gamma = GammaSpec::Constant { value: g };
        let x = TsExponential::new(&ts, &e, &gamma);
        let p = points_of(&ts, &fracs);
        let (r, s, t) = (p[0], p[1], p[2]);
        let lhs = x.matrix(s, t).unwrap().mul(&x.matrix(r, s).unwrap());
        let rhs = x.matrix(r, t).unwrap();
        prop_assert!(lhs.max_abs_diff(&rhs) <= 1e-9, "diff {}", lhs.max_abs_diff(&rhs));
    }

    #[test]
    fn bounds_dominate_spectral_norm(b in spd_matrix(), ts in finite_time_scale(), c in 0.05..0.95f64,
                                    fracs in prop::collection::vec(0.0..1.0f64, 1..8)) {
        let e = eig(&b);
        let mu = max_mu(&ts);
        let g = if mu > 0.0 { c / (mu * e.lambda_max()) } else { c };
        let gamma = GammaSpec::Constant { value: g };
        let bc = BoundConstants::compute(&ts, &e, &gamma, 0.0, None);
        let nb = NormBounds::new(&ts, &e, &gamma, bc, 32).unwrap();
        let x = TsExponential::new(&ts, &e, &gamma);
        for t in points_of(&ts, &fracs) {
            let (s, seg) = nb.segment_bound(t).unwrap();
            prop_assert!(x.spectral_norm(s, t).unwrap() <= seg * (1.0 + 1e-12));
            let cum = nb.cumulative_bound(ts.start(), t).unwrap();
            prop_assert!(x.spectral_norm(ts.start(), t).unwrap() <= cum * (1.0 + 1e-12));
        }
    }

    #[test]
    fn one_by_one_matches_scalar(lambda in 0.1..3.0f64, ts in finite_time_scale(), c in 0.05..0.95f64,
                                 fracs in prop::collection::vec(0.0..1.0f64, 2)) {
        let b = SymmetricMatrix::new(&[vec![lambda]]).unwrap();
        let e = eig(&b);
        let mu = max_mu(&ts);
        let g = if mu > 0.0 { c / (mu * lambda) } else { c };
        let gamma = GammaSpec::Constant { value: g };
        let p = points_of(&ts, &fracs);
        let m = TsExponential::new(&ts, &e, &gamma).diagonal(p[0], p[1]).unwrap()[0];
        let s = scalar_exponential(&ts, -g * lambda, p[0], p[1]).unwrap();
        prop_assert!((m - s).abs() <= 1e-12 * (1.0 + s.abs()));
    }

    #[test]
    fn eigen_residual(b in spd_matrix()) {
        let e = eig(&b);
        prop_assert!(e.reconstruct().max_abs_diff(b.as_matrix()) <= 1e-10);
        let ortho = e.basis.transpose().mul(&e.basis);
        prop_assert!(ortho.max_abs_diff(&tsconsensus::spectral::Matrix::identity(b.n())) <= 1e-12);
        prop_assert!(e.lambdas.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn discrete_gronwall(a in 0.1..5.0f64, p in 0.0..2.0f64,
                         steps in prop::collection::vec((0.05..1.0f64, 0.0..1.0f64), 1..40)) {
        // y_k = a + Σ_{j<k} μ_j p y_j − slack_k satisfies the integral inequality
        let mus: Vec<f64> = steps.iter().map(|s| s.0).collect();
        let env = gronwall_envelope(a, p, &mus);
        let mut acc = 0.0;
        let mut y = a;
        prop_assert!(y <= env[0] * (1.0 + 1e-12));
        for (k, (mu, slack)) in steps.iter().enumerate() {
            acc += mu * p * y;
            y = (a + acc) * (1.0 - 0.5 * slack);
            prop_assert!(y <= env[k + 1] * (1.0 + 1e-12));
        }
        let ts = scattered_grid(&mus);
        let last = *ts.intervals().last().map(|iv| &iv.start).unwrap();
        let ep = scalar_exponential(&ts, p, 0.0, last).unwrap();
        prop_assert!((a * ep - env[mus.len()]).abs() <= 1e-9 * env[mus.len()]);
    }

    #[test]
    fn rk4_fourth_order(lambdas in prop::collection::vec(1.0..5.0f64, 1..4), g in 0.5..1.5f64) {
        let n = lambdas.len();
        let b = SymmetricMatrix::diagonal(&lambdas).unwrap();
        let sys = StabilitySystem::new(b, GammaSpec::Constant { value: g }, DynamicsSpec::Zero,
            LeaderTrajectory::Zero, 0.0, None, vec![1.0; n]).unwrap();
        let ts = TimeScale::from_pairs(&[(0.0, 1.6)], false).unwrap();
        let sim = Simulator::new(&sys, &ts, 8).unwrap();
        let err = |h: f64| {
            let got = sim.dense_integrate(0.0, 1.6, &sys.epsilon0, h).unwrap();
            got.iter().zip(&lambdas).map(|(x, l)| (x - (-g * l * 1.6).exp()).abs()).fold(0.0, f64::max)
        };
        let ratio = err(0.02) / err(0.01);
        prop_assert!((14.0..18.0).contains(&ratio), "ratio {}", ratio);
    }
}

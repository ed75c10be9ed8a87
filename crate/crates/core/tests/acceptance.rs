//! One PASS/FAIL line per acceptance criterion. Exits nonzero on any FAIL.

mod common;

use std::process::Command;
use std::time::{Duration, Instant};

use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};
use tsconsensus::certify::{certify, Certificate, Route, Verdict};
use tsconsensus::cli::voc_deviation;
use tsconsensus::scenario::{Scenario, BUILTIN_NAMES};
use tsconsensus::simulate::{variation_of_constants_many, DynamicsSpec, LeaderTrajectory, Simulator};
use tsconsensus::spectral::{
    gronwall_envelope, scalar_exponential, BoundConstants, GammaSpec, NormBounds, SymmetricMatrix, TsExponential,
};
use tsconsensus::system::StabilitySystem;
use tsconsensus::timescale::Boundary;

const EIG_TOL: f64 = 1e-9;
const LAMBDA_MIN_PRINTED: f64 = 0.585;
const LAMBDA_MIN_TOL: f64 = 2e-3;
const EX5_M: f64 = 0.557;
const EX5_M_TOL: f64 = 1e-3;
const EX5_RATE: f64 = -0.721;
const EX5_RATE_TOL: f64 = 2e-3;
const EX9_RATE: f64 = -0.405;
const EX9_RATE_TOL: f64 = 2e-3;
const EX9_FACTOR: f64 = 1.557;
const EX9_FACTOR_TOL: f64 = 1e-3;
const VOC_TOL: f64 = 1e-6;
const VOC_STEP: f64 = 1e-3;
const FINAL_FRACTION: f64 = 1e-2;
const PROPERTY_CASES: u32 = 128;
const SEMIGROUP_TOL: f64 = 1e-9;

type Criterion = (&'static str, fn() -> Line, Duration);

struct Line {
    pass: bool,
    detail: String,
}

fn line(pass: bool, detail: impl Into<String>) -> Line {
    Line {
        pass,
        detail: detail.into(),
    }
}

fn load(name: &str) -> (Scenario, Certificate) {
    let s = Scenario::builtin(name).unwrap();
    let c = certify(&s.name, &s.system().unwrap(), &s.window().unwrap(), &s.config.thresholds);
    (s, c)
}

/// Characteristic polynomial by Faddeev-LeVerrier: `det(xI - A) = Σ c_k x^k`.
fn char_poly(a: &[Vec<f64>]) -> Vec<f64> {
    let n = a.len();
    let mut c = vec![0.0; n + 1];
    c[n] = 1.0;
    let mut m = vec![vec![0.0; n]; n];
    for k in 1..=n {
        // M_k = A M_{k-1} + c_{n-k+1} I
        let mut next = vec![vec![0.0; n]; n];
        for i in 0..n {
            for j in 0..n {
                next[i][j] = (0..n).map(|l| a[i][l] * m[l][j]).sum::<f64>() + if i == j { c[n - k + 1] } else { 0.0 };
            }
        }
        m = next;
        let am_trace: f64 = (0..n).map(|i| (0..n).map(|l| a[i][l] * m[l][i]).sum::<f64>()).sum();
        c[n - k] = -am_trace / k as f64;
    }
    c
}

fn criterion_1() -> Line {
    let b = common::weights();
    let rows = b.as_matrix().rows();
    let eig = common::eig(&b);
    let poly = char_poly(&rows);
    let s2 = 2f64.sqrt();
    let want = [2.0 - s2, 3.0, 2.0 + s2, 4.0];
    let eval = |x: f64| poly.iter().rev().fold(0.0, |acc, c| acc * x + c);
    let max_err = eig.lambdas.iter().zip(want).map(|(l, w)| (l - w).abs()).fold(0.0, f64::max);
    let max_residual = eig.lambdas.iter().map(|l| eval(*l).abs()).fold(0.0, f64::max);
    let lmin_err = (eig.lambda_min() - LAMBDA_MIN_PRINTED).abs();
    line(
        max_err <= EIG_TOL && max_residual <= EIG_TOL && lmin_err <= LAMBDA_MIN_TOL,
        format!(
            "lambdas={:?} max|err|={max_err:.1e} max|p(lambda)|={max_residual:.1e} |lambda_min-0.585|={lmin_err:.1e}",
            eig.lambdas
        ),
    )
}

fn criterion_2() -> Line {
    let (_, c) = load("ex5");
    let m = c.constants.m;
    let rate = c.derived.constant_gain_rate.unwrap_or(f64::NAN);
    let ok_m = (m - EX5_M).abs() <= EX5_M_TOL;
    let ok_rate = (rate - EX5_RATE).abs() <= EX5_RATE_TOL;
    let ok_route = c.verdict == Verdict::ExponentiallyStable && c.route == Some(Route::ConstantGain);
    let failed: Vec<String> = c
        .conditions
        .iter()
        .filter(|x| !x.pass)
        .map(|x| format!("{} ({})", x.name, x.witness.clone().unwrap_or_default()))
        .collect();
    line(
        ok_m && ok_rate && ok_route,
        format!(
            "M={m:.4} (want {EX5_M}) rate={rate:.4} (want {EX5_RATE}) verdict={:?} route={:?}; failed checks: {}",
            c.verdict,
            c.route,
            failed.join(", ")
        ),
    )
}

fn criterion_3() -> Line {
    let (s, c) = load("ex9");
    let gamma = s.gamma.constant_value().unwrap();
    // per unit dense length: L/M + γ ln M
    let rate = c.constants.lip / c.constants.m + gamma * c.constants.m.ln();
    let factor = c.derived.scattered_factor;
    let e1 = c.condition("contraction_per_scattered_point").map(|x| x.pass);
    let contraction_route = c.route_outcome(Route::BoundedGrowthSum).map(|r| r.pass);
    let finite_route = c.route_outcome(Route::FiniteScattered).map(|r| r.pass);
    let ok = (rate - EX9_RATE).abs() <= EX9_RATE_TOL
        && (factor - EX9_FACTOR).abs() <= EX9_FACTOR_TOL
        && e1 == Some(false)
        && contraction_route == Some(false)
        && finite_route == Some(true)
        && c.route == Some(Route::FiniteScattered);
    line(
        ok,
        format!(
            "rate={rate:.4} M+mu*L={factor:.4} e1_pass={e1:?} bounded_growth_sum_pass={contraction_route:?} \
             finite_scattered_checks_pass={finite_route:?} verdict={:?} route={:?}",
            c.verdict, c.route
        ),
    )
}

fn criterion_4() -> Line {
    use Boundary::{Finite as F, Infinity as I};
    let cases = [
        ("inline1", vec![F(1.0), F(2.0), F(3.0), F(6.0), I]),
        ("ex6", vec![F(1.0), F(1.0), F(2.0), F(3.0), F(7.0), F(8.0), I]),
        ("ex9", vec![F(1.0), F(12.0), I]),
    ];
    let mut pass = true;
    let mut detail = Vec::new();
    for (name, want) in cases {
        let s = Scenario::builtin(name).unwrap();
        let got = s.timescale.build().unwrap().decompose().boundaries;
        let ok = got == want;
        pass &= ok;
        let fmt = |v: &[Boundary]| v.iter().map(|b| b.to_string()).collect::<Vec<_>>().join(",");
        if ok {
            detail.push(format!("{name}: {}", fmt(&got)));
        } else {
            detail.push(format!("{name}: {} (want {})", fmt(&got), fmt(&want)));
        }
    }
    line(pass, detail.join("; "))
}

fn criterion_5() -> Line {
    let mut pass = true;
    let mut detail = Vec::new();
    for name in BUILTIN_NAMES {
        let s = Scenario::builtin(name).unwrap();
        if s.dynamics.affine_coefficient(1.0).is_none() {
            continue;
        }
        let start = Instant::now();
        let (ts, sys) = (s.window().unwrap(), s.system().unwrap());
        let traj = Simulator::new(&sys, &ts, s.config.dense_samples).unwrap().run(VOC_STEP).unwrap();
        let times: Vec<f64> = traj.samples.iter().map(|x| x.t).collect();
        let voc = variation_of_constants_many(&sys, &ts, &times).unwrap();
        let dev = voc_deviation(&traj, &voc);
        let took = start.elapsed();
        let ok = dev <= VOC_TOL && took < Duration::from_secs(5) && ts.end() <= 25.0 + 1e-9;
        pass &= ok;
        detail.push(format!("{name}={dev:.1e}{}", if ok { "" } else { "(FAIL)" }));
    }
    line(pass, detail.join(" "))
}

fn criterion_6() -> Line {
    let mut pass = true;
    let mut detail = Vec::new();
    for name in ["ex1", "ex2", "ex5", "ex6", "ex8", "ex9"] {
        let s = Scenario::builtin(name).unwrap();
        let (ts, sys) = (s.window().unwrap(), s.system().unwrap());
        let traj = Simulator::new(&sys, &ts, s.config.dense_samples).unwrap().run(s.config.h).unwrap();
        let c = traj.empirical_c();
        let dominated = traj
            .samples
            .iter()
            .all(|x| x.eps_norm <= c * traj.eps0_norm * x.envelope * (1.0 + 1e-12));
        let ratio = traj.final_norm() / traj.eps0_norm;
        let ok = dominated && ratio <= FINAL_FRACTION;
        pass &= ok;
        detail.push(format!("{name}: c={c:.2e} final/initial={ratio:.2e}{}", if ok { "" } else { "(FAIL)" }));
    }
    line(pass, detail.join("; "))
}

fn stable_gain(ts: &tsconsensus::timescale::TimeScale, lambda_max: f64, c: f64) -> f64 {
    let mu = common::max_mu(ts);
    if mu > 0.0 {
        c / (mu * lambda_max)
    } else {
        c
    }
}

fn criterion_7() -> Line {
    let config = Config {
        cases: PROPERTY_CASES,
        failure_persistence: None,
        ..Config::default()
    };
    let mut results = Vec::new();

    let semigroup = TestRunner::new(config.clone()).run(
        &(common::spd_matrix(), common::finite_time_scale(), 0.05..0.95f64, prop::collection::vec(0.0..1.0f64, 3)),
        |(b, ts, c, fracs)| {
            let e = common::eig(&b);
            let gamma = GammaSpec::Constant {
                value: stable_gain(&ts, e.lambda_max(), c),
            };
            let x = TsExponential::new(&ts, &e, &gamma);
            let p = common::points_of(&ts, &fracs);
            let lhs = x.matrix(p[1], p[2]).unwrap().mul(&x.matrix(p[0], p[1]).unwrap());
            let d = lhs.max_abs_diff(&x.matrix(p[0], p[2]).unwrap());
            prop_assert!(d <= SEMIGROUP_TOL, "diff {}", d);
            Ok(())
        },
    );
    results.push(("semigroup", semigroup.map_err(|e| e.to_string())));

    let dominance = TestRunner::new(config.clone()).run(
        &(common::spd_matrix(), common::finite_time_scale(), 0.05..0.95f64, prop::collection::vec(0.0..1.0f64, 1..8)),
        |(b, ts, c, fracs)| {
            let e = common::eig(&b);
            let gamma = GammaSpec::Constant {
                value: stable_gain(&ts, e.lambda_max(), c),
            };
            let bc = BoundConstants::compute(&ts, &e, &gamma, 0.0, None);
            let nb = NormBounds::new(&ts, &e, &gamma, bc, 32).unwrap();
            let x = TsExponential::new(&ts, &e, &gamma);
            for t in common::points_of(&ts, &fracs) {
                let (s, seg) = nb.segment_bound(t).unwrap();
                prop_assert!(x.spectral_norm(s, t).unwrap() <= seg * (1.0 + 1e-12));
                let cum = nb.cumulative_bound(ts.start(), t).unwrap();
                prop_assert!(x.spectral_norm(ts.start(), t).unwrap() <= cum * (1.0 + 1e-12));
            }
            Ok(())
        },
    );
    results.push(("dominance", dominance.map_err(|e| e.to_string())));

    let gronwall = TestRunner::new(config.clone()).run(
        &(0.1..5.0f64, 0.0..2.0f64, prop::collection::vec((0.05..1.0f64, 0.0..1.0f64), 1..40)),
        |(a, p, steps)| {
            let mus: Vec<f64> = steps.iter().map(|s| s.0).collect();
            let env = gronwall_envelope(a, p, &mus);
            let (mut acc, mut y) = (0.0, a);
            for (k, (mu, slack)) in steps.iter().enumerate() {
                acc += mu * p * y;
                y = (a + acc) * (1.0 - 0.5 * slack);
                prop_assert!(y <= env[k + 1] * (1.0 + 1e-12));
            }
            let ts = common::scattered_grid(&mus);
            let last = ts.intervals().last().unwrap().start;
            let ep = scalar_exponential(&ts, p, 0.0, last).unwrap();
            prop_assert!((a * ep - env[mus.len()]).abs() <= 1e-9 * env[mus.len()]);
            Ok(())
        },
    );
    results.push(("gronwall", gronwall.map_err(|e| e.to_string())));

    let rk4 = TestRunner::new(config).run(
        &(prop::collection::vec(1.0..5.0f64, 1..4), 0.5..1.5f64),
        |(lambdas, g)| {
            let n = lambdas.len();
            let sys = StabilitySystem::new(
                SymmetricMatrix::diagonal(&lambdas).unwrap(),
                GammaSpec::Constant { value: g },
                DynamicsSpec::Zero,
                LeaderTrajectory::Zero,
                0.0,
                None,
                vec![1.0; n],
            )
            .unwrap();
            let ts = tsconsensus::timescale::TimeScale::from_pairs(&[(0.0, 1.6)], false).unwrap();
            let sim = Simulator::new(&sys, &ts, 8).unwrap();
            let err = |h: f64| {
                let got = sim.dense_integrate(0.0, 1.6, &sys.epsilon0, h).unwrap();
                got.iter()
                    .zip(&lambdas)
                    .map(|(x, l)| (x - (-g * l * 1.6).exp()).abs())
                    .fold(0.0, f64::max)
            };
            let ratio = err(0.02) / err(0.01);
            prop_assert!((14.0..18.0).contains(&ratio), "ratio {}", ratio);
            Ok(())
        },
    );
    results.push(("rk4_order", rk4.map_err(|e| e.to_string())));

    let pass = results.iter().all(|r| r.1.is_ok());
    let detail = results
        .iter()
        .map(|(n, r)| match r {
            Ok(()) => format!("{n}: {PROPERTY_CASES} cases ok"),
            Err(e) => format!("{n}: {e}"),
        })
        .collect::<Vec<_>>()
        .join("; ");
    line(pass, detail)
}

fn criterion_8() -> Line {
    let bin = env!("CARGO_BIN_EXE_tsconsensus");
    let run = |args: &[&str]| Command::new(bin).args(args).output().unwrap().stdout;
    let csv = [run(&["simulate", "--example", "ex5"]), run(&["simulate", "--example", "ex5"])];
    let json = [
        run(&["certify", "--example", "ex5", "--json"]),
        run(&["certify", "--example", "ex5", "--json"]),
    ];
    let ok = csv[0] == csv[1] && json[0] == json[1] && !csv[0].is_empty() && !json[0].is_empty();
    line(
        ok,
        format!("csv {} bytes, certificate {} bytes, identical={ok}", csv[0].len(), json[0].len()),
    )
}

fn main() {
    let criteria: [Criterion; 8] = [
        ("1 eigenvalues of B", criterion_1, Duration::from_millis(10)),
        ("2 ex5 constants and route", criterion_2, Duration::from_millis(100)),
        ("3 ex9 rate, factor and route", criterion_3, Duration::from_millis(100)),
        ("4 decomposition goldens", criterion_4, Duration::MAX),
        ("5 stepped vs variation of constants", criterion_5, Duration::MAX),
        ("6 envelope dominance and decay", criterion_6, Duration::MAX),
        ("7 property suites", criterion_7, Duration::from_secs(60)),
        ("8 determinism", criterion_8, Duration::MAX),
    ];
    let mut failures = 0;
    for (name, f, budget) in criteria {
        let start = Instant::now();
        let mut l = f();
        let took = start.elapsed();
        if took > budget {
            l.pass = false;
            l.detail.push_str(&format!(" [over budget {budget:?}]"));
        }
        if !l.pass {
            failures += 1;
        }
        println!(
            "{} criterion {name} ({:.1} ms): {}",
            if l.pass { "PASS" } else { "FAIL" },
            took.as_secs_f64() * 1e3,
            l.detail
        );
    }
    println!("{} of 8 criteria passed", 8 - failures);
    if failures > 0 {
        std::process::exit(1);
    }
}

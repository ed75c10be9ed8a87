//! Sufficient-condition checks for exponential stability on a finite window.
//!
//! Limit statements are replaced by explicit finite-window surrogates whose
//! thresholds live in [`Thresholds`]. Routes are tried cheapest first; the
//! first one whose checks all pass names the certificate.

mod envelope;
mod lipschitz;

pub use envelope::{dense_runs, sum_samples, DenseRun, Envelope};
pub use lipschitz::estimate_lipschitz;

use std::fmt::{self, Write as _};

use serde::{Deserialize, Serialize};

use crate::numeric::fit_slope;
use crate::spectral::{check_gain_sign, check_graininess_gain, BoundConstants, ConditionCheck};
use crate::system::StabilitySystem;
use crate::timescale::{Asymptotics, Run, TimeScale};

pub use crate::system::SystemError;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Thresholds {
    /// "→ 0" means the final value is below this fraction of the first.
    pub decay_factor: f64,
    /// Share of a sequence treated as its tail.
    pub tail_fraction: f64,
    /// "< ∞" allows the tail maximum up to this multiple of the tail median.
    pub bounded_ratio: f64,
    /// Log-log slope below which a sequence of terms counts as summable.
    pub summable_slope: f64,
    /// Samples per dense run when checking the sign of γ.
    pub dense_grid: usize,
    pub lipschitz_samples: usize,
    /// Allowed relative excess of the sampled Lipschitz estimate over L.
    pub lipschitz_tolerance: f64,
}

impl Default for Thresholds {
    fn default() -> Self {
        Thresholds {
            decay_factor: 1e-3,
            tail_fraction: 0.25,
            bounded_ratio: 10.0,
            summable_slope: -1.1,
            dense_grid: 512,
            lipschitz_samples: 10_000,
            lipschitz_tolerance: 0.01,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Route {
    /// Constant γ with `L/M + |γ| ln M < 0` and `M + μ*L < 1`.
    ConstantGain,
    /// Both point types unbounded, `M + μ*L < 1`, `e^{sum(i)}` bounded.
    BoundedGrowthSum,
    /// Summable dense lengths and `M + μ*L < 1`.
    SummableDenseGaps,
    /// Finitely many scattered points and `sum(i) < 0` for all i.
    FiniteScattered,
    /// Summable `∫|γ|` over dense runs and a vanishing growth product.
    SummableGainIntegral,
    /// The envelope itself decays.
    EnvelopeDecay,
}

impl Route {
    pub const ORDER: [Route; 6] = [
        Route::ConstantGain,
        Route::BoundedGrowthSum,
        Route::SummableDenseGaps,
        Route::FiniteScattered,
        Route::SummableGainIntegral,
        Route::EnvelopeDecay,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Route::ConstantGain => "constant_gain",
            Route::BoundedGrowthSum => "bounded_growth_sum",
            Route::SummableDenseGaps => "summable_dense_gaps",
            Route::FiniteScattered => "finite_scattered",
            Route::SummableGainIntegral => "summable_gain_integral",
            Route::EnvelopeDecay => "envelope_decay",
        }
    }
}

impl fmt::Display for Route {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    ExponentiallyStable,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RouteOutcome {
    pub route: Route,
    pub pass: bool,
    /// Names of the failed checks with their witnesses.
    pub reasons: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Derived {
    /// `M + μ*·L`
    pub scattered_factor: f64,
    /// `L/M + |γ| ln M`, for constant γ.
    pub constant_gain_rate: Option<f64>,
    pub lipschitz_estimate: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Certificate {
    pub scenario: String,
    pub verdict: Verdict,
    pub route: Option<Route>,
    pub decomposition: String,
    pub constants: BoundConstants,
    pub derived: Derived,
    pub conditions: Vec<ConditionCheck>,
    pub routes: Vec<RouteOutcome>,
    pub sum_samples: Vec<(usize, f64)>,
    pub envelope_samples: Vec<(f64, f64)>,
    pub notes: Vec<String>,
}

impl Certificate {
    pub fn is_stable(&self) -> bool {
        self.verdict == Verdict::ExponentiallyStable
    }

    pub fn condition(&self, name: &str) -> Option<&ConditionCheck> {
        self.conditions.iter().find(|c| c.name == name)
    }

    pub fn route_outcome(&self, route: Route) -> Option<&RouteOutcome> {
        self.routes.iter().find(|r| r.route == route)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificate serializes")
    }

    pub fn text_report(&self) -> String {
        let mut s = String::new();
        let c = &self.constants;
        let opt = |x: Option<f64>| x.map_or_else(|| "undefined".to_string(), |v| format!("{v:.6}"));
        let _ = writeln!(s, "scenario: {}", self.scenario);
        let _ = writeln!(
            s,
            "verdict: {}",
            match (self.verdict, self.route) {
                (Verdict::ExponentiallyStable, Some(r)) => format!("exponentially stable (route {r})"),
                _ => "inconclusive".to_string(),
            }
        );
        let _ = writeln!(s, "decomposition: {}", self.decomposition);
        let _ = writeln!(
            s,
            "constants: delta={} M*={} M**={:.6} M={:.6} mu*={:.6} L={:.6}",
            opt(c.delta),
            opt(c.m_star),
            c.m_star_star,
            c.m,
            c.mu_star,
            c.lip
        );
        let _ = writeln!(
            s,
            "derived: M+mu*L={:.6} constant-gain rate={} sampled L={:.6}",
            self.derived.scattered_factor,
            opt(self.derived.constant_gain_rate),
            self.derived.lipschitz_estimate
        );
        let _ = writeln!(s, "conditions:");
        for cond in &self.conditions {
            let _ = writeln!(
                s,
                "  [{}] {}{}",
                if cond.pass { "pass" } else { "FAIL" },
                cond.name,
                cond.witness.as_ref().map_or(String::new(), |w| format!(": {w}"))
            );
        }
        let _ = writeln!(s, "routes:");
        for r in &self.routes {
            let _ = writeln!(s, "  [{}] {}", if r.pass { "pass" } else { "FAIL" }, r.route);
            for reason in &r.reasons {
                let _ = writeln!(s, "      {reason}");
            }
        }
        if let Some((i, v)) = self.sum_samples.last() {
            let _ = writeln!(s, "sum({i}) = {v:.6}");
        }
        if let Some((t, e)) = self.envelope_samples.last() {
            let _ = writeln!(s, "e_d({t}, T0) = {e:.6e}");
        }
        for n in &self.notes {
            let _ = writeln!(s, "note: {n}");
        }
        s
    }
}

/// Tail of a sequence: the last `frac` share, at least two entries.
fn tail(values: &[f64], frac: f64) -> &[f64] {
    let k = ((values.len() as f64 * frac).ceil() as usize).max(2).min(values.len());
    &values[values.len() - k..]
}

/// "→ 0": strictly decreasing over the tail and final < factor · first.
fn vanishes(values: &[f64], th: &Thresholds) -> Result<(), String> {
    if values.len() < 2 {
        return Err(format!("only {} samples", values.len()));
    }
    let t = tail(values, th.tail_fraction);
    if let Some(w) = t.windows(2).position(|w| !(w[1] < w[0])) {
        return Err(format!("tail not strictly decreasing ({:.6e} -> {:.6e})", t[w], t[w + 1]));
    }
    let (first, last) = (values[0], *values.last().unwrap());
    if !(last < th.decay_factor * first) {
        return Err(format!("final {last:.6e} not below {} x initial {first:.6e}", th.decay_factor));
    }
    Ok(())
}

/// "< ∞": tail nonincreasing, or tail max within `bounded_ratio` x tail median.
fn stays_bounded(values: &[f64], th: &Thresholds) -> Result<(), String> {
    if values.is_empty() {
        return Err("no samples".into());
    }
    let t = tail(values, th.tail_fraction);
    if t.windows(2).all(|w| w[1] <= w[0]) {
        return Ok(());
    }
    let mut sorted = t.to_vec();
    sorted.sort_by(f64::total_cmp);
    let median = sorted[sorted.len() / 2];
    let max = *sorted.last().unwrap();
    if max.is_finite() && max <= th.bounded_ratio * median {
        Ok(())
    } else {
        Err(format!("tail max {max:.6e} exceeds {} x median {median:.6e}", th.bounded_ratio))
    }
}

/// Terms `ys` at positions `xs` look summable: over the last half, the
/// log-log slope is below `summable_slope` (or the terms are all zero).
fn summable_trend(xs: &[f64], ys: &[f64], th: &Thresholds) -> Result<(), String> {
    let n = xs.len();
    if n < 4 {
        return Err(format!("only {n} terms in window"));
    }
    let half = n / 2;
    let (lx, ly): (Vec<f64>, Vec<f64>) = xs[half..]
        .iter()
        .zip(&ys[half..])
        .filter(|(x, y)| **x > 0.0 && **y > 0.0)
        .map(|(x, y)| (x.ln(), y.ln()))
        .unzip();
    if lx.is_empty() && ys[half..].iter().all(|y| *y == 0.0) {
        return Ok(());
    }
    match fit_slope(&lx, &ly) {
        Some(s) if s < th.summable_slope => Ok(()),
        Some(s) => Err(format!("log-log slope {s:.3} not below {}", th.summable_slope)),
        None => Err("slope undefined".into()),
    }
}

fn check(name: &str, r: Result<Option<String>, String>) -> ConditionCheck {
    match r {
        Ok(w) => ConditionCheck::pass(name, w),
        Err(w) => ConditionCheck::fail(name, w),
    }
}

/// Runs every check on the window `ts` (already restricted to the horizon).
pub fn certify(name: &str, sys: &StabilitySystem, ts: &TimeScale, th: &Thresholds) -> Certificate {
    let gamma = &sys.gamma;
    let bc = BoundConstants::compute(ts, &sys.eig, gamma, sys.lip, sys.mu_star);
    let decomposition = ts.decompose();
    let runs = ts.runs();
    let dense = dense_runs(ts, gamma);
    let sums = sum_samples(&dense, &bc);
    let env = Envelope::new(gamma, &bc);
    let factor = bc.scattered_factor();
    let mut notes = Vec::new();
    let mut conditions = Vec::new();

    // prerequisites
    let radius = 1.0 + sys.epsilon0.iter().fold(0.0f64, |m, x| m.max(x.abs())) + sys.leader.at(ts.start()).abs();
    let lip_est = estimate_lipschitz(&sys.dynamics, sys.n(), ts.start(), ts.end(), radius, th.lipschitz_samples);
    let lip_ok = lip_est <= sys.lip * (1.0 + th.lipschitz_tolerance);
    if !lip_ok {
        notes.push(format!("sampled Lipschitz estimate {lip_est:.6} exceeds supplied L = {}", sys.lip));
    }
    conditions.push(check(
        "lipschitz",
        if lip_ok {
            Ok(Some(format!("L={} sampled={lip_est:.6}", sys.lip)))
        } else {
            Err(format!("sampled {lip_est:.6} > (1+{})·L = {}", th.lipschitz_tolerance, sys.lip))
        },
    ));
    conditions.push(check_gain_sign(ts, &sys.eig, gamma, th.dense_grid));
    let (gg, _) = check_graininess_gain(ts, &sys.eig, gamma);
    conditions.push(gg);
    let window_mu = ts.scattered_points().iter().map(|p| p.1).fold(0.0, f64::max);
    conditions.push(check(
        "bounded_graininess",
        if bc.mu_star.is_finite() && bc.mu_star >= window_mu {
            Ok(Some(format!("mu*={}", bc.mu_star)))
        } else {
            Err(format!("mu*={} below window sup {window_mu}", bc.mu_star))
        },
    ));
    let prerequisites_ok = conditions.iter().all(|c| c.pass);

    if let Some(n) = delta_trend_note(ts, sys) {
        notes.push(n);
    }
    if ts.intervals().iter().any(|iv| iv.accumulates) {
        notes.push("scattered points accumulating at right-dense points were truncated; products over the omitted points are not included".into());
    }

    let asym = ts.asymptotics();
    let quarter_start = ts.start() + (1.0 - th.tail_fraction) * (ts.end() - ts.start());

    // shared checks
    let e1 = check(
        "contraction_per_scattered_point",
        if factor < 1.0 {
            Ok(Some(format!("M+mu*L={factor:.6}")))
        } else {
            Err(format!("M+mu*L={factor:.6} >= 1"))
        },
    );

    let constant = gamma.constant_value();
    let rate = constant.map(|g| bc.constant_gain_rate(g));
    let es71 = check(
        "constant_gain",
        constant.map(|g| Some(format!("gamma={g}"))).ok_or_else(|| "gamma varies".to_string()),
    );
    let es72 = check(
        "constant_gain_rate",
        match rate {
            Some(r) if r < 0.0 => Ok(Some(format!("L/M+|gamma|lnM={r:.6}"))),
            Some(r) => Err(format!("L/M+|gamma|lnM={r:.6} >= 0")),
            None => Err("gamma varies".into()),
        },
    );

    let e100 = check(
        "both_point_types_unbounded",
        match asym {
            Asymptotics::Alternating => Ok(Some("from family description".into())),
            Asymptotics::EventuallyScattered => Err("right-dense points are bounded".into()),
            Asymptotics::EventuallyDense => Err("right-scattered points are bounded".into()),
            Asymptotics::Unknown => {
                let late_scattered = ts.scattered_points().iter().any(|p| p.0 >= quarter_start);
                let late_dense = dense.iter().any(|r| r.end > quarter_start && r.len() > 0.0);
                if late_scattered && late_dense {
                    Ok(Some("both present in the last window quarter (truncated)".into()))
                } else {
                    Err("not both present in the last window quarter".into())
                }
            }
        },
    );

    let exp_sums: Vec<f64> = sums.iter().map(|s| s.1.exp()).collect();
    let e7 = check(
        "bounded_sum_exponential",
        stays_bounded(&exp_sums[1..], th).map(|_| {
            Some(format!("e^sum({})={:.6e}", sums.len() - 1, exp_sums.last().unwrap()))
        }),
    );

    let starts: Vec<f64> = dense.iter().map(|r| r.start).collect();
    let es7 = check(
        "summable_dense_lengths",
        match asym {
            Asymptotics::EventuallyScattered => Ok(Some("finitely many dense runs".into())),
            Asymptotics::EventuallyDense => Err("final dense run is unbounded".into()),
            _ => {
                let lens: Vec<f64> = dense.iter().map(DenseRun::len).collect();
                summable_trend(&starts, &lens, th).map(|_| Some("decaying dense lengths".into()))
            }
        },
    );

    let finite_s = check(
        "finite_scattered",
        match asym {
            Asymptotics::EventuallyDense => Ok(Some(format!("{} scattered points", ts.scattered_points().len()))),
            Asymptotics::Unknown => Err("scale beyond the window is unknown".into()),
            _ => Err("right-scattered points are unbounded".into()),
        },
    );
    let negative_sums = check(
        "negative_sums",
        if sums.len() < 2 {
            Err("no dense runs in window".into())
        } else {
            match sums[1..].iter().find(|s| !(s.1 < 0.0)) {
                Some((i, v)) => Err(format!("sum({i})={v:.6} >= 0")),
                None => Ok(Some(format!("max sum(i)={:.6}", sums[1..].iter().map(|s| s.1).fold(f64::MIN, f64::max)))),
            }
        },
    );

    let summable_gain = check(
        "summable_gain_integral",
        match asym {
            Asymptotics::EventuallyScattered => Ok(Some("finitely many dense runs".into())),
            Asymptotics::EventuallyDense => Err("final dense run is unbounded".into()),
            _ => {
                let gains: Vec<f64> = dense.iter().map(|r| r.abs_gain).collect();
                summable_trend(&starts, &gains, th).map(|_| Some("decaying dense gain integrals".into()))
            }
        },
    );
    // e^{L/M Σ_{j<=i} len_j} · (M+μ*L)^{#scattered before T_2i}, at each dense run end
    let growth_product: Vec<f64> = {
        let l_over_m = bc.lip / bc.m;
        let mut len_acc = 0.0;
        dense
            .iter()
            .map(|r| {
                len_acc += r.len();
                let k = ts.scattered_points().iter().filter(|p| p.0 < r.end).count();
                (l_over_m * len_acc + k as f64 * factor.ln()).exp()
            })
            .collect()
    };
    let vanishing_product = check(
        "vanishing_growth_product",
        vanishes(&growth_product, th).map(|_| None),
    );

    // envelope at run starts and the window end
    let mut boundary_samples: Vec<(f64, f64, bool)> = Vec::new();
    for run in &runs {
        let (t, is_dense) = match run {
            Run::Dense { start, .. } => (*start, true),
            Run::Scattered { start, .. } => (*start, false),
        };
        if boundary_samples.last().is_none_or(|s| s.0 < t) {
            if let Ok(e) = env.at(ts, ts.start(), t) {
                boundary_samples.push((t, e, is_dense));
            }
        }
    }
    let final_dense = matches!(runs.last(), Some(Run::Dense { .. }));
    if boundary_samples.last().is_none_or(|s| s.0 < ts.end()) {
        if let Ok(e) = env.at(ts, ts.start(), ts.end()) {
            boundary_samples.push((ts.end(), e, final_dense));
        }
    }
    let envelope_samples: Vec<(f64, f64)> = boundary_samples.iter().map(|s| (s.0, s.1)).collect();
    let envelope_check = {
        let mut problems = Vec::new();
        let mut checked = 0;
        for dense_kind in [false, true] {
            // a point type that eventually stops has a finite subsequence and no limit to check
            let ends = match ts.asymptotics() {
                Asymptotics::EventuallyDense => !dense_kind,
                Asymptotics::EventuallyScattered => dense_kind,
                _ => false,
            };
            let seq: Vec<f64> = boundary_samples.iter().filter(|s| s.2 == dense_kind).map(|s| s.1).collect();
            if seq.len() >= 2 && !ends {
                checked += 1;
                if let Err(e) = vanishes(&seq, th) {
                    let kind = if dense_kind { "dense-run starts" } else { "scattered-run starts" };
                    problems.push(format!("{kind}: {e}"));
                }
            }
        }
        let (ts_x, ln_y): (Vec<f64>, Vec<f64>) = envelope_samples.iter().map(|(t, e)| (*t, e.ln())).unzip();
        match fit_slope(&ts_x, &ln_y) {
            Some(s) if s < 0.0 => {}
            Some(s) => problems.push(format!("log-linear slope {s:.4} >= 0")),
            None => problems.push("slope undefined".into()),
        }
        if checked == 0 {
            problems.push("no unbounded point type with two or more boundary samples".into());
        }
        check(
            "envelope_decay",
            if problems.is_empty() {
                Ok(Some(format!("final e_d={:.6e}", envelope_samples.last().map_or(1.0, |s| s.1))))
            } else {
                Err(problems.join("; "))
            },
        )
    };

    let route_checks: [(Route, Vec<&ConditionCheck>); 6] = [
        (Route::ConstantGain, vec![&es71, &es72, &e1]),
        (Route::BoundedGrowthSum, vec![&e100, &e1, &e7]),
        (Route::SummableDenseGaps, vec![&es7, &e1]),
        (Route::FiniteScattered, vec![&finite_s, &negative_sums]),
        (Route::SummableGainIntegral, vec![&summable_gain, &vanishing_product]),
        (Route::EnvelopeDecay, vec![&envelope_check]),
    ];
    let prereq_failures: Vec<String> = conditions
        .iter()
        .filter(|c| !c.pass)
        .map(|c| format!("prerequisite {} failed", c.name))
        .collect();
    let mut routes = Vec::new();
    let mut winner = None;
    for (route, checks) in &route_checks {
        let reasons: Vec<String> = checks
            .iter()
            .filter(|c| !c.pass)
            .map(|c| format!("{}: {}", c.name, c.witness.clone().unwrap_or_default()))
            .collect();
        let pass = reasons.is_empty();
        if pass && prerequisites_ok && winner.is_none() {
            winner = Some(*route);
        }
        routes.push(RouteOutcome {
            route: *route,
            pass,
            reasons,
        });
    }
    if !prerequisites_ok {
        let fired: Vec<&str> = routes.iter().filter(|r| r.pass).map(|r| r.route.as_str()).collect();
        if !fired.is_empty() {
            notes.push(format!(
                "route checks passed ({}) but prerequisites failed: {}",
                fired.join(", "),
                prereq_failures.join(", ")
            ));
        }
    }

    for c in [e1, es71, es72, e100, e7, es7, finite_s, negative_sums, summable_gain, vanishing_product, envelope_check] {
        conditions.push(c);
    }

    Certificate {
        scenario: name.to_string(),
        verdict: if winner.is_some() {
            Verdict::ExponentiallyStable
        } else {
            Verdict::Inconclusive
        },
        route: winner,
        decomposition: decomposition.to_string(),
        constants: bc,
        derived: Derived {
            scattered_factor: factor,
            constant_gain_rate: rate,
            lipschitz_estimate: lip_est,
        },
        conditions,
        routes,
        sum_samples: sums,
        envelope_samples,
        notes,
    }
}

/// Warns when the per-point `min μγλ_i` over the last quarter of scattered
/// points falls below half its value over the first quarter.
fn delta_trend_note(ts: &TimeScale, sys: &StabilitySystem) -> Option<String> {
    let pts = ts.scattered_points();
    if pts.len() < 8 {
        return None;
    }
    let per_point: Vec<f64> = pts
        .iter()
        .map(|(t, mu)| {
            let g = sys.gamma.scattered_value(*t, *mu);
            sys.eig.lambdas.iter().map(|l| mu * g * l).fold(f64::INFINITY, f64::min)
        })
        .collect();
    let q = per_point.len() / 4;
    let head = per_point[..q].iter().copied().fold(f64::INFINITY, f64::min);
    let last = per_point[per_point.len() - q..].iter().copied().fold(f64::INFINITY, f64::min);
    (last < 0.5 * head).then(|| format!("windowed delta trends toward 0 ({head:.4} early, {last:.4} late)"))
}

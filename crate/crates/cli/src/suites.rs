//! The verification suites run by `qhgeo verify`.
//!
//! Each suite writes `<suite>.csv` (plus auxiliary files) and reports an
//! [`Outcome`]; the run succeeds when the outcome matches `verify.expect`.

use qhgeo::balls::{circle_directions, convexity_check, j_ball_starlike_check, trace_sphere, BallGauge};
use qhgeo::geodesics::{
    average_path_check, endpoint_derivative_check, midpoint_convergence_probe, turning_angle_profile,
    unit_speed_reparametrize,
};
use qhgeo::metrics::{beta_series, dini_ratio_curve, series_lemma_check, DiniVerdict, ModulusOfContinuity, SeriesCase};
use qhgeo::roots::bisect;
use qhgeo::{solve_geodesic, Domain, Polyline, Weight};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::config::{
    AveragingParams, ConfigError, ConvexityParams, DiniParams, EndpointParams, GaugeParams, MidpointParams, Region,
    RunConfig, SeriesParams, SmoothnessParams, StarlikeParams, Suite, VerifySpec,
};
use crate::io::{num, opt, point, Outputs, Svg, Table};
use crate::run::{classify, path_outputs, Failure};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Pass,
    Fail,
    Inconclusive,
}

impl Outcome {
    pub fn name(self) -> &'static str {
        match self {
            Outcome::Pass => "pass",
            Outcome::Fail => "fail",
            Outcome::Inconclusive => "inconclusive",
        }
    }

    fn from_bool(ok: bool) -> Self {
        if ok {
            Outcome::Pass
        } else {
            Outcome::Fail
        }
    }
}

type SuiteResult = Result<(Outcome, Vec<String>), Failure>;

fn params<T>(p: &Option<T>, suite: Suite) -> Result<&T, Failure> {
    p.as_ref().ok_or_else(|| ConfigError::new(format!("verify.{}", suite.name()), "missing table").into())
}

pub fn run(suite: Suite, cfg: &RunConfig, spec: &VerifySpec, out: &mut Outputs) -> SuiteResult {
    match suite {
        Suite::Averaging => averaging(cfg, params(&spec.averaging, suite)?, out),
        Suite::Convexity => convexity(cfg, params(&spec.convexity, suite)?, out),
        Suite::Starlike => starlike(cfg, params(&spec.starlike, suite)?, out),
        Suite::Smoothness => smoothness(cfg, params(&spec.smoothness, suite)?, out),
        Suite::Endpoint => endpoint(cfg, params(&spec.endpoint, suite)?, out),
        Suite::Midpoint => midpoint(cfg, params(&spec.midpoint, suite)?, out),
        Suite::Series => series(cfg, params(&spec.series, suite)?, out),
        Suite::Dini => dini(params(&spec.dini, suite)?, out),
        Suite::Gauge => gauge(cfg, params(&spec.gauge, suite)?, out),
    }
}

fn qh_weight(cfg: &RunConfig, suite: Suite) -> Result<Weight, Failure> {
    let w = cfg.build_weight()?;
    if !w.is_quasihyperbolic() {
        return Err(ConfigError::new("weight", format!("the {} suite needs the quasihyperbolic weight", suite.name())).into());
    }
    Ok(w)
}

fn two_dimensional(domain: &Domain, key: &str) -> Result<(), Failure> {
    if domain.dim() != 2 {
        return Err(ConfigError::new(key, "this suite traces planar spheres; use dim = 2").into());
    }
    Ok(())
}

/// Draws a point of `region` inside the domain, staying away from the boundary.
fn sample(domain: &Domain, region: &Region, rng: &mut ChaCha8Rng) -> Result<Vec<f64>, Failure> {
    if region.lo.len() != domain.dim() || region.hi.len() != domain.dim() {
        return Err(ConfigError::new("verify.averaging.region", "bounds must match the dimension").into());
    }
    let scale = region.lo.iter().zip(&region.hi).map(|(a, b)| b - a).fold(0.0, f64::max);
    for _ in 0..1000 {
        let p: Vec<f64> = region.lo.iter().zip(&region.hi).map(|(&a, &b)| rng.random_range(a..=b)).collect();
        if domain.boundary_distance(&p) > 1e-3 * scale {
            return Ok(p);
        }
    }
    Err(ConfigError::new("verify.averaging.region", "region barely meets the domain").into())
}

/// `x + s (y - x) + t sum_k c_k sin(k pi s) n` at `n` equally spaced `s`,
/// with `n` the chord rotated by a right angle in the first two coordinates.
fn bump_path(x: &[f64], y: &[f64], c: &[f64], t: f64, n: usize) -> Vec<Vec<f64>> {
    let mut normal = vec![0.0; x.len()];
    normal[0] = -(y[1] - x[1]);
    normal[1] = y[0] - x[0];
    (0..n)
        .map(|i| {
            let s = i as f64 / (n - 1) as f64;
            let k: f64 = t * c
                .iter()
                .enumerate()
                .map(|(j, cj)| cj * ((j + 1) as f64 * std::f64::consts::PI * s).sin())
                .sum::<f64>();
            x.iter().zip(y).zip(&normal).map(|((a, b), m)| a + s * (b - a) + k * m).collect()
        })
        .collect()
}

/// Two random paths from `x` to `y` with the same quasihyperbolic length,
/// both parametrized at unit quasihyperbolic speed on `n` vertices.
fn equal_length_pair(
    weight: &Weight,
    x: &[f64],
    y: &[f64],
    p: &AveragingParams,
    rng: &mut ChaCha8Rng,
) -> Option<(Polyline, Polyline)> {
    let domain = weight.domain();
    let n = p.vertices;
    // lengths are matched after resampling, which shortens curved paths
    let shaped = |c: &[f64], t: f64| -> Option<Polyline> {
        let v = bump_path(x, y, c, t, n);
        if v.iter().any(|q| !domain.contains(q)) {
            return None;
        }
        let q = Polyline::new(weight, v).ok()?;
        unit_speed_reparametrize(weight, &q, n).ok().filter(|u| u.vertex_count() == n)
    };
    let len = |c: &[f64], t: f64| shaped(c, t).map_or(f64::INFINITY, |q| q.length());
    let coeffs = |rng: &mut ChaCha8Rng| -> Vec<f64> { (0..p.harmonics).map(|_| rng.random_range(-1.0..1.0)).collect() };
    let (ca, cb) = (coeffs(rng), coeffs(rng));
    let target = len(&[], 0.0) * rng.random_range(1.02..1.5);
    let fit = |c: &[f64]| -> Option<Polyline> {
        let mut hi = 0.05;
        while len(c, hi) < target {
            hi *= 2.0;
            if hi > 1e3 {
                return None;
            }
        }
        shaped(c, bisect(|t| len(c, t).min(f64::MAX) - target, 0.0, hi, 1e-15, 200))
    };
    Some((fit(&ca)?, fit(&cb)?))
}

fn averaging(cfg: &RunConfig, p: &AveragingParams, out: &mut Outputs) -> SuiteResult {
    let weight = qh_weight(cfg, Suite::Averaging)?;
    let domain = weight.domain().clone();
    if !domain.is_convex() {
        return Err(ConfigError::new("domain", "the averaging suite needs a convex domain").into());
    }
    if p.vertices < 3 || p.harmonics == 0 {
        return Err(ConfigError::new("verify.averaging", "need vertices >= 3 and harmonics >= 1").into());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut table = Table::new(&[
        "pair",
        "x",
        "y",
        "avg_of_lengths",
        "length_of_avg",
        "slack",
        "segment_cost_mismatch",
        "dominated",
    ]);
    let mut violations = 0;
    let mut draws = 0;
    while table.len() < p.pairs {
        draws += 1;
        if draws > 100 * p.pairs.max(1) {
            return Err(Failure::Numerical("could not draw equal-length path pairs in the region".into()));
        }
        let (x, y) = (sample(&domain, &p.region, &mut rng)?, sample(&domain, &p.region, &mut rng)?);
        let Some((a, b)) = equal_length_pair(&weight, &x, &y, p, &mut rng) else { continue };
        let r = average_path_check(&weight, &a, &b).map_err(|e| classify("verify.averaging", e))?;
        violations += usize::from(!r.dominated);
        table.push(vec![
            table.len().to_string(),
            point(&x),
            point(&y),
            num(r.avg_of_lengths),
            num(r.length_of_avg),
            num(r.avg_of_lengths - r.length_of_avg),
            num(r.segment_cost_mismatch),
            r.dominated.to_string(),
        ]);
    }
    out.table("averaging.csv", &table);
    Ok((Outcome::from_bool(violations == 0), vec![format!("{violations} violations over {} path pairs", p.pairs)]))
}

fn convexity(cfg: &RunConfig, p: &ConvexityParams, out: &mut Outputs) -> SuiteResult {
    let domain = qh_weight(cfg, Suite::Convexity)?.domain().clone();
    two_dimensional(&domain, "norm.dim")?;
    let solver = cfg.solver_config();
    let trace = trace_sphere(&domain, &p.center, p.radius, &circle_directions(p.directions), &solver)
        .map_err(|e| classify("verify.convexity", e))?;
    let report = convexity_check(&trace, p.pairs, &solver).map_err(|e| classify("verify.convexity", e))?;

    let mut t = Table::new(&["direction", "t", "point", "residual"]);
    for i in 0..trace.ts.len() {
        t.push(vec![
            point(&trace.directions[i]),
            num(trace.ts[i]),
            point(&trace.boundary_points[i]),
            num(trace.residuals[i]),
        ]);
    }
    out.table("trace.csv", &t);
    let mut svg = Svg::new();
    svg.polyline(&trace.boundary_points, "black", trace.censored.is_empty());
    svg.circle(&trace.center, 3.0, "red");
    out.text("trace.svg", svg.render());

    let mut table = Table::new(&[
        "radius",
        "tolerance",
        "pairs",
        "violations",
        "worst_excess",
        "strictness_margin",
        "censored",
    ]);
    table.push(vec![
        num(p.radius),
        num(trace.tolerance),
        report.pairs.to_string(),
        report.violations.to_string(),
        num(report.worst_excess),
        opt(report.strictness_margin),
        report.censored.to_string(),
    ]);
    out.table("convexity.csv", &table);
    let ok = report.violations == 0 && report.strictness_margin.is_none_or(|m| m > 0.0);
    let mut lines = vec![format!(
        "{} violations over {} midpoints, strictness margin {}",
        report.violations,
        report.pairs,
        opt(report.strictness_margin)
    )];
    if let Some(w) = trace.warning {
        lines.push(w);
    }
    Ok((Outcome::from_bool(ok), lines))
}

fn starlike(cfg: &RunConfig, p: &StarlikeParams, out: &mut Outputs) -> SuiteResult {
    let domain = cfg.build_domain()?;
    let r = j_ball_starlike_check(&domain, &p.center, p.radius, p.samples, cfg.seed)
        .map_err(|e| classify("verify.starlike", e))?;
    let mut table = Table::new(&[
        "radius",
        "guaranteed",
        "samples",
        "checked",
        "violations",
        "log2_violations",
        "intermediate_violations",
        "max_j",
    ]);
    table.push(vec![
        num(r.radius),
        r.guaranteed.to_string(),
        r.samples.to_string(),
        r.checked.to_string(),
        r.violations.to_string(),
        r.log2_violations.to_string(),
        r.intermediate_violations.to_string(),
        num(r.max_j),
    ]);
    out.table("starlike.csv", &table);
    let ok = r.violations == 0 && r.intermediate_violations == 0;
    Ok((
        Outcome::from_bool(ok),
        vec![format!(
            "{} violations, {} of the intermediate inequality, over {} segment points",
            r.violations, r.intermediate_violations, r.checked
        )],
    ))
}

fn smoothness(cfg: &RunConfig, p: &SmoothnessParams, out: &mut Outputs) -> SuiteResult {
    let weight = cfg.build_weight()?;
    let result = solve_geodesic(&weight, &p.x, &p.y, &cfg.solver_config()).map_err(|e| classify("verify.smoothness", e))?;
    let profile = turning_angle_profile(&result).map_err(|e| classify("verify.smoothness", e))?;
    path_outputs(out, "geodesic_", &result);
    let mut table = Table::new(&["level", "vertex_count", "max_turning_angle", "decrease_factor"]);
    let mut ok = profile.max_angle_per_level.len() >= p.min_levels;
    for (i, (&n, &a)) in profile.vertex_counts.iter().zip(&profile.max_angle_per_level).enumerate() {
        let factor = (i > 0).then(|| profile.max_angle_per_level[i - 1] / a);
        if let Some(f) = factor {
            ok &= f >= p.min_factor;
        }
        table.push(vec![i.to_string(), n.to_string(), num(a), opt(factor)]);
    }
    out.table("smoothness.csv", &table);
    Ok((
        Outcome::from_bool(ok),
        vec![format!(
            "{} levels, max turning angles {}",
            profile.max_angle_per_level.len(),
            point(&profile.max_angle_per_level)
        )],
    ))
}

fn endpoint(cfg: &RunConfig, p: &EndpointParams, out: &mut Outputs) -> SuiteResult {
    let weight = qh_weight(cfg, Suite::Endpoint)?;
    let solver = cfg.solver_config();
    let result = solve_geodesic(&weight, &p.x0, &p.x, &solver).map_err(|e| classify("verify.endpoint", e))?;
    let r = endpoint_derivative_check(weight.domain(), &p.x0, &p.x, &result, p.directions, p.h, &solver)
        .map_err(|e| classify("verify.endpoint", e))?;
    let mut samples = Table::new(&["direction", "derivative"]);
    for s in &r.samples {
        samples.push(vec![point(&s.direction), num(s.value)]);
    }
    out.table("endpoint_samples.csv", &samples);
    let angle = r.angle_to_velocity.to_degrees();
    let rel = (r.max_value - r.predicted).abs() / r.predicted;
    let mut table = Table::new(&[
        "argmax_direction",
        "terminal_velocity",
        "angle_deg",
        "max_value",
        "predicted",
        "relative_error",
    ]);
    table.push(vec![
        point(&r.argmax_direction),
        point(&r.terminal_velocity),
        num(angle),
        num(r.max_value),
        num(r.predicted),
        num(rel),
    ]);
    out.table("endpoint.csv", &table);
    let ok = angle <= p.angle_tolerance_deg && rel <= p.value_rtol;
    Ok((
        Outcome::from_bool(ok),
        vec![format!("argmax {angle:.3} deg from the terminal velocity, max {} vs 1/d = {}", num(r.max_value), num(r.predicted))],
    ))
}

fn midpoint(cfg: &RunConfig, p: &MidpointParams, out: &mut Outputs) -> SuiteResult {
    let domain = qh_weight(cfg, Suite::Midpoint)?.domain().clone();
    let r = midpoint_convergence_probe(&domain, &p.x0, &p.y, &p.points, &cfg.solver_config())
        .map_err(|e| classify("verify.midpoint", e))?;
    let mut table = Table::new(&["index", "point", "midpoint_distance", "midpoint_gap", "norm_gap"]);
    for row in &r.rows {
        table.push(vec![
            row.index.to_string(),
            point(&row.point),
            num(row.midpoint_distance),
            num(row.midpoint_gap),
            num(row.norm_gap),
        ]);
    }
    out.table("midpoint.csv", &table);
    Ok((
        Outcome::from_bool(r.consistent),
        vec![format!(
            "midpoint distances converge: {}, norm gaps converge: {}",
            r.midpoint_converges, r.norm_converges
        )],
    ))
}

/// A finite sequence satisfying `lambda x_n >= sum_{k>n} x_k`, built backwards.
fn random_series(rng: &mut ChaCha8Rng) -> SeriesCase {
    let lambda = rng.random_range(0.1..5.0);
    let alpha = rng.random_range(0.05..=1.0);
    let len = rng.random_range(1..=40);
    let mut rev = vec![1.0];
    let mut tail = 1.0;
    for _ in 1..len {
        let x = tail / lambda * (1.0 + rng.random_range(0.0..2.0));
        rev.push(x);
        tail += x;
    }
    rev.reverse();
    SeriesCase { lambda, alpha, head: rev, tail_ratio: None }
}

fn series(cfg: &RunConfig, p: &SeriesParams, out: &mut Outputs) -> SuiteResult {
    let mut cases: Vec<(String, SeriesCase)> = Vec::new();
    for &[lambda, alpha] in &p.extremal {
        cases.push(("extremal".into(), SeriesCase::extremal(lambda, alpha)));
    }
    for c in &p.cases {
        let case = SeriesCase { lambda: c.lambda, alpha: c.alpha, head: c.head.clone(), tail_ratio: c.tail_ratio };
        cases.push(("given".into(), case));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    for _ in 0..p.random {
        cases.push(("random".into(), random_series(&mut rng)));
    }
    if cases.is_empty() {
        return Err(ConfigError::new("verify.series", "no cases given").into());
    }
    let mut table = Table::new(&[
        "case",
        "source",
        "lambda",
        "alpha",
        "terms",
        "hypothesis_ok",
        "lhs",
        "rhs",
        "slack",
        "holds",
    ]);
    let (mut violations, mut skipped) = (0, 0);
    for (i, (source, case)) in cases.iter().enumerate() {
        let r = series_lemma_check(case).map_err(|e| classify("verify.series", e))?;
        match r.holds {
            Some(false) => violations += 1,
            None => skipped += 1,
            Some(true) => {}
        }
        table.push(vec![
            i.to_string(),
            source.clone(),
            num(case.lambda),
            num(case.alpha),
            case.head.len().to_string(),
            r.hypothesis_ok.to_string(),
            num(r.lhs),
            num(r.rhs),
            num(r.slack),
            r.holds.map(|h| h.to_string()).unwrap_or_default(),
        ]);
    }
    out.table("series.csv", &table);
    Ok((
        Outcome::from_bool(violations == 0),
        vec![format!(
            "{violations} violations over {} cases ({skipped} without the tail hypothesis)",
            cases.len()
        )],
    ))
}

fn modulus_label(nu: &ModulusOfContinuity) -> String {
    match nu {
        ModulusOfContinuity::Power { c, a } => format!("power c={} a={}", num(*c), num(*a)),
        ModulusOfContinuity::LogType { c } => format!("log-type c={}", num(*c)),
        ModulusOfContinuity::Tabulated { t, .. } => format!("tabulated n={}", t.len()),
    }
}

/// Parameters of the dyadic beta series reported alongside each verdict:
/// a unit constant, modulus of convexity `eps^2 / 8` (Euclidean) and `h = 1/2`.
const BETA_C: f64 = 1.0;
const BETA_OMEGA0: f64 = 0.125;
const BETA_P: f64 = 2.0;
const BETA_H: f64 = 0.5;
const BETA_TERMS: usize = 64;

fn dini(p: &DiniParams, out: &mut Outputs) -> SuiteResult {
    if p.moduli.is_empty() {
        return Err(ConfigError::new("verify.dini.moduli", "no moduli given").into());
    }
    let mut table = Table::new(&[
        "modulus",
        "verdict",
        "limsup_estimate",
        "bound",
        "tail_converged",
        "beta_converged",
        "beta_tail_ratio",
    ]);
    let mut curve = Table::new(&["modulus", "s", "ratio"]);
    let mut verdicts = Vec::new();
    for (i, nu) in p.moduli.iter().enumerate() {
        let key = format!("verify.dini.moduli[{i}]");
        let r = dini_ratio_curve(nu, &p.s_values).map_err(|e| classify(&key, e))?;
        let beta = beta_series(nu, BETA_C, BETA_OMEGA0, BETA_P, BETA_H, BETA_TERMS).map_err(|e| classify(&key, e))?;
        for (s, q) in r.s_values.iter().zip(&r.ratios) {
            curve.push(vec![i.to_string(), num(*s), num(*q)]);
        }
        let verdict = match r.verdict {
            DiniVerdict::Pass => Outcome::Pass,
            DiniVerdict::Fail => Outcome::Fail,
            DiniVerdict::Inconclusive => Outcome::Inconclusive,
        };
        verdicts.push(verdict);
        table.push(vec![
            modulus_label(nu),
            verdict.name().into(),
            num(r.limsup_estimate),
            opt(r.bound),
            r.tail_converged.to_string(),
            beta.converged.to_string(),
            num(beta.tail_ratio),
        ]);
    }
    out.table("dini.csv", &table);
    out.table("dini_curve.csv", &curve);
    let outcome = if verdicts.contains(&Outcome::Fail) {
        Outcome::Fail
    } else if verdicts.contains(&Outcome::Inconclusive) {
        Outcome::Inconclusive
    } else {
        Outcome::Pass
    };
    let names: Vec<&str> = verdicts.iter().map(|v| v.name()).collect();
    Ok((outcome, vec![format!("verdicts: {}", names.join(", "))]))
}

/// Relative tolerance on the gauge axioms. Gauge values inherit the relative
/// accuracy of the sphere crossings, a few times the solver's length
/// tolerance at the default settings.
pub const GAUGE_RTOL: f64 = 1e-3;

fn gauge(cfg: &RunConfig, p: &GaugeParams, out: &mut Outputs) -> SuiteResult {
    let domain = qh_weight(cfg, Suite::Gauge)?.domain().clone();
    let g = BallGauge::new(&domain, p.radius, &cfg.solver_config()).map_err(|e| classify("verify.gauge", e))?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let dim = domain.dim();
    let mut table = Table::new(&["pair", "u", "v", "g_u", "g_v", "g_sum", "triangle_slack", "symmetry_defect", "ok"]);
    let mut violations = 0;
    let mut pairs = 0;
    while pairs < p.samples {
        let u: Vec<f64> = (0..dim).map(|_| rng.random_range(-1.0..1.0)).collect();
        let v: Vec<f64> = (0..dim).map(|_| rng.random_range(-1.0..1.0)).collect();
        let w: Vec<f64> = u.iter().zip(&v).map(|(a, b)| a + b).collect();
        if [&u, &v, &w].iter().any(|z| domain.norm().value(z) < 1e-3) {
            continue;
        }
        let val = |z: &[f64]| g.value(z).map_err(|e| classify("verify.gauge", e));
        let (gu, gv, gw) = (val(&u)?, val(&v)?, val(&w)?);
        let neg: Vec<f64> = u.iter().map(|a| -a).collect();
        let symmetry = (val(&neg)? - gu).abs() / gu;
        let slack = gu + gv - gw;
        let ok = slack >= -GAUGE_RTOL * (gu + gv) && symmetry <= GAUGE_RTOL;
        violations += usize::from(!ok);
        table.push(vec![
            pairs.to_string(),
            point(&u),
            point(&v),
            num(gu),
            num(gv),
            num(gw),
            num(slack),
            num(symmetry),
            ok.to_string(),
        ]);
        pairs += 1;
    }
    out.table("gauge.csv", &table);
    Ok((Outcome::from_bool(violations == 0), vec![format!("{violations} violations over {pairs} vector pairs")]))
}

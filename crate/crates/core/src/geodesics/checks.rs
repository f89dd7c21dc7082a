use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use super::polyline::{unit_speed_reparametrize, Polyline};
use super::solver::{solve_geodesic, solve_geodesic_from, GeodesicResult, SolverConfig};
use crate::domains::Domain;
use crate::error::{check_dim, Error, Result};
use crate::metrics::{j_unchecked, Weight};
use crate::roots::{bisect, illinois};
use crate::vecops::{angle_between, midpoint, offset, scale, sub};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AverageReport {
    pub avg_of_lengths: f64,
    pub length_of_avg: f64,
    /// `length_of_avg <= avg_of_lengths + 1e-9`.
    pub dominated: bool,
    /// Largest relative difference between corresponding segment lengths of
    /// the two paths. Domination is guaranteed when this is zero.
    pub segment_cost_mismatch: f64,
}

/// Absolute tolerance of the averaging inequality.
pub const AVERAGE_TOL: f64 = 1e-9;

fn segment_costs(weight: &Weight, v: &[Vec<f64>]) -> Vec<f64> {
    v.windows(2).map(|w| weight.segment_cost(&w[0], &w[1])).collect()
}

/// Compares the quasihyperbolic length of the pointwise average of two paths
/// with the average of their lengths.
///
/// Paths with different vertex counts are first resampled at equal
/// quasihyperbolic spacing to the larger count. The inequality holds when
/// corresponding segments of the two paths have equal length (in particular
/// for equal-length paths at unit speed); the report includes the mismatch so
/// that a failure can be told apart from a violated hypothesis.
pub fn average_path_check(weight: &Weight, lambda: &Polyline, gamma: &Polyline) -> Result<AverageReport> {
    if !weight.is_quasihyperbolic() {
        return Err(Error::InvalidArgument("averaging needs the quasihyperbolic weight".into()));
    }
    if !weight.domain().is_convex() {
        return Err(Error::NonConvexDomain);
    }
    let (a, b) = if lambda.vertex_count() == gamma.vertex_count() {
        (lambda.vertices().to_vec(), gamma.vertices().to_vec())
    } else {
        let n = lambda.vertex_count().max(gamma.vertex_count());
        let resample = |p: &Polyline| -> Result<Vec<Vec<f64>>> {
            let q = unit_speed_reparametrize(weight, p, n)?;
            if q.vertex_count() != n {
                return Err(Error::Degenerate("resampling merged vertices".into()));
            }
            Ok(q.vertices().to_vec())
        };
        (resample(lambda)?, resample(gamma)?)
    };
    let avg: Vec<Vec<f64>> = a.iter().zip(&b).map(|(p, q)| midpoint(p, q)).collect();
    let (ca, cb) = (segment_costs(weight, &a), segment_costs(weight, &b));
    let avg_of_lengths = 0.5 * (ca.iter().sum::<f64>() + cb.iter().sum::<f64>());
    let length_of_avg: f64 = segment_costs(weight, &avg).iter().sum();
    let segment_cost_mismatch = ca
        .iter()
        .zip(&cb)
        .map(|(x, y)| (x - y).abs() / (0.5 * (x + y)).max(f64::MIN_POSITIVE))
        .fold(0.0, f64::max);
    Ok(AverageReport {
        avg_of_lengths,
        length_of_avg,
        dominated: length_of_avg <= avg_of_lengths + AVERAGE_TOL,
        segment_cost_mismatch,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TurningProfile {
    pub vertex_counts: Vec<usize>,
    pub max_angle_per_level: Vec<f64>,
}

/// Largest interior turning angle at each refinement level.
pub fn turning_angle_profile(result: &GeodesicResult) -> Result<TurningProfile> {
    if result.path.vertex_count() < 3 {
        return Err(Error::Degenerate("turning angles need at least 3 vertices".into()));
    }
    let levels: Vec<_> = result.refinement_history.iter().filter(|l| l.max_turning_angle.is_some()).collect();
    Ok(TurningProfile {
        vertex_counts: levels.iter().map(|l| l.vertex_count).collect(),
        max_angle_per_level: levels.iter().map(|l| l.max_turning_angle.unwrap()).collect(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DerivativeSample {
    pub direction: Vec<f64>,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EndpointDerivativeReport {
    pub argmax_direction: Vec<f64>,
    /// Angle (radians) between the maximizing direction and the terminal
    /// velocity of the geodesic.
    pub angle_to_velocity: f64,
    pub max_value: f64,
    /// `1 / d(x)`.
    pub predicted: f64,
    pub terminal_velocity: Vec<f64>,
    pub samples: Vec<DerivativeSample>,
}

fn unit_directions(domain: &Domain, count: usize, seed: u64) -> Vec<Vec<f64>> {
    let dim = domain.dim();
    let raw: Vec<Vec<f64>> = if dim == 2 {
        (0..count)
            .map(|j| {
                let a = std::f64::consts::TAU * j as f64 / count as f64;
                vec![a.cos(), a.sin()]
            })
            .collect()
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..count).map(|_| (0..dim).map(|_| StandardNormal.sample(&mut rng)).collect()).collect()
    };
    raw.into_iter().map(|z| scale(&z, 1.0 / domain.norm().value(&z))).collect()
}

/// Central-difference directional derivatives of `k(x0, .)` at the endpoint
/// `x` of the geodesic `result`, over `directions` unit directions.
///
/// The perturbed distances are re-solved from `result` at its resolution, so
/// that the discretization bias cancels in the differences.
pub fn endpoint_derivative_check(
    domain: &Domain,
    x0: &[f64],
    x: &[f64],
    result: &GeodesicResult,
    directions: usize,
    h: f64,
    config: &SolverConfig,
) -> Result<EndpointDerivativeReport> {
    check_dim(domain.dim(), x0)?;
    check_dim(domain.dim(), x)?;
    if !domain.contains(x0) || !domain.contains(x) {
        return Err(Error::OutsideDomain);
    }
    if directions < 2 || !(h > 0.0) {
        return Err(Error::InvalidArgument("need at least 2 directions and h > 0".into()));
    }
    if result.path.vertex_count() < 2 || result.path.start() != x0 || result.path.end() != x {
        return Err(Error::InvalidArgument("result must be the geodesic from x0 to x".into()));
    }
    let weight = Weight::quasihyperbolic(domain.clone());
    let dirs = unit_directions(domain, directions, config.seed);
    for z in &dirs {
        if !domain.contains(&offset(x, z, h)) || !domain.contains(&offset(x, z, -h)) {
            return Err(Error::StepExitsDomain);
        }
    }
    let mut samples = Vec::with_capacity(dirs.len());
    for z in dirs {
        let plus = solve_geodesic_from(&weight, &result.path, x0, &offset(x, &z, h), config)?.upper_bound;
        let minus = solve_geodesic_from(&weight, &result.path, x0, &offset(x, &z, -h), config)?.upper_bound;
        samples.push(DerivativeSample { direction: z, value: (plus - minus) / (2.0 * h) });
    }
    let best = samples.iter().max_by(|a, b| a.value.total_cmp(&b.value)).unwrap();
    let terminal_velocity = result.path.qh_velocity().last().unwrap().clone();
    Ok(EndpointDerivativeReport {
        argmax_direction: best.direction.clone(),
        angle_to_velocity: angle_between(&best.direction, &terminal_velocity),
        max_value: best.value,
        predicted: 1.0 / domain.boundary_distance(x),
        terminal_velocity,
        samples,
    })
}

/// Where the ray from `x0` in direction `u` meets the sphere of radius `r`
/// for the solver's upper-bound distance.
pub(crate) struct Crossing {
    pub t: f64,
    pub point: Vec<f64>,
}

/// First crossing of `upper(x0, x0 + t u) = r` for `t > 0`, or `None` if the
/// ray leaves the domain first. `u` need not be normalized.
///
/// The bracket comes from cheap bounds: the straight-segment length bounds the
/// distance from above and the distance-ratio metric bounds it from below.
pub(crate) fn ray_crossing(
    weight: &Weight,
    x0: &[f64],
    u: &[f64],
    r: f64,
    config: &SolverConfig,
) -> Result<Option<Crossing>> {
    let domain = weight.domain();
    let nu = domain.norm().value(u);
    if !(nu > 0.0) {
        return Err(Error::ZeroVector);
    }
    let u = scale(u, 1.0 / nu);
    let exit = domain.exit_time(x0, &u);
    let at = |t: f64| offset(x0, &u, t);
    // j(t) grows without bound toward the boundary and at infinity
    let d0 = domain.boundary_distance(x0);
    let j = |t: f64| {
        let p = at(t);
        if domain.contains(&p) {
            j_unchecked(domain, x0, &p)
        } else {
            f64::INFINITY
        }
    };
    let mut t_hi = d0 * r.exp_m1();
    while j(t_hi) < r {
        t_hi *= 2.0;
        if !t_hi.is_finite() {
            return Ok(None);
        }
    }
    t_hi = bisect(|t| j(t) - r, 0.0, t_hi, 1e-14 * t_hi, 200);
    if j(t_hi) < r {
        t_hi *= 1.0 + 1e-12;
    }
    if t_hi >= exit || !domain.contains(&at(t_hi)) {
        return Ok(None);
    }
    let straight = |t: f64| weight.segment_cost(x0, &at(t));
    let mut t_lo = if straight(t_hi) <= r { t_hi } else { bisect(|t| straight(t) - r, 0.0, t_hi, 1e-14 * t_hi, 200) };
    let solve = |t: f64| solve_geodesic(weight, x0, &at(t), config);
    let mut lo = solve(t_lo)?;
    while lo.upper_bound > r {
        t_lo *= 0.5;
        lo = solve(t_lo)?;
    }
    let hi = solve(t_hi)?;
    let (glo, ghi) = (lo.upper_bound - r, hi.upper_bound - r);
    if ghi < 0.0 {
        // the solver went below the distance-ratio bound only by rounding
        return Ok(Some(Crossing { t: t_hi, point: at(t_hi) }));
    }
    // later iterates start from the nearest solution found so far
    let mut known: Vec<(f64, Polyline)> = vec![(t_lo, lo.path), (t_hi, hi.path)];
    let mut failure = None;
    let ftol = CROSSING_FTOL * trace_scale(config, r);
    let t = illinois(
        |t| {
            let nearest = &known.iter().min_by(|a, b| (a.0 - t).abs().total_cmp(&(b.0 - t).abs())).unwrap().1;
            match solve_geodesic_from(weight, nearest, x0, &at(t), config) {
                Ok(res) => {
                    let g = res.upper_bound - r;
                    known.push((t, res.path));
                    g
                }
                Err(e) => {
                    failure = Some(e);
                    0.0
                }
            }
        },
        t_lo,
        t_hi,
        glo,
        ghi,
        1e-13 * t_hi,
        ftol,
        60,
    );
    if let Some(e) = failure {
        return Err(e);
    }
    Ok(Some(Crossing { t, point: at(t) }))
}

/// Root-finding residual target, relative to [`trace_scale`].
const CROSSING_FTOL: f64 = 1e-3;

/// The accuracy scale of sphere traces: the solver's length tolerance at the
/// given radius.
pub(crate) fn trace_scale(config: &SolverConfig, radius: f64) -> f64 {
    config.length_tolerance * radius.max(1.0)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MidpointRow {
    pub index: usize,
    /// `y_n`, moved onto the sphere through `y` if necessary.
    pub point: Vec<f64>,
    pub midpoint_distance: f64,
    /// `k(x0, y) - k(x0, (y + y_n)/2)`.
    pub midpoint_gap: f64,
    /// `||y - y_n||`.
    pub norm_gap: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MidpointReport {
    pub radius: f64,
    pub rows: Vec<MidpointRow>,
    pub midpoint_converges: bool,
    pub norm_converges: bool,
    /// Midpoint convergence is accompanied by norm convergence.
    pub consistent: bool,
}

fn vanishes(seq: &[f64]) -> bool {
    let peak = seq.iter().cloned().fold(0.0, f64::max);
    match seq.last() {
        None => true,
        Some(&last) => last <= 1e-9 || last <= 0.1 * peak,
    }
}

/// Compares `k(x0, (y + y_n)/2) -> k(x0, y)` with `y_n -> y` for points `y_n`
/// on the sphere `S(x0, k(x0, y))`.
///
/// Points off the sphere (beyond the solver's length tolerance) are moved
/// onto it along the ray from `x0`.
pub fn midpoint_convergence_probe(
    domain: &Domain,
    x0: &[f64],
    y: &[f64],
    y_seq: &[Vec<f64>],
    config: &SolverConfig,
) -> Result<MidpointReport> {
    if !domain.is_convex() {
        return Err(Error::NonConvexDomain);
    }
    let weight = Weight::quasihyperbolic(domain.clone());
    let radius = solve_geodesic(&weight, x0, y, config)?.upper_bound;
    let tol = config.length_tolerance * radius;
    let mut rows = Vec::with_capacity(y_seq.len());
    for (index, yn) in y_seq.iter().enumerate() {
        let k = solve_geodesic(&weight, x0, yn, config)?.upper_bound;
        let point = if (k - radius).abs() <= tol {
            yn.clone()
        } else {
            match ray_crossing(&weight, x0, &sub(yn, x0), radius, config)? {
                Some(c) => c.point,
                None => return Err(Error::Degenerate(format!("ray through y_{index} misses the sphere"))),
            }
        };
        let midpoint_distance = solve_geodesic(&weight, x0, &midpoint(y, &point), config)?.upper_bound;
        rows.push(MidpointRow {
            index,
            norm_gap: domain.norm().dist(y, &point),
            midpoint_gap: radius - midpoint_distance,
            midpoint_distance,
            point,
        });
    }
    let gaps: Vec<f64> = rows.iter().map(|r| r.midpoint_gap.abs()).collect();
    let norms: Vec<f64> = rows.iter().map(|r| r.norm_gap).collect();
    let midpoint_converges = vanishes(&gaps);
    let norm_converges = vanishes(&norms);
    Ok(MidpointReport {
        radius,
        rows,
        midpoint_converges,
        norm_converges,
        consistent: !midpoint_converges || norm_converges,
    })
}

//! Quasihyperbolic spheres and balls: tracing, convexity, starlikeness of
//! distance-ratio balls, tangent normals and the Minkowski gauge of a ball.

use nalgebra::{DMatrix, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::domains::Domain;
use crate::error::{check_dim, Error, Result};
use crate::geodesics::{ray_crossing, solve_geodesic, trace_scale, SolverConfig};
use crate::metrics::{j_unchecked, Weight};
use crate::normed_spaces::{Functional, NormFunction};
use crate::vecops::{dot, euclid, lerp, offset, scale, sub};

/// Points of the sphere `S(center, radius)` found along rays from the center.
#[derive(Debug, Clone, PartialEq)]
pub struct SphereTrace {
    pub domain: Domain,
    pub center: Vec<f64>,
    pub radius: f64,
    /// `|upper(center, p) - radius|` bound met by every traced point on
    /// re-evaluation at a finer resolution.
    pub tolerance: f64,
    /// Norm-unit directions of the traced rays.
    pub directions: Vec<Vec<f64>>,
    /// Ray parameters: `p = center + t u`.
    pub ts: Vec<f64>,
    pub boundary_points: Vec<Vec<f64>>,
    /// Re-evaluated `|upper(center, p) - radius|`.
    pub residuals: Vec<f64>,
    /// Directions whose rays left the domain before reaching the sphere.
    pub censored: Vec<Vec<f64>>,
    pub warning: Option<String>,
}

/// `count` equally spaced unit directions in the plane, starting at angle 0.
pub fn circle_directions(count: usize) -> Vec<Vec<f64>> {
    (0..count)
        .map(|j| {
            let a = std::f64::consts::TAU * j as f64 / count as f64;
            vec![a.cos(), a.sin()]
        })
        .collect()
}

fn refined(config: &SolverConfig) -> SolverConfig {
    SolverConfig { refinement_levels: config.refinement_levels + 1, ..config.clone() }
}

/// Trace tolerance for a solver configuration and radius: the solver's
/// length tolerance, relative to `max(radius, 1)`.
pub fn trace_tolerance(config: &SolverConfig, radius: f64) -> f64 {
    trace_scale(config, radius)
}

/// Traces the quasihyperbolic sphere of radius `r` about `x0` along the
/// given directions.
///
/// Each crossing is found by root finding on the solver's upper-bound
/// distance and then re-solved with one more refinement level; the residual
/// of that re-evaluation is recorded.
pub fn trace_sphere(
    domain: &Domain,
    x0: &[f64],
    r: f64,
    directions: &[Vec<f64>],
    config: &SolverConfig,
) -> Result<SphereTrace> {
    check_dim(domain.dim(), x0)?;
    if !domain.contains(x0) {
        return Err(Error::OutsideDomain);
    }
    if !(r > 0.0 && r.is_finite()) {
        return Err(Error::InvalidArgument("radius must be positive".into()));
    }
    let weight = Weight::quasihyperbolic(domain.clone());
    let fine = refined(config);
    let mut trace = SphereTrace {
        domain: domain.clone(),
        center: x0.to_vec(),
        radius: r,
        tolerance: trace_tolerance(config, r),
        directions: Vec::new(),
        ts: Vec::new(),
        boundary_points: Vec::new(),
        residuals: Vec::new(),
        censored: Vec::new(),
        warning: None,
    };
    for u in directions {
        check_dim(domain.dim(), u)?;
        let u = scale(u, 1.0 / domain.norm().value(u));
        match ray_crossing(&weight, x0, &u, r, config)? {
            None => trace.censored.push(u),
            Some(c) => {
                let check = solve_geodesic(&weight, x0, &c.point, &fine)?;
                trace.residuals.push((check.upper_bound - r).abs());
                trace.ts.push(c.t);
                trace.boundary_points.push(c.point);
                trace.directions.push(u);
            }
        }
    }
    if trace.boundary_points.is_empty() {
        trace.warning = Some("every ray left the domain before reaching the sphere".into());
    }
    Ok(trace)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvexityReport {
    pub pairs: usize,
    pub violations: usize,
    /// Largest `upper(center, midpoint) - radius`; negative when all
    /// midpoints are strictly inside.
    pub worst_excess: f64,
    /// Smallest `radius - upper(center, midpoint)` over pairs at least
    /// [`STRICT_SEPARATION`] apart.
    pub strictness_margin: Option<f64>,
    pub censored: usize,
}

/// Pairs this far apart (in the norm) enter the strictness margin.
pub const STRICT_SEPARATION: f64 = 0.1;

/// Checks that midpoints of random pairs of traced sphere points lie in the
/// ball, up to the trace tolerance.
pub fn convexity_check(trace: &SphereTrace, samples: usize, config: &SolverConfig) -> Result<ConvexityReport> {
    if !trace.domain.is_convex() {
        return Err(Error::NonConvexDomain);
    }
    let n = trace.boundary_points.len();
    if n == 0 {
        return Err(Error::Degenerate("empty sphere trace".into()));
    }
    let weight = Weight::quasihyperbolic(trace.domain.clone());
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut violations = 0;
    let mut worst_excess = f64::NEG_INFINITY;
    let mut strictness_margin: Option<f64> = None;
    for _ in 0..samples {
        let i = rng.random_range(0..n);
        let j = if n > 1 { (i + rng.random_range(1..n)) % n } else { i };
        let (p, q) = (&trace.boundary_points[i], &trace.boundary_points[j]);
        let m = lerp(p, q, 0.5);
        let k = solve_geodesic(&weight, &trace.center, &m, config)?.upper_bound;
        let excess = k - trace.radius;
        worst_excess = worst_excess.max(excess);
        if excess > trace.tolerance {
            violations += 1;
        }
        if trace.domain.norm().dist(p, q) >= STRICT_SEPARATION {
            let margin = -excess;
            strictness_margin = Some(strictness_margin.map_or(margin, |s| s.min(margin)));
        }
    }
    Ok(ConvexityReport { pairs: samples, violations, worst_excess, strictness_margin, censored: trace.censored.len() })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StarlikeReport {
    pub radius: f64,
    /// `radius <= log 2`, where starlikeness is guaranteed.
    pub guaranteed: bool,
    /// Number of sampled `y` in the ball.
    pub samples: usize,
    /// Number of `(y, t)` pairs checked.
    pub checked: usize,
    /// Pairs with `j(x0, z) > radius + 1e-9`, `z = t y + (1 - t) x0`.
    pub violations: usize,
    /// Pairs with `j(x0, z) > log 2 + 1e-9`.
    pub log2_violations: usize,
    /// Pairs breaking `j(x0, z) <= log(1 + t D / min(d(x0), d(y) - (1 - t) D))`, `D = ||x0 - y||`.
    pub intermediate_violations: usize,
    pub max_j: f64,
}

/// Absolute tolerance of the starlikeness checks.
pub const STARLIKE_TOL: f64 = 1e-9;
/// Points per segment on the `t` grid `0, 0.1, ..., 1`.
pub const STARLIKE_T_GRID: usize = 11;

/// Samples points `y` of the distance-ratio ball `B_j(x0, r)` and checks the
/// segments `[x0, y]` on a fixed `t` grid.
pub fn j_ball_starlike_check(domain: &Domain, x0: &[f64], r: f64, samples: usize, seed: u64) -> Result<StarlikeReport> {
    check_dim(domain.dim(), x0)?;
    if !domain.contains(x0) {
        return Err(Error::OutsideDomain);
    }
    if !(r > 0.0 && r.is_finite()) {
        return Err(Error::InvalidArgument("radius must be positive".into()));
    }
    let norm = domain.norm();
    let d0 = domain.boundary_distance(x0);
    // j(x0, y) <= r forces ||x0 - y|| <= (e^r - 1) d(x0)
    let reach = r.exp_m1() * d0;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = StarlikeReport {
        radius: r,
        guaranteed: r <= std::f64::consts::LN_2,
        samples: 0,
        checked: 0,
        violations: 0,
        log2_violations: 0,
        intermediate_violations: 0,
        max_j: 0.0,
    };
    let mut attempts = 0usize;
    while report.samples < samples {
        attempts += 1;
        if attempts > 1000 * samples.max(1) {
            return Err(Error::Degenerate("could not sample the ball".into()));
        }
        let dir: Vec<f64> = (0..x0.len()).map(|_| rng.sample(StandardNormal)).collect();
        let len = norm.value(&dir);
        if len == 0.0 {
            continue;
        }
        let y = offset(x0, &dir, reach * rng.random::<f64>() / len);
        if !domain.contains(&y) || j_unchecked(domain, x0, &y) > r {
            continue;
        }
        report.samples += 1;
        let big_d = norm.dist(x0, &y);
        let dy = domain.boundary_distance(&y);
        for step in 0..STARLIKE_T_GRID {
            let t = step as f64 / (STARLIKE_T_GRID - 1) as f64;
            let z = lerp(x0, &y, t);
            report.checked += 1;
            if !domain.contains(&z) {
                report.violations += 1;
                report.log2_violations += 1;
                report.intermediate_violations += 1;
                report.max_j = f64::INFINITY;
                continue;
            }
            let j = j_unchecked(domain, x0, &z);
            report.max_j = report.max_j.max(j);
            if j > r + STARLIKE_TOL {
                report.violations += 1;
            }
            if j > std::f64::consts::LN_2 + STARLIKE_TOL {
                report.log2_violations += 1;
            }
            let num = t * big_d;
            let den = d0.min(dy - (1.0 - t) * big_d);
            let bound = if num == 0.0 {
                0.0
            } else if den > 0.0 {
                (num / den).ln_1p()
            } else {
                f64::INFINITY
            };
            if j > bound + STARLIKE_TOL {
                report.intermediate_violations += 1;
            }
        }
    }
    Ok(report)
}

/// A fitted tangent hyperplane of a traced sphere.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TangentEstimate {
    pub point: Vec<f64>,
    /// Euclidean unit normal, oriented away from the center.
    pub normal: Vec<f64>,
    /// The normal as a functional of unit dual norm.
    pub functional: Functional,
    /// Largest distance of a fitted point from the hyperplane.
    pub fit_residual: f64,
}

/// Total-least-squares hyperplane through `points`, oriented by `outward`.
fn fit_hyperplane(points: &[Vec<f64>], outward: &[f64]) -> Result<(Vec<f64>, f64)> {
    let dim = outward.len();
    let n = points.len() as f64;
    let centroid: Vec<f64> = (0..dim).map(|k| points.iter().map(|p| p[k]).sum::<f64>() / n).collect();
    let mut cov = DMatrix::<f64>::zeros(dim, dim);
    for p in points {
        let c = sub(p, &centroid);
        for a in 0..dim {
            for b in 0..dim {
                cov[(a, b)] += c[a] * c[b];
            }
        }
    }
    let eig = SymmetricEigen::new(cov);
    let mut order: Vec<usize> = (0..dim).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let largest = eig.eigenvalues[order[dim - 1]];
    if !(largest > 0.0) || (dim > 1 && eig.eigenvalues[order[1]] <= 1e-12 * largest) {
        return Err(Error::Degenerate("neighbouring points do not span a hyperplane".into()));
    }
    let mut normal: Vec<f64> = eig.eigenvectors.column(order[0]).iter().cloned().collect();
    if dot(&normal, outward) < 0.0 {
        normal.iter_mut().for_each(|x| *x = -*x);
    }
    let residual = points.iter().map(|p| dot(&normal, &sub(p, &centroid)).abs()).fold(0.0, f64::max);
    Ok((normal, residual))
}

/// Estimates the tangent hyperplane of the trace at point `z_index` from its
/// `k_neighbors` nearest traced neighbours.
pub fn tangent_normal(trace: &SphereTrace, z_index: usize, k_neighbors: usize) -> Result<TangentEstimate> {
    let pts = &trace.boundary_points;
    let z = pts.get(z_index).ok_or_else(|| Error::InvalidArgument("point index out of range".into()))?;
    let dim = z.len();
    if k_neighbors + 1 < dim {
        return Err(Error::Degenerate(format!("need at least {} neighbours", dim - 1)));
    }
    let mut others: Vec<(f64, usize)> =
        (0..pts.len()).filter(|&i| i != z_index).map(|i| (euclid(&sub(&pts[i], z)), i)).collect();
    if others.len() < k_neighbors {
        return Err(Error::Degenerate("trace has too few points".into()));
    }
    others.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut local = vec![z.clone()];
    local.extend(others.iter().take(k_neighbors).map(|&(_, i)| pts[i].clone()));
    let (normal, fit_residual) = fit_hyperplane(&local, &sub(z, &trace.center))?;
    let norm = trace.domain.norm();
    let s = norm.dual_value(&normal);
    let functional = Functional::new(norm, scale(&normal, 1.0 / s));
    Ok(TangentEstimate { point: z.clone(), normal, functional, fit_residual })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TangentCoincidenceReport {
    /// Angle (radians) between the fitted normals; `None` when the inner
    /// sphere is degenerate and the check is skipped.
    pub angle_between_normals: Option<f64>,
    pub outer: Option<TangentEstimate>,
    pub inner: Option<TangentEstimate>,
    /// `k(x0, y) + s - r`, the nesting defect.
    pub nesting_defect: f64,
}

/// Angular offset of the local trace rays, in radians.
const LOCAL_SPREAD: f64 = 0.05;

/// Orthonormal basis of the complement of the unit vector `u`.
fn complement_basis(u: &[f64]) -> Vec<Vec<f64>> {
    let dim = u.len();
    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(dim - 1);
    for k in 0..dim {
        let mut e = vec![0.0; dim];
        e[k] = 1.0;
        let mut v = sub(&e, &scale(u, u[k]));
        for b in &basis {
            let c = dot(&v, b);
            v = sub(&v, &scale(b, c));
        }
        let n = euclid(&v);
        if n > 1e-8 {
            basis.push(scale(&v, 1.0 / n));
        }
        if basis.len() == dim - 1 {
            break;
        }
    }
    basis
}

/// Traces the sphere about `c` through (approximately) `z` on a small fan of
/// rays and fits its tangent at the central ray.
fn local_normal(domain: &Domain, c: &[f64], radius: f64, z: &[f64], config: &SolverConfig) -> Result<TangentEstimate> {
    let u0 = sub(z, c);
    let u0 = scale(&u0, 1.0 / euclid(&u0));
    let mut dirs = vec![u0.clone()];
    for e in complement_basis(&u0) {
        for k in [-2.0, -1.0, 1.0, 2.0] {
            let a = k * LOCAL_SPREAD;
            dirs.push(u0.iter().zip(&e).map(|(p, q)| a.cos() * p + a.sin() * q).collect());
        }
    }
    let trace = trace_sphere(domain, c, radius, &dirs, config)?;
    if trace.boundary_points.len() != dirs.len() {
        return Err(Error::Degenerate("local sphere trace was censored".into()));
    }
    tangent_normal(&trace, 0, 2 * domain.dim())
}

/// Compares the tangent hyperplanes at `z` of `S(x0, r)` and of the inner
/// sphere `S(y, s)`, where `y` lies on the geodesic from `x0` to `z`.
pub fn tangent_coincidence_check(
    domain: &Domain,
    x0: &[f64],
    r: f64,
    y: &[f64],
    s: f64,
    z: &[f64],
    config: &SolverConfig,
) -> Result<TangentCoincidenceReport> {
    for p in [x0, y, z] {
        check_dim(domain.dim(), p)?;
        if !domain.contains(p) {
            return Err(Error::OutsideDomain);
        }
    }
    let weight = Weight::quasihyperbolic(domain.clone());
    let tol = trace_tolerance(config, r);
    let k = |a: &[f64], b: &[f64]| solve_geodesic(&weight, a, b, config).map(|g| g.upper_bound);
    let (kxz, kyz, kxy) = (k(x0, z)?, k(y, z)?, k(x0, y)?);
    let nesting_defect = kxy + s - r;
    if (kxz - r).abs() > tol || (kyz - s).abs() > tol || nesting_defect.abs() > tol {
        return Err(Error::HypothesisViolated(format!(
            "k(x0,z) = {kxz}, k(y,z) = {kyz}, k(x0,y) = {kxy} for r = {r}, s = {s}"
        )));
    }
    if s <= tol || y == z {
        return Ok(TangentCoincidenceReport { angle_between_normals: None, outer: None, inner: None, nesting_defect });
    }
    let outer = local_normal(domain, x0, r, z, config)?;
    let inner = local_normal(domain, y, s, z, config)?;
    let angle = crate::vecops::angle_between(&outer.normal, &inner.normal);
    Ok(TangentCoincidenceReport { angle_between_normals: Some(angle), outer: Some(outer), inner: Some(inner), nesting_defect })
}

/// Minkowski functional of the quasihyperbolic ball `B(0, radius)` of a
/// domain symmetric about the origin.
#[derive(Debug, Clone, PartialEq)]
pub struct BallGauge {
    domain: Domain,
    radius: f64,
    config: SolverConfig,
}

impl BallGauge {
    pub fn new(domain: &Domain, radius: f64, config: &SolverConfig) -> Result<Self> {
        let origin = vec![0.0; domain.dim()];
        if !domain.contains(&origin) || !domain.is_symmetric() {
            return Err(Error::AsymmetricDomain);
        }
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::InvalidArgument("radius must be positive".into()));
        }
        Ok(Self { domain: domain.clone(), radius, config: config.clone() })
    }

    /// `|||v||| = inf { t > 0 : v / t in B(0, radius) }`.
    pub fn value(&self, v: &[f64]) -> Result<f64> {
        check_dim(self.domain.dim(), v)?;
        let nv = self.domain.norm().value(v);
        if nv == 0.0 {
            return Err(Error::ZeroVector);
        }
        let weight = Weight::quasihyperbolic(self.domain.clone());
        let origin = vec![0.0; v.len()];
        match ray_crossing(&weight, &origin, v, self.radius, &self.config)? {
            // the sphere meets the ray at norm distance t
            Some(c) => Ok(nv / c.t),
            None => Ok(0.0),
        }
    }
}

impl NormFunction for BallGauge {
    fn dim(&self) -> usize {
        self.domain.dim()
    }

    /// Zero at the origin; NaN if the evaluation fails.
    fn norm_of(&self, v: &[f64]) -> f64 {
        if v.iter().all(|x| *x == 0.0) {
            return 0.0;
        }
        self.value(v).unwrap_or(f64::NAN)
    }
}

/// `|||v|||` for the quasihyperbolic ball `B(0, r)`.
pub fn gauge_from_ball(domain: &Domain, r: f64, v: &[f64], config: &SolverConfig) -> Result<f64> {
    BallGauge::new(domain, r, config)?.value(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domains::Shape;
    use crate::normed_spaces::Norm;
    use approx::assert_abs_diff_eq;

    fn quick() -> SolverConfig {
        SolverConfig { refinement_levels: 4, ..SolverConfig::default() }
    }

    #[test]
    fn normal_ray_crossings() {
        let h = Domain::upper_half_plane();
        let dirs = vec![vec![0.0, 1.0], vec![0.0, -1.0]];
        let t = trace_sphere(&h, &[0.0, 1.0], 2f64.ln(), &dirs, &quick()).unwrap();
        assert!((t.boundary_points[0][1] - 2.0).abs() < 1e-4);
        assert!((t.boundary_points[1][1] - 0.5).abs() < 1e-4);
        assert!(t.residuals.iter().all(|r| *r <= t.tolerance));
        assert!(t.censored.is_empty());
    }

    #[test]
    fn small_radius_collapses_to_center() {
        let h = Domain::upper_half_plane();
        let t = trace_sphere(&h, &[0.0, 1.0], 1e-6, &circle_directions(8), &quick()).unwrap();
        assert!(t.boundary_points.iter().all(|p| euclid(&sub(p, &[0.0, 1.0])) < 2e-6));
    }

    #[test]
    fn half_plane_ball_is_convex() {
        let h = Domain::upper_half_plane();
        let cfg = quick();
        let t = trace_sphere(&h, &[0.0, 1.0], 1.0, &circle_directions(16), &cfg).unwrap();
        let r = convexity_check(&t, 40, &cfg).unwrap();
        assert_eq!(r.violations, 0);
        assert!(r.strictness_margin.unwrap() > 0.0);
    }

    #[test]
    fn convexity_needs_convex_domain() {
        let p = Domain::punctured_plane([0.0, 0.0]);
        let t = trace_sphere(&p, &[1.0, 0.0], 0.5, &circle_directions(4), &quick()).unwrap();
        assert_eq!(convexity_check(&t, 4, &quick()).unwrap_err(), Error::NonConvexDomain);
    }

    #[test]
    fn starlike_at_log_two() {
        let h = Domain::upper_half_plane();
        let r = j_ball_starlike_check(&h, &[0.0, 1.0], std::f64::consts::LN_2, 2000, 7).unwrap();
        assert_eq!(r.checked, 2000 * STARLIKE_T_GRID);
        assert_eq!((r.violations, r.log2_violations, r.intermediate_violations), (0, 0, 0));
        assert!(r.guaranteed);
    }

    #[test]
    fn two_point_neighbourhood_gives_exact_line_normal() {
        let trace = SphereTrace {
            domain: Domain::upper_half_plane(),
            center: vec![0.0, 0.5],
            radius: 1.0,
            tolerance: 0.0,
            directions: vec![],
            ts: vec![],
            boundary_points: vec![vec![0.0, 2.0], vec![1.0, 3.0]],
            residuals: vec![],
            censored: vec![],
            warning: None,
        };
        let n = tangent_normal(&trace, 0, 1).unwrap();
        let s = std::f64::consts::FRAC_1_SQRT_2;
        assert_abs_diff_eq!(n.normal[0], -s, epsilon = 1e-12);
        assert_abs_diff_eq!(n.normal[1], s, epsilon = 1e-12);
        assert!(n.fit_residual < 1e-12);
    }

    #[test]
    fn ball_domain_sphere_normal_is_radial() {
        let ball = Domain::new(Norm::euclidean(2), Shape::Ball { center: vec![0.0, 0.0], radius: 1.0 }).unwrap();
        let t = trace_sphere(&ball, &[0.0, 0.0], 0.5, &circle_directions(24), &quick()).unwrap();
        let n = tangent_normal(&t, 3, 4).unwrap();
        let radial = scale(&t.boundary_points[3], 1.0 / euclid(&t.boundary_points[3]));
        assert!(crate::vecops::angle_between(&n.normal, &radial) < 1e-3);
    }

    #[test]
    fn nested_spheres_share_tangent() {
        let h = Domain::upper_half_plane();
        let r = tangent_coincidence_check(&h, &[0.0, 1.0], 4f64.ln(), &[0.0, 2.0], 2f64.ln(), &[0.0, 4.0], &quick())
            .unwrap();
        assert!(r.angle_between_normals.unwrap() < 2f64.to_radians());
        let off = tangent_coincidence_check(&h, &[0.0, 1.0], 4f64.ln(), &[0.5, 2.0], 2f64.ln(), &[0.0, 4.0], &quick());
        assert!(matches!(off, Err(Error::HypothesisViolated(_))));
        let skipped = tangent_coincidence_check(&h, &[0.0, 1.0], 4f64.ln(), &[0.0, 4.0], 0.0, &[0.0, 4.0], &quick())
            .unwrap();
        assert!(skipped.angle_between_normals.is_none());
    }

    #[test]
    fn gauge_is_homogeneous_and_one_on_the_sphere() {
        let sq = Domain::open_box(Norm::euclidean(2), &[-1.0, -1.0], &[1.0, 1.0]).unwrap();
        let cfg = quick();
        let g = BallGauge::new(&sq, 0.5, &cfg).unwrap();
        let v = [0.3, 0.1];
        let a = g.value(&v).unwrap();
        let b = g.value(&scale(&v, 2.0)).unwrap();
        assert!((b - 2.0 * a).abs() <= 1e-6 * a);
        let t = trace_sphere(&sq, &[0.0, 0.0], 0.5, &[v.to_vec()], &cfg).unwrap();
        assert!((g.value(&t.boundary_points[0]).unwrap() - 1.0).abs() < 1e-9);
        assert_eq!(g.value(&[0.0, 0.0]), Err(Error::ZeroVector));
        assert_eq!(BallGauge::new(&Domain::unit_square(), 0.5, &cfg).unwrap_err(), Error::AsymmetricDomain);
    }
}

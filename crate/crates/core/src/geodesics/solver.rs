use std::cmp::Ordering;
use std::collections::BinaryHeap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use super::newton::newton;
use super::polyline::{equal_cost_points, interior_turning_angles, Polyline};
use crate::domains::{Domain, Shape};
use crate::error::{check_dim, Error, Result};
use crate::metrics::{j_unchecked, Weight};
use crate::vecops::{lerp, midpoint};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SolverConfig {
    /// Vertices of the coarsest polyline, endpoints included.
    pub initial_vertices: usize,
    /// Number of levels; each level after the first doubles the segment count.
    pub refinement_levels: usize,
    /// Newton iterations per level.
    pub max_iterations: usize,
    /// A sweep whose largest vertex move is below this fraction of the local
    /// boundary distance ends the relaxation.
    pub step_tolerance: f64,
    /// Relative length change between the last two levels for convergence.
    pub length_tolerance: f64,
    /// Seeds the jitter of the initial polyline.
    pub seed: u64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            initial_vertices: 9,
            refinement_levels: 5,
            max_iterations: 100,
            step_tolerance: 1e-9,
            length_tolerance: 1e-4,
            seed: 0,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        if self.initial_vertices < 2 || self.refinement_levels == 0 || self.max_iterations == 0 {
            return Err(Error::InvalidArgument(
                "solver needs initial_vertices >= 2 and positive levels and iterations".into(),
            ));
        }
        if !(self.step_tolerance > 0.0) || !(self.length_tolerance > 0.0) {
            return Err(Error::InvalidArgument("solver tolerances must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RefinementLevel {
    pub vertex_count: usize,
    pub length: f64,
    /// Largest interior turning angle, if the polyline has a corner.
    pub max_turning_angle: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GeodesicResult {
    pub path: Polyline,
    /// Weighted length of `path`.
    pub upper_bound: f64,
    /// Distance-ratio metric for the quasihyperbolic weight, 0 otherwise.
    pub lower_bound: f64,
    /// Total smoothing sweeps and Newton iterations.
    pub iterations: usize,
    pub converged: bool,
    pub refinement_history: Vec<RefinementLevel>,
    /// The endpoints were collinear through a puncture; the initial path
    /// chose one of the two symmetric sides.
    pub tie_broken: bool,
}

/// Initial polylines avoid segments that come closer to the boundary than
/// this fraction of the endpoint distances.
const STRAIGHT_INIT_FRACTION: f64 = 0.5;
/// Vertex jitter of the initial path, relative to the smaller of the
/// boundary distance and the vertex spacing.
const JITTER: f64 = 1e-3;
/// Newton stops on relative length decreases below this multiple of the
/// length tolerance.
const FLAT_DECREASE: f64 = 1e-7;
/// Finite-difference step of the vertex gradient, relative to the local scale.
const FD_STEP: f64 = 1e-5;
/// Gauss-Seidel sweeps before the Newton iteration of each level.
const SMOOTHING_SWEEPS: usize = 8;
/// Vertices are kept at least this fraction of the path scale from the boundary.
const DISTANCE_FLOOR: f64 = 1e-9;

struct Solver<'a> {
    weight: &'a Weight,
    config: &'a SolverConfig,
    floor: f64,
}

struct Relaxed {
    sweeps: usize,
    settled: bool,
}

impl Solver<'_> {
    fn cost(&self, a: &[f64], b: &[f64]) -> f64 {
        self.weight.segment_cost(a, b)
    }

    fn inside(&self, v: &[f64]) -> bool {
        self.weight.domain().boundary_distance(v) > self.floor
    }

    /// Gauss-Seidel descent on the interior vertices.
    fn relax(&self, v: &mut [Vec<f64>], max_sweeps: usize) -> Relaxed {
        let n = v.len();
        if n < 3 {
            return Relaxed { sweeps: 0, settled: true };
        }
        let mut costs: Vec<f64> = v.windows(2).map(|w| self.cost(&w[0], &w[1])).collect();
        for sweep in 0..max_sweeps {
            let mut largest = 0.0f64;
            let before: f64 = costs.iter().sum();
            if sweep % 2 == 0 {
                for i in 1..n - 1 {
                    largest = largest.max(self.relax_vertex(v, &mut costs, i));
                }
            } else {
                for i in (1..n - 1).rev() {
                    largest = largest.max(self.relax_vertex(v, &mut costs, i));
                }
            }
            let after: f64 = costs.iter().sum();
            if largest < self.config.step_tolerance || before - after <= 1e-15 * after {
                return Relaxed { sweeps: sweep + 1, settled: true };
            }
        }
        Relaxed { sweeps: max_sweeps, settled: false }
    }

    /// One preconditioned, backtracked gradient step on vertex `i`; returns
    /// the move relative to the local boundary distance.
    fn relax_vertex(&self, v: &mut [Vec<f64>], costs: &mut [f64], i: usize) -> f64 {
        let domain = self.weight.domain();
        let norm = domain.norm();
        let (a, b) = (&v[i - 1], &v[i + 1]);
        let p = &v[i];
        let f0 = costs[i - 1] + costs[i];
        if !f0.is_finite() {
            return 0.0;
        }
        let d = domain.boundary_distance(p);
        let (h1, h2) = (norm.dist(a, p), norm.dist(p, b));
        let scale = d.min(h1).min(h2);
        if !(scale > 0.0) {
            return 0.0;
        }
        let hs = FD_STEP * scale;
        let dim = p.len();
        let mut q = p.clone();
        let mut grad = vec![0.0; dim];
        for k in 0..dim {
            q[k] = p[k] + hs;
            let fp = self.cost(a, &q) + self.cost(&q, b);
            q[k] = p[k] - hs;
            let fm = self.cost(a, &q) + self.cost(&q, b);
            q[k] = p[k];
            if !(fp.is_finite() && fm.is_finite()) {
                return 0.0;
            }
            grad[k] = (fp - fm) / (2.0 * hs);
        }
        let alpha = 1.0 / (self.weight.at(p) * (1.0 / h1 + 1.0 / h2));
        let mut t = 1.0;
        for _ in 0..40 {
            for k in 0..dim {
                q[k] = p[k] - t * alpha * grad[k];
            }
            if self.inside(&q) {
                let (c1, c2) = (self.cost(a, &q), self.cost(&q, b));
                if c1 + c2 < f0 {
                    let moved = norm.dist(&q, p) / d;
                    costs[i - 1] = c1;
                    costs[i] = c2;
                    v[i] = q;
                    return moved;
                }
            }
            t *= 0.5;
        }
        0.0
    }

    /// Smoothing sweeps followed by damped Newton.
    fn level(&self, v: Vec<Vec<f64>>) -> (Vec<Vec<f64>>, Relaxed) {
        let mut v = v;
        let smooth = self.relax(&mut v, SMOOTHING_SWEEPS);
        let polish = newton(
            self.weight,
            &mut v,
            self.floor,
            self.config.max_iterations,
            self.config.step_tolerance,
            FLAT_DECREASE * self.config.length_tolerance,
        );
        (v, Relaxed { sweeps: smooth.sweeps + polish.iterations, settled: polish.settled })
    }

    fn record(&self, v: &[Vec<f64>]) -> RefinementLevel {
        let angles = interior_turning_angles(v);
        RefinementLevel {
            vertex_count: v.len(),
            length: path_cost(self.weight, v),
            max_turning_angle: angles.into_iter().reduce(f64::max),
        }
    }
}

fn path_cost(weight: &Weight, v: &[Vec<f64>]) -> f64 {
    v.windows(2).map(|w| weight.segment_cost(&w[0], &w[1])).sum()
}

fn double(v: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let mut out = Vec::with_capacity(2 * v.len() - 1);
    for w in v.windows(2) {
        out.push(w[0].clone());
        out.push(midpoint(&w[0], &w[1]));
    }
    out.push(v.last().unwrap().clone());
    out
}

#[derive(Clone, Copy, PartialEq)]
struct Entry(f64, usize);

impl Eq for Entry {}
impl PartialOrd for Entry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Entry {
    fn cmp(&self, other: &Self) -> Ordering {
        // min-heap on the tentative distance
        other.0.total_cmp(&self.0).then(other.1.cmp(&self.1))
    }
}

fn grid_side(dim: usize) -> usize {
    match dim {
        2 => 65,
        3 => 21,
        4 => 11,
        _ => 5,
    }
}

/// Shortest path on a uniform grid graph around the endpoints, with edge
/// weights `w(midpoint) * length`.
fn grid_path(weight: &Weight, x: &[f64], y: &[f64]) -> Option<Vec<Vec<f64>>> {
    let domain = weight.domain();
    let dim = x.len();
    let m = grid_side(dim);
    let span = domain.norm().dist(x, y);
    let pad = 0.6 * span.max(domain.boundary_distance(x).min(domain.boundary_distance(y)));
    let lo: Vec<f64> = (0..dim).map(|k| x[k].min(y[k]) - pad).collect();
    let hi: Vec<f64> = (0..dim).map(|k| x[k].max(y[k]) + pad).collect();
    let h: Vec<f64> = (0..dim).map(|k| (hi[k] - lo[k]) / (m - 1) as f64).collect();
    let count = m.pow(dim as u32);
    let coords = |mut idx: usize| -> Vec<usize> {
        let mut c = vec![0; dim];
        for ck in c.iter_mut() {
            *ck = idx % m;
            idx /= m;
        }
        c
    };
    let point = |c: &[usize]| -> Vec<f64> { (0..dim).map(|k| lo[k] + c[k] as f64 * h[k]).collect() };
    let index = |c: &[usize]| -> usize { c.iter().rev().fold(0, |acc, &ck| acc * m + ck) };
    let edge = |a: &[f64], b: &[f64]| -> Option<f64> {
        if domain.segment_min_distance(a, b) <= 0.0 {
            return None;
        }
        let w = weight.at(&midpoint(a, b));
        w.is_finite().then(|| w * domain.norm().dist(a, b))
    };
    // the endpoints are extra nodes joined to the corners of their cells
    let (src, dst) = (count, count + 1);
    let cell_corners = |p: &[f64]| -> Vec<usize> {
        let base: Vec<usize> = (0..dim).map(|k| (((p[k] - lo[k]) / h[k]).floor() as usize).min(m - 2)).collect();
        (0..1usize << dim)
            .map(|mask| {
                let c: Vec<usize> = (0..dim).map(|k| base[k] + ((mask >> k) & 1)).collect();
                index(&c)
            })
            .collect()
    };
    let dst_corners = cell_corners(y);
    let mut dist = vec![f64::INFINITY; count + 2];
    let mut prev = vec![usize::MAX; count + 2];
    let mut heap = BinaryHeap::new();
    dist[src] = 0.0;
    heap.push(Entry(0.0, src));
    let offsets: Vec<Vec<i64>> = (0..3usize.pow(dim as u32))
        .map(|mut o| {
            (0..dim)
                .map(|_| {
                    let r = (o % 3) as i64 - 1;
                    o /= 3;
                    r
                })
                .collect()
        })
        .filter(|o: &Vec<i64>| o.iter().any(|&r| r != 0))
        .collect();
    while let Some(Entry(du, u)) = heap.pop() {
        if du > dist[u] {
            continue;
        }
        if u == dst {
            break;
        }
        let upoint = if u == src { x.to_vec() } else { point(&coords(u)) };
        let mut relax_to = |vtx: usize, vpoint: &[f64], heap: &mut BinaryHeap<Entry>| {
            if let Some(c) = edge(&upoint, vpoint) {
                let nd = du + c;
                if nd < dist[vtx] {
                    dist[vtx] = nd;
                    prev[vtx] = u;
                    heap.push(Entry(nd, vtx));
                }
            }
        };
        if u == src {
            for c in cell_corners(x) {
                relax_to(c, &point(&coords(c)), &mut heap);
            }
            continue;
        }
        let uc = coords(u);
        for o in &offsets {
            let mut c = uc.clone();
            let mut ok = true;
            for k in 0..dim {
                let nk = c[k] as i64 + o[k];
                if nk < 0 || nk >= m as i64 {
                    ok = false;
                    break;
                }
                c[k] = nk as usize;
            }
            if ok {
                relax_to(index(&c), &point(&c), &mut heap);
            }
        }
        if dst_corners.contains(&u) {
            relax_to(dst, y, &mut heap);
        }
    }
    if !dist[dst].is_finite() {
        return None;
    }
    let mut nodes = vec![dst];
    while *nodes.last().unwrap() != src {
        nodes.push(prev[*nodes.last().unwrap()]);
    }
    nodes.reverse();
    let mut out: Vec<Vec<f64>> = nodes
        .into_iter()
        .map(|n| match n {
            n if n == src => x.to_vec(),
            n if n == dst => y.to_vec(),
            n => point(&coords(n)),
        })
        .collect();
    out.dedup();
    Some(out)
}

fn initial_path(weight: &Weight, x: &[f64], y: &[f64], vertices: usize) -> Result<(Vec<Vec<f64>>, bool)> {
    let domain = weight.domain();
    let ends = domain.boundary_distance(x).min(domain.boundary_distance(y));
    let clearance = domain.segment_min_distance(x, y);
    let base = if clearance >= STRAIGHT_INIT_FRACTION * ends {
        vec![x.to_vec(), y.to_vec()]
    } else {
        grid_path(weight, x, y).ok_or(Error::NoPath)?
    };
    let tie_broken = matches!(domain.shape(), Shape::Punctured { .. }) && clearance <= 1e-12 * domain.norm().dist(x, y);
    let costs: Vec<f64> = base.windows(2).map(|w| weight.segment_cost(&w[0], &w[1])).collect();
    if costs.iter().any(|c| !c.is_finite()) {
        return Err(Error::NoPath);
    }
    Ok((equal_cost_points(weight, &base, &costs, vertices), tie_broken))
}

fn jitter(domain: &Domain, v: &mut [Vec<f64>], seed: u64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = v.len();
    let spacing = domain.norm().dist(&v[0], &v[n - 1]) / (n - 1) as f64;
    for p in v.iter_mut().take(n - 1).skip(1) {
        let d = domain.boundary_distance(p);
        let amp = JITTER * d.min(spacing);
        let q: Vec<f64> = p.iter().map(|c| c + amp * rng.sample::<f64, _>(StandardNormal)).collect();
        if domain.boundary_distance(&q) > 0.5 * d {
            *p = q;
        }
    }
}

fn prepare(weight: &Weight, x: &[f64], y: &[f64], config: &SolverConfig) -> Result<f64> {
    config.validate()?;
    let domain = weight.domain();
    check_dim(domain.dim(), x)?;
    check_dim(domain.dim(), y)?;
    if !domain.contains(x) || !domain.contains(y) {
        return Err(Error::OutsideDomain);
    }
    Ok(if weight.is_quasihyperbolic() { j_unchecked(domain, x, y) } else { 0.0 })
}

fn trivial(weight: &Weight, x: &[f64]) -> Result<GeodesicResult> {
    let path = Polyline::new(weight, vec![x.to_vec()])?;
    Ok(GeodesicResult {
        path,
        upper_bound: 0.0,
        lower_bound: 0.0,
        iterations: 0,
        converged: true,
        refinement_history: vec![RefinementLevel { vertex_count: 1, length: 0.0, max_turning_angle: None }],
        tie_broken: false,
    })
}

fn finish(
    weight: &Weight,
    mut v: Vec<Vec<f64>>,
    lower: f64,
    iterations: usize,
    converged: bool,
    history: Vec<RefinementLevel>,
    tie_broken: bool,
) -> Result<GeodesicResult> {
    v.dedup();
    let path = Polyline::new(weight, v)?;
    let upper_bound = path.length();
    Ok(GeodesicResult { path, upper_bound, lower_bound: lower, iterations, converged, refinement_history: history, tie_broken })
}

/// Approximates a weighted geodesic from `x` to `y` by a relaxed polyline.
///
/// The initial polyline is the straight segment, or a grid shortest path when
/// the segment passes close to the boundary. Each level relaxes the interior
/// vertices by Gauss-Seidel descent and then doubles the vertex count.
pub fn solve_geodesic(weight: &Weight, x: &[f64], y: &[f64], config: &SolverConfig) -> Result<GeodesicResult> {
    let lower = prepare(weight, x, y, config)?;
    if x == y {
        return trivial(weight, x);
    }
    let domain = weight.domain();
    let solver = Solver { weight, config, floor: DISTANCE_FLOOR * domain.norm().dist(x, y).min(1.0) };
    let (mut v, tie_broken) = initial_path(weight, x, y, config.initial_vertices)?;
    jitter(domain, &mut v, config.seed);
    let mut history = Vec::with_capacity(config.refinement_levels);
    let mut iterations = 0;
    let mut settled = true;
    for level in 0..config.refinement_levels {
        if level > 0 {
            v = double(&v);
        }
        let (next, stats) = solver.level(v);
        v = next;
        iterations += stats.sweeps;
        settled = stats.settled;
        history.push(solver.record(&v));
    }
    let converged = match history.as_slice() {
        [.., a, b] => (a.length - b.length).abs() <= config.length_tolerance * b.length,
        _ => settled,
    };
    finish(weight, v, lower, iterations, converged, history, tie_broken)
}

/// Re-solves a geodesic between new endpoints starting from a nearby solution,
/// at the resolution of `guess` (one relaxation level, no doubling).
///
/// The displacement of the endpoints is spread linearly over the guess; if
/// that leaves the domain a cold solve is done instead.
pub fn solve_geodesic_from(
    weight: &Weight,
    guess: &Polyline,
    x: &[f64],
    y: &[f64],
    config: &SolverConfig,
) -> Result<GeodesicResult> {
    let lower = prepare(weight, x, y, config)?;
    if x == y {
        return trivial(weight, x);
    }
    if guess.vertex_count() < 2 || !(guess.length() > 0.0 && guess.length().is_finite()) {
        return solve_geodesic(weight, x, y, config);
    }
    let dx: Vec<f64> = x.iter().zip(guess.start()).map(|(a, b)| a - b).collect();
    let dy: Vec<f64> = y.iter().zip(guess.end()).map(|(a, b)| a - b).collect();
    let total = guess.length();
    let v: Vec<Vec<f64>> = guess
        .vertices()
        .iter()
        .zip(guess.cumulative_lengths())
        .map(|(p, c)| {
            let s = c / total;
            let shift = lerp(&dx, &dy, s);
            p.iter().zip(&shift).map(|(a, b)| a + b).collect()
        })
        .collect();
    let domain = weight.domain();
    let solver = Solver { weight, config, floor: DISTANCE_FLOOR * domain.norm().dist(x, y).min(1.0) };
    if !v.iter().all(|p| solver.inside(p)) || path_cost(weight, &v).is_infinite() {
        return solve_geodesic(weight, x, y, config);
    }
    let (v, stats) = solver.level(v);
    let history = vec![solver.record(&v)];
    finish(weight, v, lower, stats.sweeps, stats.settled, history, false)
}

/// Upper and lower bounds `(upper, lower)` for the quasihyperbolic distance.
pub fn qh_distance(domain: &Domain, x: &[f64], y: &[f64], config: &SolverConfig) -> Result<(f64, f64)> {
    let weight = Weight::quasihyperbolic(domain.clone());
    let r = solve_geodesic(&weight, x, y, config)?;
    Ok((r.upper_bound, r.lower_bound))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn half_plane_oracle(x: &[f64], y: &[f64]) -> f64 {
        // asinh form of the arccosh closed form; stable for nearby points
        let d = (x[0] - y[0]).hypot(x[1] - y[1]);
        2.0 * (d / (2.0 * (x[1] * y[1]).sqrt())).asinh()
    }

    #[test]
    fn vertical_pair() {
        let w = Weight::quasihyperbolic(Domain::upper_half_plane());
        let r = solve_geodesic(&w, &[0.0, 1.0], &[0.0, 4.0], &SolverConfig::default()).unwrap();
        assert!((r.upper_bound / 4f64.ln() - 1.0).abs() < 5e-3);
        assert_abs_diff_eq!(r.lower_bound, 4f64.ln(), epsilon = 1e-15);
        assert!(r.path.vertices().iter().all(|v| v[0].abs() < 1e-3));
        assert_eq!(r.path.start(), &[0.0, 1.0]);
        assert_eq!(r.path.end(), &[0.0, 4.0]);
    }

    #[test]
    fn horizontal_pair() {
        let w = Weight::quasihyperbolic(Domain::upper_half_plane());
        let r = solve_geodesic(&w, &[-1.0, 1.0], &[1.0, 1.0], &SolverConfig::default()).unwrap();
        let k = half_plane_oracle(&[-1.0, 1.0], &[1.0, 1.0]);
        assert!(r.upper_bound >= k - 1e-12);
        assert!(r.upper_bound <= k * 1.01, "{} vs {k}", r.upper_bound);
        assert!(r.converged);
        assert_abs_diff_eq!(r.lower_bound, 3f64.ln(), epsilon = 1e-15);
        for w in r.refinement_history.windows(2) {
            assert!(w[1].length <= w[0].length + 1e-9);
        }
    }

    #[test]
    fn coincident_endpoints() {
        let w = Weight::quasihyperbolic(Domain::upper_half_plane());
        let r = solve_geodesic(&w, &[0.5, 1.0], &[0.5, 1.0], &SolverConfig::default()).unwrap();
        assert_eq!(r.path.vertex_count(), 1);
        assert_eq!((r.upper_bound, r.lower_bound), (0.0, 0.0));
        assert_eq!(qh_distance(&Domain::unit_square(), &[0.5, 0.5], &[0.5, 0.5], &SolverConfig::default()).unwrap(), (0.0, 0.0));
    }

    #[test]
    fn punctured_pair_goes_around() {
        let w = Weight::quasihyperbolic(Domain::punctured_plane([0.0, 0.0]));
        let (x, y) = ([1.0, 0.0], [-2.0, 0.0]);
        let r = solve_geodesic(&w, &x, &y, &SolverConfig::default()).unwrap();
        let k = (std::f64::consts::PI.powi(2) + 2f64.ln().powi(2)).sqrt();
        assert!(r.tie_broken);
        assert!(r.upper_bound >= k - 1e-12);
        assert!(r.upper_bound <= k * 1.01, "{} vs {k}", r.upper_bound);
    }

    #[test]
    fn punctured_spiral() {
        let w = Weight::quasihyperbolic(Domain::punctured_plane([0.0, 0.0]));
        let (x, y) = ([1.0, 0.0], [0.0, 3.0]);
        let r = solve_geodesic(&w, &x, &y, &SolverConfig::default()).unwrap();
        let k = (std::f64::consts::FRAC_PI_2.powi(2) + 3f64.ln().powi(2)).sqrt();
        assert!(r.upper_bound >= k - 1e-12);
        assert!(r.upper_bound <= k * 1.005, "{} vs {k}", r.upper_bound);
        assert!(!r.tie_broken);
    }

    #[test]
    fn short_pairs_stay_short() {
        let w = Weight::quasihyperbolic(Domain::upper_half_plane());
        let (x, y) = ([0.0, 1.0], [1e-6, 1.0]);
        let r = solve_geodesic(&w, &x, &y, &SolverConfig::default()).unwrap();
        let k = half_plane_oracle(&x, &y);
        assert!(r.upper_bound >= k * (1.0 - 1e-12) && r.upper_bound <= k * (1.0 + 1e-9), "{}", r.upper_bound);
    }

    #[test]
    fn endpoint_outside() {
        let w = Weight::quasihyperbolic(Domain::upper_half_plane());
        assert_eq!(solve_geodesic(&w, &[0.0, -1.0], &[0.0, 1.0], &SolverConfig::default()).unwrap_err(), Error::OutsideDomain);
    }

    #[test]
    fn warm_start_matches_cold_solve() {
        let w = Weight::quasihyperbolic(Domain::upper_half_plane());
        let cfg = SolverConfig::default();
        let cold = solve_geodesic(&w, &[-1.0, 1.0], &[1.0, 1.0], &cfg).unwrap();
        let warm = solve_geodesic_from(&w, &cold.path, &[-1.0, 1.0], &[1.02, 1.01], &cfg).unwrap();
        let k = half_plane_oracle(&[-1.0, 1.0], &[1.02, 1.01]);
        assert!(warm.upper_bound >= k - 1e-12);
        assert!((warm.upper_bound - k) / k < 1e-3);
        assert_eq!(warm.path.vertex_count(), cold.path.vertex_count());
    }

    #[test]
    fn config_validation() {
        let bad = SolverConfig { initial_vertices: 1, ..SolverConfig::default() };
        assert!(bad.validate().is_err());
        let bad = SolverConfig { length_tolerance: 0.0, ..SolverConfig::default() };
        assert!(bad.validate().is_err());
    }
}

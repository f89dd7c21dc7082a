//! Finite-dimensional normed spaces.
//!
//! Provides (weighted) p-norms on R^n together with their dual norms and
//! norming functionals, and derivative-free estimators for the modulus of
//! convexity and the modulus of smoothness of the unit ball.
//!
//! Both estimators are sided: the convexity modulus is an infimum, so any
//! feasible witness pair gives an upper estimate; the smoothness modulus is a
//! supremum, so the reported value is a lower estimate.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{check_dim, Error, Result};
use crate::roots::{bisect, golden_min};
use crate::vecops::{add, dot, scale, sub};

/// Anything that evaluates like a norm on R^n.
///
/// Implemented by [`Norm`] and by the Minkowski gauge of a quasihyperbolic
/// ball, so the line-distance and LUR probes apply to both.
pub trait NormFunction {
    fn dim(&self) -> usize;
    fn norm_of(&self, v: &[f64]) -> f64;
}

/// A (diagonally weighted) p-norm `||v|| = ||(w_1 v_1, ..., w_n v_n)||_p`.
///
/// `p = f64::INFINITY` selects the max-norm.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Norm {
    dim: usize,
    p: f64,
    weights: Option<Vec<f64>>,
}

impl Norm {
    pub fn new(dim: usize, p: f64) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidArgument("norm dimension must be positive".into()));
        }
        if p.is_nan() || p < 1.0 {
            return Err(Error::InvalidArgument(format!("p must lie in [1, inf], got {p}")));
        }
        Ok(Self { dim, p, weights: None })
    }

    pub fn weighted(dim: usize, p: f64, weights: Vec<f64>) -> Result<Self> {
        let mut norm = Self::new(dim, p)?;
        check_dim(dim, &weights)?;
        if weights.iter().any(|w| !(w.is_finite() && *w > 0.0)) {
            return Err(Error::InvalidArgument("norm weights must be positive and finite".into()));
        }
        norm.weights = Some(weights);
        Ok(norm)
    }

    pub fn euclidean(dim: usize) -> Self {
        Self { dim, p: 2.0, weights: None }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn exponent(&self) -> f64 {
        self.p
    }

    pub fn weights(&self) -> Option<&[f64]> {
        self.weights.as_deref()
    }

    /// Hoelder conjugate `q` with `1/p + 1/q = 1`.
    pub fn conjugate_exponent(&self) -> f64 {
        if self.p == 1.0 {
            f64::INFINITY
        } else if self.p.is_infinite() {
            1.0
        } else {
            self.p / (self.p - 1.0)
        }
    }

    /// True for unweighted p = 2.
    pub fn is_euclidean(&self) -> bool {
        self.p == 2.0 && self.weights.as_ref().is_none_or(|w| w.iter().all(|&x| x == 1.0))
    }

    /// Strictly convex (and smooth) exactly when `1 < p < inf`.
    pub fn is_strictly_convex(&self) -> bool {
        self.p > 1.0 && self.p.is_finite()
    }

    /// Checked evaluation.
    pub fn eval(&self, v: &[f64]) -> Result<f64> {
        check_dim(self.dim, v)?;
        Ok(self.value(v))
    }

    /// Unchecked evaluation; `v` must have length `dim`.
    #[inline]
    pub fn value(&self, v: &[f64]) -> f64 {
        debug_assert_eq!(v.len(), self.dim);
        match &self.weights {
            None => p_norm(v.iter().copied(), self.p),
            Some(w) => p_norm(v.iter().zip(w).map(|(x, w)| x * w), self.p),
        }
    }

    /// Norm of `a - b`.
    #[inline]
    pub fn dist(&self, a: &[f64], b: &[f64]) -> f64 {
        match &self.weights {
            None => p_norm(a.iter().zip(b).map(|(x, y)| x - y), self.p),
            Some(w) => p_norm(a.iter().zip(b).zip(w).map(|((x, y), w)| (x - y) * w), self.p),
        }
    }

    /// Dual norm `sup { a.v : ||v|| <= 1 } = ||(a_i / w_i)||_q`.
    pub fn dual_value(&self, a: &[f64]) -> f64 {
        let q = self.conjugate_exponent();
        match &self.weights {
            None => p_norm(a.iter().copied(), q),
            Some(w) => p_norm(a.iter().zip(w).map(|(x, w)| x / w), q),
        }
    }
}

impl NormFunction for Norm {
    fn dim(&self) -> usize {
        self.dim
    }

    fn norm_of(&self, v: &[f64]) -> f64 {
        self.value(v)
    }
}

#[inline]
fn p_norm<I>(it: I, p: f64) -> f64
where
    I: Iterator<Item = f64> + Clone,
{
    if p == 2.0 {
        it.map(|x| x * x).sum::<f64>().sqrt()
    } else if p == 1.0 {
        it.map(f64::abs).sum()
    } else if p.is_infinite() {
        it.fold(0.0, |m, x| m.max(x.abs()))
    } else {
        let m = it.clone().fold(0.0, |m: f64, x| m.max(x.abs()));
        if m == 0.0 || !m.is_finite() {
            return m;
        }
        m * it.map(|x| (x.abs() / m).powf(p)).sum::<f64>().powf(1.0 / p)
    }
}

/// Checked norm evaluation.
pub fn eval_norm(norm: &Norm, v: &[f64]) -> Result<f64> {
    norm.eval(v)
}

/// A linear functional on R^n acting by the dot product.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Functional {
    pub coefficients: Vec<f64>,
    pub dual_norm_value: f64,
}

impl Functional {
    pub fn new(norm: &Norm, coefficients: Vec<f64>) -> Self {
        let dual_norm_value = norm.dual_value(&coefficients);
        Self { coefficients, dual_norm_value }
    }

    pub fn apply(&self, v: &[f64]) -> f64 {
        dot(&self.coefficients, v)
    }
}

/// A norming functional of `v`: `f(v) = ||v||` and `||f||_* = 1`.
///
/// For `1 < p < inf` this is the gradient of the norm at `v`. For `p = 1`
/// and `p = inf` the subdifferential is a face of the dual ball and the
/// lexicographically smallest extreme point of it is returned.
pub fn norming_functional(norm: &Norm, v: &[f64]) -> Result<Functional> {
    check_dim(norm.dim, v)?;
    let nv = norm.value(v);
    if nv == 0.0 {
        return Err(Error::ZeroVector);
    }
    let ones = vec![1.0; norm.dim];
    let w = norm.weights.as_deref().unwrap_or(&ones);
    let u: Vec<f64> = v.iter().zip(w).map(|(x, w)| x * w).collect();
    let coefficients = if norm.p == 1.0 {
        u.iter()
            .zip(w)
            .map(|(ui, wi)| if *ui > 0.0 { *wi } else { -*wi })
            .collect()
    } else if norm.p.is_infinite() {
        let m = u.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        let mut best: Option<Vec<f64>> = None;
        for (i, ui) in u.iter().enumerate() {
            if ui.abs() >= m * (1.0 - 1e-12) {
                let mut cand = vec![0.0; norm.dim];
                cand[i] = ui.signum() * w[i];
                best = match best {
                    Some(b) if lex_le(&b, &cand) => Some(b),
                    _ => Some(cand),
                };
            }
        }
        best.expect("max-norm attains its maximum")
    } else {
        let p = norm.p;
        let nu = p_norm(u.iter().copied(), p);
        u.iter()
            .zip(w)
            .map(|(ui, wi)| wi * ui.signum() * (ui.abs() / nu).powf(p - 1.0))
            .collect()
    };
    Ok(Functional::new(norm, coefficients))
}

fn lex_le(a: &[f64], b: &[f64]) -> bool {
    for (x, y) in a.iter().zip(b) {
        if x < y {
            return true;
        }
        if x > y {
            return false;
        }
    }
    true
}

/// Which modulus an estimate belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ModulusKind {
    Convexity,
    Smoothness,
}

/// A budgeted estimate of a modulus together with the witness attaining it.
///
/// The witness is a pair of unit vectors `(x, y)`. For the convexity modulus
/// they satisfy `||x - y|| = argument`; for the smoothness modulus the
/// evaluated pair is `(x, argument * y)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModulusEstimate {
    pub kind: ModulusKind,
    pub argument: f64,
    pub value: f64,
    pub witness: (Vec<f64>, Vec<f64>),
    pub budget: usize,
    pub seed: u64,
}

impl ModulusEstimate {
    /// Recomputes the modulus objective on the stored witness.
    pub fn reevaluate(&self, norm: &Norm) -> f64 {
        let (x, y) = &self.witness;
        match self.kind {
            ModulusKind::Convexity => convexity_objective(norm, x, y),
            ModulusKind::Smoothness => smoothness_objective(norm, x, &scale(y, self.argument)),
        }
    }
}

fn convexity_objective(norm: &Norm, x: &[f64], y: &[f64]) -> f64 {
    1.0 - norm.value(&add(x, y)) / 2.0
}

fn smoothness_objective(norm: &Norm, x: &[f64], y: &[f64]) -> f64 {
    (norm.value(&add(x, y)) + norm.value(&sub(x, y))) / 2.0 - 1.0
}

fn normalize(norm: &Norm, v: &[f64]) -> Option<Vec<f64>> {
    let n = norm.value(v);
    (n > 0.0 && n.is_finite()).then(|| scale(v, 1.0 / n))
}

/// Unit pair `(x, y)` with `||x - y|| = eps`, where `y` is found on the arc
/// of the unit sphere from `x` towards the direction `u`.
fn chord_pair(norm: &Norm, x_raw: &[f64], u_raw: &[f64], eps: f64) -> Option<(Vec<f64>, Vec<f64>)> {
    let x = normalize(norm, x_raw)?;
    let u = normalize(norm, u_raw)?;
    let far = norm.dist(&x, &u);
    if far < eps || norm.value(&add(&x, &u)) < 1e-12 {
        return None;
    }
    let point = |tau: f64| -> Option<Vec<f64>> {
        let mix: Vec<f64> = x.iter().zip(&u).map(|(a, b)| (1.0 - tau) * a + tau * b).collect();
        normalize(norm, &mix)
    };
    if far == eps {
        return Some((x, u));
    }
    // the radial projection of the chord [x, u] onto the sphere is monotone
    let gap = |tau: f64| match point(tau) {
        Some(y) => norm.dist(&x, &y) - eps,
        None => f64::NAN,
    };
    if gap(1.0).is_nan() {
        return None;
    }
    let tau = bisect(gap, 0.0, 1.0, 1e-16, 80);
    let y = point(tau)?;
    // polish the chord length so that the constraint holds to rounding
    if (norm.dist(&x, &y) - eps).abs() > 1e-12 * eps.max(1.0) {
        return None;
    }
    Some((x, y))
}

fn structured_directions(dim: usize) -> Vec<Vec<f64>> {
    let mut dirs = Vec::new();
    for i in 0..dim {
        for s in [1.0, -1.0] {
            let mut e = vec![0.0; dim];
            e[i] = s;
            dirs.push(e);
        }
    }
    for i in 0..dim {
        for j in (i + 1)..dim {
            for (si, sj) in [(1.0, 1.0), (1.0, -1.0), (-1.0, 1.0), (-1.0, -1.0)] {
                let mut e = vec![0.0; dim];
                e[i] = si;
                e[j] = sj;
                dirs.push(e);
            }
        }
    }
    dirs
}

fn gaussian(rng: &mut ChaCha8Rng, dim: usize) -> Vec<f64> {
    (0..dim).map(|_| rng.sample::<f64, _>(StandardNormal)).collect()
}

/// Generic multi-start search: `eval` maps raw parameters (two vectors) to
/// an objective to be minimized together with the feasible witness.
/// Maps raw parameters to `(objective, x, y)`, or `None` when infeasible.
type Objective<'a> = Box<dyn FnMut(&[f64], &[f64]) -> Option<(f64, Vec<f64>, Vec<f64>)> + 'a>;

struct Search<'a> {
    dim: usize,
    budget: usize,
    rng: ChaCha8Rng,
    eval: Objective<'a>,
}

struct Candidate {
    objective: f64,
    params: (Vec<f64>, Vec<f64>),
    witness: (Vec<f64>, Vec<f64>),
}

const POLISH_STARTS: usize = 8;

impl Search<'_> {
    fn run(mut self, extra: &[(Vec<f64>, Vec<f64>)]) -> Option<Candidate> {
        let global = (self.budget * 4 / 5).max(1);
        let mut pool: Vec<Candidate> = Vec::new();
        let mut spent = 0usize;
        let structured = structured_directions(self.dim);
        let mut starts: Vec<(Vec<f64>, Vec<f64>)> = extra.to_vec();
        for a in &structured {
            for b in &structured {
                starts.push((a.clone(), b.clone()));
            }
        }
        for (a, b) in starts.into_iter().take(global / 2) {
            spent += 1;
            self.consider(&mut pool, a, b);
        }
        while spent < global {
            spent += 1;
            let a = gaussian(&mut self.rng, self.dim);
            let b = gaussian(&mut self.rng, self.dim);
            self.consider(&mut pool, a, b);
        }
        pool.sort_by(|p, q| p.objective.total_cmp(&q.objective));
        pool.truncate(POLISH_STARTS);
        let remaining = self.budget.saturating_sub(spent);
        let per_start = remaining / pool.len().max(1);
        let mut polished = Vec::with_capacity(pool.len());
        for cand in pool {
            polished.push(self.polish(cand, per_start));
        }
        polished.into_iter().min_by(|p, q| p.objective.total_cmp(&q.objective))
    }

    fn consider(&mut self, pool: &mut Vec<Candidate>, a: Vec<f64>, b: Vec<f64>) {
        if let Some((objective, wx, wy)) = (self.eval)(&a, &b) {
            let worst = pool.iter().map(|c| c.objective).fold(f64::NEG_INFINITY, f64::max);
            if pool.len() < POLISH_STARTS * 4 || objective < worst {
                pool.push(Candidate { objective, params: (a, b), witness: (wx, wy) });
                if pool.len() > POLISH_STARTS * 8 {
                    pool.sort_by(|p, q| p.objective.total_cmp(&q.objective));
                    pool.truncate(POLISH_STARTS * 4);
                }
            }
        }
    }

    /// (1+1) evolution strategy with step-size adaptation.
    fn polish(&mut self, mut best: Candidate, iterations: usize) -> Candidate {
        let scale0 = |v: &[f64]| v.iter().map(|x| x * x).sum::<f64>().sqrt().max(1e-300);
        let mut sigma = 0.05;
        for _ in 0..iterations {
            let sa = scale0(&best.params.0) * sigma;
            let sb = scale0(&best.params.1) * sigma;
            let a: Vec<f64> = best.params.0.iter().map(|x| x + sa * self.rng.sample::<f64, _>(StandardNormal)).collect();
            let b: Vec<f64> = best.params.1.iter().map(|x| x + sb * self.rng.sample::<f64, _>(StandardNormal)).collect();
            match (self.eval)(&a, &b) {
                Some((objective, wx, wy)) if objective < best.objective => {
                    best = Candidate { objective, params: (a, b), witness: (wx, wy) };
                    sigma = (sigma * 2.0).min(0.5);
                }
                _ => sigma = (sigma * 0.84).max(1e-14),
            }
        }
        best
    }
}

/// Estimates the modulus of convexity
/// `delta(eps) = inf { 1 - ||x + y|| / 2 : ||x|| = ||y|| = 1, ||x - y|| = eps }`.
///
/// The returned value is attained by the witness, hence an upper estimate of
/// the infimum. `budget` counts candidate pairs.
pub fn modulus_convexity(norm: &Norm, eps: f64, budget: usize, seed: u64) -> Result<ModulusEstimate> {
    if !(eps > 0.0 && eps <= 2.0) {
        return Err(Error::InvalidArgument(format!("epsilon must lie in (0, 2], got {eps}")));
    }
    if budget == 0 {
        return Err(Error::InvalidArgument("budget must be positive".into()));
    }
    let antipodal = eps == 2.0;
    let eval = move |a: &[f64], b: &[f64]| -> Option<(f64, Vec<f64>, Vec<f64>)> {
        let mut best = chord_pair(norm, a, b, eps).map(|(x, y)| (convexity_objective(norm, &x, &y), x, y));
        if antipodal {
            if let Some(x) = normalize(norm, a) {
                let y = scale(&x, -1.0);
                let v = convexity_objective(norm, &x, &y);
                if best.as_ref().is_none_or(|b| v < b.0) {
                    best = Some((v, x, y));
                }
            }
        }
        best
    };
    let search = Search {
        dim: norm.dim,
        budget,
        rng: ChaCha8Rng::seed_from_u64(seed),
        eval: Box::new(eval),
    };
    let best = search
        .run(&[])
        .ok_or_else(|| Error::Degenerate("no feasible pair found within budget".into()))?;
    Ok(ModulusEstimate {
        kind: ModulusKind::Convexity,
        argument: eps,
        value: best.objective,
        witness: best.witness,
        budget,
        seed,
    })
}

/// Estimates the modulus of smoothness
/// `rho(tau) = sup { (||x + y|| + ||x - y||) / 2 - 1 : ||x|| = 1, ||y|| = tau }`.
///
/// The returned value is attained by the witness, hence a lower estimate of
/// the supremum.
pub fn modulus_smoothness(norm: &Norm, tau: f64, budget: usize, seed: u64) -> Result<ModulusEstimate> {
    if !(tau > 0.0 && tau.is_finite()) {
        return Err(Error::InvalidArgument(format!("tau must be positive, got {tau}")));
    }
    if budget == 0 {
        return Err(Error::InvalidArgument("budget must be positive".into()));
    }
    let eval = move |a: &[f64], b: &[f64]| -> Option<(f64, Vec<f64>, Vec<f64>)> {
        let x = normalize(norm, a)?;
        let y = normalize(norm, b)?;
        let v = smoothness_objective(norm, &x, &scale(&y, tau));
        Some((-v, x, y))
    };
    let search = Search {
        dim: norm.dim,
        budget,
        rng: ChaCha8Rng::seed_from_u64(seed),
        eval: Box::new(eval),
    };
    let best = search
        .run(&[])
        .ok_or_else(|| Error::Degenerate("no feasible pair found within budget".into()))?;
    Ok(ModulusEstimate {
        kind: ModulusKind::Smoothness,
        argument: tau,
        value: -best.objective,
        witness: best.witness,
        budget,
        seed,
    })
}

/// Result of fitting `value ~ K * argument^p`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerTypeFit {
    /// Largest `K` with `value >= K * argument^p` on every input.
    pub constant: f64,
    pub exponent: f64,
    pub r_squared: f64,
}

/// Least-squares fit of `log(value)` against `log(argument)`.
pub fn power_type_fit(estimates: &[ModulusEstimate]) -> Result<PowerTypeFit> {
    if estimates.len() < 3 {
        return Err(Error::InvalidArgument("power-type fit needs at least 3 estimates".into()));
    }
    if let Some(e) = estimates.iter().find(|e| !(e.value > 0.0)) {
        return Err(Error::Degenerate(format!(
            "modulus vanishes at argument {}; not uniformly convex there",
            e.argument
        )));
    }
    let mut args: Vec<f64> = estimates.iter().map(|e| e.argument).collect();
    args.sort_by(f64::total_cmp);
    if args.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::InvalidArgument("power-type fit needs distinct arguments".into()));
    }
    let xs: Vec<f64> = estimates.iter().map(|e| e.argument.ln()).collect();
    let ys: Vec<f64> = estimates.iter().map(|e| e.value.ln()).collect();
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let syy: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
    let exponent = sxy / sxx;
    let r_squared = if syy == 0.0 { 1.0 } else { (sxy * sxy) / (sxx * syy) };
    let constant = estimates
        .iter()
        .map(|e| e.value / e.argument.powf(exponent))
        .fold(f64::INFINITY, f64::min);
    Ok(PowerTypeFit { constant, exponent, r_squared })
}

/// `inf_t ||y - t x||`, the distance from `y` to the line spanned by `x`.
pub fn distance_to_line<N: NormFunction + ?Sized>(norm: &N, y: &[f64], x: &[f64]) -> Result<f64> {
    check_dim(norm.dim(), y)?;
    check_dim(norm.dim(), x)?;
    let nx = norm.norm_of(x);
    if nx == 0.0 {
        return Err(Error::ZeroVector);
    }
    let ny = norm.norm_of(y);
    if ny == 0.0 {
        return Ok(0.0);
    }
    let residual = |t: f64| norm.norm_of(&y.iter().zip(x).map(|(a, b)| a - t * b).collect::<Vec<_>>());
    // Euclidean projection as a candidate; exact for multiples of x
    let c = dot(y, x) / dot(x, x);
    let at_projection = residual(c);
    if at_projection <= 8.0 * f64::EPSILON * ny {
        return Ok(0.0);
    }
    let bound = 2.0 * ny / nx;
    let (_, best) = golden_min(residual, -bound, bound, 1e-15 * bound.max(1.0), 400);
    Ok(best.min(at_projection))
}

/// Per-index defects and line distances of a probe sequence.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LurProbe {
    /// `||x|| + ||y_n|| - ||x + y_n||`
    pub defects: Vec<f64>,
    /// `dist(y_n, span{x})`
    pub line_distances: Vec<f64>,
    pub defect_vanishes: bool,
    pub distance_vanishes: bool,
    /// Defect tends to zero while the line distance does not.
    pub failure_witness: bool,
}

fn tail_vanishes(values: &[f64]) -> bool {
    let peak = values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    match values.last() {
        Some(last) => last.abs() <= 1e-9 || last.abs() <= 0.1 * peak,
        None => true,
    }
}

/// Evaluates the hypothesis and conclusion of the LUR line-distance lemma
/// along a finite probe sequence.
pub fn lur_defect_probe<N: NormFunction + ?Sized>(norm: &N, x: &[f64], y_seq: &[Vec<f64>]) -> Result<LurProbe> {
    check_dim(norm.dim(), x)?;
    let nx = norm.norm_of(x);
    if nx == 0.0 {
        return Err(Error::ZeroVector);
    }
    let mut defects = Vec::with_capacity(y_seq.len());
    let mut line_distances = Vec::with_capacity(y_seq.len());
    for y in y_seq {
        check_dim(norm.dim(), y)?;
        let d = nx + norm.norm_of(y) - norm.norm_of(&add(x, y));
        defects.push(d.max(0.0));
        line_distances.push(distance_to_line(norm, y, x)?);
    }
    let defect_vanishes = tail_vanishes(&defects);
    let distance_vanishes = tail_vanishes(&line_distances);
    Ok(LurProbe {
        failure_witness: defect_vanishes && !distance_vanishes,
        defects,
        line_distances,
        defect_vanishes,
        distance_vanishes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn evaluates_standard_norms_exactly() {
        assert_eq!(eval_norm(&Norm::new(2, 2.0).unwrap(), &[3.0, 4.0]).unwrap(), 5.0);
        assert_eq!(eval_norm(&Norm::new(2, 1.0).unwrap(), &[1.0, -2.0]).unwrap(), 3.0);
        assert_eq!(eval_norm(&Norm::new(2, f64::INFINITY).unwrap(), &[0.5, -0.2]).unwrap(), 0.5);
    }

    #[test]
    fn rejects_dimension_mismatch_and_bad_exponent() {
        let n = Norm::euclidean(2);
        assert_eq!(n.eval(&[1.0, 2.0, 3.0]), Err(Error::DimensionMismatch { expected: 2, got: 3 }));
        assert!(Norm::new(2, 0.5).is_err());
        assert!(Norm::new(0, 2.0).is_err());
        assert!(Norm::weighted(2, 2.0, vec![1.0, 0.0]).is_err());
    }

    #[test]
    fn weighted_norm_and_dual_are_consistent() {
        let n = Norm::weighted(2, 3.0, vec![2.0, 0.5]).unwrap();
        let v = [0.3, -1.7];
        let f = norming_functional(&n, &v).unwrap();
        assert_abs_diff_eq!(f.apply(&v), n.value(&v), epsilon = 1e-12);
        assert_abs_diff_eq!(f.dual_norm_value, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn euclidean_norming_functional_is_normalized_vector() {
        let n = Norm::euclidean(2);
        let f = norming_functional(&n, &[3.0, 4.0]).unwrap();
        assert_abs_diff_eq!(f.coefficients[0], 0.6, epsilon = 1e-15);
        assert_abs_diff_eq!(f.coefficients[1], 0.8, epsilon = 1e-15);
        let g = norming_functional(&n, &[1.0, 0.0]).unwrap();
        assert_eq!(g.coefficients, vec![1.0, 0.0]);
        assert_eq!(norming_functional(&n, &[0.0, 0.0]), Err(Error::ZeroVector));
    }

    #[test]
    fn subgradient_tie_breaks_lexicographically() {
        let l1 = Norm::new(2, 1.0).unwrap();
        let f = norming_functional(&l1, &[2.0, 0.0]).unwrap();
        assert_eq!(f.coefficients, vec![1.0, -1.0]);
        let linf = Norm::new(2, f64::INFINITY).unwrap();
        let g = norming_functional(&linf, &[1.0, 1.0]).unwrap();
        assert_eq!(g.coefficients, vec![0.0, 1.0]);
        let h = norming_functional(&linf, &[-1.0, 1.0]).unwrap();
        assert_eq!(h.coefficients, vec![-1.0, 0.0]);
        assert_eq!(g.apply(&[1.0, 1.0]), 1.0);
    }

    #[test]
    fn convexity_modulus_rejects_bad_epsilon() {
        let n = Norm::euclidean(2);
        assert!(modulus_convexity(&n, 0.0, 10, 1).is_err());
        assert!(modulus_convexity(&n, 2.5, 10, 1).is_err());
        assert!(modulus_smoothness(&n, -1.0, 10, 1).is_err());
    }

    #[test]
    fn antipodal_pair_gives_unit_modulus() {
        let est = modulus_convexity(&Norm::euclidean(2), 2.0, 2_000, 3).unwrap();
        assert_abs_diff_eq!(est.value, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn l1_convexity_witness_is_flat() {
        let l1 = Norm::new(2, 1.0).unwrap();
        let est = modulus_convexity(&l1, 1.0, 5_000, 11).unwrap();
        assert!(est.value <= 1e-12, "value {}", est.value);
        let (x, y) = &est.witness;
        assert_abs_diff_eq!(l1.dist(x, y), 1.0, epsilon = 1e-9);
    }

    #[test]
    fn l1_smoothness_reaches_tau() {
        let l1 = Norm::new(2, 1.0).unwrap();
        let est = modulus_smoothness(&l1, 0.3, 5_000, 5).unwrap();
        assert!(est.value >= 0.3 - 1e-9, "value {}", est.value);
        assert!(est.value <= 0.3 + 1e-12);
    }

    #[test]
    fn euclidean_small_tau_smoothness() {
        let est = modulus_smoothness(&Norm::euclidean(2), 0.01, 20_000, 2).unwrap();
        let exact = (1.0f64 + 1e-4).sqrt() - 1.0;
        assert!(est.value <= exact + 1e-15);
        assert_abs_diff_eq!(est.value, exact, epsilon = 1e-9);
        assert!(est.value / 0.01 < 0.01);
    }

    #[test]
    fn power_fit_rejects_degenerate_input() {
        let est = modulus_convexity(&Norm::euclidean(2), 1.0, 100, 1).unwrap();
        assert!(power_type_fit(std::slice::from_ref(&est)).is_err());
        let mut zero = est.clone();
        zero.value = 0.0;
        let mut a = est.clone();
        a.argument = 0.5;
        let mut b = est.clone();
        b.argument = 0.25;
        assert!(matches!(power_type_fit(&[zero, a, b]), Err(Error::Degenerate(_))));
    }

    #[test]
    fn line_distance_examples() {
        let e = Norm::euclidean(2);
        assert_abs_diff_eq!(distance_to_line(&e, &[0.0, 1.0], &[1.0, 0.0]).unwrap(), 1.0, epsilon = 1e-12);
        assert_eq!(distance_to_line(&e, &[0.9, -2.1], &[0.3, -0.7]).unwrap(), 0.0);
        let l1 = Norm::new(2, 1.0).unwrap();
        assert_abs_diff_eq!(distance_to_line(&l1, &[1.0, 1.0], &[1.0, 0.0]).unwrap(), 1.0, epsilon = 1e-12);
        assert_eq!(distance_to_line(&e, &[1.0, 1.0], &[0.0, 0.0]), Err(Error::ZeroVector));
    }

    #[test]
    fn lur_probe_examples() {
        let e = Norm::euclidean(2);
        let x = [1.0, 0.0];
        let seq: Vec<Vec<f64>> = (1..=50)
            .map(|n| {
                let n = n as f64;
                vec![n / (n + 1.0), 1.0 / n]
            })
            .collect();
        let probe = lur_defect_probe(&e, &x, &seq).unwrap();
        assert!(probe.defect_vanishes && probe.distance_vanishes && !probe.failure_witness);

        let constant = vec![x.to_vec(); 10];
        let probe = lur_defect_probe(&e, &x, &constant).unwrap();
        assert!(probe.defects.iter().all(|d| *d == 0.0));
        assert!(probe.line_distances.iter().all(|d| *d == 0.0));

        let l1 = Norm::new(2, 1.0).unwrap();
        let probe = lur_defect_probe(&l1, &x, &vec![vec![0.0, 1.0]; 10]).unwrap();
        assert!(probe.defects.iter().all(|d| *d == 0.0));
        assert!(probe.line_distances.iter().all(|d| (*d - 1.0).abs() < 1e-12));
        assert!(probe.failure_witness);
    }
}

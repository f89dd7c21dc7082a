//! Damped Newton iteration for polyline length.
//!
//! The length of a polyline is a sum of two-vertex terms, so its Hessian in
//! the interior vertices is block tridiagonal. Segment gradients and
//! Hessians are taken by finite differences of the segment cost, and each
//! Levenberg-Marquardt step is a block Thomas solve.

use nalgebra::{DMatrix, DVector};

use crate::metrics::Weight;

/// Finite-difference step, relative to the segment's length scale.
const FD_STEP: f64 = 1e-4;
const MU_START: f64 = 1e-3;
const MU_MIN: f64 = 1e-12;
const MU_MAX: f64 = 1e10;

pub(super) struct NewtonOutcome {
    pub iterations: usize,
    pub settled: bool,
}

struct SegmentModel {
    grad: DVector<f64>,
    hess: DMatrix<f64>,
}

fn segment_model(weight: &Weight, a: &[f64], b: &[f64]) -> Option<SegmentModel> {
    let domain = weight.domain();
    let dim = a.len();
    let scale = domain
        .boundary_distance(a)
        .min(domain.boundary_distance(b))
        .min(domain.norm().dist(a, b));
    if !(scale > 0.0) {
        return None;
    }
    let h = FD_STEP * scale;
    let mut z: Vec<f64> = a.iter().chain(b).cloned().collect();
    let n = z.len();
    let f = |z: &[f64]| weight.segment_cost(&z[..dim], &z[dim..]);
    let f0 = f(&z);
    let mut plus = vec![0.0; n];
    let mut minus = vec![0.0; n];
    for k in 0..n {
        let orig = z[k];
        z[k] = orig + h;
        plus[k] = f(&z);
        z[k] = orig - h;
        minus[k] = f(&z);
        z[k] = orig;
    }
    if !f0.is_finite() || plus.iter().chain(&minus).any(|x| !x.is_finite()) {
        return None;
    }
    let grad = DVector::from_iterator(n, (0..n).map(|k| (plus[k] - minus[k]) / (2.0 * h)));
    let mut hess = DMatrix::zeros(n, n);
    for k in 0..n {
        hess[(k, k)] = (plus[k] - 2.0 * f0 + minus[k]) / (h * h);
        for l in 0..k {
            let (ok, ol) = (z[k], z[l]);
            let mut eval = |sk: f64, sl: f64| {
                z[k] = ok + sk * h;
                z[l] = ol + sl * h;
                let v = f(&z);
                z[k] = ok;
                z[l] = ol;
                v
            };
            let v = (eval(1.0, 1.0) - eval(1.0, -1.0) - eval(-1.0, 1.0) + eval(-1.0, -1.0)) / (4.0 * h * h);
            if !v.is_finite() {
                return None;
            }
            hess[(k, l)] = v;
            hess[(l, k)] = v;
        }
    }
    Some(SegmentModel { grad, hess })
}

/// Solves the symmetric block tridiagonal system with diagonal blocks `diag`
/// and super-diagonal blocks `upper` (block `i` couples unknowns `i`, `i+1`).
/// Returns `None` if a pivot block is not positive definite.
fn block_thomas(diag: &[DMatrix<f64>], upper: &[DMatrix<f64>], rhs: &[DVector<f64>]) -> Option<Vec<DVector<f64>>> {
    let m = diag.len();
    let mut pivots = Vec::with_capacity(m);
    let mut y = Vec::with_capacity(m);
    for i in 0..m {
        let (d, r) = if i == 0 {
            (diag[0].clone(), rhs[0].clone())
        } else {
            let prev: &nalgebra::Cholesky<f64, nalgebra::Dyn> = &pivots[i - 1];
            let b = &upper[i - 1];
            let x = prev.solve(b);
            let yi = prev.solve(&y[i - 1]);
            (&diag[i] - b.transpose() * x, &rhs[i] - b.transpose() * yi)
        };
        pivots.push(d.cholesky()?);
        y.push(r);
    }
    let mut out = vec![DVector::zeros(0); m];
    for i in (0..m).rev() {
        let r = if i + 1 < m { &y[i] - &upper[i] * &out[i + 1] } else { y[i].clone() };
        out[i] = pivots[i].solve(&r);
    }
    Some(out)
}

fn total(weight: &Weight, v: &[Vec<f64>]) -> f64 {
    v.windows(2).map(|w| weight.segment_cost(&w[0], &w[1])).sum()
}

/// Levenberg-Marquardt on the interior vertices of `v`, with the endpoints
/// fixed. Stops when the largest vertex move falls below `step_tol` times
/// the local boundary distance, when no damping yields a decrease, or after
/// two consecutive steps shortening the path by at most `flat_tol`
/// relatively. Such steps mostly slide vertices along a converged path, a
/// direction in which the length is nearly invariant.
pub(super) fn newton(
    weight: &Weight,
    v: &mut [Vec<f64>],
    floor: f64,
    max_iter: usize,
    step_tol: f64,
    flat_tol: f64,
) -> NewtonOutcome {
    let n = v.len();
    if n < 3 {
        return NewtonOutcome { iterations: 0, settled: true };
    }
    let domain = weight.domain();
    let dim = v[0].len();
    let m = n - 2;
    let mut mu = MU_START;
    let mut length = total(weight, v);
    let mut flat = 0;
    for it in 0..max_iter {
        let models: Option<Vec<SegmentModel>> = v.windows(2).map(|w| segment_model(weight, &w[0], &w[1])).collect();
        let Some(models) = models else {
            return NewtonOutcome { iterations: it, settled: false };
        };
        let mut diag = Vec::with_capacity(m);
        let mut upper = Vec::with_capacity(m.saturating_sub(1));
        let mut rhs = Vec::with_capacity(m);
        let mut stiffness = Vec::with_capacity(m);
        for i in 1..n - 1 {
            let (left, right) = (&models[i - 1], &models[i]);
            let a = left.hess.view((dim, dim), (dim, dim)) + right.hess.view((0, 0), (dim, dim));
            let g = left.grad.rows(dim, dim) + right.grad.rows(0, dim);
            diag.push(a.into_owned());
            rhs.push(-g);
            if i + 1 < n - 1 {
                upper.push(right.hess.view((0, dim), (dim, dim)).into_owned());
            }
            let (h1, h2) = (domain.norm().dist(&v[i - 1], &v[i]), domain.norm().dist(&v[i], &v[i + 1]));
            stiffness.push(weight.at(&v[i]) * (1.0 / h1 + 1.0 / h2));
        }
        let mut accepted = None;
        while mu <= MU_MAX {
            let damped: Vec<DMatrix<f64>> = diag
                .iter()
                .zip(&stiffness)
                .map(|(a, s)| a + DMatrix::identity(dim, dim) * (mu * s))
                .collect();
            if let Some(step) = block_thomas(&damped, &upper, &rhs) {
                let mut trial = v.to_vec();
                let mut inside = true;
                for (i, s) in step.iter().enumerate() {
                    for k in 0..dim {
                        trial[i + 1][k] += s[k];
                    }
                    inside &= domain.boundary_distance(&trial[i + 1]) > floor;
                }
                if inside {
                    let trial_len = total(weight, &trial);
                    if trial_len < length {
                        let moved = step
                            .iter()
                            .enumerate()
                            .map(|(i, s)| s.norm() / domain.boundary_distance(&v[i + 1]))
                            .fold(0.0, f64::max);
                        accepted = Some((trial, trial_len, moved));
                        break;
                    }
                }
            }
            mu *= 10.0;
        }
        let Some((trial, trial_len, moved)) = accepted else {
            // no damping decreases the length: a numerical stationary point
            return NewtonOutcome { iterations: it + 1, settled: true };
        };
        v.clone_from_slice(&trial);
        flat = if length - trial_len <= flat_tol * length { flat + 1 } else { 0 };
        length = trial_len;
        mu = (mu / 10.0).max(MU_MIN);
        if moved < step_tol || flat >= 2 {
            return NewtonOutcome { iterations: it + 1, settled: true };
        }
    }
    NewtonOutcome { iterations: max_iter, settled: false }
}

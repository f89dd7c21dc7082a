//! Weighted path metrics on a domain.
//!
//! A [`Weight`] is a positive density on a domain; the weighted length of a
//! path is `int w(gamma) ||d gamma||`. The quasihyperbolic weight is
//! `w = 1 / d`. This module also provides the distance-ratio metric, which
//! bounds the quasihyperbolic distance from below, and the numerical checks
//! on moduli of continuity and series used by the smoothness theory.

mod continuity;
mod series;

pub use continuity::{
    beta_series, dini_ratio_curve, nu_dyadic_sums, BetaReport, DiniReport, DiniVerdict, DyadicReport,
    ModulusOfContinuity,
};
pub use series::{series_lemma_check, SeriesCase, SeriesReport};

use serde::{Deserialize, Serialize};

use crate::domains::Domain;
use crate::error::{check_dim, Error, Result};
use crate::vecops::{euclid_dist, lerp_into};

/// Bounded multiplicative perturbations `1 + g(x)` of the quasihyperbolic
/// density.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Perturbation {
    /// `g(x) = amplitude * sin(frequency * x_1)`
    Sine { amplitude: f64, frequency: f64 },
    /// `g(x) = amplitude * min(1, |x - center|^exponent)`, Hoelder at `center`.
    Cusp { amplitude: f64, exponent: f64, center: Vec<f64> },
}

impl Perturbation {
    fn value(&self, x: &[f64]) -> f64 {
        match self {
            Perturbation::Sine { amplitude, frequency } => amplitude * (frequency * x[0]).sin(),
            Perturbation::Cusp { amplitude, exponent, center } => {
                amplitude * euclid_dist(x, center).powf(*exponent).min(1.0)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum WeightKind {
    /// `w = 1 / d`
    Quasihyperbolic,
    /// `w = d^(-exponent)`; exponent 0 is the constant weight.
    DistancePower { exponent: f64 },
    /// `w = (1 + g) / d`
    Perturbed(Perturbation),
}

/// A positive weight function on a domain.
#[derive(Debug, Clone, PartialEq)]
pub struct Weight {
    kind: WeightKind,
    domain: Domain,
}

// Gauss-Legendre on [0, 1], five nodes.
const GL_NODES: [f64; 5] = [
    0.046_910_077_030_668,
    0.230_765_344_947_158_5,
    0.5,
    0.769_234_655_052_841_5,
    0.953_089_922_969_332,
];
const GL_WEIGHTS: [f64; 5] = [
    0.118_463_442_528_094_5,
    0.239_314_335_249_683_2,
    0.284_444_444_444_444_4,
    0.239_314_335_249_683_2,
    0.118_463_442_528_094_5,
];
/// Sub-pieces are at most this fraction of the local boundary distance.
const PIECE_FRACTION: f64 = 0.25;
const MAX_PIECES: f64 = 20_000.0;

impl Weight {
    pub fn new(kind: WeightKind, domain: Domain) -> Result<Self> {
        match &kind {
            WeightKind::Quasihyperbolic => {}
            WeightKind::DistancePower { exponent } => {
                if !(exponent.is_finite() && *exponent >= 0.0) {
                    return Err(Error::InvalidArgument("distance-power exponent must be >= 0".into()));
                }
            }
            WeightKind::Perturbed(p) => {
                let amp = match p {
                    Perturbation::Sine { amplitude, frequency } => {
                        if !(frequency.is_finite() && *frequency >= 0.0) {
                            return Err(Error::InvalidArgument("frequency must be >= 0".into()));
                        }
                        *amplitude
                    }
                    Perturbation::Cusp { amplitude, exponent, center } => {
                        check_dim(domain.dim(), center)?;
                        if !(*exponent > 0.0 && *exponent <= 1.0) {
                            return Err(Error::InvalidArgument("cusp exponent must lie in (0, 1]".into()));
                        }
                        *amplitude
                    }
                };
                if !(amp.abs() < 1.0) {
                    return Err(Error::InvalidArgument("perturbation amplitude must satisfy |A| < 1".into()));
                }
            }
        }
        Ok(Self { kind, domain })
    }

    pub fn quasihyperbolic(domain: Domain) -> Self {
        Self { kind: WeightKind::Quasihyperbolic, domain }
    }

    pub fn kind(&self) -> &WeightKind {
        &self.kind
    }

    pub fn domain(&self) -> &Domain {
        &self.domain
    }

    pub fn is_quasihyperbolic(&self) -> bool {
        self.kind == WeightKind::Quasihyperbolic
    }

    /// `w(x)`; infinite outside the domain.
    #[inline]
    pub fn at(&self, x: &[f64]) -> f64 {
        let d = self.domain.boundary_distance(x);
        self.at_distance(x, d)
    }

    #[inline]
    fn at_distance(&self, x: &[f64], d: f64) -> f64 {
        if d <= 0.0 {
            return f64::INFINITY;
        }
        match &self.kind {
            WeightKind::Quasihyperbolic => 1.0 / d,
            WeightKind::DistancePower { exponent } => d.powf(-exponent),
            WeightKind::Perturbed(p) => (1.0 + p.value(x)) / d,
        }
    }

    /// Weighted length of the straight segment `[a, b]`.
    ///
    /// For the quasihyperbolic weight on polyhedral domains `d` is piecewise
    /// affine along the segment and the integral is evaluated in closed
    /// form. Otherwise the segment is cut at the kinks of `d` and each piece
    /// is integrated by composite 5-point Gauss-Legendre with sub-pieces no
    /// longer than a quarter of the local boundary distance.
    /// Returns `f64::INFINITY` if the segment leaves the domain.
    pub fn segment_cost(&self, a: &[f64], b: &[f64]) -> f64 {
        let norm = self.domain.norm();
        let len = norm.dist(a, b);
        if len == 0.0 {
            return if self.domain.contains(a) { 0.0 } else { f64::INFINITY };
        }
        let mut pieces = Vec::new();
        if self.domain.is_polyhedral() {
            self.domain.affine_pieces(a, b, &mut pieces);
            if pieces.iter().any(|(_, d)| *d <= 0.0) {
                return f64::INFINITY;
            }
            if self.is_quasihyperbolic() {
                let integral: f64 = pieces
                    .windows(2)
                    .map(|w| (w[1].0 - w[0].0) * inverse_log_mean(w[0].1, w[1].1))
                    .sum();
                return len * integral;
            }
        } else {
            let dmin = self.domain.segment_min_distance(a, b);
            if dmin <= 0.0 {
                return f64::INFINITY;
            }
            pieces.push((0.0, f64::NAN));
            for s in self.domain.kink_parameters(a, b) {
                pieces.push((s, f64::NAN));
            }
            pieces.push((1.0, f64::NAN));
            let convex = self.domain.is_convex();
            let mut scratch = vec![0.0; a.len()];
            for piece in pieces.iter_mut() {
                piece.1 = if convex {
                    lerp_into(a, b, piece.0, &mut scratch);
                    self.domain.boundary_distance(&scratch)
                } else {
                    dmin
                };
            }
        }
        let frequency = match &self.kind {
            WeightKind::Perturbed(Perturbation::Sine { frequency, .. }) => *frequency,
            _ => 0.0,
        };
        let euclid_len = euclid_dist(a, b);
        let mut scratch = vec![0.0; a.len()];
        let mut total = 0.0;
        for w in pieces.windows(2) {
            let (s0, s1) = (w[0].0, w[1].0);
            let dloc = w[0].1.min(w[1].1).max(1e-300);
            let width = s1 - s0;
            let by_distance = len * width / (PIECE_FRACTION * dloc);
            let by_frequency = euclid_len * width * frequency;
            let m = by_distance.max(by_frequency).ceil().clamp(1.0, MAX_PIECES) as usize;
            let h = width / m as f64;
            for k in 0..m {
                let base = s0 + k as f64 * h;
                let mut acc = 0.0;
                for (node, weight) in GL_NODES.iter().zip(GL_WEIGHTS) {
                    lerp_into(a, b, base + node * h, &mut scratch);
                    acc += weight * self.at(&scratch);
                }
                total += acc * h;
            }
        }
        len * total
    }
}

/// `int_0^1 ds / (d0 + (d1 - d0) s) = ln(d1 / d0) / (d1 - d0)`.
#[inline]
pub(crate) fn inverse_log_mean(d0: f64, d1: f64) -> f64 {
    let r = (d1 - d0) / d0;
    if r.abs() < 1e-3 {
        (1.0 - r * (0.5 - r * (1.0 / 3.0 - r * (0.25 - r * 0.2)))) / d0
    } else {
        r.ln_1p() / (r * d0)
    }
}

/// Quadrature rule for [`path_length_weighted`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Quadrature {
    /// Composite midpoint rule with a fixed number of subdivisions per segment.
    Midpoint { subdivisions: usize },
    /// The solver's segment rule (closed form or adaptive Gauss-Legendre).
    Segment,
}

impl Default for Quadrature {
    fn default() -> Self {
        Quadrature::Midpoint { subdivisions: DEFAULT_SUBDIVISIONS }
    }
}

/// Default midpoint subdivisions per segment.
pub const DEFAULT_SUBDIVISIONS: usize = 1_000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LengthEstimate {
    pub length: f64,
    /// Richardson estimate `|L(n) - L(n/2)| / 3` for the midpoint rule.
    pub error_estimate: f64,
}

fn midpoint_rule(weight: &Weight, a: &[f64], b: &[f64], n: usize, scratch: &mut [f64]) -> f64 {
    let len = weight.domain().norm().dist(a, b);
    if len == 0.0 {
        return 0.0;
    }
    let mut acc = 0.0;
    for k in 0..n {
        lerp_into(a, b, (k as f64 + 0.5) / n as f64, scratch);
        acc += weight.at(scratch);
    }
    len * acc / n as f64
}

/// Weighted length of the polyline through `vertices`.
///
/// Vertices outside the domain are an error; a segment that leaves the
/// domain between its vertices yields an infinite length.
pub fn path_length_weighted(weight: &Weight, vertices: &[Vec<f64>], quadrature: Quadrature) -> Result<LengthEstimate> {
    let domain = weight.domain();
    for v in vertices {
        check_dim(domain.dim(), v)?;
        if !domain.contains(v) {
            return Err(Error::OutsideDomain);
        }
    }
    let mut length = 0.0;
    let mut coarse = 0.0;
    let mut scratch = vec![0.0; domain.dim()];
    for w in vertices.windows(2) {
        if domain.segment_min_distance(&w[0], &w[1]) <= 0.0 {
            return Ok(LengthEstimate { length: f64::INFINITY, error_estimate: 0.0 });
        }
        match quadrature {
            Quadrature::Midpoint { subdivisions } => {
                let n = subdivisions.max(2);
                length += midpoint_rule(weight, &w[0], &w[1], n, &mut scratch);
                coarse += midpoint_rule(weight, &w[0], &w[1], n / 2, &mut scratch);
            }
            Quadrature::Segment => {
                let c = weight.segment_cost(&w[0], &w[1]);
                length += c;
                coarse += c;
            }
        }
    }
    if !length.is_finite() {
        return Ok(LengthEstimate { length: f64::INFINITY, error_estimate: 0.0 });
    }
    Ok(LengthEstimate { length, error_estimate: (length - coarse).abs() / 3.0 })
}

/// Distance-ratio metric `j(x, y) = log(1 + ||x - y|| / min(d(x), d(y)))`.
pub fn j_metric(domain: &Domain, x: &[f64], y: &[f64]) -> Result<f64> {
    check_dim(domain.dim(), x)?;
    check_dim(domain.dim(), y)?;
    if !domain.contains(x) || !domain.contains(y) {
        return Err(Error::OutsideDomain);
    }
    Ok(j_unchecked(domain, x, y))
}

#[inline]
pub(crate) fn j_unchecked(domain: &Domain, x: &[f64], y: &[f64]) -> f64 {
    let m = domain.boundary_distance(x).min(domain.boundary_distance(y));
    (domain.norm().dist(x, y) / m).ln_1p()
}

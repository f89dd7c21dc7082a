//! Proper subdomains of R^n with exact boundary-distance oracles.
//!
//! Every shape here admits a closed-form distance to the boundary in an
//! arbitrary (weighted) p-norm: half-spaces, slabs and polytopes through the
//! dual norm of their facet normals, norm balls and punctured spaces through
//! the norm itself.

use serde::{Deserialize, Serialize};

use crate::error::{check_dim, Error, Result};
use crate::normed_spaces::Norm;
use crate::roots::golden_min;
use crate::vecops::{dot, sub};

/// Open half-space `normal . x > offset`, also used for polytope facets.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Facet {
    pub normal: Vec<f64>,
    pub offset: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Shape {
    /// `normal . x > offset`
    HalfSpace { normal: Vec<f64>, offset: f64 },
    /// `||x - center|| < radius`
    Ball { center: Vec<f64>, radius: f64 },
    /// Intersection of the open half-spaces of all facets.
    Polytope { facets: Vec<Facet> },
    /// `R^n \ {point}`
    Punctured { point: Vec<f64> },
    /// `lower < normal . x < upper`
    Slab { normal: Vec<f64>, lower: f64, upper: f64 },
}

/// A proper domain together with the ambient norm used for all distances.
#[derive(Debug, Clone, PartialEq)]
pub struct Domain {
    norm: Norm,
    shape: Shape,
    /// Facet functionals normalized to unit dual norm, so that the distance
    /// to the complement of the facet's half-space is `n . x - c`.
    affine: Vec<(Vec<f64>, f64)>,
}

impl Domain {
    pub fn new(norm: Norm, shape: Shape) -> Result<Self> {
        let dim = norm.dim();
        if dim < 2 {
            return Err(Error::InvalidArgument("domains need dimension at least 2".into()));
        }
        let normalize = |normal: &[f64], offset: f64| -> Result<(Vec<f64>, f64)> {
            check_dim(dim, normal)?;
            let s = norm.dual_value(normal);
            if !(s > 0.0 && s.is_finite()) {
                return Err(Error::InvalidArgument("facet normal must be nonzero".into()));
            }
            Ok((normal.iter().map(|a| a / s).collect(), offset / s))
        };
        let affine = match &shape {
            Shape::HalfSpace { normal, offset } => vec![normalize(normal, *offset)?],
            Shape::Slab { normal, lower, upper } => {
                if !(lower < upper) {
                    return Err(Error::InvalidArgument("slab needs lower < upper".into()));
                }
                let neg: Vec<f64> = normal.iter().map(|a| -a).collect();
                vec![normalize(normal, *lower)?, normalize(&neg, -*upper)?]
            }
            Shape::Polytope { facets } => {
                if facets.is_empty() {
                    return Err(Error::InvalidArgument("polytope needs at least one facet".into()));
                }
                facets
                    .iter()
                    .map(|f| normalize(&f.normal, f.offset))
                    .collect::<Result<Vec<_>>>()?
            }
            Shape::Ball { center, radius } => {
                check_dim(dim, center)?;
                if !(*radius > 0.0 && radius.is_finite()) {
                    return Err(Error::InvalidArgument("ball radius must be positive".into()));
                }
                Vec::new()
            }
            Shape::Punctured { point } => {
                check_dim(dim, point)?;
                Vec::new()
            }
        };
        Ok(Self { norm, shape, affine })
    }

    /// `{ x_2 > 0 }` in the Euclidean plane.
    pub fn upper_half_plane() -> Self {
        Self::new(Norm::euclidean(2), Shape::HalfSpace { normal: vec![0.0, 1.0], offset: 0.0 })
            .expect("valid half-plane")
    }

    /// Axis-aligned open box `prod (lo_i, hi_i)` as a polytope.
    pub fn open_box(norm: Norm, lo: &[f64], hi: &[f64]) -> Result<Self> {
        check_dim(norm.dim(), lo)?;
        check_dim(norm.dim(), hi)?;
        let dim = norm.dim();
        let mut facets = Vec::with_capacity(2 * dim);
        for i in 0..dim {
            if !(lo[i] < hi[i]) {
                return Err(Error::InvalidArgument("box needs lo < hi".into()));
            }
            let mut e = vec![0.0; dim];
            e[i] = 1.0;
            facets.push(Facet { normal: e.clone(), offset: lo[i] });
            e[i] = -1.0;
            facets.push(Facet { normal: e, offset: -hi[i] });
        }
        Self::new(norm, Shape::Polytope { facets })
    }

    /// The Euclidean open unit square `(0, 1)^2`.
    pub fn unit_square() -> Self {
        Self::open_box(Norm::euclidean(2), &[0.0, 0.0], &[1.0, 1.0]).expect("valid square")
    }

    /// The Euclidean plane punctured at `point`.
    pub fn punctured_plane(point: [f64; 2]) -> Self {
        Self::new(Norm::euclidean(2), Shape::Punctured { point: point.to_vec() }).expect("valid puncture")
    }

    pub fn norm(&self) -> &Norm {
        &self.norm
    }

    pub fn shape(&self) -> &Shape {
        &self.shape
    }

    pub fn dim(&self) -> usize {
        self.norm.dim()
    }

    pub fn is_convex(&self) -> bool {
        !matches!(self.shape, Shape::Punctured { .. })
    }

    /// Whether `x in domain` iff `-x in domain`.
    pub fn is_symmetric(&self) -> bool {
        let close = |a: f64, b: f64| (a - b).abs() <= 1e-12 * (1.0 + a.abs().max(b.abs()));
        match &self.shape {
            Shape::HalfSpace { .. } => false,
            Shape::Ball { center, .. } => center.iter().all(|c| *c == 0.0),
            Shape::Punctured { point } => point.iter().all(|c| *c == 0.0),
            Shape::Slab { lower, upper, .. } => close(*lower, -*upper),
            Shape::Polytope { .. } => self.affine.iter().all(|(n, c)| {
                self.affine
                    .iter()
                    .any(|(m, d)| close(*c, *d) && n.iter().zip(m).all(|(a, b)| close(*a, -*b)))
            }),
        }
    }

    /// `d(x) = dist(x, boundary)`, clamped to zero outside the domain.
    pub fn boundary_distance(&self, x: &[f64]) -> f64 {
        debug_assert_eq!(x.len(), self.dim());
        let d = match &self.shape {
            Shape::Ball { center, radius } => radius - self.norm.dist(x, center),
            Shape::Punctured { point } => self.norm.dist(x, point),
            _ => self
                .affine
                .iter()
                .map(|(n, c)| dot(n, x) - c)
                .fold(f64::INFINITY, f64::min),
        };
        if d > 0.0 {
            d
        } else {
            0.0
        }
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        x.len() == self.dim() && x.iter().all(|v| v.is_finite()) && self.boundary_distance(x) > 0.0
    }

    /// Minimum of `d` over the closed segment `[a, b]`.
    pub fn segment_min_distance(&self, a: &[f64], b: &[f64]) -> f64 {
        match &self.shape {
            Shape::Punctured { point } => {
                let v = sub(b, a);
                let w = sub(point, a);
                if self.norm.is_euclidean() {
                    let vv = dot(&v, &v);
                    let s = if vv > 0.0 { (dot(&w, &v) / vv).clamp(0.0, 1.0) } else { 0.0 };
                    let p: Vec<f64> = a.iter().zip(&v).map(|(x, y)| x + s * y).collect();
                    self.norm.dist(&p, point)
                } else {
                    let f = |s: f64| {
                        let p: Vec<f64> = a.iter().zip(&v).map(|(x, y)| x + s * y).collect();
                        self.norm.dist(&p, point)
                    };
                    golden_min(f, 0.0, 1.0, 1e-14, 200).1
                }
            }
            // d is concave on convex domains
            _ => self.boundary_distance(a).min(self.boundary_distance(b)),
        }
    }

    /// Whether the boundary distance is piecewise affine along segments.
    pub(crate) fn is_polyhedral(&self) -> bool {
        !self.affine.is_empty()
    }

    /// Sorted breakpoints `0 = s_0 < ... < s_m = 1` together with
    /// `d(a + s_k (b - a))`, such that `d` is affine between consecutive
    /// breakpoints. Only available for polyhedral shapes.
    pub(crate) fn affine_pieces(&self, a: &[f64], b: &[f64], out: &mut Vec<(f64, f64)>) {
        debug_assert!(self.is_polyhedral());
        out.clear();
        let lines: Vec<(f64, f64)> = self
            .affine
            .iter()
            .map(|(n, c)| {
                let alpha = dot(n, a) - c;
                let beta = dot(n, b) - c - alpha;
                (alpha, beta)
            })
            .collect();
        let eval = |s: f64| lines.iter().map(|(al, be)| al + be * s).fold(f64::INFINITY, f64::min);
        out.push((0.0, eval(0.0)));
        if lines.len() > 1 {
            let mut cuts = Vec::new();
            for i in 0..lines.len() {
                for j in (i + 1)..lines.len() {
                    let db = lines[i].1 - lines[j].1;
                    if db != 0.0 {
                        let s = (lines[j].0 - lines[i].0) / db;
                        if s > 0.0 && s < 1.0 {
                            cuts.push(s);
                        }
                    }
                }
            }
            cuts.sort_by(f64::total_cmp);
            cuts.dedup();
            for s in cuts {
                out.push((s, eval(s)));
            }
        }
        out.push((1.0, eval(1.0)));
    }

    /// Parameters in `(0, 1)` where `d` restricted to `[a, b]` may fail to be
    /// smooth (non-polyhedral shapes).
    pub(crate) fn kink_parameters(&self, a: &[f64], b: &[f64]) -> Vec<f64> {
        let anchor = match &self.shape {
            Shape::Ball { center, .. } => center,
            Shape::Punctured { point } => point,
            _ => return Vec::new(),
        };
        let u: Vec<f64> = sub(a, anchor);
        let v: Vec<f64> = sub(b, a);
        let mut cuts = Vec::new();
        let vv = dot(&v, &v);
        if vv > 0.0 {
            cuts.push(-dot(&u, &v) / vv);
        }
        if !self.norm.is_euclidean() {
            for i in 0..u.len() {
                if v[i] != 0.0 {
                    cuts.push(-u[i] / v[i]);
                }
            }
            if self.norm.exponent().is_infinite() {
                let w = self.norm.weights().map(<[f64]>::to_vec).unwrap_or_else(|| vec![1.0; u.len()]);
                for i in 0..u.len() {
                    for j in (i + 1)..u.len() {
                        for sign in [1.0, -1.0] {
                            let den = w[i] * v[i] - sign * w[j] * v[j];
                            if den != 0.0 {
                                cuts.push(-(w[i] * u[i] - sign * w[j] * u[j]) / den);
                            }
                        }
                    }
                }
            }
        }
        cuts.retain(|s| *s > 0.0 && *s < 1.0);
        cuts.sort_by(f64::total_cmp);
        cuts.dedup();
        cuts
    }

    /// First time `t > 0` at which the ray `x + t u` leaves the domain
    /// (`f64::INFINITY` if it never does). `x` must lie in the domain.
    pub fn exit_time(&self, x: &[f64], u: &[f64]) -> f64 {
        match &self.shape {
            Shape::Punctured { point } => {
                let w = sub(point, x);
                let uu = dot(u, u);
                if uu == 0.0 {
                    return f64::INFINITY;
                }
                let t = dot(&w, u) / uu;
                let hit: Vec<f64> = x.iter().zip(u).map(|(a, b)| a + t * b).collect();
                if t > 0.0 && self.norm.dist(&hit, point) == 0.0 {
                    t
                } else {
                    f64::INFINITY
                }
            }
            Shape::Ball { center, radius } => {
                let r = |t: f64| {
                    let p: Vec<f64> = x.iter().zip(u).map(|(a, b)| a + t * b).collect();
                    self.norm.dist(&p, center) - radius
                };
                let mut hi = radius / self.norm.value(u).max(1e-300);
                while r(hi) < 0.0 {
                    hi *= 2.0;
                }
                crate::roots::bisect(r, 0.0, hi, 1e-15 * hi, 200)
            }
            _ => self
                .affine
                .iter()
                .map(|(n, c)| {
                    let rate = dot(n, u);
                    if rate < 0.0 {
                        (dot(n, x) - c) / -rate
                    } else {
                        f64::INFINITY
                    }
                })
                .fold(f64::INFINITY, f64::min),
        }
    }
}

/// Free-function form of [`Domain::boundary_distance`].
pub fn boundary_distance(domain: &Domain, x: &[f64]) -> f64 {
    domain.boundary_distance(x)
}

/// Free-function form of [`Domain::contains`].
pub fn contains(domain: &Domain, x: &[f64]) -> bool {
    domain.contains(x)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConcavityReport {
    /// `max_s [s d(x) + (1 - s) d(y) - d(s x + (1 - s) y)]`, floored at 0.
    pub max_violation: f64,
    pub grid: usize,
}

/// Checks concavity of `d` along the segment `[y, x]` on a uniform grid of `s`.
pub fn concavity_check(domain: &Domain, x: &[f64], y: &[f64], grid: usize) -> Result<ConcavityReport> {
    if !domain.is_convex() {
        return Err(Error::NonConvexDomain);
    }
    check_dim(domain.dim(), x)?;
    check_dim(domain.dim(), y)?;
    if !domain.contains(x) || !domain.contains(y) {
        return Err(Error::OutsideDomain);
    }
    if grid < 2 {
        return Err(Error::InvalidArgument("grid needs at least 2 points".into()));
    }
    let (dx, dy) = (domain.boundary_distance(x), domain.boundary_distance(y));
    let mut point = vec![0.0; x.len()];
    let mut max_violation = 0.0f64;
    for i in 0..grid {
        let s = i as f64 / (grid - 1) as f64;
        for (p, (a, b)) in point.iter_mut().zip(x.iter().zip(y)) {
            *p = b + s * (a - b);
        }
        let chord = dy + s * (dx - dy);
        max_violation = max_violation.max(chord - domain.boundary_distance(&point));
    }
    Ok(ConcavityReport { max_violation, grid })
}

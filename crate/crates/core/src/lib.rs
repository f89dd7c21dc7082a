//! Quasihyperbolic and weighted path metrics in finite-dimensional normed spaces.
//!
//! The crate is organised bottom-up:
//!
//! * [`normed_spaces`] — weighted `l^p` norms, norming functionals, moduli of
//!   convexity and smoothness.
//! * [`domains`] — open domains with exact boundary-distance functions.
//! * [`metrics`] — weights, weighted lengths, the distance-ratio metric `j`,
//!   and checks on moduli of continuity.
//! * [`geodesics`] — a polyline geodesic solver with certified bounds and the
//!   geometric checks built on it.
//! * [`balls`] — metric spheres, convexity and starlikeness of balls.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod balls;
pub mod domains;
pub mod error;
pub mod geodesics;
pub mod metrics;
pub mod normed_spaces;
pub mod roots;
pub mod vecops;

pub use domains::{Domain, Facet, Shape};
pub use error::{Error, Result};
pub use geodesics::{solve_geodesic, GeodesicResult, Polyline, SolverConfig};
pub use metrics::{j_metric, Weight, WeightKind};
pub use normed_spaces::{Norm, NormFunction};

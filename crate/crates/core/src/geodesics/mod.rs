//! Weighted geodesics as relaxed polylines.
//!
//! [`solve_geodesic`] returns a polyline whose weighted length is a certified
//! upper bound for the distance (up to quadrature rounding), together with
//! the distance-ratio lower bound for the quasihyperbolic weight. The
//! verification routines in this module are built on top of it.

mod checks;
mod newton;
mod polyline;
mod solver;

pub use checks::{
    average_path_check, endpoint_derivative_check, midpoint_convergence_probe, turning_angle_profile, AverageReport,
    DerivativeSample, EndpointDerivativeReport, MidpointReport, MidpointRow, TurningProfile,
};
pub use polyline::{unit_speed_reparametrize, Polyline};
pub use solver::{qh_distance, solve_geodesic, solve_geodesic_from, GeodesicResult, RefinementLevel, SolverConfig};

pub(crate) use checks::{ray_crossing, trace_scale};

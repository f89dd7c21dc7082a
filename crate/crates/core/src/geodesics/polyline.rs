use crate::error::{check_dim, Error, Result};
use crate::metrics::Weight;
use crate::roots::illinois;
use crate::vecops::{angle_between, lerp, lerp_into, sub};

/// A polyline in a domain with its per-vertex boundary distances, cumulative
/// weighted length and unit segment directions.
#[derive(Debug, Clone, PartialEq)]
pub struct Polyline {
    vertices: Vec<Vec<f64>>,
    distances: Vec<f64>,
    cumulative: Vec<f64>,
    velocity: Vec<Vec<f64>>,
}

impl Polyline {
    /// Vertices must lie in the domain and consecutive vertices must differ.
    pub fn new(weight: &Weight, vertices: Vec<Vec<f64>>) -> Result<Self> {
        let domain = weight.domain();
        if vertices.is_empty() {
            return Err(Error::InvalidArgument("polyline needs at least one vertex".into()));
        }
        for v in &vertices {
            check_dim(domain.dim(), v)?;
            if !domain.contains(v) {
                return Err(Error::OutsideDomain);
            }
        }
        if vertices.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidArgument("consecutive vertices coincide".into()));
        }
        let distances = vertices.iter().map(|v| domain.boundary_distance(v)).collect();
        let mut cumulative = Vec::with_capacity(vertices.len());
        cumulative.push(0.0);
        let mut velocity = Vec::with_capacity(vertices.len().saturating_sub(1));
        for w in vertices.windows(2) {
            let last = *cumulative.last().unwrap();
            cumulative.push(last + weight.segment_cost(&w[0], &w[1]));
            let step = sub(&w[1], &w[0]);
            let len = domain.norm().value(&step);
            velocity.push(step.iter().map(|x| x / len).collect());
        }
        Ok(Self { vertices, distances, cumulative, velocity })
    }

    pub fn vertices(&self) -> &[Vec<f64>] {
        &self.vertices
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    /// `d(v_i)` per vertex.
    pub fn distances(&self) -> &[f64] {
        &self.distances
    }

    pub fn cumulative_lengths(&self) -> &[f64] {
        &self.cumulative
    }

    pub fn length(&self) -> f64 {
        *self.cumulative.last().unwrap()
    }

    /// Unit (in the norm) direction of each segment.
    pub fn qh_velocity(&self) -> &[Vec<f64>] {
        &self.velocity
    }

    pub fn start(&self) -> &[f64] {
        &self.vertices[0]
    }

    pub fn end(&self) -> &[f64] {
        self.vertices.last().unwrap()
    }
}

/// Turning angles between consecutive segment directions, without the two
/// end angles when there are at least three.
pub(crate) fn interior_turning_angles(vertices: &[Vec<f64>]) -> Vec<f64> {
    let dirs: Vec<Vec<f64>> = vertices.windows(2).map(|w| sub(&w[1], &w[0])).collect();
    let angles: Vec<f64> = dirs.windows(2).map(|w| angle_between(&w[0], &w[1])).collect();
    if angles.len() >= 3 {
        angles[1..angles.len() - 1].to_vec()
    } else {
        angles
    }
}

/// Point on the segment `[a, b]` at weighted length `target` from `a`.
fn point_at_cost(weight: &Weight, a: &[f64], b: &[f64], seg_cost: f64, target: f64) -> Vec<f64> {
    if target <= 0.0 {
        return a.to_vec();
    }
    if target >= seg_cost {
        return b.to_vec();
    }
    let mut scratch = vec![0.0; a.len()];
    let g = |s: f64| {
        lerp_into(a, b, s, &mut scratch);
        weight.segment_cost(a, &scratch) - target
    };
    let s = illinois(g, 0.0, 1.0, -target, seg_cost - target, 1e-15, 1e-15 * seg_cost, 200);
    lerp(a, b, s)
}

/// Points at equal weighted arclength along the polyline `vertices` with
/// segment costs `costs`; always keeps both endpoints.
pub(crate) fn equal_cost_points(weight: &Weight, vertices: &[Vec<f64>], costs: &[f64], samples: usize) -> Vec<Vec<f64>> {
    let total: f64 = costs.iter().sum();
    let mut out = Vec::with_capacity(samples);
    out.push(vertices[0].clone());
    let mut seg = 0;
    let mut before = 0.0;
    for k in 1..samples - 1 {
        let target = total * k as f64 / (samples - 1) as f64;
        while seg + 1 < costs.len() && before + costs[seg] < target {
            before += costs[seg];
            seg += 1;
        }
        out.push(point_at_cost(weight, &vertices[seg], &vertices[seg + 1], costs[seg], target - before));
    }
    out.push(vertices.last().unwrap().clone());
    out
}

/// Resamples a path at `samples` points spaced at equal weighted arclength
/// along it.
///
/// The new vertices lie on the input polyline, so the weighted length of the
/// input between consecutive outputs is `length / (samples - 1)`. The chord
/// polyline through them is returned; it coincides with the input wherever the
/// input has no corner between two samples.
pub fn unit_speed_reparametrize(weight: &Weight, path: &Polyline, samples: usize) -> Result<Polyline> {
    if samples < 2 {
        return Err(Error::InvalidArgument("need at least 2 samples".into()));
    }
    if !(path.length() > 0.0) {
        return Err(Error::Degenerate("zero-length path".into()));
    }
    if !path.length().is_finite() {
        return Err(Error::OutsideDomain);
    }
    let costs: Vec<f64> = path.cumulative.windows(2).map(|w| w[1] - w[0]).collect();
    let mut points = equal_cost_points(weight, &path.vertices, &costs, samples);
    points.dedup();
    Polyline::new(weight, points)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domains::Domain;
    use crate::metrics::WeightKind;
    use approx::assert_abs_diff_eq;

    #[test]
    fn polyline_fields() {
        let w = Weight::quasihyperbolic(Domain::upper_half_plane());
        let p = Polyline::new(&w, vec![vec![0.0, 1.0], vec![0.0, 2.0], vec![3.0, 2.0]]).unwrap();
        assert_eq!(p.distances(), &[1.0, 2.0, 2.0]);
        assert_abs_diff_eq!(p.cumulative_lengths()[1], 2f64.ln(), epsilon = 1e-15);
        assert_abs_diff_eq!(p.length(), 2f64.ln() + 1.5, epsilon = 1e-15);
        assert_eq!(p.qh_velocity(), &[vec![0.0, 1.0], vec![1.0, 0.0]]);
        assert!(Polyline::new(&w, vec![vec![0.0, 1.0], vec![0.0, 1.0]]).is_err());
        assert_eq!(Polyline::new(&w, vec![vec![0.0, -1.0]]), Err(Error::OutsideDomain));
    }

    #[test]
    fn unit_speed_splits_log_length() {
        let w = Weight::quasihyperbolic(Domain::upper_half_plane());
        let e2 = std::f64::consts::E.powi(2);
        let p = Polyline::new(&w, vec![vec![0.0, 1.0], vec![0.0, e2]]).unwrap();
        let q = unit_speed_reparametrize(&w, &p, 3).unwrap();
        assert_abs_diff_eq!(q.vertices()[1][1], std::f64::consts::E, epsilon = 1e-12);
        assert_abs_diff_eq!(q.length(), 2.0, epsilon = 1e-12);
        let same = unit_speed_reparametrize(&w, &p, 2).unwrap();
        assert_eq!(same.vertices(), p.vertices());
    }

    #[test]
    fn constant_weight_equipartitions_arclength() {
        let w = Weight::new(WeightKind::DistancePower { exponent: 0.0 }, Domain::upper_half_plane()).unwrap();
        let p = Polyline::new(&w, vec![vec![0.0, 1.0], vec![0.0, 2.0], vec![4.0, 2.0]]).unwrap();
        let q = unit_speed_reparametrize(&w, &p, 6).unwrap();
        // total arclength 5, samples every 1.0
        assert_abs_diff_eq!(q.vertices()[1][1], 2.0, epsilon = 1e-12);
        assert_abs_diff_eq!(q.vertices()[3][0], 2.0, epsilon = 1e-12);
    }

    #[test]
    fn zero_length_rejected() {
        let w = Weight::quasihyperbolic(Domain::upper_half_plane());
        let p = Polyline::new(&w, vec![vec![0.0, 1.0]]).unwrap();
        assert!(matches!(unit_speed_reparametrize(&w, &p, 3), Err(Error::Degenerate(_))));
    }

    #[test]
    fn turning_angle_exclusion() {
        let v = |x: f64, y: f64| vec![x, y];
        assert_eq!(interior_turning_angles(&[v(0.0, 0.0), v(1.0, 0.0), v(1.0, 1.0)]).len(), 1);
        let square_walk = [v(0.0, 0.0), v(1.0, 0.0), v(2.0, 0.0), v(3.0, 0.0), v(4.0, 1.0)];
        let a = interior_turning_angles(&square_walk);
        assert_eq!(a, vec![0.0]);
    }
}

//! Run configuration: one TOML file describes one scenario.
//!
//! ```toml
//! scenario = "half-plane"
//! seed = 7
//!
//! [norm]
//! dim = 2
//! p = 2          # or "inf"
//!
//! [domain]
//! shape = "half-space"
//! normal = [0.0, 1.0]
//! offset = 0.0
//!
//! [geodesic]
//! x = [-1.0, 1.0]
//! y = [1.0, 1.0]
//! ```
//!
//! Every table rejects unknown keys. The command chosen on the command line
//! reads its own table (`[moduli]`, `[geodesic]` or `[verify]`).

use std::fmt;
use std::path::PathBuf;

use qhgeo::metrics::{ModulusOfContinuity, Perturbation};
use qhgeo::{Domain, Facet, Norm, Shape, SolverConfig, Weight, WeightKind};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// A configuration problem, tagged with the offending key.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError {
    pub key: String,
    pub message: String,
}

impl ConfigError {
    pub fn new(key: impl Into<String>, message: impl Into<String>) -> Self {
        Self { key: key.into(), message: message.into() }
    }
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.key.is_empty() {
            write!(f, "{}", self.message)
        } else {
            write!(f, "`{}`: {}", self.key, self.message)
        }
    }
}

impl std::error::Error for ConfigError {}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub scenario: String,
    /// Seeds every random choice of the run, including the solver's.
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_out", skip_serializing_if = "is_default_out")]
    pub out: PathBuf,
    pub norm: NormSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub domain: Option<DomainSpec>,
    #[serde(default, skip_serializing_if = "WeightSpec::is_default")]
    pub weight: WeightSpec,
    #[serde(default)]
    pub solver: SolverConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub moduli: Option<ModuliSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub geodesic: Option<GeodesicSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub verify: Option<VerifySpec>,
}

fn default_out() -> PathBuf {
    PathBuf::from("out")
}

fn is_default_out(p: &PathBuf) -> bool {
    *p == default_out()
}

/// A norm exponent: a number `>= 1` or the string `"inf"`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Exponent(pub f64);

impl Serialize for Exponent {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        if self.0.is_infinite() {
            s.serialize_str("inf")
        } else {
            s.serialize_f64(self.0)
        }
    }
}

impl<'de> Deserialize<'de> for Exponent {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Int(i64),
            Float(f64),
            Word(String),
        }
        match Raw::deserialize(d)? {
            Raw::Int(i) => Ok(Exponent(i as f64)),
            Raw::Float(x) => Ok(Exponent(x)),
            Raw::Word(w) if w == "inf" => Ok(Exponent(f64::INFINITY)),
            Raw::Word(w) => Err(serde::de::Error::custom(format!("expected a number or \"inf\", got \"{w}\""))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NormSpec {
    pub dim: usize,
    pub p: Exponent,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<Vec<f64>>,
}

impl NormSpec {
    pub fn build(&self) -> Result<Norm, ConfigError> {
        let built = match &self.weights {
            None => Norm::new(self.dim, self.p.0),
            Some(w) => Norm::weighted(self.dim, self.p.0, w.clone()),
        };
        built.map_err(|e| ConfigError::new("norm", e.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FacetSpec {
    pub normal: Vec<f64>,
    pub offset: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "shape", rename_all = "kebab-case", deny_unknown_fields)]
pub enum DomainSpec {
    HalfSpace { normal: Vec<f64>, offset: f64 },
    Ball { center: Vec<f64>, radius: f64 },
    Box { lo: Vec<f64>, hi: Vec<f64> },
    Polytope { facets: Vec<FacetSpec> },
    Punctured { point: Vec<f64> },
    Slab { normal: Vec<f64>, lower: f64, upper: f64 },
}

impl DomainSpec {
    pub fn build(&self, norm: Norm) -> Result<Domain, ConfigError> {
        let built = match self.clone() {
            DomainSpec::HalfSpace { normal, offset } => Domain::new(norm, Shape::HalfSpace { normal, offset }),
            DomainSpec::Ball { center, radius } => Domain::new(norm, Shape::Ball { center, radius }),
            DomainSpec::Box { lo, hi } => Domain::open_box(norm, &lo, &hi),
            DomainSpec::Polytope { facets } => Domain::new(
                norm,
                Shape::Polytope {
                    facets: facets.into_iter().map(|f| Facet { normal: f.normal, offset: f.offset }).collect(),
                },
            ),
            DomainSpec::Punctured { point } => Domain::new(norm, Shape::Punctured { point }),
            DomainSpec::Slab { normal, lower, upper } => Domain::new(norm, Shape::Slab { normal, lower, upper }),
        };
        built.map_err(|e| ConfigError::new("domain", e.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum WeightSpec {
    #[default]
    Quasihyperbolic,
    DistancePower {
        exponent: f64,
    },
    Sine {
        amplitude: f64,
        frequency: f64,
    },
    Cusp {
        amplitude: f64,
        exponent: f64,
        center: Vec<f64>,
    },
}

impl WeightSpec {
    fn is_default(&self) -> bool {
        *self == WeightSpec::Quasihyperbolic
    }

    pub fn build(&self, domain: Domain) -> Result<Weight, ConfigError> {
        let kind = match self.clone() {
            WeightSpec::Quasihyperbolic => WeightKind::Quasihyperbolic,
            WeightSpec::DistancePower { exponent } => WeightKind::DistancePower { exponent },
            WeightSpec::Sine { amplitude, frequency } => {
                WeightKind::Perturbed(Perturbation::Sine { amplitude, frequency })
            }
            WeightSpec::Cusp { amplitude, exponent, center } => {
                WeightKind::Perturbed(Perturbation::Cusp { amplitude, exponent, center })
            }
        };
        Weight::new(kind, domain).map_err(|e| ConfigError::new("weight", e.to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModulusChoice {
    Convexity,
    Smoothness,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModuliSpec {
    pub modulus: ModulusChoice,
    /// `epsilon` values for convexity, `tau` values for smoothness.
    pub arguments: Vec<f64>,
    #[serde(default = "default_budget")]
    pub budget: usize,
}

fn default_budget() -> usize {
    100_000
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeodesicSpec {
    pub x: Vec<f64>,
    pub y: Vec<f64>,
}

/// Whether a verification run is expected to come out clean.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Expect {
    #[default]
    Pass,
    Fail,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Averaging,
    Convexity,
    Starlike,
    Smoothness,
    Endpoint,
    Midpoint,
    Series,
    Dini,
    Gauge,
}

impl Suite {
    pub const ALL: [Suite; 9] = [
        Suite::Averaging,
        Suite::Convexity,
        Suite::Starlike,
        Suite::Smoothness,
        Suite::Endpoint,
        Suite::Midpoint,
        Suite::Series,
        Suite::Dini,
        Suite::Gauge,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Averaging => "averaging",
            Suite::Convexity => "convexity",
            Suite::Starlike => "starlike",
            Suite::Smoothness => "smoothness",
            Suite::Endpoint => "endpoint",
            Suite::Midpoint => "midpoint",
            Suite::Series => "series",
            Suite::Dini => "dini",
            Suite::Gauge => "gauge",
        }
    }

    pub fn parse(s: &str) -> Option<Suite> {
        Suite::ALL.into_iter().find(|x| x.name() == s)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerifySpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub suite: Option<Suite>,
    #[serde(default)]
    pub expect: Expect,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub averaging: Option<AveragingParams>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub convexity: Option<ConvexityParams>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub starlike: Option<StarlikeParams>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub smoothness: Option<SmoothnessParams>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub endpoint: Option<EndpointParams>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub midpoint: Option<MidpointParams>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub series: Option<SeriesParams>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dini: Option<DiniParams>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gauge: Option<GaugeParams>,
}

/// Axis-aligned sampling box; points outside the domain are redrawn.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Region {
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AveragingParams {
    pub region: Region,
    #[serde(default = "default_pairs")]
    pub pairs: usize,
    #[serde(default = "default_path_vertices")]
    pub vertices: usize,
    /// Number of sine modes in each random path's deviation from the chord.
    #[serde(default = "default_harmonics")]
    pub harmonics: usize,
}

fn default_pairs() -> usize {
    1000
}
fn default_path_vertices() -> usize {
    33
}
fn default_harmonics() -> usize {
    3
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConvexityParams {
    pub center: Vec<f64>,
    pub radius: f64,
    #[serde(default = "default_directions")]
    pub directions: usize,
    #[serde(default = "default_pairs")]
    pub pairs: usize,
}

fn default_directions() -> usize {
    64
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StarlikeParams {
    pub center: Vec<f64>,
    #[serde(default = "default_starlike_radius")]
    pub radius: f64,
    #[serde(default = "default_pairs")]
    pub samples: usize,
}

fn default_starlike_radius() -> f64 {
    std::f64::consts::LN_2
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SmoothnessParams {
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    #[serde(default = "default_min_factor")]
    pub min_factor: f64,
    #[serde(default = "default_min_levels")]
    pub min_levels: usize,
}

fn default_min_factor() -> f64 {
    1.4
}
fn default_min_levels() -> usize {
    4
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EndpointParams {
    pub x0: Vec<f64>,
    pub x: Vec<f64>,
    #[serde(default = "default_endpoint_directions")]
    pub directions: usize,
    #[serde(default = "default_step")]
    pub h: f64,
    #[serde(default = "default_angle_tol")]
    pub angle_tolerance_deg: f64,
    #[serde(default = "default_value_rtol")]
    pub value_rtol: f64,
}

fn default_endpoint_directions() -> usize {
    72
}
fn default_step() -> f64 {
    1e-3
}
fn default_angle_tol() -> f64 {
    5.0
}
fn default_value_rtol() -> f64 {
    0.02
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MidpointParams {
    pub x0: Vec<f64>,
    pub y: Vec<f64>,
    pub points: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SeriesCaseSpec {
    pub lambda: f64,
    pub alpha: f64,
    pub head: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tail_ratio: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SeriesParams {
    /// `[lambda, alpha]` pairs run on the sharp geometric sequence.
    #[serde(default)]
    pub extremal: Vec<[f64; 2]>,
    #[serde(default)]
    pub cases: Vec<SeriesCaseSpec>,
    /// Random hypothesis-satisfying sequences.
    #[serde(default)]
    pub random: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiniParams {
    pub moduli: Vec<ModulusOfContinuity>,
    #[serde(default = "default_dini_s")]
    pub s_values: Vec<f64>,
}

fn default_dini_s() -> Vec<f64> {
    (1..=8).map(|k| 10f64.powi(-k)).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GaugeParams {
    pub radius: f64,
    #[serde(default = "default_gauge_samples")]
    pub samples: usize,
}

fn default_gauge_samples() -> usize {
    20
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let cfg: RunConfig = toml::from_str(text).map_err(|e| ConfigError::new("", e.to_string()))?;
        cfg.solver.validate().map_err(|e| ConfigError::new("solver", e.to_string()))?;
        Ok(cfg)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("run configurations always serialize")
    }

    /// Solver settings with the run seed applied.
    pub fn solver_config(&self) -> SolverConfig {
        SolverConfig { seed: self.seed, ..self.solver.clone() }
    }

    pub fn build_domain(&self) -> Result<Domain, ConfigError> {
        let norm = self.norm.build()?;
        self.domain.as_ref().ok_or_else(|| ConfigError::new("domain", "missing table"))?.build(norm)
    }

    pub fn build_weight(&self) -> Result<Weight, ConfigError> {
        self.weight.build(self.build_domain()?)
    }
}

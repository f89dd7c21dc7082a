//! Moduli of continuity and the Dini-type and dyadic-sum conditions on them.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A modulus of continuity `nu: (0, inf) -> [0, inf)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum ModulusOfContinuity {
    /// `nu(t) = c t^a`, `0 < a <= 1`.
    Power { c: f64, a: f64 },
    /// `nu(t) = c / log(e + 1/t)`.
    LogType { c: f64 },
    /// Samples `(t_i, v_i)`, linearly interpolated; linear to the origin
    /// below the first sample and constant past the last one.
    Tabulated { t: Vec<f64>, v: Vec<f64> },
}

impl ModulusOfContinuity {
    pub fn power(c: f64, a: f64) -> Result<Self> {
        let m = Self::Power { c, a };
        m.validate()?;
        Ok(m)
    }

    pub fn log_type(c: f64) -> Result<Self> {
        let m = Self::LogType { c };
        m.validate()?;
        Ok(m)
    }

    pub fn tabulated(t: Vec<f64>, v: Vec<f64>) -> Result<Self> {
        let m = Self::Tabulated { t, v };
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<()> {
        let positive = |c: f64| c.is_finite() && c > 0.0;
        match self {
            Self::Power { c, a } => {
                if !positive(*c) || !(*a > 0.0 && *a <= 1.0) {
                    return Err(Error::InvalidArgument("power modulus needs c > 0 and a in (0, 1]".into()));
                }
            }
            Self::LogType { c } => {
                if !positive(*c) {
                    return Err(Error::InvalidArgument("log-type modulus needs c > 0".into()));
                }
            }
            Self::Tabulated { t, v } => {
                if t.is_empty() || t.len() != v.len() {
                    return Err(Error::InvalidArgument("tabulated modulus needs matching, nonempty samples".into()));
                }
                if !positive(t[0]) || t.windows(2).any(|w| !(w[1] > w[0]) || !w[1].is_finite()) {
                    return Err(Error::InvalidArgument("sample abscissae must be positive and increasing".into()));
                }
                if v.iter().any(|x| !(x.is_finite() && *x >= 0.0)) || v.windows(2).any(|w| w[1] < w[0]) {
                    return Err(Error::InvalidArgument("sample values must be nonnegative and nondecreasing".into()));
                }
            }
        }
        Ok(())
    }

    pub fn eval(&self, t: f64) -> f64 {
        if t <= 0.0 {
            return 0.0;
        }
        match self {
            Self::Power { c, a } => c * t.powf(*a),
            Self::LogType { c } => c / (std::f64::consts::E + 1.0 / t).ln(),
            Self::Tabulated { t: ts, v } => {
                if t <= ts[0] {
                    return v[0] * t / ts[0];
                }
                let i = ts.partition_point(|&x| x <= t);
                if i == ts.len() {
                    return v[v.len() - 1];
                }
                let s = (t - ts[i - 1]) / (ts[i] - ts[i - 1]);
                v[i - 1] + s * (v[i] - v[i - 1])
            }
        }
    }

    /// `nu(2^-j)`, without underflow for large `j`.
    pub fn at_dyadic(&self, j: u32) -> f64 {
        let x = j as f64 * std::f64::consts::LN_2;
        match self {
            Self::Power { c, a } => c * (-a * x).exp(),
            // log(e + 2^j) = j log 2 + log(1 + e 2^-j)
            Self::LogType { c } => c / (x + (std::f64::consts::E * (-x).exp()).ln_1p()),
            Self::Tabulated { .. } => self.eval((-x).exp()),
        }
    }

    /// `nu(s + t) <= nu(s) + nu(t)` on all pairs of the given samples.
    pub fn is_subadditive_on(&self, samples: &[f64]) -> bool {
        samples.iter().all(|&s| {
            samples
                .iter()
                .all(|&t| self.eval(s + t) <= (self.eval(s) + self.eval(t)) * (1.0 + 1e-12))
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DiniVerdict {
    Pass,
    Fail,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiniReport {
    pub s_values: Vec<f64>,
    /// `int_0^s nu(t)/t dt / nu(s)` at each grid point.
    pub ratios: Vec<f64>,
    /// Largest ratio over the last decade of the grid.
    pub limsup_estimate: f64,
    /// Fitted bound on the ratios; present only with a pass verdict.
    pub bound: Option<f64>,
    /// Whether the small-`t` part of the integral is accounted for exactly
    /// or demonstrably negligible.
    pub tail_converged: bool,
    pub verdict: DiniVerdict,
}

/// Lower limit of the numerically integrated Dini integral.
pub const DINI_FLOOR: f64 = 1e-300;
/// Growth factor over the last two decades of the grid that counts as divergence.
pub const DINI_GROWTH: f64 = 1.2;
/// Ratios varying by less than this factor over the last two decades count as bounded.
const DINI_FLAT: f64 = 1.05;
/// Tail contribution of the lowest decade, relative to the integral, that counts as converged.
const DINI_TAIL: f64 = 1e-6;

const GL5: [(f64, f64); 5] = [
    (0.046_910_077_030_668, 0.118_463_442_528_094_5),
    (0.230_765_344_947_158_5, 0.239_314_335_249_683_2),
    (0.5, 0.284_444_444_444_444_4),
    (0.769_234_655_052_841_5, 0.239_314_335_249_683_2),
    (0.953_089_922_969_332, 0.118_463_442_528_094_5),
];

/// `int_{e^u0}^{e^u1} nu(t)/t dt = int_{u0}^{u1} nu(e^u) du`, unit-width panels.
fn log_integral(nu: &ModulusOfContinuity, u0: f64, u1: f64) -> f64 {
    let panels = (u1 - u0).ceil().max(1.0) as usize;
    let h = (u1 - u0) / panels as f64;
    let mut acc = 0.0;
    for k in 0..panels {
        let base = u0 + k as f64 * h;
        for (x, w) in GL5 {
            acc += w * nu.eval((base + x * h).exp());
        }
    }
    acc * h
}

/// `int_0^s nu(t)/t dt` and whether the small-`t` tail is under control.
fn dini_integral(nu: &ModulusOfContinuity, s: f64) -> (f64, bool) {
    match nu {
        ModulusOfContinuity::Power { c, a } => (c * s.powf(*a) / a, true),
        ModulusOfContinuity::Tabulated { t, v } => {
            // linear pieces integrate exactly: nu = p + q t gives p log(t1/t0) + q (t1 - t0)
            let mut acc = v[0] * s.min(t[0]) / t[0];
            let mut prev = (t[0], v[0]);
            for (&ti, &vi) in t.iter().zip(v).skip(1) {
                if prev.0 >= s {
                    break;
                }
                let q = (vi - prev.1) / (ti - prev.0);
                let p = prev.1 - q * prev.0;
                let hi = ti.min(s);
                acc += p * (hi / prev.0).ln() + q * (hi - prev.0);
                prev = (ti, vi);
            }
            if s > prev.0 {
                acc += prev.1 * (s / prev.0).ln();
            }
            (acc, true)
        }
        ModulusOfContinuity::LogType { .. } => {
            let lo = DINI_FLOOR.ln();
            let total = log_integral(nu, lo, s.ln());
            let lowest = log_integral(nu, lo, lo + std::f64::consts::LN_10);
            (total, lowest <= DINI_TAIL * total)
        }
    }
}

/// Ratio curve `int_0^s nu(t)/t dt / nu(s)` on a strictly decreasing grid in `(0, 1]`.
///
/// The verdict is a numerical surrogate for the limsup as `s -> 0`: the ratios
/// over the last two decades of the grid either grow monotonically by at least
/// [`DINI_GROWTH`] (fail), stay flat with a controlled tail (pass), or neither
/// (inconclusive). Tabulated moduli are never more than inconclusive, since
/// samples say nothing about the limit.
pub fn dini_ratio_curve(nu: &ModulusOfContinuity, s_values: &[f64]) -> Result<DiniReport> {
    nu.validate()?;
    if s_values.is_empty() {
        return Err(Error::InvalidArgument("empty grid".into()));
    }
    if s_values.iter().any(|&s| !(s > 0.0 && s <= 1.0)) || s_values.windows(2).any(|w| !(w[1] < w[0])) {
        return Err(Error::InvalidArgument("grid must be strictly decreasing in (0, 1]".into()));
    }
    let mut ratios = Vec::with_capacity(s_values.len());
    let mut tail_converged = true;
    for &s in s_values {
        let v = nu.eval(s);
        if !(v > 0.0) {
            return Err(Error::InvalidArgument(format!("modulus vanishes at s = {s}")));
        }
        let (integral, tail) = dini_integral(nu, s);
        tail_converged &= tail;
        ratios.push(integral / v);
    }

    let s_min = *s_values.last().unwrap();
    let last_decade: Vec<usize> = (0..s_values.len()).filter(|&i| s_values[i] <= 10.0 * s_min).collect();
    let limsup_estimate = last_decade.iter().map(|&i| ratios[i]).fold(f64::NEG_INFINITY, f64::max);

    // window of the last two decades, if the grid spans them
    let spans_two_decades = s_values[0] >= 100.0 * s_min;
    let window: Vec<f64> = (0..s_values.len())
        .filter(|&i| s_values[i] <= 100.0 * s_min)
        .map(|i| ratios[i])
        .collect();
    let first = window[0];
    let last = *window.last().unwrap();
    let monotone = window.windows(2).all(|w| w[1] >= w[0]);
    let wmax = window.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let wmin = window.iter().cloned().fold(f64::INFINITY, f64::min);

    let tabulated = matches!(nu, ModulusOfContinuity::Tabulated { .. });
    let verdict = if tabulated || !spans_two_decades {
        DiniVerdict::Inconclusive
    } else if monotone && last >= DINI_GROWTH * first {
        DiniVerdict::Fail
    } else if tail_converged && wmax <= DINI_FLAT * wmin {
        DiniVerdict::Pass
    } else {
        DiniVerdict::Inconclusive
    };
    let bound = (verdict == DiniVerdict::Pass).then(|| ratios.iter().cloned().fold(f64::NEG_INFINITY, f64::max));
    Ok(DiniReport { s_values: s_values.to_vec(), ratios, limsup_estimate, bound, tail_converged, verdict })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DyadicReport {
    /// `max_k sum_{j>k} nu(2^-j) / nu(2^-k)` over `k0 <= k <= K`.
    pub c_estimate: f64,
    /// `sum_{j>=1} nu(2^-j)^alpha`.
    pub tail_sum_alpha: f64,
    /// True when both sums are exact (geometric tails); false when truncated.
    pub analytic_tail: bool,
}

/// Number of dyadic terms used when no closed form is available.
pub const DYADIC_TERMS: u32 = 4_000;

/// Dyadic sums of a modulus: the constant `C` in
/// `sum_{j>k} nu(2^-j) <= C nu(2^-k)` and `sum_j nu(2^-j)^alpha`.
pub fn nu_dyadic_sums(nu: &ModulusOfContinuity, alpha: f64, k0: u32, k_max: u32) -> Result<DyadicReport> {
    nu.validate()?;
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(Error::InvalidArgument("alpha must lie in (0, 1]".into()));
    }
    if k0 < 1 || k_max <= k0 {
        return Err(Error::InvalidArgument("need 1 <= k0 < K".into()));
    }
    if let ModulusOfContinuity::Power { c, a } = nu {
        // sum_{j>k} c 2^{-aj} = c 2^{-a(k+1)} / (1 - 2^{-a}), so the ratio is k-independent
        let q = (-a * std::f64::consts::LN_2).exp();
        let qa = (-a * alpha * std::f64::consts::LN_2).exp();
        return Ok(DyadicReport {
            c_estimate: q / (1.0 - q),
            tail_sum_alpha: c.powf(alpha) * qa / (1.0 - qa),
            analytic_tail: true,
        });
    }
    let n = DYADIC_TERMS.max(k_max + 1);
    let values: Vec<f64> = (0..=n).map(|j| nu.at_dyadic(j)).collect();
    // suffix[k] = sum_{j>k} values[j]
    let mut suffix = vec![0.0; values.len()];
    for k in (0..n as usize).rev() {
        suffix[k] = suffix[k + 1] + values[k + 1];
    }
    let c_estimate = (k0..=k_max)
        .map(|k| suffix[k as usize] / values[k as usize])
        .fold(0.0, f64::max);
    let tail_sum_alpha = values[1..].iter().map(|v| v.powf(alpha)).sum();
    Ok(DyadicReport { c_estimate, tail_sum_alpha, analytic_tail: false })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BetaReport {
    /// `beta(h / 2^j)` for `j = 1..=J`.
    pub beta_values: Vec<f64>,
    pub partial_sum: f64,
    /// Geometric ratio fitted to the last quarter of the terms.
    pub tail_ratio: f64,
    /// Geometric bound on the remainder; present only when converged.
    pub tail_bound: Option<f64>,
    pub converged: bool,
}

/// The fitted tail ratio must stay this far below 1.
const BETA_RATIO_GAP: f64 = 1e-3;
/// Allowed drift of the fitted ratio between the middle and the end of the
/// sequence, relative to its gap below 1.
const BETA_DRIFT: f64 = 0.1;

/// `beta(h) = (1/c) (2/omega0)^(1/p) nu(3h)^(1/p)` at the scales `h / 2^j`.
///
/// Convergence of `sum_j beta(h/2^j)` is declared when the terms are
/// dominated by a geometric series: the fitted term ratio is bounded away
/// from 1 and does not creep toward 1 along the sequence.
pub fn beta_series(nu: &ModulusOfContinuity, c: f64, omega0: f64, p: f64, h: f64, terms: usize) -> Result<BetaReport> {
    nu.validate()?;
    if !(c > 0.0 && omega0 > 0.0 && h > 0.0) || !(p >= 2.0) || !p.is_finite() {
        return Err(Error::InvalidArgument("beta needs c, omega0, h > 0 and p >= 2".into()));
    }
    if terms < 8 {
        return Err(Error::InvalidArgument("beta series needs at least 8 terms".into()));
    }
    let scale = (2.0 / omega0).powf(1.0 / p) / c;
    let beta_values: Vec<f64> = (1..=terms)
        .map(|j| scale * nu.eval(3.0 * h * (-(j as f64) * std::f64::consts::LN_2).exp()).powf(1.0 / p))
        .collect();
    let partial_sum = beta_values.iter().sum();
    // mean log-ratio over a window ending at index `end`
    let fitted = |end: usize| -> f64 {
        let width = (terms / 4).max(2);
        let start = end.saturating_sub(width);
        let (a, b) = (beta_values[start], beta_values[end]);
        if a <= 0.0 || b <= 0.0 {
            return 0.0;
        }
        ((b / a).ln() / (end - start) as f64).exp()
    };
    let q_last = fitted(terms - 1);
    let q_mid = fitted(terms / 2);
    let converged = q_last <= 1.0 - BETA_RATIO_GAP && q_last - q_mid <= BETA_DRIFT * (1.0 - q_last);
    let tail_bound = converged.then(|| beta_values[terms - 1] * q_last / (1.0 - q_last));
    Ok(BetaReport { beta_values, partial_sum, tail_ratio: q_last, tail_bound, converged })
}

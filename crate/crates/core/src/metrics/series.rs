//! The series inequality `sum x_k^alpha <= (sum x_k)^alpha / ((lambda+1)^alpha - lambda^alpha)`
//! under the tail hypothesis `lambda x_n >= sum_{k>n} x_k`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A nonnegative sequence given by explicit head terms `x_0, ..., x_{n-1}`,
/// optionally continued geometrically: `x_{n-1+m} = x_{n-1} r^m`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeriesCase {
    pub lambda: f64,
    pub alpha: f64,
    pub head: Vec<f64>,
    pub tail_ratio: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeriesReport {
    pub hypothesis_ok: bool,
    pub lhs: f64,
    pub rhs: f64,
    /// `lhs <= rhs + 1e-9`; `None` when the hypothesis fails.
    pub holds: Option<bool>,
    pub slack: f64,
}

/// Absolute tolerance on the asserted inequality.
pub const SERIES_TOL: f64 = 1e-9;
/// Relative tolerance on the tail hypothesis; equality cases sit exactly on it.
const HYPOTHESIS_RTOL: f64 = 1e-12;

impl SeriesCase {
    /// The sharp case `x_k = (lambda/(lambda+1))^k`, `k >= 0`.
    pub fn extremal(lambda: f64, alpha: f64) -> Self {
        Self { lambda, alpha, head: vec![1.0], tail_ratio: Some(lambda / (lambda + 1.0)) }
    }

    fn validate(&self) -> Result<()> {
        if !(self.lambda > 0.0 && self.lambda.is_finite()) || !(self.alpha > 0.0 && self.alpha <= 1.0) {
            return Err(Error::InvalidArgument("need lambda > 0 and alpha in (0, 1]".into()));
        }
        if self.head.is_empty() || self.head.iter().any(|x| !(x.is_finite() && *x >= 0.0)) {
            return Err(Error::InvalidArgument("terms must be finite and nonnegative".into()));
        }
        if let Some(r) = self.tail_ratio {
            if !(0.0..1.0).contains(&r) {
                return Err(Error::InvalidArgument("tail ratio must lie in [0, 1)".into()));
            }
        }
        Ok(())
    }
}

/// Checks the tail hypothesis and, when it holds, the series bound.
pub fn series_lemma_check(case: &SeriesCase) -> Result<SeriesReport> {
    case.validate()?;
    let (lambda, alpha) = (case.lambda, case.alpha);
    let last = *case.head.last().unwrap();
    let r = case.tail_ratio.unwrap_or(0.0);
    let geometric = |x: f64| if x == 0.0 { 0.0 } else { x / (1.0 - x) };
    // geometric continuation beyond the head
    let tail_sum = last * geometric(r);
    let tail_sum_alpha = last.powf(alpha) * geometric(r.powf(alpha));

    let mut hypothesis_ok = true;
    let within = |x: f64, rest: f64| lambda * x + HYPOTHESIS_RTOL * (lambda * x + rest) >= rest;
    // inside the geometric part: lambda x_n >= x_n r / (1 - r)
    if last > 0.0 && !within(1.0, geometric(r)) {
        hypothesis_ok = false;
    }
    let mut rest = tail_sum;
    for &x in case.head.iter().rev() {
        hypothesis_ok &= within(x, rest);
        rest += x;
    }
    let total = rest;
    let lhs = case.head.iter().map(|x| x.powf(alpha)).sum::<f64>() + tail_sum_alpha;
    let rhs = total.powf(alpha) / ((lambda + 1.0).powf(alpha) - lambda.powf(alpha));
    let holds = hypothesis_ok.then_some(lhs <= rhs + SERIES_TOL);
    Ok(SeriesReport { hypothesis_ok, lhs, rhs, holds, slack: rhs - lhs })
}

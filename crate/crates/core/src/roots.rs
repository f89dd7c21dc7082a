//! Scalar root finding and unimodal minimization.

/// Illinois-modified regula falsi on a sign-changing bracket.
///
/// `f(lo)` and `f(hi)` must have opposite signs (or one of them is zero).
/// Stops when the bracket is narrower than `xtol`, when `|f| <= ftol`, or
/// after `max_iter` evaluations, returning the evaluated point with the
/// smallest residual.
#[allow(clippy::too_many_arguments)]
pub fn illinois<F>(
    mut f: F,
    mut lo: f64,
    mut hi: f64,
    mut flo: f64,
    mut fhi: f64,
    xtol: f64,
    ftol: f64,
    max_iter: usize,
) -> f64
where
    F: FnMut(f64) -> f64,
{
    let mut best = if flo.abs() <= fhi.abs() { (lo, flo.abs()) } else { (hi, fhi.abs()) };
    if best.1 <= ftol {
        return best.0;
    }
    debug_assert!(flo.signum() != fhi.signum(), "bracket does not change sign");
    // -1: last update moved lo, +1: moved hi
    let mut side = 0i8;
    for _ in 0..max_iter {
        if (hi - lo).abs() <= xtol {
            break;
        }
        let mut x = (lo * fhi - hi * flo) / (fhi - flo);
        // fall back to bisection when the secant point leaves the bracket
        if !x.is_finite() || x <= lo.min(hi) || x >= lo.max(hi) {
            x = 0.5 * (lo + hi);
        }
        let fx = f(x);
        if fx.abs() < best.1 {
            best = (x, fx.abs());
        }
        if fx.abs() <= ftol {
            return x;
        }
        if fx.signum() == flo.signum() {
            lo = x;
            flo = fx;
            if side == -1 {
                fhi *= 0.5;
            }
            side = -1;
        } else {
            hi = x;
            fhi = fx;
            if side == 1 {
                flo *= 0.5;
            }
            side = 1;
        }
    }
    best.0
}

/// Plain bisection, returning the midpoint of the final bracket.
pub fn bisect<F>(mut f: F, mut lo: f64, mut hi: f64, xtol: f64, max_iter: usize) -> f64
where
    F: FnMut(f64) -> f64,
{
    let flo_neg = f(lo) < 0.0;
    for _ in 0..max_iter {
        if (hi - lo).abs() <= xtol {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if (f(mid) < 0.0) == flo_neg {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Golden-section search for the minimum of a unimodal function on `[a, b]`.
/// Returns `(argmin, min)`.
pub fn golden_min<F>(mut f: F, mut a: f64, mut b: f64, tol: f64, max_iter: usize) -> (f64, f64)
where
    F: FnMut(f64) -> f64,
{
    const INV_PHI: f64 = 0.618_033_988_749_894_8;
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    for _ in 0..max_iter {
        if (b - a).abs() <= tol {
            break;
        }
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
    }
    let (fa, fb) = (f(a), f(b));
    [(a, fa), (b, fb), (c, fc), (d, fd)]
        .into_iter()
        .fold((c, fc), |best, cand| if cand.1 < best.1 { cand } else { best })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn illinois_finds_cube_root() {
        let r = illinois(|x| x * x * x - 2.0, 0.0, 2.0, -2.0, 6.0, 1e-14, 0.0, 200);
        assert!((r - 2f64.cbrt()).abs() < 1e-12);
    }

    #[test]
    fn golden_handles_kinked_minimum() {
        let (x, v) = golden_min(|t| (t - 0.3).abs() + 1.0, -5.0, 5.0, 1e-12, 500);
        assert!((x - 0.3).abs() < 1e-9);
        assert!((v - 1.0).abs() < 1e-9);
    }

    #[test]
    fn bisect_on_step() {
        let r = bisect(|x| if x < 0.25 { -1.0 } else { 1.0 }, 0.0, 1.0, 1e-12, 100);
        assert!((r - 0.25).abs() < 1e-11);
    }
}

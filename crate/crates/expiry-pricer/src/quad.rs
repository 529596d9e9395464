//! Adaptive Simpson quadrature with forced subdivision at caller-supplied
//! breakpoints. Internal machinery for the payoff integrals: the integrands
//! are piecewise smooth (price-slope kinks, threshold-inverse kinks), and
//! isolating the kinks keeps the composite rule at full order.

use crate::error::PricingError;

/// Absolute tolerance used for all payoff integrals.
pub(crate) const QUAD_TOL: f64 = 1e-10;

const MAX_DEPTH: u32 = 40;

struct Panel {
    value: f64,
    error: f64,
    converged: bool,
}

fn simpson(fa: f64, fm: f64, fb: f64, h: f64) -> f64 {
    h / 6.0 * (fa + 4.0 * fm + fb)
}

fn eval<F: Fn(f64) -> f64>(f: &F, x: f64) -> Result<f64, PricingError> {
    let y = f(x);
    if !y.is_finite() {
        return Err(PricingError::Numeric {
            reason: format!("non-finite integrand value at x = {x}"),
            achieved: f64::INFINITY,
        });
    }
    Ok(y)
}

#[allow(clippy::too_many_arguments)]
fn recurse<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    fa: f64,
    b: f64,
    fb: f64,
    fm: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> Result<Panel, PricingError> {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = eval(f, lm)?;
    let frm = eval(f, rm)?;
    let left = simpson(fa, flm, fm, m - a);
    let right = simpson(fm, frm, fb, b - m);
    let delta = left + right - whole;
    // Richardson estimate of the remaining error for the refined rule.
    let err = delta.abs() / 15.0;
    if err <= tol || (b - a) < 1e-15 {
        return Ok(Panel { value: left + right + delta / 15.0, error: err, converged: true });
    }
    if depth >= MAX_DEPTH {
        return Ok(Panel { value: left + right + delta / 15.0, error: err, converged: false });
    }
    let half_tol = 0.5 * tol;
    let l = recurse(f, a, fa, m, fm, flm, left, half_tol, depth + 1)?;
    let r = recurse(f, m, fm, b, fb, frm, right, half_tol, depth + 1)?;
    Ok(Panel {
        value: l.value + r.value,
        error: l.error + r.error,
        converged: l.converged && r.converged,
    })
}

/// Integrate `f` over `[a, b]`, forcing subdivision at every breakpoint that
/// falls strictly inside the interval. Returns `(value, error_estimate)`.
///
/// Fails with a numeric error (carrying the achieved error estimate) when the
/// recursion bottoms out before reaching the absolute tolerance.
pub(crate) fn integrate<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    breakpoints: &[f64],
    tol: f64,
) -> Result<(f64, f64), PricingError> {
    if !(a.is_finite() && b.is_finite() && a <= b) {
        return Err(PricingError::InvalidParameter(format!(
            "invalid integration interval [{a}, {b}]"
        )));
    }
    if a == b {
        return Ok((0.0, 0.0));
    }
    let mut cuts: Vec<f64> = breakpoints
        .iter()
        .copied()
        .filter(|&x| x > a && x < b)
        .collect();
    cuts.sort_by(|p, q| p.partial_cmp(q).unwrap());
    cuts.dedup();
    cuts.push(b);

    let mut total = 0.0;
    let mut err = 0.0;
    let mut converged = true;
    let mut lo = a;
    let mut flo = eval(f, lo)?;
    for hi in cuts {
        if hi - lo < 1e-15 {
            lo = hi;
            flo = eval(f, lo)?;
            continue;
        }
        let fhi = eval(f, hi)?;
        let fmid = eval(f, 0.5 * (lo + hi))?;
        let whole = simpson(flo, fmid, fhi, hi - lo);
        // Split the global budget across segments by length.
        let seg_tol = (tol * (hi - lo) / (b - a)).max(f64::MIN_POSITIVE);
        let panel = recurse(f, lo, flo, hi, fhi, fmid, whole, seg_tol, 0)?;
        total += panel.value;
        err += panel.error;
        converged &= panel.converged;
        lo = hi;
        flo = fhi;
    }
    if !converged && err > tol {
        return Err(PricingError::Numeric {
            reason: format!("quadrature failed to reach absolute tolerance {tol:e}"),
            achieved: err,
        });
    }
    Ok((total, err))
}

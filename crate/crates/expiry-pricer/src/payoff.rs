//! Payoff evaluation: survival probability, buyer interim utility, and the
//! seller's expected revenue, waiting time, and utility.
//!
//! The seller integrals are
//!
//! ```text
//! r̄ = p(0) − p(T)·e^{−λT(1−p(T))} + ∫₀ᵀ S(t)·p′(t) dt
//! τ̄ = ∫₀ᵀ S(t) dt,          S(t) = e^{−λt(1−w⁻¹(t))}
//! ```
//!
//! evaluated by adaptive Simpson quadrature with forced splits at the price
//! slope kinks and at the two times where the threshold inverse changes
//! branch (`t = w(v̲)` and the last interpolated grid time).

use crate::error::PricingError;
use crate::fmt::fmt_f64;
use crate::quad::{integrate, QUAD_TOL};
use crate::schedule::{Family, MarketParams, PriceSchedule};
use crate::threshold::ThresholdFunction;

/// Seller-side expected payoffs for one (schedule, threshold) pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SellerOutcome {
    pub expected_revenue: f64,
    pub expected_wait: f64,
    pub utility: f64,
    pub quadrature_error_estimate: f64,
}

impl SellerOutcome {
    /// JSON object `{"revenue": …, "wait": …, "utility": …, "quad_err": …}`.
    pub fn to_json(&self) -> String {
        format!(
            "{{\"revenue\": {}, \"wait\": {}, \"utility\": {}, \"quad_err\": {}}}",
            fmt_f64(self.expected_revenue),
            fmt_f64(self.expected_wait),
            fmt_f64(self.utility),
            fmt_f64(self.quadrature_error_estimate)
        )
    }

    /// CSV fragment `revenue,wait,utility`.
    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{}",
            fmt_f64(self.expected_revenue),
            fmt_f64(self.expected_wait),
            fmt_f64(self.utility)
        )
    }
}

/// Probability that the item is still unsold at time `t`:
/// `exp(−λ·t·(1 − w⁻¹(t)))`.
pub fn survival_probability(w: &ThresholdFunction, lambda: f64, t: f64) -> f64 {
    debug_assert!((0.0..=w.horizon() * (1.0 + 1e-12)).contains(&t), "t={t} outside [0, T]");
    let t = t.clamp(0.0, w.horizon());
    (-lambda * t * (1.0 - w.invert(t))).exp()
}

/// Buyer's time-0 expected utility from targeting purchase time `tau`:
/// `(v − p(τ))·S(τ)`. Independent of the buyer's arrival time; negative
/// values are legitimate when `v < p(τ)`.
pub fn interim_utility(
    v: f64,
    tau: f64,
    w: &ThresholdFunction,
    s: &PriceSchedule,
    lambda: f64,
) -> f64 {
    (v - s.price_unchecked(tau)) * survival_probability(w, lambda, tau)
}

/// Times where the threshold inverse changes branch; the payoff integrands
/// have slope kinks there.
fn inverse_kinks(w: &ThresholdFunction) -> Vec<f64> {
    let grid = w.grid();
    vec![grid[0].1, grid[grid.len() - 1].1]
}

/// Default absolute tolerance for the payoff quadratures.
pub const DEFAULT_QUADRATURE_TOL: f64 = QUAD_TOL;

fn check_quad_tol(tol: f64) -> Result<(), PricingError> {
    if !tol.is_finite() || tol <= 0.0 {
        return Err(PricingError::InvalidParameter(format!(
            "quadrature tolerance must be finite and positive, got {tol}"
        )));
    }
    Ok(())
}

/// Expected revenue via quadrature. `extra_splits` (in `t`-space) force
/// additional subdivision and must not change the value; they exist so tests
/// can assert split-refinement invariance.
pub(crate) fn revenue_with_error(
    w: &ThresholdFunction,
    s: &PriceSchedule,
    params: &MarketParams,
    extra_splits: &[f64],
    tol: f64,
) -> Result<(f64, f64), PricingError> {
    let lambda = params.lambda();
    let horizon = s.horizon();
    let p_terminal = s.terminal_price();
    let boundary = p_terminal * (-lambda * horizon * (1.0 - p_terminal)).exp();
    let (integral, err) = match s.family() {
        Family::Constant { .. } => (0.0, 0.0),
        Family::Linear { b, m } => {
            let t_kink = s.first_time_at_terminal();
            if m == 0.0 || b == 0.0 || t_kink == 0.0 {
                (0.0, 0.0)
            } else {
                let mut splits = inverse_kinks(w);
                splits.extend_from_slice(extra_splits);
                let f = |t: f64| -m * survival_probability(w, lambda, t);
                integrate(&f, 0.0, t_kink, &splits, tol)?
            }
        }
        Family::Polynomial { r, alpha } | Family::QuasiAuction { r, alpha } => {
            if r == 1.0 {
                (0.0, 0.0)
            } else if alpha >= 1.0 {
                // Slope is bounded; integrate directly in t.
                let mut splits = inverse_kinks(w);
                splits.extend_from_slice(extra_splits);
                let f =
                    |t: f64| s.slope_unchecked(t) * survival_probability(w, lambda, t);
                integrate(&f, 0.0, horizon, &splits, tol)?
            } else {
                // α < 1 has an integrable slope singularity at t = 0; the
                // substitution u = (t/T)^α absorbs it exactly:
                //   ∫₀ᵀ S(t)·p′(t) dt = −(1−r)·∫₀¹ S(T·u^{1/α}) du
                let inv_alpha = 1.0 / alpha;
                let to_u = |t: f64| (t / horizon).powf(alpha);
                let splits: Vec<f64> = inverse_kinks(w)
                    .iter()
                    .chain(extra_splits.iter())
                    .filter(|&&t| t > 0.0 && t < horizon)
                    .map(|&t| to_u(t))
                    .collect();
                let f = |u: f64| {
                    survival_probability(w, lambda, horizon * u.powf(inv_alpha))
                };
                let (value, err) = integrate(&f, 0.0, 1.0, &splits, tol)?;
                (-(1.0 - r) * value, (1.0 - r) * err)
            }
        }
    };
    Ok((s.start_price() - boundary + integral, err))
}

/// Expected waiting time `∫₀ᵀ S(t) dt` via the same quadrature machinery.
pub(crate) fn wait_with_error(
    w: &ThresholdFunction,
    params: &MarketParams,
    extra_splits: &[f64],
    tol: f64,
) -> Result<(f64, f64), PricingError> {
    let lambda = params.lambda();
    let mut splits = inverse_kinks(w);
    splits.extend_from_slice(extra_splits);
    let f = |t: f64| survival_probability(w, lambda, t);
    integrate(&f, 0.0, w.horizon(), &splits, tol)
}

/// Expected revenue `p(0) − p(T)·e^{−λT(1−p(T))} + ∫₀ᵀ S·p′ dt`.
pub fn expected_revenue(
    w: &ThresholdFunction,
    s: &PriceSchedule,
    params: &MarketParams,
) -> Result<f64, PricingError> {
    revenue_with_error(w, s, params, &[], QUAD_TOL).map(|(v, _)| v)
}

/// Expected time to sale (capped at `T` when the item expires unsold).
pub fn expected_waiting_time(
    w: &ThresholdFunction,
    params: &MarketParams,
) -> Result<f64, PricingError> {
    wait_with_error(w, params, &[], QUAD_TOL).map(|(v, _)| v)
}

/// Combine revenue and wait into the seller's linear-disutility objective
/// `U = r̄ − β·τ̄`.
pub fn seller_utility(revenue: f64, wait: f64, params: &MarketParams) -> SellerOutcome {
    SellerOutcome {
        expected_revenue: revenue,
        expected_wait: wait,
        utility: revenue - params.beta() * wait,
        quadrature_error_estimate: 0.0,
    }
}

/// Full quadrature evaluation of a (schedule, threshold) pair.
pub fn evaluate_seller(
    s: &PriceSchedule,
    w: &ThresholdFunction,
    params: &MarketParams,
) -> Result<SellerOutcome, PricingError> {
    evaluate_seller_with_tolerance(s, w, params, QUAD_TOL)
}

/// [`evaluate_seller`] with an explicit absolute quadrature tolerance.
pub fn evaluate_seller_with_tolerance(
    s: &PriceSchedule,
    w: &ThresholdFunction,
    params: &MarketParams,
    tol: f64,
) -> Result<SellerOutcome, PricingError> {
    check_quad_tol(tol)?;
    let (revenue, revenue_err) = revenue_with_error(w, s, params, &[], tol)?;
    let (wait, wait_err) = wait_with_error(w, params, &[], tol)?;
    let mut outcome = seller_utility(revenue, wait, params);
    outcome.quadrature_error_estimate = revenue_err + wait_err;
    Ok(outcome)
}

/// Closed-form seller payoffs for a constant schedule at price `c`:
/// `r̄ = c(1−e^{−x})`, `τ̄ = T(1−e^{−x})/x` with `x = λT(1−c)`; the `x → 0`
/// limit (`c → 1` or `λ → 0`) is a 2nd-order Taylor series, so both limits
/// give `τ̄ = T` without cancellation.
pub fn constant_closed_form(c: f64, params: &MarketParams) -> SellerOutcome {
    debug_assert!((0.0..=1.0).contains(&c), "constant price {c} outside [0, 1]");
    let horizon = params.horizon();
    let x = params.lambda() * horizon * (1.0 - c);
    let (revenue, wait) = if x < 1e-8 {
        let one_minus_exp_over_x = 1.0 - x / 2.0 + x * x / 6.0;
        (c * x * one_minus_exp_over_x, horizon * one_minus_exp_over_x)
    } else {
        let one_minus_exp = 1.0 - (-x).exp();
        (c * one_minus_exp, horizon * one_minus_exp / x)
    };
    seller_utility(revenue, wait, params)
}

//! Equilibrium construction: the four-step threshold procedure built around
//! the buyer indifference ODE
//!
//! ```text
//!            λ · w · (v − p(w))
//! w′(v) = ─────────────────────────────     (on the active range)
//!          λ·(1−v)·(v − p(w)) + p′(w)
//! ```
//!
//! Steps: (1) no-purchase region `w = +∞` on `[0, p(T))`; (2) boundary
//! condition `w(p(T)) =` first time the schedule reaches its terminal price;
//! (3) integrate forward in `v` until `w` hits 0 or `v` reaches `1 − step`
//! (the equation's `(1−v)` factor vanishes at 1, so the last step stops one
//! step short); (4) if `w` hit 0 at some `v̄ < 1`, buyers above `v̄` purchase
//! on arrival.
//!
//! Constant schedules bypass the ODE: their equilibrium is the closed-form
//! two-region step at `c` (the ODE solution from `w(c) = 0` is identically
//! zero).

use crate::error::PricingError;
use crate::schedule::{Family, MarketParams, PriceSchedule};
use crate::threshold::{Provenance, ThresholdFunction};

/// Tolerances and step control for the threshold construction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverConfig {
    /// Fixed Runge–Kutta step in valuation space.
    pub step: f64,
    /// Singularity guard: an ODE denominator smaller than this in magnitude
    /// aborts the construction.
    pub denominator_eps: f64,
    /// Width (in valuation) to which the `w → 0` event is bisected.
    pub event_window: f64,
    /// When set, the construction re-integrates at half the step and demands
    /// the solution change by less than this at every shared grid point.
    pub richardson_tol: Option<f64>,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            step: 1e-4,
            denominator_eps: 1e-10,
            event_window: 1e-8,
            richardson_tol: Some(1e-6),
        }
    }
}

impl SolverConfig {
    fn validate(&self) -> Result<(), PricingError> {
        if !(self.step.is_finite() && self.step > 0.0 && self.step < 0.5) {
            return Err(PricingError::InvalidParameter(format!(
                "solver step must lie in (0, 0.5), got {}",
                self.step
            )));
        }
        if !(self.denominator_eps > 0.0) || !(self.event_window > 0.0) {
            return Err(PricingError::InvalidParameter(
                "solver tolerances must be positive".to_string(),
            ));
        }
        Ok(())
    }
}

/// Right-hand side of the threshold ODE at `(v, w)`.
///
/// The price derivative entering the equation is the *active-segment* slope:
/// the equation lives on the falling part of the schedule, so at a linear
/// kink (the right endpoint of that segment, which is also the boundary
/// condition time) the falling slope `−m` applies, not the flat right
/// derivative.
pub fn ode_rhs(v: f64, w: f64, s: &PriceSchedule, lambda: f64) -> Result<f64, PricingError> {
    ode_rhs_eps(v, w, s, lambda, SolverConfig::default().denominator_eps)
}

fn ode_rhs_eps(
    v: f64,
    w: f64,
    s: &PriceSchedule,
    lambda: f64,
    den_eps: f64,
) -> Result<f64, PricingError> {
    let p_w = s.price_unchecked(w);
    let num = lambda * w * (v - p_w);
    if num == 0.0 {
        // Covers w = 0, λ = 0, and the boundary condition v = p(w(v)).
        return Ok(0.0);
    }
    let den = lambda * (1.0 - v) * (v - p_w) + s.construction_slope_at(w);
    if den.abs() < den_eps {
        return Err(PricingError::Construction {
            v,
            reason: format!("ODE denominator {den:e} within {den_eps:e} of zero"),
        });
    }
    Ok(num / den)
}

/// Denominator of the ODE at `(v, w)`, used for the sign-change diagnostic.
fn denominator(v: f64, w: f64, s: &PriceSchedule, lambda: f64) -> f64 {
    lambda * (1.0 - v) * (v - s.price_unchecked(w)) + s.construction_slope_at(w)
}

/// Outcome of one fixed-step integration pass: lattice points
/// `(v0 + k·h, w_k)` plus the bisected zero-hit valuation if `w` reached 0.
struct Integration {
    lattice: Vec<(f64, f64)>,
    zero_hit: Option<f64>,
}

fn rk4_step(
    s: &PriceSchedule,
    lambda: f64,
    v: f64,
    w: f64,
    h: f64,
    den_eps: f64,
) -> Result<f64, PricingError> {
    // Intermediate stages can poke marginally below zero near the w → 0
    // event; the rhs is evaluated with w floored at 0 (where it vanishes).
    let f = |vv: f64, ww: f64| ode_rhs_eps(vv, ww.max(0.0), s, lambda, den_eps);
    let k1 = f(v, w)?;
    let k2 = f(v + 0.5 * h, w + 0.5 * h * k1)?;
    let k3 = f(v + 0.5 * h, w + 0.5 * h * k2)?;
    let k4 = f(v + h, w + h * k3)?;
    Ok(w + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4))
}

fn integrate(
    s: &PriceSchedule,
    lambda: f64,
    v0: f64,
    w0: f64,
    h: f64,
    cfg: &SolverConfig,
) -> Result<Integration, PricingError> {
    let v_stop = 1.0 - cfg.step; // integration always stops at 1 − (base step)
    let n_steps = if v0 >= v_stop {
        0
    } else {
        ((v_stop - v0) / h + 1e-9).floor() as usize
    };
    let mut lattice = Vec::with_capacity(n_steps + 1);
    lattice.push((v0, w0));
    let mut w = w0;
    for k in 1..=n_steps {
        let v_prev = v0 + (k - 1) as f64 * h;
        let v_next = v0 + k as f64 * h;
        let d_before = denominator(v_prev, w, s, lambda);
        let w_next = rk4_step(s, lambda, v_prev, w, h, cfg.denominator_eps)?;
        if w_next < 0.0 {
            let v_bar = locate_zero(s, lambda, v_prev, w, h, cfg)?;
            return Ok(Integration { lattice, zero_hit: Some(v_bar) });
        }
        let d_after = denominator(v_next, w_next, s, lambda);
        if d_before.signum() * d_after.signum() < 0.0 {
            return Err(PricingError::Construction {
                v: v_next,
                reason: "ODE denominator crossed zero within a step".to_string(),
            });
        }
        if w_next > w + 1e-12 {
            return Err(PricingError::Construction {
                v: v_next,
                reason: "non-monotone numerical solution (w increased)".to_string(),
            });
        }
        lattice.push((v_next, w_next));
        if w_next == 0.0 {
            return Ok(Integration { lattice, zero_hit: Some(v_next) });
        }
        w = w_next;
    }
    Ok(Integration { lattice, zero_hit: None })
}

/// Bisect the step size until the valuation where `w` reaches zero is pinned
/// down to `cfg.event_window`.
fn locate_zero(
    s: &PriceSchedule,
    lambda: f64,
    v_prev: f64,
    w_prev: f64,
    h: f64,
    cfg: &SolverConfig,
) -> Result<f64, PricingError> {
    let mut lo = 0.0_f64; // fraction of the step with w ≥ 0
    let mut hi = 1.0_f64; // fraction of the step with w < 0
    while (hi - lo) * h > cfg.event_window {
        let mid = 0.5 * (lo + hi);
        let w_mid = rk4_step(s, lambda, v_prev, w_prev, mid * h, cfg.denominator_eps)?;
        if w_mid < 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(v_prev + 0.5 * (lo + hi) * h)
}

/// Generalized inverse `w⁻¹(t) = inf{v : w(v) ≤ t}` (free-function form of
/// [`ThresholdFunction::invert`]).
pub fn invert_threshold(w: &ThresholdFunction, t: f64) -> f64 {
    w.invert(t)
}

/// Construct the candidate equilibrium threshold for a schedule.
///
/// Constant schedules return the closed-form step exactly. Any schedule whose
/// boundary condition already sits at `w = 0` (price identically at its
/// terminal value never above it, e.g. a free item) degenerates the same way:
/// a step at `v̲` with purchase-on-arrival above it.
pub fn construct_threshold(
    s: &PriceSchedule,
    params: &MarketParams,
    cfg: &SolverConfig,
) -> Result<ThresholdFunction, PricingError> {
    cfg.validate()?;
    if (s.horizon() - params.horizon()).abs() > 1e-12 {
        return Err(PricingError::InvalidParameter(format!(
            "schedule horizon {} does not match market horizon {}",
            s.horizon(),
            params.horizon()
        )));
    }
    let horizon = s.horizon();
    if let Family::Constant { c } = s.family() {
        return ThresholdFunction::closed_form_constant(c, horizon);
    }
    let v0 = s.terminal_price();
    let w0 = s.first_time_at_terminal();
    if w0 == 0.0 {
        // Degenerate: the schedule opens at its terminal price, so the active
        // range collapses to a step at v̲ (everyone above buys on arrival).
        return ThresholdFunction::new(
            vec![(v0, 0.0)],
            v0,
            v0,
            Provenance::OdeConstructed,
            horizon,
        );
    }
    let lambda = params.lambda();
    let base = integrate(s, lambda, v0, w0, cfg.step, cfg)?;
    if let Some(tol) = cfg.richardson_tol {
        let halved = integrate(s, lambda, v0, w0, 0.5 * cfg.step, cfg)?;
        let mut max_diff = 0.0_f64;
        for (i, &(v, w)) in base.lattice.iter().enumerate() {
            let Some(&(v_half, w_half)) = halved.lattice.get(2 * i) else { break };
            debug_assert!((v - v_half).abs() < 1e-12);
            max_diff = max_diff.max((w - w_half).abs());
        }
        if max_diff > tol {
            return Err(PricingError::Numeric {
                reason: format!(
                    "step-halving convergence check failed for {} schedule (tolerance {tol:e})",
                    s.family_name()
                ),
                achieved: max_diff,
            });
        }
    }
    let mut grid = base.lattice;
    let upper = match base.zero_hit {
        Some(v_bar) => {
            if grid.last().map(|&(v, _)| v < v_bar).unwrap_or(false) {
                grid.push((v_bar, 0.0));
            }
            v_bar
        }
        None => 1.0,
    };
    ThresholdFunction::new(grid, v0, upper, Provenance::OdeConstructed, horizon)
}

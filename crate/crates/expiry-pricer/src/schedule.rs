//! Pricing-schedule families and market parameters.
//!
//! A schedule is a continuous, non-increasing price path `p(t)` on `[0, T]`.
//! Four parameterized families are supported:
//!
//! * `Constant`: `p(t) = c`;
//! * `Linear`: `p(t) = max{b − m·t, 0}` (kink where the price hits zero);
//! * `Polynomial`: `p(t) = 1 − (1−r)·(t/T)^α` falling from 1 to the terminal
//!   price `r`;
//! * `QuasiAuction`: a polynomial whose terminal price is pinned to the
//!   revenue-maximizing reserve `r★ = (λT−1)/(2λT)`, concentrating the
//!   discount near the deadline.
//!
//! Time is normalized internally (`t/T`) so the family formulas hold for any
//! horizon; the public API always takes absolute time.

use crate::error::PricingError;
use crate::fmt::fmt_f64;
use serde::Deserialize;

/// Market primitives: Poisson arrival rate λ, seller time-sensitivity β, and
/// horizon T.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MarketParams {
    lambda: f64,
    beta: f64,
    horizon: f64,
}

impl MarketParams {
    /// Validated constructor: λ ≥ 0, β ≥ 0, T > 0, all finite.
    pub fn new(lambda: f64, beta: f64, horizon: f64) -> Result<Self, PricingError> {
        if !lambda.is_finite() || lambda < 0.0 {
            return Err(PricingError::InvalidParameter(format!(
                "arrival rate lambda must be finite and non-negative, got {lambda}"
            )));
        }
        if !beta.is_finite() || beta < 0.0 {
            return Err(PricingError::InvalidParameter(format!(
                "time sensitivity beta must be finite and non-negative, got {beta}"
            )));
        }
        if !horizon.is_finite() || horizon <= 0.0 {
            return Err(PricingError::InvalidParameter(format!(
                "horizon T must be finite and strictly positive, got {horizon}"
            )));
        }
        Ok(MarketParams { lambda, beta, horizon })
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn horizon(&self) -> f64 {
        self.horizon
    }

    /// Same market with a different β (frontier tangency sweeps reuse the
    /// (revenue, wait) pairs across β values).
    pub fn with_beta(&self, beta: f64) -> Result<Self, PricingError> {
        MarketParams::new(self.lambda, beta, self.horizon)
    }
}

/// Family tag plus family-specific parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Family {
    Constant { c: f64 },
    Linear { b: f64, m: f64 },
    Polynomial { r: f64, alpha: f64 },
    QuasiAuction { r: f64, alpha: f64 },
}

/// A validated price schedule: family parameters plus the horizon T.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PriceSchedule {
    family: Family,
    horizon: f64,
}

fn check_horizon(horizon: f64) -> Result<(), PricingError> {
    if !horizon.is_finite() || horizon <= 0.0 {
        return Err(PricingError::InvalidParameter(format!(
            "horizon T must be finite and strictly positive, got {horizon}"
        )));
    }
    Ok(())
}

impl PriceSchedule {
    /// Constant price `p(t) = c`, with c ∈ [0, 1].
    pub fn constant(c: f64, horizon: f64) -> Result<Self, PricingError> {
        check_horizon(horizon)?;
        if !c.is_finite() || !(0.0..=1.0).contains(&c) {
            return Err(PricingError::InvalidParameter(format!(
                "constant price c must lie in [0,1], got {c}"
            )));
        }
        Ok(PriceSchedule { family: Family::Constant { c }, horizon })
    }

    /// Linear markdown `p(t) = max{b − m·t, 0}`, with b ∈ [0, 1] (so that
    /// p(0) ≤ 1 like every built-in family) and slope m ≥ 0.
    pub fn linear(b: f64, m: f64, horizon: f64) -> Result<Self, PricingError> {
        check_horizon(horizon)?;
        if !b.is_finite() || !(0.0..=1.0).contains(&b) {
            return Err(PricingError::InvalidParameter(format!(
                "linear intercept b must lie in [0,1], got {b}"
            )));
        }
        if !m.is_finite() || m < 0.0 {
            return Err(PricingError::InvalidParameter(format!(
                "linear slope m must be finite and non-negative, got {m}"
            )));
        }
        Ok(PriceSchedule { family: Family::Linear { b, m }, horizon })
    }

    /// Polynomial markdown `p(t) = 1 − (1−r)·(t/T)^α`, with terminal price
    /// r ∈ [0, 1] and exponent α > 0. The start price is hard-coded to 1.
    pub fn polynomial(r: f64, alpha: f64, horizon: f64) -> Result<Self, PricingError> {
        check_horizon(horizon)?;
        if !r.is_finite() || !(0.0..=1.0).contains(&r) {
            return Err(PricingError::InvalidParameter(format!(
                "polynomial terminal price r must lie in [0,1], got {r}"
            )));
        }
        if !alpha.is_finite() || alpha <= 0.0 {
            return Err(PricingError::InvalidParameter(format!(
                "polynomial exponent alpha must be finite and positive, got {alpha}"
            )));
        }
        Ok(PriceSchedule { family: Family::Polynomial { r, alpha }, horizon })
    }

    /// Quasi-auction schedule with an explicit reserve (used when
    /// deserializing; prefer [`make_quasi_auction`] to derive the reserve
    /// from market parameters). Requires r ∈ [0, 1] and α ≥ 1.
    pub fn quasi_auction(r: f64, alpha: f64, horizon: f64) -> Result<Self, PricingError> {
        check_horizon(horizon)?;
        if !r.is_finite() || !(0.0..=1.0).contains(&r) {
            return Err(PricingError::InvalidParameter(format!(
                "quasi-auction reserve r must lie in [0,1], got {r}"
            )));
        }
        if !alpha.is_finite() || alpha < 1.0 {
            return Err(PricingError::InvalidParameter(format!(
                "quasi-auction exponent alpha must be >= 1, got {alpha}"
            )));
        }
        Ok(PriceSchedule { family: Family::QuasiAuction { r, alpha }, horizon })
    }

    pub fn family(&self) -> Family {
        self.family
    }

    /// Lowercase family tag used in JSON/CSV artifacts.
    pub fn family_name(&self) -> &'static str {
        match self.family {
            Family::Constant { .. } => "constant",
            Family::Linear { .. } => "linear",
            Family::Polynomial { .. } => "polynomial",
            Family::QuasiAuction { .. } => "quasi_auction",
        }
    }

    pub fn horizon(&self) -> f64 {
        self.horizon
    }

    /// Start price p(0).
    pub fn start_price(&self) -> f64 {
        match self.family {
            Family::Constant { c } => c,
            Family::Linear { b, .. } => b,
            Family::Polynomial { .. } | Family::QuasiAuction { .. } => 1.0,
        }
    }

    /// Price at absolute time t ∈ [0, T].
    pub fn price_at(&self, t: f64) -> Result<f64, PricingError> {
        self.check_time(t)?;
        Ok(self.price_unchecked(t))
    }

    /// Right derivative of the price at t ∈ [0, T] (right-sided at kinks such
    /// as the linear clamp point, where it is zero).
    pub fn price_slope_at(&self, t: f64) -> Result<f64, PricingError> {
        self.check_time(t)?;
        Ok(self.slope_unchecked(t))
    }

    /// Terminal price p(T).
    pub fn terminal_price(&self) -> f64 {
        match self.family {
            Family::Constant { c } => c,
            Family::Linear { b, m } => (b - m * self.horizon).max(0.0),
            Family::Polynomial { r, .. } | Family::QuasiAuction { r, .. } => r,
        }
    }

    /// Earliest time at which the price equals its terminal value:
    /// T for strictly decreasing families, the kink time b/m for a linear
    /// schedule that hits zero before T, and 0 for constant segments.
    pub fn first_time_at_terminal(&self) -> f64 {
        match self.family {
            Family::Constant { .. } => 0.0,
            Family::Linear { b, m } => {
                if m == 0.0 || b == 0.0 {
                    0.0
                } else {
                    (b / m).min(self.horizon)
                }
            }
            Family::Polynomial { r, .. } | Family::QuasiAuction { r, .. } => {
                if r == 1.0 {
                    0.0
                } else {
                    self.horizon
                }
            }
        }
    }

    fn check_time(&self, t: f64) -> Result<(), PricingError> {
        if !t.is_finite() || t < 0.0 || t > self.horizon {
            return Err(PricingError::InvalidParameter(format!(
                "time {t} outside the schedule domain [0, {}]",
                self.horizon
            )));
        }
        Ok(())
    }

    /// Internal fast path: assumes t is within the domain up to floating-point
    /// drift and clamps it there (quadrature nodes can land at T + 1 ulp).
    pub(crate) fn price_unchecked(&self, t: f64) -> f64 {
        let t = t.clamp(0.0, self.horizon);
        match self.family {
            Family::Constant { c } => c,
            Family::Linear { b, m } => (b - m * t).max(0.0),
            Family::Polynomial { r, alpha } | Family::QuasiAuction { r, alpha } => {
                1.0 - (1.0 - r) * (t / self.horizon).powf(alpha)
            }
        }
    }

    pub(crate) fn slope_unchecked(&self, t: f64) -> f64 {
        let t = t.clamp(0.0, self.horizon);
        match self.family {
            Family::Constant { .. } => 0.0,
            Family::Linear { b, m } => {
                if m > 0.0 && t < b / m {
                    -m
                } else {
                    0.0
                }
            }
            Family::Polynomial { r, alpha } | Family::QuasiAuction { r, alpha } => {
                // d/dt [1 − (1−r)(t/T)^α] = −(1−r)·(α/T)·(t/T)^{α−1}.
                // For α < 1 the right derivative at t = 0 diverges to −∞.
                -(1.0 - r) * (alpha / self.horizon) * (t / self.horizon).powf(alpha - 1.0)
            }
        }
    }

    /// Slope seen by the equilibrium ODE: on the active segment the price is
    /// still falling, so at the linear kink (which is the right endpoint of
    /// the segment and the threshold's starting time) the relevant derivative
    /// is the falling one, −m, not the flat right derivative.
    pub(crate) fn construction_slope_at(&self, t: f64) -> f64 {
        match self.family {
            Family::Linear { b, m } => {
                if m > 0.0 && t <= (b / m).min(self.horizon) {
                    -m
                } else {
                    0.0
                }
            }
            _ => self.slope_unchecked(t),
        }
    }

    /// Inner JSON fields (`"family": …, params…, "T": …`) shared by the
    /// schedule object and composite records embedding one.
    pub(crate) fn json_fields(&self) -> String {
        let mut fields = vec![format!("\"family\": \"{}\"", self.family_name())];
        match self.family {
            Family::Constant { c } => fields.push(format!("\"c\": {}", fmt_f64(c))),
            Family::Linear { b, m } => {
                fields.push(format!("\"b\": {}", fmt_f64(b)));
                fields.push(format!("\"m\": {}", fmt_f64(m)));
            }
            Family::Polynomial { r, alpha } | Family::QuasiAuction { r, alpha } => {
                fields.push(format!("\"r\": {}", fmt_f64(r)));
                fields.push(format!("\"alpha\": {}", fmt_f64(alpha)));
            }
        }
        fields.push(format!("\"T\": {}", fmt_f64(self.horizon)));
        fields.join(", ")
    }

    /// Serialize to the canonical JSON object, e.g.
    /// `{"family": "linear", "b": 1.0, "m": 2.0, "T": 1.0}`.
    pub fn to_json(&self) -> String {
        format!("{{{}}}", self.json_fields())
    }

    /// Deserialize from the canonical JSON object. Unknown keys and keys that
    /// do not belong to the named family are rejected.
    pub fn from_json(text: &str) -> Result<Self, PricingError> {
        let wire: ScheduleWire = serde_json::from_str(text).map_err(|e| {
            PricingError::InvalidParameter(format!("malformed schedule JSON: {e}"))
        })?;
        wire.into_schedule()
    }

    /// Deserialize from an already-parsed JSON value (config files embed the
    /// schedule object directly).
    pub fn from_json_value(value: &serde_json::Value) -> Result<Self, PricingError> {
        let wire: ScheduleWire = serde_json::from_value(value.clone()).map_err(|e| {
            PricingError::InvalidParameter(format!("malformed schedule JSON: {e}"))
        })?;
        wire.into_schedule()
    }
}

/// Quasi-auction factory: polynomial shape with the terminal price pinned to
/// the revenue-maximizing reserve `r★ = (λT−1)/(2λT)`. Requires λT > 1 (the
/// reserve is non-positive otherwise, which the model does not cover) and
/// α ≥ 1.
pub fn make_quasi_auction(params: &MarketParams, alpha: f64) -> Result<PriceSchedule, PricingError> {
    let lt = params.lambda() * params.horizon();
    if lt <= 1.0 {
        return Err(PricingError::InvalidParameter(format!(
            "quasi-auction reserve undefined: requires lambda*T > 1, got lambda*T = {lt}"
        )));
    }
    let r_star = (lt - 1.0) / (2.0 * lt);
    PriceSchedule::quasi_auction(r_star, alpha, params.horizon())
}

/// Flat wire representation of a schedule JSON object. `deny_unknown_fields`
/// rejects keys outside the union of family parameters; family-specific
/// validation below rejects keys that belong to a different family.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ScheduleWire {
    family: String,
    #[serde(default)]
    c: Option<f64>,
    #[serde(default)]
    b: Option<f64>,
    #[serde(default)]
    m: Option<f64>,
    #[serde(default)]
    r: Option<f64>,
    #[serde(default)]
    alpha: Option<f64>,
    #[serde(rename = "T")]
    t: Option<f64>,
}

impl ScheduleWire {
    fn into_schedule(self) -> Result<PriceSchedule, PricingError> {
        let horizon = self.t.ok_or_else(|| {
            PricingError::InvalidParameter("schedule JSON missing key \"T\"".to_string())
        })?;
        let require = |name: &str, v: Option<f64>| {
            v.ok_or_else(|| {
                PricingError::InvalidParameter(format!(
                    "schedule JSON missing key \"{name}\" for family \"{}\"",
                    self.family
                ))
            })
        };
        let forbid = |name: &str, v: Option<f64>| {
            if v.is_some() {
                Err(PricingError::InvalidParameter(format!(
                    "schedule JSON key \"{name}\" does not apply to family \"{}\"",
                    self.family
                )))
            } else {
                Ok(())
            }
        };
        match self.family.as_str() {
            "constant" => {
                forbid("b", self.b)?;
                forbid("m", self.m)?;
                forbid("r", self.r)?;
                forbid("alpha", self.alpha)?;
                PriceSchedule::constant(require("c", self.c)?, horizon)
            }
            "linear" => {
                forbid("c", self.c)?;
                forbid("r", self.r)?;
                forbid("alpha", self.alpha)?;
                PriceSchedule::linear(require("b", self.b)?, require("m", self.m)?, horizon)
            }
            "polynomial" => {
                forbid("c", self.c)?;
                forbid("b", self.b)?;
                forbid("m", self.m)?;
                PriceSchedule::polynomial(
                    require("r", self.r)?,
                    require("alpha", self.alpha)?,
                    horizon,
                )
            }
            "quasi_auction" => {
                forbid("c", self.c)?;
                forbid("b", self.b)?;
                forbid("m", self.m)?;
                PriceSchedule::quasi_auction(
                    require("r", self.r)?,
                    require("alpha", self.alpha)?,
                    horizon,
                )
            }
            other => Err(PricingError::InvalidParameter(format!(
                "unknown schedule family \"{other}\" (expected constant, linear, polynomial, or quasi_auction)"
            ))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn sched(family: &str) -> PriceSchedule {
        match family {
            "constant" => PriceSchedule::constant(0.5, 1.0).unwrap(),
            "linear" => PriceSchedule::linear(1.0, 2.0, 1.0).unwrap(),
            "polynomial" => PriceSchedule::polynomial(0.2, 2.0, 1.0).unwrap(),
            _ => unreachable!(),
        }
    }

    #[test]
    fn price_at_matches_family_formulas() {
        assert_eq!(sched("constant").price_at(0.7).unwrap(), 0.5);
        assert_eq!(sched("linear").price_at(0.6).unwrap(), 0.0);
        assert!((sched("polynomial").price_at(0.5).unwrap() - 0.8).abs() < 1e-15);
    }

    #[test]
    fn price_slope_is_right_sided_at_kinks() {
        assert_eq!(sched("constant").price_slope_at(0.3).unwrap(), 0.0);
        assert_eq!(sched("linear").price_slope_at(0.3).unwrap(), -2.0);
        assert_eq!(sched("linear").price_slope_at(0.5).unwrap(), 0.0);
        assert_eq!(sched("linear").price_slope_at(0.6).unwrap(), 0.0);
        assert!((sched("polynomial").price_slope_at(0.5).unwrap() + 0.8).abs() < 1e-15);
    }

    #[test]
    fn construction_slope_stays_active_at_the_kink() {
        let s = sched("linear");
        assert_eq!(s.construction_slope_at(0.5), -2.0);
        assert_eq!(s.construction_slope_at(0.500001), 0.0);
        let flat = PriceSchedule::linear(1.0, 0.0, 1.0).unwrap();
        assert_eq!(flat.construction_slope_at(0.5), 0.0);
    }

    #[test]
    fn terminal_price_and_first_time() {
        let c = sched("constant");
        assert_eq!((c.terminal_price(), c.first_time_at_terminal()), (0.5, 0.0));
        let l = sched("linear");
        assert_eq!((l.terminal_price(), l.first_time_at_terminal()), (0.0, 0.5));
        let p = sched("polynomial");
        assert_eq!((p.terminal_price(), p.first_time_at_terminal()), (0.2, 1.0));
        // Linear schedule that never reaches zero: strictly decreasing to T.
        let l2 = PriceSchedule::linear(1.0, 0.5, 1.0).unwrap();
        assert_eq!((l2.terminal_price(), l2.first_time_at_terminal()), (0.5, 1.0));
        // Degenerate flat linear schedule: at its terminal price from t = 0.
        let l3 = PriceSchedule::linear(1.0, 0.0, 1.0).unwrap();
        assert_eq!((l3.terminal_price(), l3.first_time_at_terminal()), (1.0, 0.0));
    }

    #[test]
    fn price_at_first_terminal_time_equals_terminal_price() {
        for s in [
            sched("constant"),
            sched("linear"),
            sched("polynomial"),
            PriceSchedule::linear(0.8, 0.3, 2.0).unwrap(),
            PriceSchedule::polynomial(0.0, 0.5, 2.0).unwrap(),
            PriceSchedule::quasi_auction(0.45, 4.0, 1.0).unwrap(),
        ] {
            let t = s.first_time_at_terminal();
            assert!(
                (s.price_at(t).unwrap() - s.terminal_price()).abs() <= 1e-12,
                "{s:?}"
            );
        }
    }

    #[test]
    fn quasi_auction_reserve_formula() {
        let p = |lam| MarketParams::new(lam, 0.0, 1.0).unwrap();
        let q200 = make_quasi_auction(&p(200.0), 4.0).unwrap();
        assert!((q200.terminal_price() - 0.4975).abs() < 1e-15);
        let q10 = make_quasi_auction(&p(10.0), 4.0).unwrap();
        assert!((q10.terminal_price() - 0.45).abs() < 1e-15);
        assert!(matches!(
            make_quasi_auction(&p(1.0), 4.0),
            Err(PricingError::InvalidParameter(_))
        ));
        assert!(matches!(
            make_quasi_auction(&p(10.0), 0.5),
            Err(PricingError::InvalidParameter(_))
        ));
    }

    #[test]
    fn out_of_range_time_is_a_domain_error() {
        assert!(sched("constant").price_at(1.5).is_err());
        assert!(sched("constant").price_at(-0.1).is_err());
        assert!(sched("linear").price_slope_at(1.0 + 1e-9).is_err());
    }

    #[test]
    fn invalid_parameters_are_rejected() {
        assert!(PriceSchedule::constant(1.5, 1.0).is_err());
        assert!(PriceSchedule::constant(0.5, 0.0).is_err());
        assert!(PriceSchedule::linear(1.2, 1.0, 1.0).is_err());
        assert!(PriceSchedule::linear(1.0, -1.0, 1.0).is_err());
        assert!(PriceSchedule::polynomial(0.2, 0.0, 1.0).is_err());
        assert!(PriceSchedule::polynomial(-0.1, 2.0, 1.0).is_err());
        assert!(PriceSchedule::quasi_auction(0.45, 0.99, 1.0).is_err());
        assert!(MarketParams::new(-1.0, 0.0, 1.0).is_err());
        assert!(MarketParams::new(1.0, -0.5, 1.0).is_err());
        assert!(MarketParams::new(1.0, 0.0, 0.0).is_err());
        assert!(MarketParams::new(f64::NAN, 0.0, 1.0).is_err());
    }

    #[test]
    fn json_round_trip() {
        let samples = [
            PriceSchedule::constant(0.5, 1.0).unwrap(),
            PriceSchedule::linear(1.0, 2.0, 1.0).unwrap(),
            PriceSchedule::polynomial(0.2, 2.0, 2.0).unwrap(),
            PriceSchedule::quasi_auction(0.45, 4.0, 1.0).unwrap(),
        ];
        for s in samples {
            let text = s.to_json();
            let back = PriceSchedule::from_json(&text).unwrap();
            assert_eq!(s, back, "round trip failed for {text}");
        }
    }

    #[test]
    fn json_matches_the_documented_shape() {
        let s = PriceSchedule::from_json(
            "{\"family\": \"linear\", \"b\": 1.0, \"m\": 2.0, \"T\": 1.0}",
        )
        .unwrap();
        assert_eq!(s, PriceSchedule::linear(1.0, 2.0, 1.0).unwrap());
    }

    #[test]
    fn json_rejects_unknown_and_misplaced_keys() {
        assert!(PriceSchedule::from_json(
            "{\"family\": \"constant\", \"c\": 0.5, \"T\": 1.0, \"extra\": 1}"
        )
        .is_err());
        assert!(PriceSchedule::from_json(
            "{\"family\": \"linear\", \"b\": 1.0, \"m\": 2.0, \"c\": 0.5, \"T\": 1.0}"
        )
        .is_err());
        assert!(PriceSchedule::from_json("{\"family\": \"linear\", \"b\": 1.0, \"T\": 1.0}")
            .is_err());
        assert!(PriceSchedule::from_json("{\"family\": \"dutch\", \"T\": 1.0}").is_err());
        assert!(PriceSchedule::from_json("{\"family\": \"constant\", \"c\": 0.5}").is_err());
        assert!(PriceSchedule::from_json("not json").is_err());
    }

    proptest! {
        #[test]
        fn prices_are_non_increasing_and_bounded(
            family in 0usize..4,
            a in 0.0f64..=1.0,
            b in 0.01f64..=8.0,
            horizon in 0.1f64..=4.0,
            t1 in 0.0f64..=1.0,
            t2 in 0.0f64..=1.0,
        ) {
            let s = match family {
                0 => PriceSchedule::constant(a, horizon).unwrap(),
                1 => PriceSchedule::linear(a, b, horizon).unwrap(),
                2 => PriceSchedule::polynomial(a, b, horizon).unwrap(),
                _ => PriceSchedule::quasi_auction(a, b.max(1.0), horizon).unwrap(),
            };
            let (lo, hi) = if t1 <= t2 { (t1, t2) } else { (t2, t1) };
            let p_lo = s.price_at(lo * horizon).unwrap();
            let p_hi = s.price_at(hi * horizon).unwrap();
            prop_assert!(p_lo >= p_hi - 1e-12);
            prop_assert!((0.0..=1.0 + 1e-12).contains(&p_lo));
            prop_assert!(p_lo <= s.start_price() + 1e-12);
            // Dense-grid monotonicity, mirroring the documented 10^3-point check.
            let mut prev = s.start_price();
            for i in 0..=1000 {
                // Form the fraction first so i = 1000 lands exactly on the horizon.
                let p = s.price_at(horizon * (i as f64 / 1000.0)).unwrap();
                prop_assert!(p <= prev + 1e-12);
                prev = p;
            }
        }

        #[test]
        fn slope_matches_central_differences_at_smooth_points(
            family in 0usize..3,
            a in 0.0f64..=0.9,
            b in 0.5f64..=4.0,
            t_rel in 0.05f64..=0.95,
        ) {
            let horizon = 1.0;
            let s = match family {
                0 => PriceSchedule::constant(a, horizon).unwrap(),
                1 => PriceSchedule::linear(a.max(0.2), b, horizon).unwrap(),
                2 => PriceSchedule::polynomial(a, b, horizon).unwrap(),
                _ => unreachable!(),
            };
            let t = t_rel * horizon;
            let h = 1e-6;
            // Skip the immediate neighborhood of the linear kink, where the
            // two-sided difference straddles the non-smooth point.
            if let Family::Linear { b, m } = s.family() {
                let kink = b / m;
                if (t - kink).abs() < 10.0 * h {
                    return Ok(());
                }
            }
            let fd = (s.price_unchecked(t + h) - s.price_unchecked(t - h)) / (2.0 * h);
            prop_assert!(
                (s.price_slope_at(t).unwrap() - fd).abs() < 1e-6,
                "slope mismatch at t={t}: {} vs fd {fd}",
                s.price_slope_at(t).unwrap()
            );
        }
    }
}

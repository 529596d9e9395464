//! Equilibrium verification: checks that a constructed threshold actually
//! induces optimal buyer behaviour under the schedule it was built for.
//!
//! Two checks feed the pass/fail verdict:
//!  * rationality (necessary): `p(w(v)) ≤ v` at every grid valuation — no
//!    buyer targets a price above their value;
//!  * connected argmax (sufficient): for sampled valuations, the set of
//!    near-optimal purchase times `{τ : Π(τ) ≥ max Π − ε}` is a single
//!    contiguous interval of the τ-grid.
//!
//! A first-order residual `|dΠ/dτ|` at `τ = w(v)` is reported for diagnosis
//! but does not gate the verdict (boundary optima make it ill-defined in
//! legitimate cases).

use crate::fmt::fmt_f64;
use crate::payoff::interim_utility;
use crate::schedule::{MarketParams, PriceSchedule};
use crate::threshold::ThresholdFunction;

/// Resolution and tolerances for [`verify_equilibrium`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerifyConfig {
    /// Number of τ-grid points on `[0, T]` for the plateau scan.
    pub tau_points: usize,
    /// Plateau width, relative to the maximum utility.
    pub plateau_rel_tol: f64,
    /// Slack allowed in the rationality inequality `p(w(v)) ≤ v`.
    pub rationality_tol: f64,
    /// Number of valuations sampled strictly inside `(v̲, 1)`.
    pub value_samples: usize,
    /// Central-difference step (scaled by `T`) for the first-order residual.
    pub foc_step: f64,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            tau_points: 4096,
            plateau_rel_tol: 1e-9,
            rationality_tol: 1e-9,
            value_samples: 33,
            foc_step: 1e-5,
        }
    }
}

/// Outcome of the verification checks. `passed` is exactly the conjunction
/// of the two sub-flags.
#[derive(Debug, Clone, PartialEq)]
pub struct VerificationReport {
    pub passed: bool,
    pub rationality_ok: bool,
    pub connected_argmax_ok: bool,
    pub max_foc_residual: f64,
    pub offending_valuations: Vec<f64>,
}

impl VerificationReport {
    /// JSON object with the verdict, both sub-flags, the worst first-order
    /// residual, and the valuations that failed a check.
    pub fn to_json(&self) -> String {
        let offenders: Vec<String> =
            self.offending_valuations.iter().copied().map(fmt_f64).collect();
        format!(
            "{{\"passed\": {}, \"rationality_ok\": {}, \"connected_argmax_ok\": {}, \
             \"max_foc_residual\": {}, \"offending_valuations\": [{}]}}",
            self.passed,
            self.rationality_ok,
            self.connected_argmax_ok,
            fmt_f64(self.max_foc_residual),
            offenders.join(", ")
        )
    }
}

/// Run both checks for a (threshold, schedule) pair. Failures are reported
/// in the result, never raised.
pub fn verify_equilibrium(
    w: &ThresholdFunction,
    s: &PriceSchedule,
    params: &MarketParams,
    cfg: &VerifyConfig,
) -> VerificationReport {
    let lambda = params.lambda();
    let horizon = s.horizon();
    let mut offending: Vec<f64> = Vec::new();

    // (a) Rationality at every grid valuation.
    let mut rationality_ok = true;
    for &(v, wv) in w.grid() {
        if s.price_unchecked(wv) > v + cfg.rationality_tol {
            rationality_ok = false;
            offending.push(v);
        }
    }

    // Shared τ-grid quantities: prices and survival probabilities.
    let n_tau = cfg.tau_points.max(2);
    let taus: Vec<f64> = (0..n_tau)
        .map(|j| horizon * j as f64 / (n_tau - 1) as f64)
        .collect();
    let prices: Vec<f64> = taus.iter().map(|&t| s.price_unchecked(t)).collect();
    let survivals: Vec<f64> = taus
        .iter()
        .map(|&t| (-lambda * t * (1.0 - w.invert(t))).exp())
        .collect();

    // (b) Connected argmax over sampled valuations in (v̲, 1). The sample
    // deliberately extends past v̄ so degenerate (step) thresholds still get
    // their purchase-on-arrival region checked.
    let mut connected_ok = true;
    let mut max_foc_residual = 0.0_f64;
    let lo = w.lower_cutoff();
    let span = 1.0 - lo;
    if span > 0.0 {
        for i in 1..=cfg.value_samples {
            let v = lo + span * i as f64 / (cfg.value_samples + 1) as f64;
            let utilities: Vec<f64> =
                (0..n_tau).map(|j| (v - prices[j]) * survivals[j]).collect();
            let max_u = utilities.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            let threshold = max_u - cfg.plateau_rel_tol * max_u.abs().max(f64::MIN_POSITIVE);
            let first = utilities.iter().position(|&u| u >= threshold).unwrap();
            let last = utilities.iter().rposition(|&u| u >= threshold).unwrap();
            if utilities[first..=last].iter().any(|&u| u < threshold) {
                connected_ok = false;
                offending.push(v);
            }

            // (c) First-order residual at interior target times.
            let tau_v = w.evaluate(v);
            let h = cfg.foc_step * horizon;
            if tau_v.is_finite() && tau_v > h && tau_v < horizon - h {
                let up = interim_utility(v, tau_v + h, w, s, lambda);
                let down = interim_utility(v, tau_v - h, w, s, lambda);
                max_foc_residual = max_foc_residual.max(((up - down) / (2.0 * h)).abs());
            }
        }
    }

    VerificationReport {
        passed: rationality_ok && connected_ok,
        rationality_ok,
        connected_argmax_ok: connected_ok,
        max_foc_residual,
        offending_valuations: offending,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solver::{construct_threshold, SolverConfig};
    use crate::threshold::Provenance;

    fn params(lambda: f64) -> MarketParams {
        MarketParams::new(lambda, 0.0, 1.0).unwrap()
    }

    #[test]
    fn constant_equilibrium_verifies() {
        let s = PriceSchedule::constant(0.5, 1.0).unwrap();
        let w = ThresholdFunction::closed_form_constant(0.5, 1.0).unwrap();
        let report = verify_equilibrium(&w, &s, &params(1.0), &VerifyConfig::default());
        assert!(report.passed && report.rationality_ok && report.connected_argmax_ok);
        assert!(report.offending_valuations.is_empty());
        // Every sampled buyer above c buys on arrival, so no interior
        // first-order condition exists to evaluate.
        assert_eq!(report.max_foc_residual, 0.0);
    }

    #[test]
    fn linear_equilibrium_verifies_with_small_residual() {
        let s = PriceSchedule::linear(1.0, 1.0, 1.0).unwrap();
        let p = params(5.0);
        let w = construct_threshold(&s, &p, &SolverConfig::default()).unwrap();
        let report = verify_equilibrium(&w, &s, &p, &VerifyConfig::default());
        assert!(report.passed, "{report:?}");
        assert!(
            report.max_foc_residual < 1e-3,
            "first-order residual too large: {}",
            report.max_foc_residual
        );
    }

    #[test]
    fn polynomial_equilibrium_verifies() {
        let s = PriceSchedule::polynomial(0.2, 2.0, 1.0).unwrap();
        let p = params(10.0);
        let w = construct_threshold(&s, &p, &SolverConfig::default()).unwrap();
        let report = verify_equilibrium(&w, &s, &p, &VerifyConfig::default());
        assert!(report.passed, "{report:?}");
    }

    #[test]
    fn irrational_threshold_fails_rationality() {
        // Buy-immediately threshold against a schedule that opens at price 1:
        // every buyer with v < 1 would be paying above value.
        let s = PriceSchedule::polynomial(0.2, 8.0, 1.0).unwrap();
        let w = ThresholdFunction::new(
            vec![(0.0, 0.0)],
            0.0,
            0.0,
            Provenance::OdeConstructed,
            1.0,
        )
        .unwrap();
        let report = verify_equilibrium(&w, &s, &params(1.0), &VerifyConfig::default());
        assert!(!report.passed);
        assert!(!report.rationality_ok);
        assert!(report.offending_valuations.contains(&0.0));
    }

    #[test]
    fn passed_is_the_conjunction_of_the_sub_flags() {
        let s = PriceSchedule::linear(1.0, 2.0, 1.0).unwrap();
        let p = params(2.0);
        let w = construct_threshold(&s, &p, &SolverConfig::default()).unwrap();
        let report = verify_equilibrium(&w, &s, &p, &VerifyConfig::default());
        assert_eq!(report.passed, report.rationality_ok && report.connected_argmax_ok);
    }

    #[test]
    fn report_json_carries_flags_and_offenders() {
        let report = VerificationReport {
            passed: false,
            rationality_ok: false,
            connected_argmax_ok: true,
            max_foc_residual: 2.5e-4,
            offending_valuations: vec![0.125, 0.5],
        };
        let parsed: serde_json::Value = serde_json::from_str(&report.to_json()).unwrap();
        assert_eq!(parsed["passed"], false);
        assert_eq!(parsed["rationality_ok"], false);
        assert_eq!(parsed["connected_argmax_ok"], true);
        assert_eq!(parsed["max_foc_residual"].as_f64().unwrap(), 2.5e-4);
        let offenders = parsed["offending_valuations"].as_array().unwrap();
        assert_eq!(offenders.len(), 2);
        assert_eq!(offenders[0].as_f64().unwrap(), 0.125);
    }
}

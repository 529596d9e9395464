//! Run configuration: one JSON file with per-concern sections. Every section
//! is optional and every field inside a section is optional — absent fields
//! keep the library defaults — so a config only has to spell out what it
//! changes. Unknown keys are rejected everywhere to catch typos.
//!
//! ```json
//! {
//!   "market": {"lambda": 5.0, "beta": 1.0, "T": 1.0},
//!   "schedule": {"family": "linear", "b": 1.0, "m": 1.0, "T": 1.0},
//!   "solver": {"step": 1e-4, "richardson_tol": 1e-6},
//!   "simulation": {"replications": 100000, "seed": 42, "antithetic": false},
//!   "output": {"dir": "out", "format": "json"}
//! }
//! ```

use crate::error::CliError;
use expiry_pricer::sim::SimConfig;
use expiry_pricer::{
    MarketParams, PriceSchedule, PricingError, SolverConfig, VerifyConfig,
    DEFAULT_QUADRATURE_TOL,
};
use serde::{Deserialize, Deserializer};
use std::path::{Path, PathBuf};

/// Deserializes a present field to `Some(value)`, so an `Option<Option<T>>`
/// field distinguishes "absent" (outer `None`) from an explicit JSON `null`
/// (`Some(None)`).
fn explicit<'de, T, D>(deserializer: D) -> Result<Option<T>, D::Error>
where
    T: Deserialize<'de>,
    D: Deserializer<'de>,
{
    T::deserialize(deserializer).map(Some)
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MarketSection {
    pub lambda: Option<f64>,
    pub beta: Option<f64>,
    #[serde(rename = "T")]
    pub horizon: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolverSection {
    pub step: Option<f64>,
    pub denominator_eps: Option<f64>,
    pub event_window: Option<f64>,
    /// `null` disables the step-halving consistency check; absent keeps the
    /// default tolerance.
    #[serde(default, deserialize_with = "explicit")]
    pub richardson_tol: Option<Option<f64>>,
    /// Absolute tolerance for the payoff quadratures.
    pub quadrature_tol: Option<f64>,
}

impl SolverSection {
    pub fn apply(&self, base: SolverConfig) -> SolverConfig {
        SolverConfig {
            step: self.step.unwrap_or(base.step),
            denominator_eps: self.denominator_eps.unwrap_or(base.denominator_eps),
            event_window: self.event_window.unwrap_or(base.event_window),
            richardson_tol: match self.richardson_tol {
                None => base.richardson_tol,
                Some(explicit) => explicit,
            },
        }
    }

    pub fn quad_tol(&self) -> f64 {
        self.quadrature_tol.unwrap_or(DEFAULT_QUADRATURE_TOL)
    }
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerifySection {
    pub tau_points: Option<usize>,
    pub plateau_rel_tol: Option<f64>,
    pub rationality_tol: Option<f64>,
    pub value_samples: Option<usize>,
    pub foc_step: Option<f64>,
}

impl VerifySection {
    pub fn apply(&self, base: VerifyConfig) -> VerifyConfig {
        VerifyConfig {
            tau_points: self.tau_points.unwrap_or(base.tau_points),
            plateau_rel_tol: self.plateau_rel_tol.unwrap_or(base.plateau_rel_tol),
            rationality_tol: self.rationality_tol.unwrap_or(base.rationality_tol),
            value_samples: self.value_samples.unwrap_or(base.value_samples),
            foc_step: self.foc_step.unwrap_or(base.foc_step),
        }
    }
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimulationSection {
    pub replications: Option<u64>,
    pub seed: Option<u64>,
    pub antithetic: Option<bool>,
}

impl SimulationSection {
    pub fn apply(&self) -> SimConfig {
        let base = SimConfig::default();
        SimConfig {
            replications: self.replications.unwrap_or(base.replications),
            seed: self.seed.unwrap_or(base.seed),
            antithetic: self.antithetic.unwrap_or(base.antithetic),
        }
    }
}

/// Frontier sweep selection: either a named preset or a custom grid built
/// from the config's market section. The two styles are mutually exclusive.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FrontierSection {
    /// One of "thin", "moderate", "thick".
    pub preset: Option<String>,
    /// Tangency slopes to report a best point for (custom grids only;
    /// defaults to the market β).
    pub betas: Option<Vec<f64>>,
    /// `[lo, hi]` range for the log-spaced linear-slope grid.
    pub linear_slopes: Option<[f64; 2]>,
    /// Add the quasi-auction family (needs λT > 1).
    pub include_quasi_auction: Option<bool>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Json,
    Csv,
    Svg,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    pub dir: Option<PathBuf>,
    pub format: Option<OutputFormat>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default)]
    pub market: MarketSection,
    /// Schedule object in the library wire format,
    /// e.g. `{"family": "constant", "c": 0.5, "T": 1.0}`.
    #[serde(default)]
    pub schedule: Option<serde_json::Value>,
    #[serde(default)]
    pub solver: SolverSection,
    #[serde(default)]
    pub verify: VerifySection,
    #[serde(default)]
    pub simulation: SimulationSection,
    #[serde(default)]
    pub frontier: Option<FrontierSection>,
    #[serde(default)]
    pub output: OutputSection,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| {
            CliError::Io(format!("could not read config {}: {e}", path.display()))
        })?;
        serde_json::from_str(&text).map_err(|e| {
            CliError::Config(format!("could not parse config {}: {e}", path.display()))
        })
    }

    /// Market parameters with defaults λ=1, β=0, T=1 for absent fields.
    pub fn market_params(&self) -> Result<MarketParams, PricingError> {
        MarketParams::new(
            self.market.lambda.unwrap_or(1.0),
            self.market.beta.unwrap_or(0.0),
            self.market.horizon.unwrap_or(1.0),
        )
    }

    /// The configured schedule; required by solve/verify/simulate.
    pub fn schedule(&self) -> Result<PriceSchedule, PricingError> {
        let value = self.schedule.as_ref().ok_or_else(|| {
            PricingError::InvalidParameter(
                "this command needs a \"schedule\" object in the config".to_string(),
            )
        })?;
        PriceSchedule::from_json_value(value)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(text: &str) -> RunConfig {
        serde_json::from_str(text).unwrap()
    }

    #[test]
    fn empty_config_uses_all_defaults() {
        let cfg = parse("{}");
        let params = cfg.market_params().unwrap();
        assert_eq!((params.lambda(), params.beta(), params.horizon()), (1.0, 0.0, 1.0));
        let solver = cfg.solver.apply(SolverConfig::default());
        assert_eq!(solver, SolverConfig::default());
        assert_eq!(cfg.simulation.apply(), SimConfig::default());
        assert_eq!(cfg.solver.quad_tol(), DEFAULT_QUADRATURE_TOL);
        assert!(cfg.schedule().is_err());
        assert!(cfg.frontier.is_none());
    }

    #[test]
    fn sections_override_only_what_they_set() {
        let cfg = parse(
            r#"{
                "market": {"lambda": 5.0, "T": 2.0},
                "schedule": {"family": "linear", "b": 1.0, "m": 0.5, "T": 2.0},
                "solver": {"step": 1e-3},
                "verify": {"tau_points": 128},
                "simulation": {"seed": 7}
            }"#,
        );
        let params = cfg.market_params().unwrap();
        assert_eq!((params.lambda(), params.beta(), params.horizon()), (5.0, 0.0, 2.0));
        let solver = cfg.solver.apply(SolverConfig::default());
        assert_eq!(solver.step, 1e-3);
        assert_eq!(solver.denominator_eps, SolverConfig::default().denominator_eps);
        let verify = cfg.verify.apply(VerifyConfig::default());
        assert_eq!(verify.tau_points, 128);
        assert_eq!(verify.value_samples, VerifyConfig::default().value_samples);
        let sim = cfg.simulation.apply();
        assert_eq!(sim.seed, 7);
        assert_eq!(sim.replications, SimConfig::default().replications);
        let s = cfg.schedule().unwrap();
        assert_eq!(s.horizon(), 2.0);
    }

    #[test]
    fn richardson_null_disables_and_absent_keeps_default() {
        let absent = parse(r#"{"solver": {}}"#);
        assert_eq!(
            absent.solver.apply(SolverConfig::default()).richardson_tol,
            SolverConfig::default().richardson_tol
        );
        let null = parse(r#"{"solver": {"richardson_tol": null}}"#);
        assert_eq!(null.solver.apply(SolverConfig::default()).richardson_tol, None);
        let set = parse(r#"{"solver": {"richardson_tol": 1e-8}}"#);
        assert_eq!(set.solver.apply(SolverConfig::default()).richardson_tol, Some(1e-8));
    }

    #[test]
    fn unknown_keys_are_rejected_at_every_level() {
        assert!(serde_json::from_str::<RunConfig>(r#"{"markett": {}}"#).is_err());
        assert!(serde_json::from_str::<RunConfig>(r#"{"market": {"lam": 1.0}}"#).is_err());
        assert!(serde_json::from_str::<RunConfig>(r#"{"solver": {"steps": 1e-3}}"#).is_err());
        assert!(
            serde_json::from_str::<RunConfig>(r#"{"frontier": {"presets": "thin"}}"#).is_err()
        );
    }

    #[test]
    fn output_format_names_are_lowercase() {
        let cfg = parse(r#"{"output": {"dir": "artifacts", "format": "svg"}}"#);
        assert_eq!(cfg.output.format, Some(OutputFormat::Svg));
        assert_eq!(cfg.output.dir.as_deref(), Some(Path::new("artifacts")));
        assert!(serde_json::from_str::<RunConfig>(r#"{"output": {"format": "SVG"}}"#).is_err());
    }

    #[test]
    fn malformed_schedule_is_reported_as_invalid_parameter() {
        let cfg = parse(r#"{"schedule": {"family": "constant", "c": 0.5}}"#);
        let err = cfg.schedule().unwrap_err();
        assert!(matches!(err, PricingError::InvalidParameter(_)), "{err}");
    }
}

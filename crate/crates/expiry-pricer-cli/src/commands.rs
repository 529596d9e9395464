//! Subcommand implementations. Every command reads the shared [`RunConfig`],
//! writes its artifacts into the output directory, prints its primary JSON
//! document to standard output, and returns the process exit code.

use crate::config::{OutputFormat, RunConfig};
use crate::error::CliError;
use crate::svg::frontier_svg;
use expiry_pricer::benchmark::{
    preemptive_utility, thick_optimal_linear, thin_optimal_constant,
};
use expiry_pricer::fmt::fmt_f64;
use expiry_pricer::frontier::{
    self, default_sweeps, FrontierPoint, SweepSpec,
};
use expiry_pricer::sim;
use expiry_pricer::{
    constant_closed_form, construct_threshold, evaluate_seller_with_tolerance,
    verify_equilibrium, Family, MarketParams, PriceSchedule, PricingError, SellerOutcome,
    SolverConfig, ThresholdFunction, VerifyConfig,
};
use std::path::{Path, PathBuf};

/// Everything a command needs: the parsed config plus the already-resolved
/// output directory and format (flag overrides applied).
pub struct CommandContext {
    pub config: RunConfig,
    pub out_dir: PathBuf,
    pub format: OutputFormat,
}

/// Write one artifact, creating the output directory on first use. Content
/// gains a trailing newline when missing so files are diff- and cat-friendly.
fn write_artifact(dir: &Path, name: &str, content: &str) -> Result<(), CliError> {
    std::fs::create_dir_all(dir)
        .map_err(|e| CliError::Io(format!("could not create {}: {e}", dir.display())))?;
    let path = dir.join(name);
    let mut owned;
    let text = if content.ends_with('\n') {
        content
    } else {
        owned = String::with_capacity(content.len() + 1);
        owned.push_str(content);
        owned.push('\n');
        &owned
    };
    std::fs::write(&path, text)
        .map_err(|e| CliError::Io(format!("could not write {}: {e}", path.display())))?;
    log::info!("wrote {}", path.display());
    Ok(())
}

/// Threshold for a configured schedule: closed form for constants, ODE
/// construction otherwise. The horizon consistency check runs here because
/// the closed-form path never sees the market parameters.
fn build_threshold(
    s: &PriceSchedule,
    params: &MarketParams,
    solver: &SolverConfig,
) -> Result<ThresholdFunction, PricingError> {
    if (s.horizon() - params.horizon()).abs() > 1e-12 {
        return Err(PricingError::InvalidParameter(format!(
            "schedule horizon {} does not match market horizon {}",
            s.horizon(),
            params.horizon()
        )));
    }
    if let Family::Constant { c } = s.family() {
        ThresholdFunction::closed_form_constant(c, s.horizon())
    } else {
        construct_threshold(s, params, solver)
    }
}

/// `solve`: construct the threshold, write its CSV/JSON plus a cutoff
/// summary, and echo the summary.
pub fn cmd_solve(ctx: &CommandContext) -> Result<i32, CliError> {
    let params = ctx.config.market_params()?;
    let s = ctx.config.schedule()?;
    let solver = ctx.config.solver.apply(SolverConfig::default());
    let w = build_threshold(&s, &params, &solver)?;
    let verify_cfg = ctx.config.verify.apply(VerifyConfig::default());
    let report = verify_equilibrium(&w, &s, &params, &verify_cfg);
    let summary = format!(
        "{{\"lower_cutoff\": {}, \"upper_cutoff\": {}, \"max_foc_residual\": {}}}",
        fmt_f64(w.lower_cutoff()),
        fmt_f64(w.upper_cutoff()),
        fmt_f64(report.max_foc_residual)
    );
    write_artifact(&ctx.out_dir, "threshold.csv", &w.to_csv())?;
    write_artifact(&ctx.out_dir, "threshold.json", &w.to_json())?;
    write_artifact(&ctx.out_dir, "summary.json", &summary)?;
    println!("{summary}");
    Ok(0)
}

/// `verify`: construct and check the equilibrium; exit 0 iff it passes.
pub fn cmd_verify(ctx: &CommandContext) -> Result<i32, CliError> {
    let params = ctx.config.market_params()?;
    let s = ctx.config.schedule()?;
    let solver = ctx.config.solver.apply(SolverConfig::default());
    let w = build_threshold(&s, &params, &solver)?;
    let verify_cfg = ctx.config.verify.apply(VerifyConfig::default());
    let report = verify_equilibrium(&w, &s, &params, &verify_cfg);
    let json = report.to_json();
    write_artifact(&ctx.out_dir, "report.json", &json)?;
    println!("{json}");
    if report.passed {
        Ok(0)
    } else {
        eprintln!("verification failed; see report.json");
        Ok(3)
    }
}

/// `simulate`: Monte Carlo estimate for the configured schedule.
pub fn cmd_simulate(ctx: &CommandContext) -> Result<i32, CliError> {
    let params = ctx.config.market_params()?;
    let s = ctx.config.schedule()?;
    let solver = ctx.config.solver.apply(SolverConfig::default());
    let w = build_threshold(&s, &params, &solver)?;
    let sim_cfg = ctx.config.simulation.apply();
    let estimate = sim::estimate(&s, &w, &params, &sim_cfg)?;
    let json = estimate.to_json(sim_cfg.seed);
    write_artifact(&ctx.out_dir, "estimate.json", &json)?;
    println!("{json}");
    Ok(0)
}

/// `benchmark`: thin-market constant root and thick-market linear schedule,
/// each reported under both its own stylized model and the full strategic
/// model.
pub fn cmd_benchmark(ctx: &CommandContext) -> Result<i32, CliError> {
    let params = ctx.config.market_params()?;
    let solver = ctx.config.solver.apply(SolverConfig::default());
    let quad_tol = ctx.config.solver.quad_tol();

    let thin = thin_optimal_constant(&params)?;
    let u_preemptive = preemptive_utility(thin.c_star, &params).utility;
    let u_thin_full = constant_closed_form(thin.c_star, &params).utility;

    let thick_s = thick_optimal_linear(&params);
    let slope = params.beta();
    // A zero slope degenerates to the constant-1 schedule: the impatient
    // threshold has nothing to invert and the full model has a closed form.
    let u_impatient = if slope == 0.0 {
        None
    } else {
        let w = expiry_pricer::benchmark::impatient_threshold(&thick_s)?;
        Some(evaluate_seller_with_tolerance(&thick_s, &w, &params, quad_tol)?.utility)
    };
    let u_thick_full = if slope == 0.0 {
        constant_closed_form(1.0, &params).utility
    } else {
        let w = construct_threshold(&thick_s, &params, &solver)?;
        evaluate_seller_with_tolerance(&thick_s, &w, &params, quad_tol)?.utility
    };

    let json = format!(
        "{{\"thin\": {{\"c_star\": {}, \"c_hat\": {}, \"U_preemptive\": {}, \
         \"U_full_model\": {}}}, \"thick\": {{\"slope\": {}, \"U_impatient\": {}, \
         \"U_full_model\": {}}}}}",
        fmt_f64(thin.c_star),
        fmt_f64(thin.c_hat),
        fmt_f64(u_preemptive),
        fmt_f64(u_thin_full),
        fmt_f64(slope),
        u_impatient.map(fmt_f64).unwrap_or_else(|| "null".to_string()),
        fmt_f64(u_thick_full)
    );
    write_artifact(&ctx.out_dir, "benchmark.json", &json)?;
    println!("{json}");
    Ok(0)
}

/// Which analytic benchmark a frontier run compares its best point against.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum BenchmarkKind {
    None,
    /// Thin-market optimal constant, evaluated in the full model.
    ThinConstant,
    /// Thick-market linear `1 − βt`, evaluated in the full model.
    ThickLinear,
}

/// Resolved frontier run: market, tangency slopes, grids, and benchmark.
#[derive(Debug)]
struct FrontierPlan {
    /// Market with the primary β (the utility column's β).
    params: MarketParams,
    betas: Vec<f64>,
    slopes: (f64, f64),
    include_quasi: bool,
    benchmark: BenchmarkKind,
    preset: Option<&'static str>,
}

fn resolve_frontier_plan(config: &RunConfig) -> Result<FrontierPlan, CliError> {
    let section = config.frontier.as_ref().ok_or_else(|| {
        CliError::Config("the frontier command needs a \"frontier\" section".to_string())
    })?;
    if let Some(name) = section.preset.as_deref() {
        if section.betas.is_some()
            || section.linear_slopes.is_some()
            || section.include_quasi_auction.is_some()
        {
            return Err(CliError::Config(
                "frontier preset and custom grid fields are mutually exclusive".to_string(),
            ));
        }
        return match name {
            "thin" => Ok(FrontierPlan {
                params: MarketParams::new(1.0, 2.0, 1.0)?,
                betas: vec![2.0],
                slopes: (0.05, 4.0),
                include_quasi: false,
                benchmark: BenchmarkKind::ThinConstant,
                preset: Some("thin"),
            }),
            "moderate" => Ok(FrontierPlan {
                params: MarketParams::new(10.0, 0.1, 1.0)?,
                betas: vec![0.1, 1.0, 2.5],
                slopes: (0.2, 40.0),
                include_quasi: true,
                benchmark: BenchmarkKind::None,
                preset: Some("moderate"),
            }),
            "thick" => Ok(FrontierPlan {
                params: MarketParams::new(200.0, 20.0, 1.0)?,
                betas: vec![20.0],
                slopes: (2.0, 400.0),
                include_quasi: true,
                benchmark: BenchmarkKind::ThickLinear,
                preset: Some("thick"),
            }),
            other => Err(CliError::Config(format!(
                "unknown frontier preset \"{other}\" (expected thin, moderate, or thick)"
            ))),
        };
    }
    let market = config.market_params()?;
    let betas = match &section.betas {
        Some(list) if list.is_empty() => {
            return Err(CliError::Config("frontier betas must be non-empty".to_string()));
        }
        Some(list) => list.clone(),
        None => vec![market.beta()],
    };
    for &beta in &betas {
        if !beta.is_finite() || beta < 0.0 {
            return Err(CliError::Config(format!(
                "frontier betas must be finite and non-negative, got {beta}"
            )));
        }
    }
    let slopes = section.linear_slopes.ok_or_else(|| {
        CliError::Config(
            "a custom frontier section needs \"linear_slopes\": [lo, hi]".to_string(),
        )
    })?;
    if !(slopes[0] > 0.0 && slopes[1] > slopes[0]) {
        return Err(CliError::Config(format!(
            "frontier linear_slopes must satisfy 0 < lo < hi, got [{}, {}]",
            slopes[0], slopes[1]
        )));
    }
    Ok(FrontierPlan {
        params: market.with_beta(betas[0])?,
        betas,
        slopes: (slopes[0], slopes[1]),
        include_quasi: section.include_quasi_auction.unwrap_or(false),
        benchmark: BenchmarkKind::None,
        preset: None,
    })
}

/// One tangency read of the sweep: the best point at β and, when the run has
/// an analytic benchmark, the signed utility gap against it.
struct BetaResult {
    beta: f64,
    best: FrontierPoint,
    benchmark_utility: Option<f64>,
    gap: Option<f64>,
    relative_gap: Option<f64>,
}

impl BetaResult {
    fn to_json(&self) -> String {
        let opt = |x: Option<f64>| x.map(fmt_f64).unwrap_or_else(|| "null".to_string());
        format!(
            "{{\"beta\": {}, \"best\": {}, \"benchmark_utility\": {}, \"gap\": {}, \
             \"relative_gap\": {}}}",
            fmt_f64(self.beta),
            self.best.to_json(),
            opt(self.benchmark_utility),
            opt(self.gap),
            opt(self.relative_gap)
        )
    }
}

fn json_array(items: impl Iterator<Item = String>) -> String {
    let body: Vec<String> = items.collect();
    format!("[{}]", body.join(", "))
}

/// `frontier`: sweep the family grids, Pareto-filter, pick the best point per
/// configured β, and report the gap to the regime's analytic benchmark.
pub fn cmd_frontier(ctx: &CommandContext) -> Result<i32, CliError> {
    let plan = resolve_frontier_plan(&ctx.config)?;
    let solver = ctx.config.solver.apply(SolverConfig::default());
    let verify_cfg = ctx.config.verify.apply(VerifyConfig::default());
    let quad_tol = ctx.config.solver.quad_tol();

    let sweeps: Vec<SweepSpec> = default_sweeps(&plan.params, plan.slopes, plan.include_quasi)?
        .into_iter()
        .map(|spec| {
            spec.with_solver_config(solver)
                .with_verify_config(verify_cfg)
                .with_quadrature_tol(quad_tol)
        })
        .collect();
    let mut points: Vec<FrontierPoint> = Vec::new();
    for spec in &sweeps {
        points.extend(frontier::sweep(spec));
    }
    let pareto = frontier::pareto_filter(&points);

    let benchmark: Option<SellerOutcome> = match plan.benchmark {
        BenchmarkKind::None => None,
        BenchmarkKind::ThinConstant => {
            let sol = thin_optimal_constant(&plan.params)?;
            Some(constant_closed_form(sol.c_star, &plan.params))
        }
        BenchmarkKind::ThickLinear => {
            let s = thick_optimal_linear(&plan.params);
            let w = construct_threshold(&s, &plan.params, &solver)?;
            Some(evaluate_seller_with_tolerance(&s, &w, &plan.params, quad_tol)?)
        }
    };

    let mut results: Vec<BetaResult> = Vec::new();
    for &beta in &plan.betas {
        let best = frontier::best_point(&points, beta)?;
        let (benchmark_utility, gap, relative_gap) = match &benchmark {
            None => (None, None, None),
            Some(outcome) => {
                let gap = frontier::benchmark_gap(&points, beta, outcome)?;
                let u_best = best.revenue.unwrap() - beta * best.wait.unwrap();
                let relative = if u_best != 0.0 { Some(gap / u_best.abs()) } else { None };
                (Some(outcome.utility), Some(gap), relative)
            }
        };
        results.push(BetaResult { beta, best, benchmark_utility, gap, relative_gap });
    }

    let preset_json = plan
        .preset
        .map(|p| format!("\"{p}\""))
        .unwrap_or_else(|| "null".to_string());
    let n_verified = points.iter().filter(|p| p.verification_passed).count();
    let header = format!(
        "\"preset\": {preset_json}, \"lambda\": {}, \"beta\": {}, \"T\": {}, \
         \"n_points\": {}, \"n_verified\": {}, \"results\": {}",
        fmt_f64(plan.params.lambda()),
        fmt_f64(plan.params.beta()),
        fmt_f64(plan.params.horizon()),
        points.len(),
        n_verified,
        json_array(results.iter().map(BetaResult::to_json))
    );
    let full = format!(
        "{{{header}, \"pareto\": {}, \"points\": {}}}",
        json_array(pareto.iter().map(FrontierPoint::to_json)),
        json_array(points.iter().map(FrontierPoint::to_json))
    );
    write_artifact(&ctx.out_dir, "frontier.csv", &frontier::to_csv(&points))?;
    write_artifact(&ctx.out_dir, "frontier.json", &full)?;
    if ctx.format == OutputFormat::Svg {
        let tangents: Vec<(f64, f64, f64)> = results
            .iter()
            .map(|r| (r.beta, r.best.wait.unwrap(), r.best.revenue.unwrap()))
            .collect();
        write_artifact(&ctx.out_dir, "frontier.svg", &frontier_svg(&points, &tangents))?;
    }
    println!("{{{header}}}");
    Ok(0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::RunConfig;

    fn config(text: &str) -> RunConfig {
        serde_json::from_str(text).unwrap()
    }

    fn ctx(text: &str, dir: &Path) -> CommandContext {
        CommandContext {
            config: config(text),
            out_dir: dir.to_path_buf(),
            format: OutputFormat::Json,
        }
    }

    #[test]
    fn presets_fix_the_regime_parameters() {
        let plan =
            resolve_frontier_plan(&config(r#"{"frontier": {"preset": "thin"}}"#)).unwrap();
        assert_eq!(plan.params.lambda(), 1.0);
        assert_eq!(plan.betas, vec![2.0]);
        assert_eq!(plan.benchmark, BenchmarkKind::ThinConstant);
        assert!(!plan.include_quasi);

        let plan =
            resolve_frontier_plan(&config(r#"{"frontier": {"preset": "moderate"}}"#)).unwrap();
        assert_eq!(plan.params.lambda(), 10.0);
        assert_eq!(plan.betas, vec![0.1, 1.0, 2.5]);
        assert_eq!(plan.benchmark, BenchmarkKind::None);
        assert!(plan.include_quasi);

        let plan =
            resolve_frontier_plan(&config(r#"{"frontier": {"preset": "thick"}}"#)).unwrap();
        assert_eq!((plan.params.lambda(), plan.params.beta()), (200.0, 20.0));
        assert_eq!(plan.slopes, (2.0, 400.0));
        assert_eq!(plan.benchmark, BenchmarkKind::ThickLinear);
    }

    #[test]
    fn preset_conflicts_and_typos_are_config_errors() {
        let err = resolve_frontier_plan(&config(
            r#"{"frontier": {"preset": "thin", "betas": [1.0]}}"#,
        ))
        .unwrap_err();
        assert!(matches!(err, CliError::Config(_)), "{err}");
        let err = resolve_frontier_plan(&config(r#"{"frontier": {"preset": "dense"}}"#))
            .unwrap_err();
        assert!(err.to_string().contains("unknown frontier preset"), "{err}");
    }

    #[test]
    fn custom_plan_uses_the_market_and_defaults() {
        let plan = resolve_frontier_plan(&config(
            r#"{
                "market": {"lambda": 3.0, "beta": 0.5, "T": 1.0},
                "frontier": {"linear_slopes": [0.5, 2.0]}
            }"#,
        ))
        .unwrap();
        assert_eq!(plan.params.lambda(), 3.0);
        assert_eq!(plan.betas, vec![0.5]);
        assert_eq!(plan.slopes, (0.5, 2.0));
        assert!(!plan.include_quasi);
        assert_eq!(plan.benchmark, BenchmarkKind::None);
        assert!(plan.preset.is_none());
    }

    #[test]
    fn custom_plan_validates_slopes_and_betas() {
        let err = resolve_frontier_plan(&config(r#"{"frontier": {}}"#)).unwrap_err();
        assert!(err.to_string().contains("linear_slopes"), "{err}");
        let err = resolve_frontier_plan(&config(
            r#"{"frontier": {"linear_slopes": [2.0, 0.5]}}"#,
        ))
        .unwrap_err();
        assert!(err.to_string().contains("0 < lo < hi"), "{err}");
        let err = resolve_frontier_plan(&config(
            r#"{"frontier": {"betas": [], "linear_slopes": [0.5, 2.0]}}"#,
        ))
        .unwrap_err();
        assert!(err.to_string().contains("non-empty"), "{err}");
        let err = resolve_frontier_plan(&config(
            r#"{"frontier": {"betas": [-1.0], "linear_slopes": [0.5, 2.0]}}"#,
        ))
        .unwrap_err();
        assert!(err.to_string().contains("non-negative"), "{err}");
    }

    #[test]
    fn solve_writes_threshold_and_summary() {
        let dir = tempfile::tempdir().unwrap();
        let ctx = ctx(
            r#"{
                "market": {"lambda": 1.0, "T": 1.0},
                "schedule": {"family": "constant", "c": 0.5, "T": 1.0}
            }"#,
            dir.path(),
        );
        assert_eq!(cmd_solve(&ctx).unwrap(), 0);
        let summary = std::fs::read_to_string(dir.path().join("summary.json")).unwrap();
        let parsed: serde_json::Value = serde_json::from_str(&summary).unwrap();
        assert_eq!(parsed["lower_cutoff"].as_f64().unwrap(), 0.5);
        assert_eq!(parsed["upper_cutoff"].as_f64().unwrap(), 0.5);
        let csv = std::fs::read_to_string(dir.path().join("threshold.csv")).unwrap();
        assert!(csv.starts_with("v,w\n"));
        assert!(dir.path().join("threshold.json").exists());
    }

    #[test]
    fn benchmark_report_has_the_pinned_shape() {
        let dir = tempfile::tempdir().unwrap();
        let ctx = ctx(r#"{"market": {"lambda": 1.0, "beta": 2.0, "T": 1.0}}"#, dir.path());
        assert_eq!(cmd_benchmark(&ctx).unwrap(), 0);
        let text = std::fs::read_to_string(dir.path().join("benchmark.json")).unwrap();
        let parsed: serde_json::Value = serde_json::from_str(&text).unwrap();
        let thin = parsed["thin"].as_object().unwrap();
        assert_eq!(thin.len(), 4);
        assert!((thin["c_hat"].as_f64().unwrap() - 0.207940031569).abs() < 1e-9);
        let thick = parsed["thick"].as_object().unwrap();
        assert_eq!(thick.len(), 3);
        assert_eq!(thick["slope"].as_f64().unwrap(), 2.0);
        assert!(thick["U_impatient"].as_f64().is_some());
    }

    #[test]
    fn benchmark_with_zero_beta_reports_null_impatient_utility() {
        let dir = tempfile::tempdir().unwrap();
        let ctx = ctx(r#"{"market": {"lambda": 2.0, "beta": 0.0, "T": 1.0}}"#, dir.path());
        assert_eq!(cmd_benchmark(&ctx).unwrap(), 0);
        let text = std::fs::read_to_string(dir.path().join("benchmark.json")).unwrap();
        let parsed: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert!(parsed["thick"]["U_impatient"].is_null());
        // Constant price 1 never sells: zero revenue and, at β=0, zero utility.
        assert_eq!(parsed["thick"]["U_full_model"].as_f64().unwrap(), 0.0);
    }

    #[test]
    fn verify_maps_the_verdict_to_the_exit_code() {
        let dir = tempfile::tempdir().unwrap();
        let passing = ctx(
            r#"{
                "market": {"lambda": 5.0, "T": 1.0},
                "schedule": {"family": "linear", "b": 1.0, "m": 1.0, "T": 1.0}
            }"#,
            dir.path(),
        );
        assert_eq!(cmd_verify(&passing).unwrap(), 0);
        // A negative rationality slack turns the boundary equality
        // p(w(v̲)) = v̲ into a violation, deterministically failing the check.
        let failing = ctx(
            r#"{
                "market": {"lambda": 5.0, "T": 1.0},
                "schedule": {"family": "linear", "b": 1.0, "m": 1.0, "T": 1.0},
                "verify": {"rationality_tol": -1e-9}
            }"#,
            dir.path(),
        );
        assert_eq!(cmd_verify(&failing).unwrap(), 3);
        let text = std::fs::read_to_string(dir.path().join("report.json")).unwrap();
        let parsed: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(parsed["passed"], false);
    }

    #[test]
    fn simulate_is_deterministic_for_a_fixed_seed() {
        let dir = tempfile::tempdir().unwrap();
        let text = r#"{
            "market": {"lambda": 1.0, "T": 1.0},
            "schedule": {"family": "constant", "c": 0.5, "T": 1.0},
            "simulation": {"replications": 2000, "seed": 9}
        }"#;
        assert_eq!(cmd_simulate(&ctx(text, dir.path())).unwrap(), 0);
        let first = std::fs::read_to_string(dir.path().join("estimate.json")).unwrap();
        assert_eq!(cmd_simulate(&ctx(text, dir.path())).unwrap(), 0);
        let second = std::fs::read_to_string(dir.path().join("estimate.json")).unwrap();
        assert_eq!(first, second);
        let parsed: serde_json::Value = serde_json::from_str(&first).unwrap();
        assert_eq!(parsed["seed"].as_u64().unwrap(), 9);
        assert_eq!(parsed["replications"].as_u64().unwrap(), 2000);
    }

    #[test]
    fn mismatched_horizons_are_rejected_before_solving() {
        let dir = tempfile::tempdir().unwrap();
        let ctx = ctx(
            r#"{
                "market": {"lambda": 1.0, "T": 2.0},
                "schedule": {"family": "constant", "c": 0.5, "T": 1.0}
            }"#,
            dir.path(),
        );
        let err = cmd_solve(&ctx).unwrap_err();
        assert_eq!(err.exit_code(), 1);
        assert!(err.to_string().contains("horizon"), "{err}");
    }

    #[test]
    fn frontier_custom_grid_produces_points_and_results() {
        let dir = tempfile::tempdir().unwrap();
        let ctx = ctx(
            r#"{
                "market": {"lambda": 2.0, "beta": 1.0, "T": 1.0},
                "frontier": {"linear_slopes": [0.5, 2.0]},
                "solver": {"step": 2e-3, "richardson_tol": null}
            }"#,
            dir.path(),
        );
        assert_eq!(cmd_frontier(&ctx).unwrap(), 0);
        let csv = std::fs::read_to_string(dir.path().join("frontier.csv")).unwrap();
        // Header plus 64 constants + 64 linears + 256 polynomials.
        assert_eq!(csv.lines().count(), 1 + 384);
        let text = std::fs::read_to_string(dir.path().join("frontier.json")).unwrap();
        let parsed: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(parsed["preset"], serde_json::Value::Null);
        assert_eq!(parsed["points"].as_array().unwrap().len(), 384);
        let results = parsed["results"].as_array().unwrap();
        assert_eq!(results.len(), 1);
        assert_eq!(results[0]["beta"].as_f64().unwrap(), 1.0);
        assert!(results[0]["gap"].is_null());
        assert!(!dir.path().join("frontier.svg").exists());
    }
}

//! Revenue/wait frontier sweeps: evaluate a family's parameter grid, filter
//! Pareto-efficient points, and locate the tangency optimum for a seller
//! time-sensitivity β.
//!
//! Every grid point is published — failures are flagged, not dropped — so
//! frontier plots can show coverage holes where construction or verification
//! breaks down. Only verified points with payoffs participate in Pareto
//! filtering and best-point selection.

use crate::error::PricingError;
use crate::fmt::fmt_f64;
use crate::payoff::{
    constant_closed_form, evaluate_seller_with_tolerance, SellerOutcome, DEFAULT_QUADRATURE_TOL,
};
use crate::schedule::{make_quasi_auction, Family, MarketParams, PriceSchedule};
use crate::solver::{construct_threshold, SolverConfig};
use crate::threshold::ThresholdFunction;
use crate::verify::{verify_equilibrium, VerifyConfig};
use rayon::prelude::*;

/// One evaluated grid point. Payoffs are `None` exactly when the pipeline
/// failed before producing them (construction or quadrature).
#[derive(Debug, Clone, PartialEq)]
pub struct FrontierPoint {
    pub schedule: PriceSchedule,
    pub revenue: Option<f64>,
    pub wait: Option<f64>,
    /// `revenue − β·wait` at the sweep's β.
    pub utility: Option<f64>,
    pub verification_passed: bool,
    pub construction_failed: bool,
}

/// Header of the frontier CSV: family parameters are filled per family,
/// other cells stay empty.
pub const CSV_HEADER: &str = "family,c,b,m,r,alpha,T,revenue,wait,utility,verified,failed";

impl FrontierPoint {
    fn has_payoffs(&self) -> bool {
        self.revenue.is_some() && self.wait.is_some()
    }

    fn param_cells(&self) -> [Option<f64>; 5] {
        match self.schedule.family() {
            Family::Constant { c } => [Some(c), None, None, None, None],
            Family::Linear { b, m } => [None, Some(b), Some(m), None, None],
            Family::Polynomial { r, alpha } | Family::QuasiAuction { r, alpha } => {
                [None, None, None, Some(r), Some(alpha)]
            }
        }
    }

    /// One CSV row matching [`CSV_HEADER`].
    pub fn csv_row(&self) -> String {
        let opt = |x: Option<f64>| x.map(fmt_f64).unwrap_or_default();
        let params = self.param_cells().map(opt);
        format!(
            "{},{},{},{},{},{},{},{},{},{},{},{}",
            self.schedule.family_name(),
            params[0],
            params[1],
            params[2],
            params[3],
            params[4],
            fmt_f64(self.schedule.horizon()),
            opt(self.revenue),
            opt(self.wait),
            opt(self.utility),
            self.verification_passed,
            self.construction_failed
        )
    }

    /// JSON object with the schedule fields plus payoffs and flags.
    pub fn to_json(&self) -> String {
        let opt = |x: Option<f64>| x.map(fmt_f64).unwrap_or_else(|| "null".to_string());
        format!(
            "{{{}, \"revenue\": {}, \"wait\": {}, \"utility\": {}, \"verified\": {}, \"failed\": {}}}",
            self.schedule.json_fields(),
            opt(self.revenue),
            opt(self.wait),
            opt(self.utility),
            self.verification_passed,
            self.construction_failed
        )
    }
}

/// CSV document for a list of points (header + one row per point).
pub fn to_csv(points: &[FrontierPoint]) -> String {
    let mut out = String::with_capacity(64 * (points.len() + 1));
    out.push_str(CSV_HEADER);
    out.push('\n');
    for p in points {
        out.push_str(&p.csv_row());
        out.push('\n');
    }
    out
}

/// A validated sweep: one schedule family's grid, pre-built, plus the market
/// and the solver/verifier settings to run each point with.
#[derive(Debug, Clone)]
pub struct SweepSpec {
    schedules: Vec<PriceSchedule>,
    params: MarketParams,
    solver: SolverConfig,
    verify: VerifyConfig,
    quad_tol: f64,
}

impl SweepSpec {
    pub fn new(
        schedules: Vec<PriceSchedule>,
        params: MarketParams,
    ) -> Result<Self, PricingError> {
        if schedules.is_empty() {
            return Err(PricingError::InvalidParameter(
                "sweep grid must be non-empty".to_string(),
            ));
        }
        for s in &schedules {
            if (s.horizon() - params.horizon()).abs() > 1e-12 {
                return Err(PricingError::InvalidParameter(format!(
                    "sweep schedule horizon {} does not match market horizon {}",
                    s.horizon(),
                    params.horizon()
                )));
            }
        }
        Ok(SweepSpec {
            schedules,
            params,
            solver: SolverConfig::default(),
            verify: VerifyConfig::default(),
            quad_tol: DEFAULT_QUADRATURE_TOL,
        })
    }

    pub fn with_solver_config(mut self, solver: SolverConfig) -> Self {
        self.solver = solver;
        self
    }

    pub fn with_verify_config(mut self, verify: VerifyConfig) -> Self {
        self.verify = verify;
        self
    }

    pub fn with_quadrature_tol(mut self, tol: f64) -> Self {
        self.quad_tol = tol;
        self
    }

    pub fn params(&self) -> &MarketParams {
        &self.params
    }

    pub fn schedules(&self) -> &[PriceSchedule] {
        &self.schedules
    }
}

/// Logarithmically spaced grid `lo·(hi/lo)^(i/(n−1))`, `i = 0..n`.
pub fn log_spaced(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    assert!(n >= 2 && lo > 0.0 && hi > lo, "need n ≥ 2 and 0 < lo < hi");
    let ratio = hi / lo;
    (0..n).map(|i| lo * ratio.powf(i as f64 / (n - 1) as f64)).collect()
}

/// Default per-family grids for a regime: 64 constants `c = i/64`, 64 linear
/// slopes log-spaced over `linear_slopes`, a 16×16 polynomial grid
/// (`r = j/16`, α log-spaced on `[0.25, 32]`), and — when requested — 64
/// quasi-auction exponents log-spaced on `[1, 64]` (needs `λT > 1`).
pub fn default_sweeps(
    params: &MarketParams,
    linear_slopes: (f64, f64),
    include_quasi_auction: bool,
) -> Result<Vec<SweepSpec>, PricingError> {
    let horizon = params.horizon();
    let mut specs = Vec::new();

    let constants: Vec<PriceSchedule> = (0..64)
        .map(|i| PriceSchedule::constant(i as f64 / 64.0, horizon))
        .collect::<Result<_, _>>()?;
    specs.push(SweepSpec::new(constants, *params)?);

    let linears: Vec<PriceSchedule> = log_spaced(linear_slopes.0, linear_slopes.1, 64)
        .into_iter()
        .map(|m| PriceSchedule::linear(1.0, m, horizon))
        .collect::<Result<_, _>>()?;
    specs.push(SweepSpec::new(linears, *params)?);

    let mut polys = Vec::with_capacity(256);
    for j in 0..16 {
        for alpha in log_spaced(0.25, 32.0, 16) {
            polys.push(PriceSchedule::polynomial(j as f64 / 16.0, alpha, horizon)?);
        }
    }
    specs.push(SweepSpec::new(polys, *params)?);

    if include_quasi_auction {
        let quasis: Vec<PriceSchedule> = log_spaced(1.0, 64.0, 64)
            .into_iter()
            .map(|alpha| make_quasi_auction(params, alpha))
            .collect::<Result<_, _>>()?;
        specs.push(SweepSpec::new(quasis, *params)?);
    }
    Ok(specs)
}

fn evaluate_point(s: &PriceSchedule, spec: &SweepSpec) -> FrontierPoint {
    let outcome: Result<(ThresholdFunction, SellerOutcome), PricingError> =
        if let Family::Constant { c } = s.family() {
            ThresholdFunction::closed_form_constant(c, s.horizon())
                .map(|w| (w, constant_closed_form(c, &spec.params)))
        } else {
            construct_threshold(s, &spec.params, &spec.solver).and_then(|w| {
                let o = evaluate_seller_with_tolerance(s, &w, &spec.params, spec.quad_tol)?;
                Ok((w, o))
            })
        };
    match outcome {
        Ok((w, o)) => {
            let report = verify_equilibrium(&w, s, &spec.params, &spec.verify);
            if !report.passed {
                log::warn!(
                    "verification failed for {}: offending v = {:?}",
                    s.to_json(),
                    report.offending_valuations
                );
            }
            FrontierPoint {
                schedule: s.clone(),
                revenue: Some(o.expected_revenue),
                wait: Some(o.expected_wait),
                utility: Some(o.utility),
                verification_passed: report.passed,
                construction_failed: false,
            }
        }
        Err(err) => {
            log::warn!("construction failed for {}: {err}", s.to_json());
            FrontierPoint {
                schedule: s.clone(),
                revenue: None,
                wait: None,
                utility: None,
                verification_passed: false,
                construction_failed: true,
            }
        }
    }
}

/// Evaluate every grid point of a sweep. Points are returned in grid order
/// regardless of the degree of parallelism.
pub fn sweep(spec: &SweepSpec) -> Vec<FrontierPoint> {
    spec.schedules.par_iter().map(|s| evaluate_point(s, spec)).collect()
}

/// Pareto-efficient subset under (revenue ↑, wait ↓) among verified points
/// with payoffs, ordered by wait ascending.
pub fn pareto_filter(points: &[FrontierPoint]) -> Vec<FrontierPoint> {
    let mut eligible: Vec<&FrontierPoint> = points
        .iter()
        .filter(|p| p.verification_passed && p.has_payoffs())
        .collect();
    eligible.sort_by(|a, b| {
        a.wait
            .partial_cmp(&b.wait)
            .unwrap()
            .then(b.revenue.partial_cmp(&a.revenue).unwrap())
    });
    let mut kept: Vec<FrontierPoint> = Vec::new();
    let mut best_revenue = f64::NEG_INFINITY;
    let mut best_wait = f64::NEG_INFINITY;
    for p in eligible {
        let (r, t) = (p.revenue.unwrap(), p.wait.unwrap());
        if r > best_revenue {
            best_revenue = r;
            best_wait = t;
            kept.push(p.clone());
        } else if r == best_revenue && t == best_wait {
            // Exact duplicates do not dominate each other.
            kept.push(p.clone());
        }
    }
    kept
}

/// Tangency optimum: the verified point maximizing `revenue − β·wait`, ties
/// broken by smaller wait, then by grid order.
pub fn best_point(points: &[FrontierPoint], beta: f64) -> Result<FrontierPoint, PricingError> {
    let mut best: Option<(&FrontierPoint, f64)> = None;
    for p in points.iter().filter(|p| p.verification_passed && p.has_payoffs()) {
        let u = p.revenue.unwrap() - beta * p.wait.unwrap();
        let better = match best {
            None => true,
            Some((cur, cur_u)) => u > cur_u || (u == cur_u && p.wait < cur.wait),
        };
        if better {
            best = Some((p, u));
        }
    }
    best.map(|(p, _)| p.clone()).ok_or_else(|| {
        PricingError::Verification("no verified frontier point is available".to_string())
    })
}

/// Signed utility gap `U_best − U_benchmark` at the given β.
pub fn benchmark_gap(
    points: &[FrontierPoint],
    beta: f64,
    benchmark: &SellerOutcome,
) -> Result<f64, PricingError> {
    let best = best_point(points, beta)?;
    let u_best = best.revenue.unwrap() - beta * best.wait.unwrap();
    Ok(u_best - benchmark.utility)
}

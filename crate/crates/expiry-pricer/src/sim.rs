//! Deterministic Monte Carlo oracle of the market game.
//!
//! Each replication samples a buyer population (Poisson count, uniform
//! arrival times and values), plays the value-based threshold strategy
//! `τᵢ = max{w(vᵢ), αᵢ}`, and sells at the earliest target time. Estimates
//! are independent of thread count: replication `k` always uses ChaCha
//! stream `k` seeded from the config seed, partial sums are accumulated
//! sequentially inside fixed-size chunks, and chunk sums are combined in
//! chunk order (a fixed two-level summation tree).

use crate::error::PricingError;
use crate::fmt::fmt_f64;
use crate::schedule::{MarketParams, PriceSchedule};
use crate::threshold::ThresholdFunction;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Poisson};
use rayon::prelude::*;

/// Replication count, seed, and variance-reduction switch.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SimConfig {
    pub replications: u64,
    pub seed: u64,
    /// Pair replication `2j+1` with `2j` on the same substream: the buyer
    /// count is drawn through opposite Poisson quantiles (`Q(u)` vs
    /// `Q(1−u)`) and each buyer's `(v, α)` is reflected to `(1−v, T−α)`.
    /// Standard errors then treat each pair mean as one observation, since
    /// pair members are deliberately anticorrelated.
    pub antithetic: bool,
}

impl Default for SimConfig {
    fn default() -> Self {
        SimConfig { replications: 100_000, seed: 42, antithetic: false }
    }
}

/// Monte Carlo estimates of expected revenue and wait with standard errors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimEstimate {
    pub mean_revenue: f64,
    pub se_revenue: f64,
    pub mean_wait: f64,
    pub se_wait: f64,
    pub sale_fraction: f64,
    pub replications: u64,
}

impl SimEstimate {
    /// JSON object with the estimate plus the seed that produced it.
    pub fn to_json(&self, seed: u64) -> String {
        format!(
            "{{\"mean_revenue\": {}, \"se_revenue\": {}, \"mean_wait\": {}, \"se_wait\": {}, \
             \"sale_fraction\": {}, \"replications\": {}, \"seed\": {}}}",
            fmt_f64(self.mean_revenue),
            fmt_f64(self.se_revenue),
            fmt_f64(self.mean_wait),
            fmt_f64(self.se_wait),
            fmt_f64(self.sale_fraction),
            self.replications,
            seed
        )
    }
}

/// Side counts that are not part of the estimate proper.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SimDiagnostics {
    /// Replications whose sale time was attained by more than one buyer
    /// (broken by buyer index; a measure-zero event under the model).
    pub tie_events: u64,
}

struct RepOutcome {
    revenue: f64,
    wait: f64,
    sold: bool,
    tie: bool,
}

/// Resolve one realized buyer population: earliest target time wins; a
/// target is +∞ when the buyer never purchases (`w = ∞` or target past `T`).
fn play_buyers(s: &PriceSchedule, w: &ThresholdFunction, buyers: &[(f64, f64)]) -> RepOutcome {
    let horizon = s.horizon();
    let mut earliest = f64::INFINITY;
    let mut at_earliest = 0u32;
    for &(v, alpha) in buyers {
        let wv = w.evaluate(v);
        if !wv.is_finite() {
            continue;
        }
        let tau = wv.max(alpha);
        if tau > horizon {
            continue;
        }
        if tau < earliest {
            earliest = tau;
            at_earliest = 1;
        } else if tau == earliest {
            at_earliest += 1;
        }
    }
    if earliest.is_finite() {
        RepOutcome {
            revenue: s.price_unchecked(earliest),
            wait: earliest,
            sold: true,
            tie: at_earliest > 1,
        }
    } else {
        RepOutcome { revenue: 0.0, wait: horizon, sold: false, tie: false }
    }
}

/// How a replication couples to its pair partner.
#[derive(Clone, Copy, PartialEq, Eq)]
enum Sampling {
    /// Plain independent draw (rejection-sampled Poisson count).
    Independent,
    /// Antithetic pair member: the count comes from the Poisson quantile
    /// function at `u` (even member) or `1 − u` (odd member), and each
    /// buyer's `(v, α)` is reflected on the odd member. Count mirroring is
    /// what makes the coupling effective — the buyer count is the dominant
    /// variance channel of the compound-Poisson outcome.
    Paired { mirror: bool },
}

/// Largest mean handled by the exact quantile recursion (`e^{−μ}` underflows
/// near 708; stay well clear). Above it, pair members fall back to a shared
/// rejection-sampled count and mirror only the per-buyer uniforms.
const QUANTILE_MEAN_LIMIT: f64 = 500.0;

/// Smallest `n` with `P(Poisson(mean) ≤ n) ≥ u`, by direct CDF accumulation.
fn poisson_quantile(mean: f64, u: f64) -> usize {
    let mut pmf = (-mean).exp();
    let mut cdf = pmf;
    let mut n = 0usize;
    // Truncation point: the omitted tail mass is far below f64 resolution.
    let cap = (mean + 20.0 * mean.sqrt() + 50.0) as usize;
    while cdf < u && n < cap {
        n += 1;
        pmf *= mean / n as f64;
        cdf += pmf;
    }
    n
}

fn draw_replication<R: Rng>(
    s: &PriceSchedule,
    w: &ThresholdFunction,
    params: &MarketParams,
    poisson: Option<&Poisson<f64>>,
    rng: &mut R,
    sampling: Sampling,
) -> RepOutcome {
    let horizon = params.horizon();
    let mean = params.lambda() * horizon;
    let mirror = matches!(sampling, Sampling::Paired { mirror: true });
    let n = match poisson {
        None => 0,
        Some(p) => {
            if sampling != Sampling::Independent && mean <= QUANTILE_MEAN_LIMIT {
                let u = rng.gen::<f64>();
                poisson_quantile(mean, if mirror { 1.0 - u } else { u })
            } else {
                p.sample(rng) as usize
            }
        }
    };
    let mut buyers = Vec::with_capacity(n);
    for _ in 0..n {
        let alpha = rng.gen::<f64>() * horizon;
        let v = rng.gen::<f64>();
        if mirror {
            buyers.push((1.0 - v, horizon - alpha));
        } else {
            buyers.push((v, alpha));
        }
    }
    play_buyers(s, w, &buyers)
}

fn arrival_distribution(params: &MarketParams) -> Option<Poisson<f64>> {
    let mean = params.lambda() * params.horizon();
    (mean > 0.0).then(|| Poisson::new(mean).expect("positive mean"))
}

/// Sample one replication: returns `(revenue, wait)`.
pub fn simulate_replication<R: Rng>(
    s: &PriceSchedule,
    w: &ThresholdFunction,
    params: &MarketParams,
    rng: &mut R,
) -> (f64, f64) {
    let outcome = draw_replication(
        s,
        w,
        params,
        arrival_distribution(params).as_ref(),
        rng,
        Sampling::Independent,
    );
    (outcome.revenue, outcome.wait)
}

// Even, so antithetic pairs (2j, 2j+1) never straddle a chunk boundary.
const CHUNK: u64 = 4096;

/// Partial sums over statistical observations: one replication each in plain
/// mode, the mean of an antithetic pair in paired mode (the valid independent
/// unit for standard errors — pair members are correlated by design).
#[derive(Default, Clone, Copy)]
struct Sums {
    revenue: f64,
    revenue_sq: f64,
    wait: f64,
    wait_sq: f64,
    observations: u64,
    sold: u64,
    ties: u64,
}

impl Sums {
    fn push_observation(&mut self, revenue: f64, wait: f64) {
        self.revenue += revenue;
        self.revenue_sq += revenue * revenue;
        self.wait += wait;
        self.wait_sq += wait * wait;
        self.observations += 1;
    }

    fn merge(mut self, c: Sums) -> Sums {
        self.revenue += c.revenue;
        self.revenue_sq += c.revenue_sq;
        self.wait += c.wait;
        self.wait_sq += c.wait_sq;
        self.observations += c.observations;
        self.sold += c.sold;
        self.ties += c.ties;
        self
    }
}

fn chunk_ranges(n: u64) -> Vec<(u64, u64)> {
    (0..n.div_ceil(CHUNK))
        .map(|i| (i * CHUNK, ((i + 1) * CHUNK).min(n)))
        .collect()
}

fn substream_rng(seed: u64, k: u64, antithetic: bool) -> (ChaCha8Rng, Sampling) {
    let (stream, sampling) = if antithetic {
        (k / 2, Sampling::Paired { mirror: k % 2 == 1 })
    } else {
        (k, Sampling::Independent)
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    (rng, sampling)
}

fn standard_error(sum: f64, sum_sq: f64, n: u64) -> f64 {
    if n < 2 {
        return 0.0;
    }
    let n_f = n as f64;
    let mean = sum / n_f;
    let var_numerator = (sum_sq - n_f * mean * mean).max(0.0);
    (var_numerator / ((n_f - 1.0) * n_f)).sqrt()
}

/// Estimate revenue and wait together with tie diagnostics.
pub fn estimate_with_diagnostics(
    s: &PriceSchedule,
    w: &ThresholdFunction,
    params: &MarketParams,
    cfg: &SimConfig,
) -> Result<(SimEstimate, SimDiagnostics), PricingError> {
    if cfg.replications == 0 {
        return Err(PricingError::InvalidParameter(
            "simulation requires at least one replication".to_string(),
        ));
    }
    let poisson = arrival_distribution(params);
    let totals = chunk_ranges(cfg.replications)
        .par_iter()
        .map(|&(k0, k1)| {
            let mut acc = Sums::default();
            let mut pending: Option<RepOutcome> = None;
            for k in k0..k1 {
                let (mut rng, sampling) = substream_rng(cfg.seed, k, cfg.antithetic);
                let o = draw_replication(s, w, params, poisson.as_ref(), &mut rng, sampling);
                acc.sold += o.sold as u64;
                acc.ties += o.tie as u64;
                if !cfg.antithetic {
                    acc.push_observation(o.revenue, o.wait);
                } else if let Some(first) = pending.take() {
                    acc.push_observation(
                        0.5 * (first.revenue + o.revenue),
                        0.5 * (first.wait + o.wait),
                    );
                } else {
                    pending = Some(o);
                }
            }
            // An odd replication count leaves the final draw unpaired; it
            // still carries the estimand's mean and counts as an observation.
            if let Some(last) = pending {
                acc.push_observation(last.revenue, last.wait);
            }
            acc
        })
        .collect::<Vec<_>>()
        .into_iter()
        .fold(Sums::default(), Sums::merge);
    let n = cfg.replications;
    let n_obs = totals.observations;
    let estimate = SimEstimate {
        mean_revenue: totals.revenue / n_obs as f64,
        se_revenue: standard_error(totals.revenue, totals.revenue_sq, n_obs),
        mean_wait: totals.wait / n_obs as f64,
        se_wait: standard_error(totals.wait, totals.wait_sq, n_obs),
        sale_fraction: totals.sold as f64 / n as f64,
        replications: n,
    };
    Ok((estimate, SimDiagnostics { tie_events: totals.ties }))
}

/// Estimate revenue and wait; deterministic for fixed `(seed, replications)`.
pub fn estimate(
    s: &PriceSchedule,
    w: &ThresholdFunction,
    params: &MarketParams,
    cfg: &SimConfig,
) -> Result<SimEstimate, PricingError> {
    estimate_with_diagnostics(s, w, params, cfg).map(|(e, _)| e)
}

/// Empirical survival curve: fraction of replications whose sale time
/// exceeds each requested `t` (expired-unsold counts as surviving).
pub fn estimate_survival_curve(
    s: &PriceSchedule,
    w: &ThresholdFunction,
    params: &MarketParams,
    cfg: &SimConfig,
    times: &[f64],
) -> Result<Vec<f64>, PricingError> {
    if cfg.replications == 0 {
        return Err(PricingError::InvalidParameter(
            "simulation requires at least one replication".to_string(),
        ));
    }
    let poisson = arrival_distribution(params);
    let counts = chunk_ranges(cfg.replications)
        .par_iter()
        .map(|&(k0, k1)| {
            let mut survived = vec![0u64; times.len()];
            for k in k0..k1 {
                let (mut rng, sampling) = substream_rng(cfg.seed, k, cfg.antithetic);
                let o = draw_replication(s, w, params, poisson.as_ref(), &mut rng, sampling);
                for (count, &t) in survived.iter_mut().zip(times) {
                    if !o.sold || o.wait > t {
                        *count += 1;
                    }
                }
            }
            survived
        })
        .collect::<Vec<_>>()
        .into_iter()
        .fold(vec![0u64; times.len()], |mut total, c| {
            for (t, x) in total.iter_mut().zip(c) {
                *t += x;
            }
            total
        });
    Ok(counts.into_iter().map(|c| c as f64 / cfg.replications as f64).collect())
}

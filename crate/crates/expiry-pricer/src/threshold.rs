//! The equilibrium object: a threshold time function `w(v)` mapping buyer
//! valuations to target purchase times.
//!
//! `w` is stored as a monotone grid over the *active* valuation range plus
//! two cutoffs: below `lower_cutoff` buyers never purchase (`w = +∞`), at or
//! above `upper_cutoff` they purchase on arrival (`w = 0`). Between the two,
//! `w` is evaluated by linear interpolation on the grid.

use crate::error::PricingError;
use crate::fmt::{fmt_f64, fmt_f64_or_inf};

/// How a threshold was produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    /// Numerical integration of the equilibrium ODE.
    OdeConstructed,
    /// Closed-form step function for constant schedules.
    ClosedFormConstant,
    /// Complete-impatience inverse `w = p⁻¹`.
    ClosedFormImpatient,
}

impl Provenance {
    pub fn as_str(&self) -> &'static str {
        match self {
            Provenance::OdeConstructed => "ode_constructed",
            Provenance::ClosedFormConstant => "closed_form_constant",
            Provenance::ClosedFormImpatient => "closed_form_impatient",
        }
    }
}

/// Threshold time function with its active grid and cutoffs.
#[derive(Debug, Clone, PartialEq)]
pub struct ThresholdFunction {
    /// Active samples `(v, w(v))`, `v` strictly increasing, `w` finite and
    /// non-increasing.
    grid: Vec<(f64, f64)>,
    lower_cutoff: f64,
    upper_cutoff: f64,
    provenance: Provenance,
    horizon: f64,
}

impl ThresholdFunction {
    /// Build a threshold from its parts, checking the regularity invariants:
    /// grid non-empty, valuations strictly increasing in [0, 1], target times
    /// finite, within [0, T], and non-increasing.
    pub fn new(
        grid: Vec<(f64, f64)>,
        lower_cutoff: f64,
        upper_cutoff: f64,
        provenance: Provenance,
        horizon: f64,
    ) -> Result<Self, PricingError> {
        if grid.is_empty() {
            return Err(PricingError::Construction {
                v: lower_cutoff,
                reason: "empty threshold grid".to_string(),
            });
        }
        if !(horizon.is_finite() && horizon > 0.0) {
            return Err(PricingError::Construction {
                v: lower_cutoff,
                reason: format!("invalid horizon {horizon}"),
            });
        }
        let mut prev: Option<(f64, f64)> = None;
        for &(v, w) in &grid {
            if !v.is_finite() || !(0.0..=1.0).contains(&v) {
                return Err(PricingError::Construction {
                    v,
                    reason: "grid valuation outside [0,1]".to_string(),
                });
            }
            if !w.is_finite() || w < 0.0 || w > horizon * (1.0 + 1e-12) {
                return Err(PricingError::Construction {
                    v,
                    reason: format!("grid target time {w} outside [0, T]"),
                });
            }
            if let Some((pv, pw)) = prev {
                if v <= pv {
                    return Err(PricingError::Construction {
                        v,
                        reason: "grid valuations not strictly increasing".to_string(),
                    });
                }
                if w > pw + 1e-12 {
                    return Err(PricingError::Construction {
                        v,
                        reason: "non-monotone numerical solution (w increased)".to_string(),
                    });
                }
            }
            prev = Some((v, w));
        }
        let first_v = grid[0].0;
        let last_v = grid[grid.len() - 1].0;
        if (lower_cutoff - first_v).abs() > 1e-12 {
            return Err(PricingError::Construction {
                v: lower_cutoff,
                reason: "lower cutoff must coincide with the first grid valuation".to_string(),
            });
        }
        if upper_cutoff < last_v - 1e-12 || upper_cutoff > 1.0 {
            return Err(PricingError::Construction {
                v: upper_cutoff,
                reason: "upper cutoff must lie between the last grid valuation and 1".to_string(),
            });
        }
        Ok(ThresholdFunction { grid, lower_cutoff, upper_cutoff, provenance, horizon })
    }

    /// Closed-form two-region step threshold for a constant price c:
    /// never purchase below c, purchase on arrival at or above c.
    pub fn closed_form_constant(c: f64, horizon: f64) -> Result<Self, PricingError> {
        ThresholdFunction::new(vec![(c, 0.0)], c, c, Provenance::ClosedFormConstant, horizon)
    }

    /// Valuation below which buyers never purchase (`w = +∞`), `v̲`.
    pub fn lower_cutoff(&self) -> f64 {
        self.lower_cutoff
    }

    /// Valuation at/above which buyers purchase on arrival (`w = 0`), `v̄`.
    pub fn upper_cutoff(&self) -> f64 {
        self.upper_cutoff
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    pub fn horizon(&self) -> f64 {
        self.horizon
    }

    /// Active grid samples `(v, w)`.
    pub fn grid(&self) -> &[(f64, f64)] {
        &self.grid
    }

    /// Target purchase time for valuation v: `+∞` below the lower cutoff,
    /// 0 at/above the upper cutoff, interpolated on the grid in between.
    pub fn evaluate(&self, v: f64) -> f64 {
        if v < self.lower_cutoff {
            return f64::INFINITY;
        }
        if v >= self.upper_cutoff {
            return 0.0;
        }
        let grid = &self.grid;
        let last = grid.len() - 1;
        if v <= grid[0].0 {
            return grid[0].1;
        }
        if v >= grid[last].0 {
            // Valuations in the sliver between the last grid point and the
            // upper cutoff keep the last computed target time.
            return grid[last].1;
        }
        // First index with grid v strictly above the query.
        let hi = grid.partition_point(|&(gv, _)| gv <= v);
        let (v0, w0) = grid[hi - 1];
        let (v1, w1) = grid[hi];
        let t = (v - v0) / (v1 - v0);
        w0 + t * (w1 - w0)
    }

    /// Generalized inverse `w⁻¹(t) = inf{v : w(v) ≤ t}`.
    ///
    /// Conventions: `t ≥ w(v̲)` returns `v̲`; a query below every grid value
    /// returns the upper cutoff (for thresholds that stay positive up to
    /// valuation 1 this is 1: no buyer plans a purchase that early).
    pub fn invert(&self, t: f64) -> f64 {
        debug_assert!(t >= 0.0, "threshold inverse queried at negative time {t}");
        let grid = &self.grid;
        if t >= grid[0].1 {
            return self.lower_cutoff;
        }
        let last = grid.len() - 1;
        if t < grid[last].1 {
            return self.upper_cutoff;
        }
        // First index with w ≤ t; exists because w(last) ≤ t < w(0). The
        // bracketing pair has w0 > t ≥ w1, so the interpolated crossing is the
        // infimum of the level set {v : w(v) ≤ t}.
        let j = grid.partition_point(|&(_, gw)| gw > t);
        let (v0, w0) = grid[j - 1];
        let (v1, w1) = grid[j];
        v0 + (w0 - t) / (w0 - w1) * (v1 - v0)
    }

    /// CSV serialization (`v,w` header, `inf` for the no-purchase region).
    pub fn to_csv(&self) -> String {
        let mut out = String::from("v,w\n");
        if self.lower_cutoff > 0.0 {
            out.push_str(&format!("{},{}\n", fmt_f64(0.0), fmt_f64_or_inf(f64::INFINITY)));
        }
        for &(v, w) in &self.grid {
            out.push_str(&format!("{},{}\n", fmt_f64(v), fmt_f64(w)));
        }
        let last_v = self.grid[self.grid.len() - 1].0;
        if self.upper_cutoff < 1.0 && last_v < 1.0 {
            out.push_str(&format!("{},{}\n", fmt_f64(1.0), fmt_f64(0.0)));
        }
        out
    }

    /// JSON serialization: cutoffs, provenance, horizon, and the active grid.
    pub fn to_json(&self) -> String {
        let mut rows = String::new();
        for (i, &(v, w)) in self.grid.iter().enumerate() {
            if i > 0 {
                rows.push_str(", ");
            }
            rows.push_str(&format!("[{}, {}]", fmt_f64(v), fmt_f64(w)));
        }
        format!(
            "{{\"provenance\": \"{}\", \"lower_cutoff\": {}, \"upper_cutoff\": {}, \"T\": {}, \"grid\": [{}]}}",
            self.provenance.as_str(),
            fmt_f64(self.lower_cutoff),
            fmt_f64(self.upper_cutoff),
            fmt_f64(self.horizon),
            rows
        )
    }
}

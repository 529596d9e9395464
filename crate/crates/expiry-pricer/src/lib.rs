//! Pricing a single expiring item sold to strategically waiting buyers.
//!
//! A seller commits to a non-increasing price schedule `p(t)` on a deadline
//! window `[0, T]`; buyers arrive at Poisson rate `λ` with uniform private
//! values and play value-based threshold strategies: a buyer with value `v`
//! targets purchase time `max{w(v), α}` where `α` is their arrival time. The
//! item goes to the earliest target time.
//!
//! The crate provides:
//! * schedule families (constant, linear, polynomial, quasi-auction) with a
//!   JSON wire format ([`schedule`]);
//! * equilibrium threshold construction by Runge–Kutta integration of the
//!   buyer indifference ODE, plus closed forms where they exist ([`solver`],
//!   [`threshold`]);
//! * verification of the equilibrium conditions ([`verify`]);
//! * seller payoffs (expected revenue, expected time-to-sale, linear
//!   time-disutility objective) via adaptive quadrature ([`payoff`]);
//! * thin- and thick-market analytic benchmarks ([`benchmark`]);
//! * a deterministic Monte Carlo simulator used as an independent oracle
//!   ([`sim`]);
//! * revenue/wait frontier sweeps over schedule families ([`frontier`]).

pub mod benchmark;
pub mod error;
pub mod fmt;
pub mod frontier;
pub mod payoff;
mod quad;
pub mod schedule;
pub mod sim;
pub mod solver;
pub mod threshold;
pub mod verify;

pub use error::PricingError;
pub use payoff::{
    constant_closed_form, evaluate_seller, evaluate_seller_with_tolerance, expected_revenue,
    expected_waiting_time, interim_utility, seller_utility, survival_probability, SellerOutcome,
    DEFAULT_QUADRATURE_TOL,
};
pub use schedule::{make_quasi_auction, Family, MarketParams, PriceSchedule};
pub use solver::{construct_threshold, invert_threshold, ode_rhs, SolverConfig};
pub use threshold::{Provenance, ThresholdFunction};
pub use verify::{verify_equilibrium, VerificationReport, VerifyConfig};

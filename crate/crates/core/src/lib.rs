//! How many randomly generated tests are needed before every question in
//! every bank has appeared?
//!
//! A test draws one question uniformly from each of `q` banks of `a`
//! alternatives. The number of tests `N_q` until all `aq` questions have been
//! seen is the maximum of `q` independent coupon-collector times. This crate
//! computes its distribution and moments exactly ([`coupon`]), its
//! extreme-value asymptotics ([`asymptotics`]), simulates it ([`simulator`])
//! and reproduces the reference tables ([`report`]).

pub mod asymptotics;
pub mod coupon;
mod error;
pub mod numerics;
pub mod report;
pub mod simulator;

pub use asymptotics::{
    alpha, centred_mean_prediction, centring, gumbel_cdf, local_pmf_approx, mean_bounds,
    sandwich_bounds, theta, variance_bounds, AsymptoticSummary, CentringData, MomentBounds,
    StandardGumbel, VarianceBoundSummary, EULER_GAMMA,
};
pub use coupon::{
    cdf_oracle, expected_single_bank, expected_tests, expected_tests_multisum,
    single_bank_cdf, single_bank_survival, test_count_cdf, test_count_pmf, variance_tests,
    BankSpec, ExactRational, ProbValue, SeriesEstimate, TruncationPolicy, MAX_ALTERNATIVES,
};
pub use error::{Error, Result};
pub use numerics::exp_integral_e1;
pub use simulator::{run_experiment, simulate_one, SimulationConfig, SimulationResult, SimulationSummary};

//! The self-check suite behind `bankcover validate`.

use std::fmt::{self, Write};
use std::time::Instant;

use crate::asymptotics::{
    alpha, centred_mean_prediction_with, centring, exact_centred_cdf, exact_centred_pmf,
    gumbel_cdf, local_pmf_approx, variance_bounds_with, EULER_GAMMA,
};
use crate::coupon::{
    cdf_oracle, expected_single_bank, expected_tests, expected_tests_multisum,
    multisum_max_alternatives, single_bank_cdf, test_count_cdf, variance_tests, BankSpec,
    TruncationPolicy,
};
use crate::numerics::special::exp_integral_e1;
use crate::simulator::{run_experiment, SimulationConfig};

use super::reference::{
    CENTRED_PREDICTION, E1_AT_ONE, EXPECTED_TESTS, SD_A, SD_BOUNDS, SINGLE_BANK_MEAN, TABLE_A,
    TABLE_Q,
};
use super::ReportResult;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ValidationLevel {
    /// Closed forms, oracle equivalence and every printed table.
    Quick,
    /// Adds the q = 10⁶ sweeps and 10⁵-replication simulations.
    Full,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ValidationOptions {
    pub level: ValidationLevel,
    /// Gumbel mean used by every γ-dependent check; overriding it is a
    /// sensitivity canary.
    pub gumbel_mean: f64,
    /// Worker threads for the Monte Carlo checks.
    pub workers: usize,
}

impl ValidationOptions {
    pub fn new(level: ValidationLevel) -> Self {
        Self {
            level,
            gumbel_mean: EULER_GAMMA,
            workers: std::thread::available_parallelism().map_or(1, |n| n.get()),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub id: String,
    pub target: String,
    pub tolerance: String,
    pub observed: String,
    pub passed: bool,
}

#[derive(Clone, Debug, Default)]
pub struct ValidationReport {
    pub checks: Vec<Check>,
    pub elapsed_secs: f64,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }

    fn push(&mut self, id: impl Into<String>, target: impl Into<String>, tolerance: impl Into<String>, observed: impl Into<String>, passed: bool) {
        self.checks.push(Check {
            id: id.into(),
            target: target.into(),
            tolerance: tolerance.into(),
            observed: observed.into(),
            passed,
        });
    }

    /// `|observed − target| ≤ tol`.
    fn near(&mut self, id: impl Into<String>, target: f64, tol: f64, observed: f64) {
        let ok = (observed - target).abs() <= tol;
        self.push(id, format!("{target}"), format!("±{tol}"), format!("{observed:.6}"), ok);
    }

    /// `lo ≤ observed ≤ hi`.
    fn within(&mut self, id: impl Into<String>, lo: f64, hi: f64, observed: f64) {
        let ok = lo <= observed && observed <= hi;
        self.push(id, format!("[{lo:.4}, {hi:.4}]"), "inclusive", format!("{observed:.6}"), ok);
    }

    /// `observed ≤ limit`.
    fn at_most(&mut self, id: impl Into<String>, limit: f64, observed: f64) {
        let ok = observed <= limit;
        self.push(id, "0", format!("≤ {limit:e}"), format!("{observed:e}"), ok);
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let width = self.checks.iter().map(|c| c.id.len()).max().unwrap_or(10);
        for c in &self.checks {
            let mut line = String::new();
            let _ = write!(
                line,
                "{}  {:<width$}  target {}  tol {}  observed {}",
                if c.passed { "PASS" } else { "FAIL" },
                c.id,
                c.target,
                c.tolerance,
                c.observed,
            );
            writeln!(f, "{line}")?;
        }
        let failed = self.failures().count();
        writeln!(
            f,
            "{} checks, {} failed, {:.2}s",
            self.checks.len(),
            failed,
            self.elapsed_secs
        )
    }
}

pub fn validate(opts: &ValidationOptions) -> ReportResult<ValidationReport> {
    let start = Instant::now();
    let mut report = ValidationReport::default();
    let policy = TruncationPolicy::default();

    single_bank_table(&mut report)?;
    oracle_equivalence(&mut report)?;
    multisum_agreement(&mut report, &policy)?;
    let en_q = expected_table(&mut report, &policy)?;
    centred_table(&mut report, opts.gumbel_mean, &en_q)?;
    sd_table(&mut report, opts.gumbel_mean)?;

    if opts.level == ValidationLevel::Full {
        sandwich_sweeps(&mut report)?;
        non_convergence_witness(&mut report)?;
        variance_capture(&mut report, opts.gumbel_mean, &policy)?;
        local_limit(&mut report)?;
        monte_carlo(&mut report, &policy, opts.workers)?;
    }
    report.elapsed_secs = start.elapsed().as_secs_f64();
    Ok(report)
}

fn single_bank_table(report: &mut ValidationReport) -> ReportResult<()> {
    for (a, want) in SINGLE_BANK_MEAN {
        report.near(format!("single_bank_mean[a={a}]"), want, 0.005, expected_single_bank(a)?);
    }
    Ok(())
}

fn oracle_equivalence(report: &mut ValidationReport) -> ReportResult<()> {
    let mut worst: f64 = 0.0;
    for a in 1..=8u32 {
        for y in u64::from(a)..=60 {
            let exact = cdf_oracle(a, y)?.to_f64();
            worst = worst.max((single_bank_cdf(a, y)?.p - exact).abs());
        }
    }
    report.at_most("cdf_vs_surjection_oracle[a<=8,y<=60]", 1e-12, worst);
    Ok(())
}

fn multisum_agreement(report: &mut ValidationReport, policy: &TruncationPolicy) -> ReportResult<()> {
    let mut worst: f64 = 0.0;
    for q in 1..=4u64 {
        let max_a = multisum_max_alternatives(q).unwrap_or(0);
        for a in 1..=max_a {
            let spec = BankSpec::new(a, q)?;
            let diff = (expected_tests_multisum(spec)? - expected_tests(spec, policy)?.value).abs();
            worst = worst.max(diff);
        }
    }
    report.at_most("series_vs_multisum", 1e-9, worst);
    Ok(())
}

fn expected_table(report: &mut ValidationReport, policy: &TruncationPolicy) -> ReportResult<Vec<Vec<f64>>> {
    let mut values = Vec::new();
    for (row, &a) in TABLE_A.iter().enumerate() {
        let mut line = Vec::new();
        for (col, &q) in TABLE_Q.iter().enumerate() {
            let v = expected_tests(BankSpec::new(a, q)?, policy)?.value;
            report.near(format!("en_q[a={a},q={q}]"), EXPECTED_TESTS[row][col], 0.05, v);
            line.push(v);
        }
        values.push(line);
    }
    Ok(values)
}

fn centred_table(report: &mut ValidationReport, gumbel_mean: f64, en_q: &[Vec<f64>]) -> ReportResult<()> {
    for (row, &a) in TABLE_A.iter().enumerate() {
        for (col, &q) in TABLE_Q.iter().enumerate() {
            let pred = centred_mean_prediction_with(a, q, gumbel_mean)?;
            report.near(format!("centred[a={a},q={q}]"), CENTRED_PREDICTION[row][col], 0.05, pred);
            if q >= 20 {
                report.within(format!("centred_excess[a={a},q={q}]"), 0.45, 0.65, en_q[row][col] - pred);
            }
        }
    }
    Ok(())
}

fn sd_table(report: &mut ValidationReport, gumbel_mean: f64) -> ReportResult<()> {
    report.near("e1_at_one", E1_AT_ONE, 1e-4, exp_integral_e1(1.0)?);
    for (&a, &(lo, hi)) in SD_A.iter().zip(&SD_BOUNDS) {
        let v = variance_bounds_with(a, gumbel_mean)?;
        report.near(format!("sd_min[a={a}]"), lo, 0.002, v.sd_lo);
        report.near(format!("sd_max[a={a}]"), hi, 0.002, v.sd_hi);
    }
    Ok(())
}

/// Largest amount by which the exact centred cdf leaves the Gumbel envelope
/// on the grid x = −3, −2.75, …, 10.
pub fn sandwich_violation(a: u32, q: u64) -> ReportResult<f64> {
    let alpha = alpha(a)?;
    let mut worst: f64 = 0.0;
    for i in 0..=52 {
        let x = -3.0 + 0.25 * f64::from(i);
        let p = exact_centred_cdf(a, q, x)?;
        let lo = gumbel_cdf(alpha * (x - 1.0));
        let hi = gumbel_cdf(alpha * x);
        worst = worst.max(lo - p).max(p - hi);
    }
    Ok(worst)
}

fn sandwich_sweeps(report: &mut ValidationReport) -> ReportResult<()> {
    for a in TABLE_A {
        let v = sandwich_violation(a, 1_000_000)?;
        report.at_most(format!("sandwich_violation[a={a},q=1e6]"), 0.02, v);
    }
    Ok(())
}

/// Closest approach of `P(N_q − b_q ≤ 0)` to `Λ(−α)` and to `Λ(0)` over
/// q = 2..=q_max.
pub fn witness_distances(a: u32, q_max: u64) -> ReportResult<(f64, f64)> {
    let alpha = alpha(a)?;
    let (lo, hi) = (gumbel_cdf(-alpha), gumbel_cdf(0.0));
    let mut best = (f64::INFINITY, f64::INFINITY);
    for q in 2..=q_max {
        let c = centring(a, q)?;
        let p = test_count_cdf(BankSpec::new(a, q)?, c.b_q.floor() as u64)?.p;
        best.0 = best.0.min((p - lo).abs());
        best.1 = best.1.min((p - hi).abs());
    }
    Ok(best)
}

fn non_convergence_witness(report: &mut ValidationReport) -> ReportResult<()> {
    let (d_lo, d_hi) = witness_distances(10, 1_000_000)?;
    report.at_most("witness_liminf[a=10,x=0]", 0.01, d_lo);
    report.at_most("witness_limsup[a=10,x=0]", 0.01, d_hi);
    Ok(())
}

fn variance_capture(report: &mut ValidationReport, gumbel_mean: f64, policy: &TruncationPolicy) -> ReportResult<()> {
    for a in TABLE_A {
        let band = variance_bounds_with(a, gumbel_mean)?;
        let var = variance_tests(BankSpec::new(a, 10_000)?, policy)?.value;
        report.within(format!("variance_band[a={a},q=1e4]"), band.var_lo - 0.5, band.var_hi + 0.5, var);
    }
    Ok(())
}

/// `max_n |P(N_q − ⌈b_q⌉ = n) − local_pmf_approx(n)|` over every `n` with
/// non-negligible mass.
pub fn local_limit_error(a: u32, q: u64) -> ReportResult<f64> {
    let c = centring(a, q)?;
    let span = (40.0 / c.alpha).ceil() as i64;
    let mut worst: f64 = 0.0;
    for n in -c.b_q_ceil..=span {
        let diff = exact_centred_pmf(a, q, n)? - local_pmf_approx(a, q, n)?;
        worst = worst.max(diff.abs());
    }
    Ok(worst)
}

fn local_limit(report: &mut ValidationReport) -> ReportResult<()> {
    let early = local_limit_error(10, 100)?;
    let late = local_limit_error(10, 1_000_000)?;
    report.push(
        "local_limit_error[a=10,q=1e2->1e6]",
        format!("< {:.3e} (1.1 × q=1e2 error)", 1.1 * early),
        "10% slack",
        format!("{late:.3e}"),
        late < 1.1 * early,
    );
    Ok(())
}

fn monte_carlo(report: &mut ValidationReport, policy: &TruncationPolicy, workers: usize) -> ReportResult<()> {
    const REPS: u64 = 100_000;
    const SEED: u64 = 20_240_601;
    for (a, q) in [(10u32, 1u64), (10, 10), (5, 50), (20, 20)] {
        let spec = BankSpec::new(a, q)?;
        let exact = expected_tests(spec, policy)?.value;
        let sim = run_experiment(&SimulationConfig::new(spec, REPS, SEED, workers)?)?;
        let tol = 3.0 * sim.std_error_mean;
        report.near(format!("mc_mean[a={a},q={q}]"), exact, tol, sim.mean);
    }
    let spec = BankSpec::new(10, 10)?;
    let single = run_experiment(&SimulationConfig::new(spec, 20_000, SEED, 1)?)?;
    let multi = run_experiment(&SimulationConfig::new(spec, 20_000, SEED, workers.max(2))?)?;
    report.push(
        "mc_worker_independence",
        "identical",
        "exact",
        if single == multi { "identical" } else { "different" },
        single == multi,
    );
    Ok(())
}

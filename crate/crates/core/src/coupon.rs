//! Exact finite-`a` distribution of the single-bank completion time `Y` and
//! of `N_q = max(Y_1, …, Y_q)`.
//!
//! `P(Y > y)` is the inclusion-exclusion sum `Σ_k (−1)^{k+1} C(a,k) (1 − k/a)^y`.
//! Its terms reach ~10^7 at `a = 64` while the result can be ~10^−8, so every
//! term and the running sum are carried in double-double and the returned
//! [`ProbValue`] records a bound on the absolute error.

use std::fmt;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::numerics::dd::{DoubleDouble, ErrorTrackingSum, DD_OP_ERROR, UNIT_ROUNDOFF};
use crate::numerics::binomial;

/// Largest bank size served by the double-precision closed forms.
pub const MAX_ALTERNATIVES: u32 = 64;

/// Largest `a` accepted by [`cdf_oracle`].
pub const ORACLE_MAX_ALTERNATIVES: u32 = 12;
/// Largest `y` accepted by [`cdf_oracle`].
pub const ORACLE_MAX_DRAWS: u64 = 200;

/// Negative pmf values no larger than this in magnitude are round-off.
const PMF_ROUNDOFF: f64 = 1e-14;

/// `a` alternatives per bank, `q` questions (banks) per test.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct BankSpec {
    a: u32,
    q: u64,
}

impl BankSpec {
    pub fn new(a: u32, q: u64) -> Result<Self> {
        check_alternatives(a)?;
        if q == 0 {
            return Err(Error::InvalidSpec("q must be at least 1".into()));
        }
        Ok(Self { a, q })
    }

    pub fn alternatives(&self) -> u32 {
        self.a
    }

    pub fn questions(&self) -> u64 {
        self.q
    }
}

impl fmt::Display for BankSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "a={}, q={}", self.a, self.q)
    }
}

pub(crate) fn check_alternatives(a: u32) -> Result<()> {
    if a == 0 {
        return Err(Error::InvalidSpec("a must be at least 1".into()));
    }
    if a > MAX_ALTERNATIVES {
        return Err(Error::UnsupportedAlternatives {
            a,
            max: MAX_ALTERNATIVES,
        });
    }
    Ok(())
}

/// Stopping rule for the infinite series behind `E N_q` and `Var N_q`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TruncationPolicy {
    eps_term: f64,
    n_cap: u64,
    tail_bound_required: bool,
}

impl TruncationPolicy {
    pub fn new(eps_term: f64, n_cap: u64, tail_bound_required: bool) -> Result<Self> {
        if !(eps_term > 0.0 && eps_term < 1.0) {
            return Err(Error::InvalidPolicy(format!("eps_term must lie in (0, 1), got {eps_term}")));
        }
        if n_cap == 0 {
            return Err(Error::InvalidPolicy("n_cap must be at least 1".into()));
        }
        Ok(Self {
            eps_term,
            n_cap,
            tail_bound_required,
        })
    }

    pub fn eps_term(&self) -> f64 {
        self.eps_term
    }

    pub fn n_cap(&self) -> u64 {
        self.n_cap
    }

    pub fn tail_bound_required(&self) -> bool {
        self.tail_bound_required
    }

    /// Largest tail bound accepted as a certificate.
    pub fn certificate_limit(&self) -> f64 {
        10.0 * self.eps_term
    }
}

impl Default for TruncationPolicy {
    fn default() -> Self {
        Self {
            eps_term: 1e-12,
            n_cap: 100_000,
            tail_bound_required: true,
        }
    }
}

/// A probability with a bound on its absolute evaluation error.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ProbValue {
    pub p: f64,
    pub abs_err: f64,
}

impl ProbValue {
    fn exact(p: f64) -> Self {
        Self { p, abs_err: 0.0 }
    }
}

/// A truncated series value together with its analytic tail certificate.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SeriesEstimate {
    pub value: f64,
    /// Upper bound on the contribution of all terms that were not summed.
    pub tail_bound: f64,
    /// Number of terms summed.
    pub terms: u64,
}

/// Exact rational number in lowest terms with a positive denominator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactRational(BigRational);

impl ExactRational {
    pub fn new(numer: BigUint, denom: BigUint) -> Self {
        Self(BigRational::new(numer.into(), denom.into()))
    }

    pub fn numer(&self) -> &num_bigint::BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &num_bigint::BigInt {
        self.0.denom()
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    pub fn as_ratio(&self) -> &BigRational {
        &self.0
    }
}

impl fmt::Display for ExactRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.0.numer(), self.0.denom())
    }
}

/// `E Y = a·H_a`, the mean number of draws to see all `a` alternatives.
pub fn expected_single_bank(a: u32) -> Result<f64> {
    if a == 0 {
        return Err(Error::InvalidSpec("a must be at least 1".into()));
    }
    let harmonic: f64 = (1..=a).map(|k| 1.0 / f64::from(k)).sum();
    Ok(f64::from(a) * harmonic)
}

fn signed_binomial(a: u32, k: u32) -> DoubleDouble {
    let c = DoubleDouble::from_u64(binomial(a, k));
    if k % 2 == 1 {
        c
    } else {
        -c
    }
}

/// Relative error carried by a term `C(a,k)·r^y` computed with `powi`.
fn term_rel_err(y: u64) -> f64 {
    let squarings = 64 - y.leading_zeros();
    f64::from(2 * squarings + 4) * DD_OP_ERROR
}

/// Turns a double-double survival sum into a clamped [`ProbValue`] for
/// either `P(Y > y)` or `F(y) = 1 − P(Y > y)`.
fn finish(sum: &ErrorTrackingSum, term_err: f64, complement: bool) -> ProbValue {
    let s = sum.sum();
    let raw = if complement {
        (DoubleDouble::ONE - s).to_f64()
    } else {
        s.to_f64()
    };
    let p = raw.clamp(0.0, 1.0);
    ProbValue {
        p,
        abs_err: sum.error_bound(term_err) + UNIT_ROUNDOFF * p,
    }
}

fn survival_sum(a: u32, y: u64) -> ErrorTrackingSum {
    let mut acc = ErrorTrackingSum::new();
    for k in 1..a {
        let base = DoubleDouble::ratio(u64::from(a - k), u64::from(a));
        acc.add(signed_binomial(a, k) * base.powi(y));
    }
    // The k = a term is (0)^y: 1 at y = 0 and 0 afterwards.
    if y == 0 {
        acc.add(signed_binomial(a, a));
    }
    acc
}

/// `P(Y > y)` by inclusion-exclusion.
pub fn single_bank_survival(a: u32, y: u64) -> Result<ProbValue> {
    check_alternatives(a)?;
    if y < u64::from(a) {
        return Ok(ProbValue::exact(1.0));
    }
    if a == 1 {
        return Ok(ProbValue::exact(0.0));
    }
    Ok(finish(&survival_sum(a, y), term_rel_err(y), false))
}

/// `F(y) = P(Y ≤ y)`, the probability that `y` uniform draws cover all `a`
/// alternatives.
pub fn single_bank_cdf(a: u32, y: u64) -> Result<ProbValue> {
    check_alternatives(a)?;
    if y < u64::from(a) {
        return Ok(ProbValue::exact(0.0));
    }
    if a == 1 {
        return Ok(ProbValue::exact(1.0));
    }
    Ok(finish(&survival_sum(a, y), term_rel_err(y), true))
}

/// Exact `P(Y ≤ y)` by counting surjections from `y` draws onto `a` types.
///
/// `ways[j]` holds the number of length-`y` sequences that use exactly the
/// first-seen `j` types, so one more draw either repeats a seen type (`j`
/// choices) or introduces one of the `a − j` unseen ones.
pub fn cdf_oracle(a: u32, y: u64) -> Result<ExactRational> {
    if a == 0 {
        return Err(Error::InvalidSpec("a must be at least 1".into()));
    }
    if a > ORACLE_MAX_ALTERNATIVES || y > ORACLE_MAX_DRAWS {
        return Err(Error::OracleRange(format!(
            "oracle supports a ≤ {ORACLE_MAX_ALTERNATIVES} and y ≤ {ORACLE_MAX_DRAWS}, got a = {a}, y = {y}"
        )));
    }
    let a_us = a as usize;
    let mut ways = vec![BigUint::zero(); a_us + 1];
    ways[0] = BigUint::one();
    for _ in 0..y {
        for j in (1..=a_us).rev() {
            let stay = &ways[j] * BigUint::from(j);
            let grow = &ways[j - 1] * BigUint::from(a_us - j + 1);
            ways[j] = stay + grow;
        }
        ways[0] = BigUint::zero();
    }
    let total = BigUint::from(a).pow(y as u32);
    Ok(ExactRational::new(ways[a_us].clone(), total))
}

/// `P(N_q > n) = 1 − (1 − s)^q` from the single-bank survival `s`, evaluated
/// without forming `1 − s` so that tiny `s` keeps full relative accuracy.
fn max_tail(survival: f64, q: u64) -> f64 {
    if survival >= 1.0 {
        return 1.0;
    }
    -((q as f64) * (-survival).ln_1p()).exp_m1()
}

/// `P(N_q ≤ n) = F(n)^q`.
pub fn test_count_cdf(spec: BankSpec, n: u64) -> Result<ProbValue> {
    // F and 1 − F share one survival sum and one error bound.
    let s = single_bank_survival(spec.a, n)?;
    let q = spec.q as f64;
    let p = if s.p >= 1.0 {
        0.0
    } else {
        (q * (-s.p).ln_1p()).exp()
    };
    Ok(ProbValue {
        p,
        abs_err: q * s.abs_err + UNIT_ROUNDOFF * p,
    })
}

/// `P(N_q = n) = F(n)^q − F(n−1)^q`.
pub fn test_count_pmf(spec: BankSpec, n: u64) -> Result<ProbValue> {
    if n == 0 {
        return Ok(ProbValue::exact(0.0));
    }
    let hi = test_count_cdf(spec, n)?;
    let lo = test_count_cdf(spec, n - 1)?;
    let diff = hi.p - lo.p;
    let p = if diff < 0.0 {
        if diff < -PMF_ROUNDOFF {
            return Err(Error::NegativeProbability(diff));
        }
        0.0
    } else {
        diff
    };
    Ok(ProbValue {
        p,
        abs_err: hi.abs_err + lo.abs_err,
    })
}

/// Streams `P(Y > y)` for `y = 0, 1, 2, …`, updating each power
/// `(1 − k/a)^y` by one multiplication per step.
#[derive(Clone, Debug)]
pub struct SurvivalSweep {
    a: u32,
    y: u64,
    bases: Vec<DoubleDouble>,
    powers: Vec<DoubleDouble>,
}

impl SurvivalSweep {
    pub fn new(a: u32) -> Result<Self> {
        check_alternatives(a)?;
        let bases: Vec<_> = (1..a)
            .map(|k| DoubleDouble::ratio(u64::from(a - k), u64::from(a)))
            .collect();
        let powers = vec![DoubleDouble::ONE; bases.len()];
        Ok(Self {
            a,
            y: 0,
            bases,
            powers,
        })
    }

    /// Number of values produced so far, i.e. the `y` of the next value.
    pub fn position(&self) -> u64 {
        self.y
    }
}

impl Iterator for SurvivalSweep {
    type Item = ProbValue;

    fn next(&mut self) -> Option<ProbValue> {
        let y = self.y;
        let value = if y < u64::from(self.a) {
            ProbValue::exact(1.0)
        } else if self.a == 1 {
            ProbValue::exact(0.0)
        } else {
            let mut acc = ErrorTrackingSum::new();
            for (k, power) in (1..self.a).zip(&self.powers) {
                acc.add(signed_binomial(self.a, k) * *power);
            }
            // Incremental powers accumulate one rounding per step.
            finish(&acc, (y as f64 + 4.0) * DD_OP_ERROR, false)
        };
        for (power, base) in self.powers.iter_mut().zip(&self.bases) {
            *power = *power * *base;
        }
        self.y += 1;
        Some(value)
    }
}

/// Ratio `(a − 1)/a` governing the geometric decay of `P(Y > y)`.
fn decay_ratio(a: u32) -> f64 {
    f64::from(a - 1) / f64::from(a)
}

/// Bound on `Σ_{n ≥ from} P(N_q > n)`.
///
/// Boole's inequality gives `P(Y > n) ≤ a·r^n` with `r = (a−1)/a` for every
/// `n ≥ 0`, and `1 − (1 − s)^q ≤ q·s`.
pub fn mean_tail_bound(spec: BankSpec, from: u64) -> f64 {
    if spec.a == 1 {
        return if from <= 1 { 1.0 - from as f64 } else { 0.0 };
    }
    let r = decay_ratio(spec.a);
    let lead = spec.q as f64 * f64::from(spec.a) * r.powf(from as f64);
    lead / (1.0 - r)
}

/// Bound on `Σ_{n ≥ from} (2n + 1)·P(N_q > n)`, using
/// `Σ_{n≥N} n r^n = r^N (N/(1−r) + r/(1−r)²)`.
pub fn second_moment_tail_bound(spec: BankSpec, from: u64) -> f64 {
    if spec.a == 1 {
        return if from == 0 { 1.0 } else { 0.0 };
    }
    let r = decay_ratio(spec.a);
    let lead = spec.q as f64 * f64::from(spec.a) * r.powf(from as f64);
    let n = from as f64;
    let one_minus = 1.0 - r;
    lead * ((2.0 * n + 1.0) / one_minus + 2.0 * r / (one_minus * one_minus))
}

/// `E N_q = Σ_{n≥0} P(N_q > n)`, summed until a term drops below
/// `eps_term` and (when required) the tail bound is within the certificate
/// limit.
pub fn expected_tests(spec: BankSpec, policy: &TruncationPolicy) -> Result<SeriesEstimate> {
    if spec.a == 1 {
        return Ok(SeriesEstimate {
            value: 1.0,
            tail_bound: 0.0,
            terms: 1,
        });
    }
    let a = u64::from(spec.a);
    let mut sum = DoubleDouble::ZERO;
    for (n, survival) in SurvivalSweep::new(spec.a)?.enumerate() {
        let n = n as u64;
        if n >= policy.n_cap {
            return Err(Error::CapExceeded {
                cap: policy.n_cap,
                tail_bound: mean_tail_bound(spec, n),
            });
        }
        let term = max_tail(survival.p, spec.q);
        sum += DoubleDouble::from_f64(term);
        if n >= a && term < policy.eps_term {
            let tail_bound = mean_tail_bound(spec, n + 1);
            if !policy.tail_bound_required || tail_bound <= policy.certificate_limit() {
                return Ok(SeriesEstimate {
                    value: sum.to_f64(),
                    tail_bound,
                    terms: n + 1,
                });
            }
        }
    }
    unreachable!("the survival sweep is infinite")
}

/// `Var N_q = Σ (2n+1)·P(N_q > n) − (E N_q)²`, both series summed together
/// under one certificate.
pub fn variance_tests(spec: BankSpec, policy: &TruncationPolicy) -> Result<SeriesEstimate> {
    if spec.a == 1 {
        return Ok(SeriesEstimate {
            value: 0.0,
            tail_bound: 0.0,
            terms: 1,
        });
    }
    let a = u64::from(spec.a);
    let mut first = DoubleDouble::ZERO;
    let mut second = DoubleDouble::ZERO;
    for (n, survival) in SurvivalSweep::new(spec.a)?.enumerate() {
        let n = n as u64;
        if n >= policy.n_cap {
            let t1 = mean_tail_bound(spec, n);
            return Err(Error::CapExceeded {
                cap: policy.n_cap,
                tail_bound: second_moment_tail_bound(spec, n) + 2.0 * first.to_f64() * t1 + t1 * t1,
            });
        }
        let term = max_tail(survival.p, spec.q);
        first += DoubleDouble::from_f64(term);
        second += DoubleDouble::from_f64(term) * DoubleDouble::from_f64((2 * n + 1) as f64);
        let weighted = term * (2 * n + 1) as f64;
        if n >= a && weighted < policy.eps_term {
            let t1 = mean_tail_bound(spec, n + 1);
            let t2 = second_moment_tail_bound(spec, n + 1);
            // |ΔVar| ≤ ΔE[N²] + 2·E·ΔE + ΔE².
            let certificate = t2 + 2.0 * first.to_f64() * t1 + t1 * t1;
            if !policy.tail_bound_required || certificate <= policy.certificate_limit() {
                let mean = first;
                let var = second - mean * mean;
                return Ok(SeriesEstimate {
                    value: var.to_f64().max(0.0),
                    tail_bound: certificate,
                    terms: n + 1,
                });
            }
        }
    }
    unreachable!("the survival sweep is infinite")
}

/// Largest `a` accepted by [`expected_tests_multisum`] for a given `q`.
pub fn multisum_max_alternatives(q: u64) -> Option<u32> {
    match q {
        1 => Some(6),
        2 | 3 => Some(5),
        4 => Some(4),
        _ => None,
    }
}

/// `E N_q` by the closed finite multi-sum
/// `−Σ_m C(q,m) Σ_{j_1..j_m} (−1)^{Σj} Π C(a,j_i) / (1 − Π(1 − j_i/a))`,
/// evaluated in exact rational arithmetic. The term count grows like
/// `C(q,m)·a^m`, so it is restricted to small instances.
pub fn expected_tests_multisum(spec: BankSpec) -> Result<f64> {
    let (a, q) = (spec.a, spec.q);
    match multisum_max_alternatives(q) {
        Some(max_a) if a <= max_a => {}
        _ => {
            return Err(Error::OracleRange(format!(
                "multi-sum supports q ≤ 4 with a ≤ 6 (q = 1), 5 (q ≤ 3), 4 (q = 4); got {spec}"
            )))
        }
    }
    let a_big = num_bigint::BigInt::from(a);
    let mut total = BigRational::zero();
    for m in 1..=q as u32 {
        let outer = num_bigint::BigInt::from(binomial(q as u32, m));
        let a_pow_m = a_big.pow(m);
        let mut js = vec![1u32; m as usize];
        loop {
            let parity: u32 = js.iter().sum();
            let coeff: num_bigint::BigInt = js
                .iter()
                .map(|&j| num_bigint::BigInt::from(binomial(a, j)))
                .product();
            let missing: num_bigint::BigInt =
                js.iter().map(|&j| num_bigint::BigInt::from(a - j)).product();
            // 1 − Π(1 − j/a) = (a^m − Π(a − j)) / a^m
            let denom = &a_pow_m - missing;
            let mut term = BigRational::new(&outer * coeff * &a_pow_m, denom);
            if parity % 2 == 1 {
                term = -term;
            }
            total -= term;

            let mut idx = 0;
            loop {
                if idx == js.len() {
                    break;
                }
                if js[idx] < a {
                    js[idx] += 1;
                    break;
                }
                js[idx] = 1;
                idx += 1;
            }
            if idx == js.len() {
                break;
            }
        }
    }
    Ok(total.to_f64().unwrap_or(f64::NAN))
}

//! Extreme-value behaviour of `N_q` as `q → ∞` with `a ≥ 2` fixed.
//!
//! With `α = log(a/(a−1))` and `b_q = α^{−1} log(aq)`, the law of
//! `N_q − b_q` is squeezed between `α^{−1}Z` and `1 + α^{−1}Z` for a standard
//! Gumbel `Z`, but never converges. Everything here is a limit quantity; the
//! finite-`q` truth comes from [`crate::coupon`].

use serde::Serialize;

use crate::coupon::{test_count_cdf, test_count_pmf, BankSpec};
use crate::error::{Error, Result};
use crate::numerics::quadrature::integrate;
use crate::numerics::special::exp_integral_e1;

pub use crate::numerics::special::EULER_GAMMA;

/// Absolute tolerance for the θ(α) quadrature.
pub const THETA_TOLERANCE: f64 = 1e-10;
const THETA_MAX_INTERVALS: usize = 200;

/// The standard Gumbel law `Λ(x) = exp(−e^{−x})`.
#[derive(Clone, Copy, Debug, Default)]
pub struct StandardGumbel;

impl StandardGumbel {
    pub const MEAN: f64 = EULER_GAMMA;
    pub const VARIANCE: f64 = std::f64::consts::PI * std::f64::consts::PI / 6.0;

    pub fn cdf(x: f64) -> f64 {
        (-(-x).exp()).exp()
    }

    pub fn pdf(x: f64) -> f64 {
        let t = (-x).exp();
        t * (-t).exp()
    }

    /// Inverse-cdf transform of a uniform variate in (0, 1).
    pub fn quantile(u: f64) -> f64 {
        -(-u.ln()).ln()
    }
}

/// `Λ(x) = exp(−e^{−x})`.
pub fn gumbel_cdf(x: f64) -> f64 {
    StandardGumbel::cdf(x)
}

fn check_asymptotic_a(a: u32) -> Result<()> {
    if a < 2 {
        return Err(Error::InvalidSpec(format!(
            "asymptotics need a ≥ 2 alternatives, got {a}"
        )));
    }
    Ok(())
}

/// `α = log(a/(a−1))`, evaluated as `−log1p(−1/a)`.
pub fn alpha(a: u32) -> Result<f64> {
    check_asymptotic_a(a)?;
    Ok(-(-1.0 / f64::from(a)).ln_1p())
}

/// Centring `b_q = α^{−1} log(aq)` with its integer and fractional parts.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CentringData {
    pub alpha: f64,
    pub b_q: f64,
    /// `⌊b_q⌋ + 1`, which exceeds `b_q` even when `b_q` is an integer.
    pub b_q_ceil: i64,
    /// `b_q − ⌊b_q⌋`.
    pub b_q_frac: f64,
}

pub fn centring(a: u32, q: u64) -> Result<CentringData> {
    let alpha = alpha(a)?;
    if q == 0 {
        return Err(Error::InvalidSpec("q must be at least 1".into()));
    }
    let b_q = (f64::from(a) * q as f64).ln() / alpha;
    let floor = b_q.floor();
    Ok(CentringData {
        alpha,
        b_q,
        b_q_ceil: floor as i64 + 1,
        b_q_frac: b_q - floor,
    })
}

/// `(Λ(α(x−1)), Λ(αx))`, the liminf and limsup of `P(N_q − b_q ≤ x)`.
pub fn sandwich_bounds(a: u32, x: f64) -> Result<(f64, f64)> {
    let alpha = alpha(a)?;
    Ok((gumbel_cdf(alpha * (x - 1.0)), gumbel_cdf(alpha * x)))
}

/// Gumbel approximation `Λ(α(n+1−{b_q})) − Λ(α(n−{b_q}))` to
/// `P(N_q − ⌈b_q⌉ = n)`.
pub fn local_pmf_approx(a: u32, q: u64, n: i64) -> Result<f64> {
    let c = centring(a, q)?;
    let n = n as f64;
    Ok(gumbel_cdf(c.alpha * (n + 1.0 - c.b_q_frac)) - gumbel_cdf(c.alpha * (n - c.b_q_frac)))
}

/// Exact `P(N_q − b_q ≤ x) = F(⌊b_q + x⌋)^q` at finite `q`.
pub fn exact_centred_cdf(a: u32, q: u64, x: f64) -> Result<f64> {
    let c = centring(a, q)?;
    let n = (c.b_q + x).floor();
    if n < 0.0 {
        return Ok(0.0);
    }
    Ok(test_count_cdf(BankSpec::new(a, q)?, n as u64)?.p)
}

/// Exact `P(N_q − ⌈b_q⌉ = n)` at finite `q`, the quantity approximated by
/// [`local_pmf_approx`].
pub fn exact_centred_pmf(a: u32, q: u64, n: i64) -> Result<f64> {
    let c = centring(a, q)?;
    let m = c.b_q_ceil + n;
    if m < 1 {
        return Ok(0.0);
    }
    Ok(test_count_pmf(BankSpec::new(a, q)?, m as u64)?.p)
}

/// Interval `[lower, upper]` for a limiting moment.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct MomentBounds {
    pub lower: f64,
    pub upper: f64,
}

/// Limits of `E N_q − α^{−1} log q`: between `(γ + log a)/α` and one more.
pub fn mean_bounds(a: u32) -> Result<MomentBounds> {
    let alpha = alpha(a)?;
    let lower = (EULER_GAMMA + f64::from(a).ln()) / alpha;
    Ok(MomentBounds {
        lower,
        upper: lower + 1.0,
    })
}

/// `b_q + γ/α`, the Gumbel prediction for `E N_q` at the low end of the band.
pub fn centred_mean_prediction(a: u32, q: u64) -> Result<f64> {
    centred_mean_prediction_with(a, q, EULER_GAMMA)
}

/// [`centred_mean_prediction`] with a caller-supplied Gumbel mean.
pub fn centred_mean_prediction_with(a: u32, q: u64, gumbel_mean: f64) -> Result<f64> {
    let c = centring(a, q)?;
    Ok(c.b_q + gumbel_mean / c.alpha)
}

/// `θ(α) = E[(1 + Z/α)²; −α < Z ≤ 0]`, by adaptive Gauss–Kronrod over the
/// Gumbel density on `(−α, 0]`.
pub fn theta(a: u32) -> Result<f64> {
    let alpha = alpha(a)?;
    theta_for_alpha(alpha)
}

fn theta_for_alpha(alpha: f64) -> Result<f64> {
    let integrand = |z: f64| {
        let w = 1.0 + z / alpha;
        w * w * StandardGumbel::pdf(z)
    };
    integrate(integrand, -alpha, 0.0, THETA_TOLERANCE, THETA_MAX_INTERVALS).map(|r| r.value)
}

/// Limiting variance band `π²/(6α²) ± Δ` and the matching s.d. band.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct VarianceBoundSummary {
    pub center: f64,
    pub theta: f64,
    pub delta: f64,
    pub var_lo: f64,
    pub var_hi: f64,
    pub sd_lo: f64,
    pub sd_hi: f64,
}

/// `Δ = θ(α) + 1 − e^{−1} + 2(γ + E₁(1))/α` around `π²/(6α²)`.
pub fn variance_bounds(a: u32) -> Result<VarianceBoundSummary> {
    variance_bounds_with(a, EULER_GAMMA)
}

/// [`variance_bounds`] with a caller-supplied Gumbel mean.
pub fn variance_bounds_with(a: u32, gumbel_mean: f64) -> Result<VarianceBoundSummary> {
    let alpha = alpha(a)?;
    let theta = theta_for_alpha(alpha)?;
    let e1 = exp_integral_e1(1.0)?;
    let center = StandardGumbel::VARIANCE / (alpha * alpha);
    let delta = theta + 1.0 - (-1.0f64).exp() + 2.0 * (gumbel_mean + e1) / alpha;
    let var_lo = center - delta;
    let var_hi = center + delta;
    Ok(VarianceBoundSummary {
        center,
        theta,
        delta,
        var_lo,
        var_hi,
        sd_lo: if var_lo > 0.0 { var_lo.sqrt() } else { 0.0 },
        sd_hi: var_hi.sqrt(),
    })
}

/// Every asymptotic constant for one bank size, for reports.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct AsymptoticSummary {
    pub a: u32,
    pub centring: CentringData,
    pub mean: MomentBounds,
    pub prediction: f64,
    pub variance: VarianceBoundSummary,
}

pub fn summary(a: u32, q: u64) -> Result<AsymptoticSummary> {
    Ok(AsymptoticSummary {
        a,
        centring: centring(a, q)?,
        mean: mean_bounds(a)?,
        prediction: centred_mean_prediction(a, q)?,
        variance: variance_bounds(a)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn alpha_values() {
        assert!((alpha(2).unwrap() - std::f64::consts::LN_2).abs() < 1e-16);
        // log(10/9) = 0.105360515657826301...
        assert!((alpha(10).unwrap() - 0.105_360_515_657_826_3).abs() < 1e-15);
        let big = 1e6;
        let series = 1.0 / big + 1.0 / (2.0 * big * big) + 1.0 / (3.0 * big * big * big);
        assert!((alpha(1_000_000).unwrap() / series - 1.0).abs() < 1e-12);
        assert!(alpha(1).is_err());
    }

    #[test]
    fn centring_values() {
        let c = centring(2, 1).unwrap();
        assert_eq!(c.b_q, 1.0);
        assert_eq!(c.b_q_ceil, 2);
        assert_eq!(c.b_q_frac, 0.0);

        let c = centring(10, 10).unwrap();
        assert!((c.b_q - 43.708_690_653_565_65).abs() < 1e-11);
        assert_eq!(c.b_q_ceil, 44);
        assert!(c.b_q_ceil as f64 - 1.0 <= c.b_q && c.b_q < c.b_q_ceil as f64);
        assert!(centring(10, 0).is_err());
    }

    #[test]
    fn gumbel_cdf_values() {
        assert!((gumbel_cdf(0.0) - (-1.0f64).exp()).abs() < 1e-16);
        assert!((gumbel_cdf(-1.0) - 0.065_988_035_845_312_5).abs() < 1e-15);
        assert!((1.0 - gumbel_cdf(40.0)).abs() < 1e-15);
    }

    #[test]
    fn sandwich_at_origin() {
        let (lo, hi) = sandwich_bounds(10, 0.0).unwrap();
        assert!((lo - 0.329_23).abs() < 5e-5);
        assert!((hi - 0.367_88).abs() < 5e-5);
    }

    #[test]
    fn local_pmf_telescopes() {
        let total: f64 = (-30..=60).map(|n| local_pmf_approx(2, 1000, n).unwrap()).sum();
        assert!((total - 1.0).abs() < 1e-9);
        // α ≈ 0.105 needs a range of several hundred to push both tails below 1e−12.
        let total: f64 = (-40..=300).map(|n| local_pmf_approx(10, 1000, n).unwrap()).sum();
        assert!((total - 1.0).abs() < 1e-9);
    }

    #[test]
    fn mean_bounds_a10() {
        let m = mean_bounds(10).unwrap();
        assert!((m.lower - 27.33).abs() < 0.005);
        assert_eq!(m.upper - m.lower, 1.0);
    }

    #[test]
    fn theta_is_a_proper_fraction() {
        for a in 2..=20 {
            let t = theta(a).unwrap();
            assert!(t > 0.0 && t < 1.0, "a={a} theta={t}");
        }
    }

    #[test]
    fn variance_summary_invariants() {
        for a in [2u32, 3, 5, 10, 20, 64] {
            let v = variance_bounds(a).unwrap();
            assert_eq!(v.var_lo, v.center - v.delta);
            assert_eq!(v.var_hi, v.center + v.delta);
            assert!(v.sd_lo > 0.0);
            assert!((v.sd_hi * v.sd_hi - v.var_hi).abs() < 1e-9 * v.var_hi);
        }
    }

    #[test]
    fn prediction_matches_mean_lower_bound_at_q1() {
        for a in [3u32, 7, 20] {
            let p = centred_mean_prediction(a, 1).unwrap();
            assert!((p - mean_bounds(a).unwrap().lower).abs() < 1e-12);
        }
    }
}

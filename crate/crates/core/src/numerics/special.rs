use crate::error::{Error, Result};

/// Euler–Mascheroni constant γ to 20 significant digits.
#[allow(clippy::excessive_precision)]
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_860_61;

/// Exponential integral E₁(x) = ∫₁^∞ e^{−xt}/t dt for x > 0.
///
/// Power series `−γ − ln x − Σ (−x)^k / (k·k!)` up to x = 1, modified Lentz
/// evaluation of the continued fraction beyond. Absolute error is below
/// 1e−14 on both branches.
pub fn exp_integral_e1(x: f64) -> Result<f64> {
    if x.is_nan() || x <= 0.0 || x.is_infinite() {
        return Err(Error::Domain(format!("E1 needs a finite x > 0, got {x}")));
    }
    if x <= 1.0 {
        Ok(e1_series(x))
    } else {
        Ok(e1_continued_fraction(x))
    }
}

fn e1_series(x: f64) -> f64 {
    let mut sum = 0.0;
    let mut term = 1.0;
    for k in 1..200u32 {
        let k = f64::from(k);
        term *= -x / k;
        let contrib = term / k;
        sum += contrib;
        if contrib.abs() < 1e-17 * sum.abs().max(1e-300) {
            break;
        }
    }
    -EULER_GAMMA - x.ln() - sum
}

fn e1_continued_fraction(x: f64) -> f64 {
    const TINY: f64 = 1e-300;
    let mut b = x + 1.0;
    let mut c = 1.0 / TINY;
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..500u32 {
        let an = -f64::from(i) * f64::from(i);
        b += 2.0;
        d = 1.0 / (an * d + b);
        c = b + an / c;
        let delta = c * d;
        h *= delta;
        if (delta - 1.0).abs() < 1e-16 {
            break;
        }
    }
    h * (-x).exp()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn value_at_one() {
        // E1(1) = 0.219383934395520273677...
        let v = exp_integral_e1(1.0).unwrap();
        assert!((v - 0.219_383_934_395_520_27).abs() < 1e-14);
    }

    #[test]
    fn branches_agree_at_the_switch() {
        let below = e1_series(1.0);
        let above = e1_continued_fraction(1.0);
        assert!((below - above).abs() < 1e-13);
    }

    #[test]
    fn reference_values() {
        // Abramowitz & Stegun table 5.1 and mpmath.
        let cases = [
            (0.1, 1.822_923_958_419_390_7),
            (0.5, 0.559_773_594_776_160_8),
            (2.0, 0.048_900_510_708_061_12),
            (5.0, 0.001_148_295_591_275_325_8),
        ];
        for (x, want) in cases {
            let got = exp_integral_e1(x).unwrap();
            assert!((got - want).abs() < 1e-13, "E1({x}) = {got}, want {want}");
        }
    }

    #[test]
    fn leading_asymptotic_term() {
        let x = 50.0;
        let ratio = exp_integral_e1(x).unwrap() * x * x.exp();
        assert!((ratio - 1.0).abs() < 0.05);
    }

    #[test]
    fn rejects_non_positive() {
        assert!(exp_integral_e1(0.0).is_err());
        assert!(exp_integral_e1(-1.0).is_err());
        assert!(exp_integral_e1(f64::NAN).is_err());
    }
}

//! Double-double arithmetic and an error-tracking accumulator.
//!
//! An alternating inclusion-exclusion sum loses roughly `log10(Σ|t| / |Σt|)`
//! digits to cancellation. Carrying each term and the running sum as an
//! unevaluated pair `hi + lo` (about 106 significand bits) pushes that loss
//! below double precision for every `a ≤ 64`.

use std::ops::{Add, AddAssign, Mul, Neg, Sub};

/// Unit roundoff of `f64`, 2^-53.
pub const UNIT_ROUNDOFF: f64 = f64::EPSILON / 2.0;

/// Relative error of one double-double operation, taken as 8·u².
pub const DD_OP_ERROR: f64 = 8.0 * UNIT_ROUNDOFF * UNIT_ROUNDOFF;

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

/// A value represented as the unevaluated sum `hi + lo` with `|lo| ≤ ulp(hi)/2`.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct DoubleDouble {
    hi: f64,
    lo: f64,
}

impl DoubleDouble {
    pub const ZERO: Self = Self { hi: 0.0, lo: 0.0 };
    pub const ONE: Self = Self { hi: 1.0, lo: 0.0 };

    pub fn from_f64(x: f64) -> Self {
        Self { hi: x, lo: 0.0 }
    }

    /// Exact conversion for integers below 2^106.
    pub fn from_u64(x: u64) -> Self {
        let hi = x as f64;
        // hi is within half an ulp of x, so the difference fits in i64 exactly.
        let lo = (i128::from(x) - hi as i128) as f64;
        let (hi, lo) = quick_two_sum(hi, lo);
        Self { hi, lo }
    }

    /// `num / den` correctly rounded to double-double, for integers below 2^53.
    pub fn ratio(num: u64, den: u64) -> Self {
        debug_assert!(den != 0);
        debug_assert!(num < (1 << 53) && den < (1 << 53));
        let (n, d) = (num as f64, den as f64);
        let hi = n / d;
        let rem = (-hi).mul_add(d, n);
        let (hi, lo) = quick_two_sum(hi, rem / d);
        Self { hi, lo }
    }

    pub fn hi(self) -> f64 {
        self.hi
    }

    pub fn lo(self) -> f64 {
        self.lo
    }

    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    pub fn abs(self) -> Self {
        if self.hi < 0.0 {
            -self
        } else {
            self
        }
    }

    /// `self^n` by binary exponentiation; `0^0 = 1`.
    pub fn powi(self, mut n: u64) -> Self {
        let mut base = self;
        let mut acc = Self::ONE;
        while n > 0 {
            if n & 1 == 1 {
                acc = acc * base;
            }
            n >>= 1;
            if n > 0 {
                base = base * base;
            }
        }
        acc
    }
}

impl Add for DoubleDouble {
    type Output = Self;

    fn add(self, rhs: Self) -> Self {
        let (s, e) = two_sum(self.hi, rhs.hi);
        let (t, f) = two_sum(self.lo, rhs.lo);
        let (s, e) = quick_two_sum(s, e + t);
        let (hi, lo) = quick_two_sum(s, e + f);
        Self { hi, lo }
    }
}

impl AddAssign for DoubleDouble {
    fn add_assign(&mut self, rhs: Self) {
        *self = *self + rhs;
    }
}

impl Neg for DoubleDouble {
    type Output = Self;

    fn neg(self) -> Self {
        Self {
            hi: -self.hi,
            lo: -self.lo,
        }
    }
}

impl Sub for DoubleDouble {
    type Output = Self;

    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl Mul for DoubleDouble {
    type Output = Self;

    fn mul(self, rhs: Self) -> Self {
        let (p, e) = two_prod(self.hi, rhs.hi);
        let e = e + (self.hi * rhs.lo + self.lo * rhs.hi);
        let (hi, lo) = quick_two_sum(p, e);
        Self { hi, lo }
    }
}

/// Sums double-double terms while recording `Σ|term|`, the quantity that
/// bounds the accumulated rounding error.
#[derive(Clone, Copy, Debug, Default)]
pub struct ErrorTrackingSum {
    sum: DoubleDouble,
    magnitude: f64,
    terms: u64,
}

impl ErrorTrackingSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, term: DoubleDouble) {
        self.sum += term;
        self.magnitude += term.hi.abs();
        self.terms += 1;
    }

    pub fn sum(&self) -> DoubleDouble {
        self.sum
    }

    pub fn magnitude(&self) -> f64 {
        self.magnitude
    }

    /// Bound on `|computed − exact|` for the double-double sum, given that
    /// each term already carries a relative error of at most `term_rel_err`.
    pub fn error_bound(&self, term_rel_err: f64) -> f64 {
        // Magnitude is accumulated in plain f64; 2× covers its own rounding.
        2.0 * self.magnitude * (term_rel_err + self.terms as f64 * DD_OP_ERROR)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ratio_recovers_thirds() {
        let third = DoubleDouble::ratio(1, 3);
        let back = third * DoubleDouble::from_f64(3.0);
        assert!((back - DoubleDouble::ONE).to_f64().abs() < 1e-31);
    }

    #[test]
    fn from_u64_is_exact_above_2_53() {
        let x = (1u64 << 60) + 12345;
        let d = DoubleDouble::from_u64(x);
        assert_eq!(d.hi() as i128 + d.lo() as i128, i128::from(x));
    }

    #[test]
    fn cancellation_survives_in_double_double() {
        // (1 + 2^-80) − 1 vanishes in f64 but not in double-double.
        let tiny = 2f64.powi(-80);
        let x = DoubleDouble::ONE + DoubleDouble::from_f64(tiny);
        assert_eq!((x - DoubleDouble::ONE).to_f64(), tiny);
    }

    #[test]
    fn powi_matches_repeated_product() {
        let base = DoubleDouble::ratio(9, 10);
        let mut slow = DoubleDouble::ONE;
        for _ in 0..137 {
            slow = slow * base;
        }
        let fast = base.powi(137);
        assert!(((fast - slow).to_f64() / fast.to_f64()).abs() < 1e-29);
        assert_eq!(DoubleDouble::ZERO.powi(0), DoubleDouble::ONE);
        assert_eq!(DoubleDouble::ZERO.powi(3).to_f64(), 0.0);
    }

    #[test]
    fn tracking_sum_bound_covers_alternating_binomials() {
        // Σ_k (−1)^k C(40, k) = 0 exactly.
        let mut acc = ErrorTrackingSum::new();
        for k in 0..=40u32 {
            let c = DoubleDouble::from_u64(super::super::binomial(40, k));
            acc.add(if k % 2 == 0 { c } else { -c });
        }
        assert!(acc.sum().to_f64().abs() <= acc.error_bound(0.0));
        assert_eq!(acc.magnitude(), 2f64.powi(40));
    }
}

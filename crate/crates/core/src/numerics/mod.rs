//! Floating-point building blocks shared by the exact and asymptotic paths.

pub mod dd;
pub mod quadrature;
pub mod special;

pub use dd::{DoubleDouble, ErrorTrackingSum};
pub use quadrature::{integrate, QuadResult};
pub use special::exp_integral_e1;

/// Exact binomial coefficient C(n, k) for n ≤ 64.
///
/// Uses the multiplicative recurrence with a 128-bit intermediate; every
/// partial product C(n, i)·(n − i) stays below 2^70, and C(64, 32) < 2^63.
pub fn binomial(n: u32, k: u32) -> u64 {
    debug_assert!(n <= 64, "binomial is exact only up to n = 64");
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * u128::from(n - i) / u128::from(i + 1);
    }
    acc as u64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomial_small_rows() {
        assert_eq!(binomial(0, 0), 1);
        assert_eq!(binomial(5, 2), 10);
        assert_eq!(binomial(5, 6), 0);
        assert_eq!(binomial(10, 10), 1);
    }

    #[test]
    fn binomial_central_64() {
        assert_eq!(binomial(64, 32), 1_832_624_140_942_590_534);
        assert_eq!(binomial(64, 1), 64);
    }

    #[test]
    fn binomial_rows_sum_to_powers_of_two() {
        for n in 0..=63u32 {
            let total: u128 = (0..=n).map(|k| u128::from(binomial(n, k))).sum();
            assert_eq!(total, 1u128 << n, "row {n}");
        }
    }
}

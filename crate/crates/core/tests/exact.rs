//! Exact-series invariants, checked against independent oracles.

use bankcover::{
    cdf_oracle, expected_single_bank, expected_tests, single_bank_cdf, test_count_cdf,
    test_count_pmf, variance_tests, BankSpec, TruncationPolicy,
};
use proptest::prelude::*;

fn spec(a: u32, q: u64) -> BankSpec {
    BankSpec::new(a, q).unwrap()
}

proptest! {
    #[test]
    fn single_bank_cdf_is_monotone_in_y(a in 1u32..=64, y in 0u64..600) {
        let lo = single_bank_cdf(a, y).unwrap();
        let hi = single_bank_cdf(a, y + 1).unwrap();
        prop_assert!(hi.p + hi.abs_err + lo.abs_err >= lo.p);
        prop_assert!((0.0..=1.0).contains(&lo.p));
    }

    #[test]
    fn test_count_cdf_monotone_in_n_and_q(a in 1u32..=30, q in 1u64..500, n in 0u64..400) {
        let base = test_count_cdf(spec(a, q), n).unwrap();
        let later = test_count_cdf(spec(a, q), n + 1).unwrap();
        let more_banks = test_count_cdf(spec(a, q + 1), n).unwrap();
        prop_assert!(later.p + later.abs_err + base.abs_err >= base.p);
        prop_assert!(more_banks.p <= base.p + base.abs_err + more_banks.abs_err);
    }

    #[test]
    fn cdf_matches_surjection_oracle(a in 1u32..=12, extra in 0u64..150) {
        let y = u64::from(a) + extra;
        let fast = single_bank_cdf(a, y).unwrap();
        let exact = cdf_oracle(a, y).unwrap().to_f64();
        prop_assert!((fast.p - exact).abs() <= fast.abs_err.max(1e-15) + 1e-15);
    }
}

#[test]
fn pmf_sums_to_one() {
    let s = spec(10, 10);
    let total: f64 = (0..2000).map(|n| test_count_pmf(s, n).unwrap().p).sum();
    assert!((total - 1.0).abs() < 1e-9, "{total}");
}

#[test]
fn single_bank_mean_three_ways() {
    let policy = TruncationPolicy::default();
    for a in [1u32, 2, 5, 10, 20, 37, 64] {
        let stages: f64 = (1..=a).map(|k| f64::from(a) / f64::from(a - k + 1)).sum();
        let closed = expected_single_bank(a).unwrap();
        let series = expected_tests(spec(a, 1), &policy).unwrap();
        assert!((closed - stages).abs() < 1e-10 * stages);
        assert!((series.value - closed).abs() < 1e-9 * closed, "a={a}: {} vs {closed}", series.value);
    }
}

#[test]
fn single_bank_variance_matches_geometric_stages() {
    let policy = TruncationPolicy::default();
    for a in [2u32, 5, 10, 20] {
        let af = f64::from(a);
        let exact: f64 = (1..=a)
            .map(|k| {
                let p = (af - f64::from(k) + 1.0) / af;
                (1.0 - p) / (p * p)
            })
            .sum();
        let series = variance_tests(spec(a, 1), &policy).unwrap();
        assert!((series.value - exact).abs() < 1e-8 * exact, "a={a}");
    }
}

#[test]
fn tail_certificate_covers_truncation() {
    let strict = TruncationPolicy::new(1e-15, 1_000_000, true).unwrap();
    let loose = TruncationPolicy::new(1e-6, 100_000, true).unwrap();
    for (a, q) in [(5u32, 50u64), (20, 20), (64, 3)] {
        let fine = expected_tests(spec(a, q), &strict).unwrap();
        let coarse = expected_tests(spec(a, q), &loose).unwrap();
        assert!((fine.value - coarse.value).abs() <= coarse.tail_bound + fine.tail_bound + 1e-9);
    }
}

#[test]
fn mean_grows_with_banks() {
    let policy = TruncationPolicy::default();
    for a in [3u32, 10] {
        let means: Vec<f64> = (1..=30).map(|q| expected_tests(spec(a, q), &policy).unwrap().value).collect();
        assert!(means.windows(2).all(|w| w[1] > w[0]));
    }
}

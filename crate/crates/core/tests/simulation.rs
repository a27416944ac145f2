//! Monte Carlo against the exact distribution and against a second sampler.

use bankcover::simulator::{replication_stream, simulate_max_of_collectors};
use bankcover::{
    centring, expected_tests, run_experiment, simulate_one, test_count_cdf, variance_bounds,
    BankSpec, SimulationConfig, TruncationPolicy,
};

fn spec(a: u32, q: u64) -> BankSpec {
    BankSpec::new(a, q).unwrap()
}

fn run(a: u32, q: u64, reps: u64, seed: u64) -> bankcover::SimulationResult {
    run_experiment(&SimulationConfig::new(spec(a, q), reps, seed, 4).unwrap()).unwrap()
}

#[test]
fn samplers_agree_in_distribution() {
    const N: u64 = 100_000;
    let s = spec(7, 6);
    let mut x: Vec<u64> = (0..N).map(|i| simulate_one(s, &mut replication_stream(1, i))).collect();
    let mut y: Vec<u64> = (0..N)
        .map(|i| simulate_max_of_collectors(s, &mut replication_stream(2, i)))
        .collect();
    x.sort_unstable();
    y.sort_unstable();
    // Two-sample Kolmogorov–Smirnov statistic over the integer support.
    let max = x[x.len() - 1].max(y[y.len() - 1]);
    let (mut i, mut j, mut d) = (0usize, 0usize, 0f64);
    for v in 0..=max {
        while i < x.len() && x[i] <= v {
            i += 1;
        }
        while j < y.len() && y[j] <= v {
            j += 1;
        }
        d = d.max((i as f64 - j as f64).abs() / N as f64);
    }
    let critical = 1.949 * (2.0 / N as f64).sqrt();
    assert!(d < critical, "KS {d} ≥ {critical}");
}

#[test]
fn empirical_cdf_matches_exact_at_centring_point() {
    const REPS: u64 = 50_000;
    for (a, q) in [(5u32, 20u64), (10, 10)] {
        let r = run(a, q, REPS, 7);
        let n = centring(a, q).unwrap().b_q_ceil as u64;
        let exact = test_count_cdf(spec(a, q), n).unwrap().p;
        assert!((r.empirical_cdf(n) - exact).abs() < 4.0 / (REPS as f64).sqrt());
    }
}

#[test]
fn means_match_known_values() {
    for (a, q, target) in [(2u32, 1u64, 3.0), (10, 10, 49.9), (10, 1, 29.2897)] {
        let r = run(a, q, 100_000, 11);
        let exact = expected_tests(spec(a, q), &TruncationPolicy::default()).unwrap().value;
        assert!((exact - target).abs() < 0.05);
        assert!((r.mean - exact).abs() < 3.0 * r.std_error_mean, "a={a}, q={q}: {}", r.mean);
    }
}

#[test]
fn variance_lies_in_asymptotic_band() {
    let r = run(5, 50, 100_000, 13);
    let band = variance_bounds(5).unwrap();
    let slack = 3.0 * r.std_error_variance();
    assert!(r.variance > band.var_lo - slack && r.variance < band.var_hi + slack, "{}", r.variance);
}

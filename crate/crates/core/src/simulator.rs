//! Seeded Monte Carlo estimate of the distribution of `N_q`.
//!
//! Replication `i` draws from its own ChaCha8 stream, keyed on `seed` with
//! stream id `i`, and the per-worker histograms are merged with integer adds.
//! Output therefore depends only on `(spec, reps, seed)`.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Geometric};
use rayon::prelude::*;
use serde::Serialize;

use crate::coupon::BankSpec;
use crate::error::{Error, Result};

/// Identifies the random generator and stream layout in results.
pub const GENERATOR_ID: &str = "rand_chacha-0.9/ChaCha8Rng;seed_from_u64(seed);set_stream(rep)";

/// Replications handed to a worker at a time.
const CHUNK: u64 = 1024;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SimulationConfig {
    pub spec: BankSpec,
    pub reps: u64,
    pub seed: u64,
    pub workers: usize,
}

impl SimulationConfig {
    pub fn new(spec: BankSpec, reps: u64, seed: u64, workers: usize) -> Result<Self> {
        if reps == 0 {
            return Err(Error::InvalidConfig("reps must be at least 1".into()));
        }
        if workers == 0 {
            return Err(Error::InvalidConfig("workers must be at least 1".into()));
        }
        Ok(Self {
            spec,
            reps,
            seed,
            workers,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SimulationResult {
    pub spec: BankSpec,
    pub reps: u64,
    pub seed: u64,
    pub mean: f64,
    /// Unbiased sample variance (0 when `reps = 1`).
    pub variance: f64,
    pub std_error_mean: f64,
    pub min: u64,
    pub max: u64,
    pub histogram: BTreeMap<u64, u64>,
    pub generator_id: &'static str,
}

/// The fields written per run by `bankcover simulate`, in output order.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SimulationSummary {
    pub spec: BankSpec,
    pub reps: u64,
    pub seed: u64,
    pub mean: f64,
    pub variance: f64,
    pub std_error_mean: f64,
    pub min: u64,
    pub max: u64,
    pub generator_id: &'static str,
}

impl SimulationResult {
    pub fn summary(&self) -> SimulationSummary {
        SimulationSummary {
            spec: self.spec,
            reps: self.reps,
            seed: self.seed,
            mean: self.mean,
            variance: self.variance,
            std_error_mean: self.std_error_mean,
            min: self.min,
            max: self.max,
            generator_id: self.generator_id,
        }
    }

    /// Fraction of replications with `N_q ≤ n`.
    pub fn empirical_cdf(&self, n: u64) -> f64 {
        let below: u64 = self.histogram.range(..=n).map(|(_, c)| c).sum();
        below as f64 / self.reps as f64
    }

    /// Standard error of the sample variance, `sqrt((m4 − s⁴(n−3)/(n−1))/n)`.
    pub fn std_error_variance(&self) -> f64 {
        let n = self.reps as f64;
        if self.reps < 4 {
            return f64::INFINITY;
        }
        let m4 = self
            .histogram
            .iter()
            .map(|(&v, &c)| c as f64 * (v as f64 - self.mean).powi(4))
            .sum::<f64>()
            / n;
        let s2 = self.variance;
        ((m4 - s2 * s2 * (n - 3.0) / (n - 1.0)) / n).max(0.0).sqrt()
    }
}

/// The random stream used by replication `rep` of an experiment with `seed`.
pub fn replication_stream(seed: u64, rep: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(rep);
    rng
}

/// Generates tests (one uniform draw per bank) until every one of the `aq`
/// questions has appeared, and returns how many tests that took.
///
/// Banks already complete are dropped from the draw loop; their draws cannot
/// change the outcome.
pub fn simulate_one<R: Rng + ?Sized>(spec: BankSpec, rng: &mut R) -> u64 {
    let a = spec.alternatives();
    let full: u64 = if a == 64 { u64::MAX } else { (1u64 << a) - 1 };
    let mut coverage = vec![0u64; spec.questions() as usize];
    let mut open = coverage.len();
    let mut tests = 0u64;
    while open > 0 {
        tests += 1;
        let mut i = 0;
        while i < open {
            coverage[i] |= 1u64 << rng.random_range(0..a);
            if coverage[i] == full {
                open -= 1;
                coverage.swap(i, open);
            } else {
                i += 1;
            }
        }
    }
    tests
}

/// Alternative sampler: the maximum of `q` independent single-bank
/// completion times, each built as `Σ_k Geom((a−k+1)/a)`.
pub fn simulate_max_of_collectors<R: Rng + ?Sized>(spec: BankSpec, rng: &mut R) -> u64 {
    let a = spec.alternatives();
    let stages: Vec<Geometric> = (1..=a)
        .map(|k| {
            let p = f64::from(a - k + 1) / f64::from(a);
            Geometric::new(p).expect("success probability lies in (0, 1]")
        })
        .collect();
    (0..spec.questions())
        .map(|_| stages.iter().map(|g| g.sample(rng) + 1).sum::<u64>())
        .max()
        .unwrap_or(0)
}

fn run_chunk(spec: BankSpec, seed: u64, start: u64, end: u64) -> BTreeMap<u64, u64> {
    let mut hist = BTreeMap::new();
    for rep in start..end {
        let mut rng = replication_stream(seed, rep);
        *hist.entry(simulate_one(spec, &mut rng)).or_insert(0) += 1;
    }
    hist
}

pub fn run_experiment(config: &SimulationConfig) -> Result<SimulationResult> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.workers)
        .build()
        .map_err(|e| Error::InvalidConfig(format!("thread pool: {e}")))?;
    let chunks = config.reps.div_ceil(CHUNK);
    let histogram = pool.install(|| {
        (0..chunks)
            .into_par_iter()
            .map(|c| {
                let start = c * CHUNK;
                let end = (start + CHUNK).min(config.reps);
                run_chunk(config.spec, config.seed, start, end)
            })
            .reduce(BTreeMap::new, |mut acc, part| {
                for (k, v) in part {
                    *acc.entry(k).or_insert(0) += v;
                }
                acc
            })
    });
    Ok(summarize(config, histogram))
}

fn summarize(config: &SimulationConfig, histogram: BTreeMap<u64, u64>) -> SimulationResult {
    let n = u128::from(config.reps);
    let (s1, s2) = histogram.iter().fold((0u128, 0u128), |(s1, s2), (&v, &c)| {
        let (v, c) = (u128::from(v), u128::from(c));
        (s1 + c * v, s2 + c * v * v)
    });
    let mean = s1 as f64 / n as f64;
    // n·Σv² − (Σv)² is exact in integers.
    let variance = if n > 1 {
        (n * s2 - s1 * s1) as f64 / (n * (n - 1)) as f64
    } else {
        0.0
    };
    SimulationResult {
        spec: config.spec,
        reps: config.reps,
        seed: config.seed,
        mean,
        variance,
        std_error_mean: (variance / n as f64).sqrt(),
        min: histogram.keys().next().copied().unwrap_or(0),
        max: histogram.keys().next_back().copied().unwrap_or(0),
        histogram,
        generator_id: GENERATOR_ID,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn config(a: u32, q: u64, reps: u64, seed: u64, workers: usize) -> SimulationConfig {
        SimulationConfig::new(BankSpec::new(a, q).unwrap(), reps, seed, workers).unwrap()
    }

    #[test]
    fn single_alternative_completes_at_once() {
        let mut rng = replication_stream(3, 0);
        let spec = BankSpec::new(1, 40).unwrap();
        assert_eq!(simulate_one(spec, &mut rng), 1);
        assert_eq!(simulate_max_of_collectors(spec, &mut rng), 1);
    }

    #[test]
    fn full_width_bank_terminates() {
        let mut rng = replication_stream(11, 0);
        let n = simulate_one(BankSpec::new(64, 2).unwrap(), &mut rng);
        assert!(n >= 64);
    }

    #[test]
    fn histogram_invariants() {
        let r = run_experiment(&config(6, 4, 5000, 9, 3)).unwrap();
        assert_eq!(r.histogram.values().sum::<u64>(), 5000);
        assert!(r.min >= 6);
        assert!(r.min as f64 <= r.mean && r.mean <= r.max as f64);
        assert_eq!(r.empirical_cdf(r.max), 1.0);
        assert_eq!(r.generator_id, GENERATOR_ID);
    }

    #[test]
    fn worker_count_does_not_change_output() {
        let one = run_experiment(&config(5, 7, 3000, 77, 1)).unwrap();
        let many = run_experiment(&config(5, 7, 3000, 77, 8)).unwrap();
        assert_eq!(one, many);
    }

    #[test]
    fn seeds_and_streams_differ() {
        let a = run_experiment(&config(5, 7, 2000, 1, 2)).unwrap();
        let b = run_experiment(&config(5, 7, 2000, 2, 2)).unwrap();
        assert_ne!(a.histogram, b.histogram);
        let mut s0 = replication_stream(1, 0);
        let mut s1 = replication_stream(1, 1);
        assert_ne!(s0.random::<u64>(), s1.random::<u64>());
    }

    #[test]
    fn single_rep_has_zero_variance() {
        let r = run_experiment(&config(3, 2, 1, 5, 1)).unwrap();
        assert_eq!(r.variance, 0.0);
        assert_eq!(r.min, r.max);
    }

    #[test]
    fn config_gate() {
        let spec = BankSpec::new(3, 2).unwrap();
        assert!(SimulationConfig::new(spec, 0, 1, 1).is_err());
        assert!(SimulationConfig::new(spec, 1, 1, 0).is_err());
    }
}

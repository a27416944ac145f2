//! Shared inputs for the criterion benchmarks.

use bankcover::BankSpec;

/// The bank shapes of the published tables, smallest to largest.
pub fn table_specs() -> Vec<BankSpec> {
    [(5u32, 1u64), (10, 10), (20, 200)]
        .into_iter()
        .map(|(a, q)| BankSpec::new(a, q).expect("valid table spec"))
        .collect()
}

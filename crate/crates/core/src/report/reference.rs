//! Published values the tables and figures are checked against, at their
//! printed precision.

/// Bank sizes of the `E N_q` and centred-mean tables.
pub const TABLE_A: [u32; 3] = [5, 10, 20];
/// Question counts of the `E N_q` and centred-mean tables.
pub const TABLE_Q: [u64; 7] = [1, 5, 10, 20, 50, 100, 200];

/// `E Y` for a single bank, two decimals.
pub const SINGLE_BANK_MEAN: [(u32, f64); 4] = [(5, 11.42), (10, 29.29), (15, 49.77), (20, 71.96)];

/// `E N_q`, one decimal, rows follow [`TABLE_A`] and columns [`TABLE_Q`].
pub const EXPECTED_TESTS: [[f64; 7]; 3] = [
    [11.4, 17.8, 20.8, 23.8, 27.9, 31.0, 34.1],
    [29.3, 43.5, 49.9, 56.4, 65.0, 71.6, 78.1],
    [72.0, 102.0, 115.3, 128.7, 146.5, 160.0, 173.5],
];

/// `b_q + γ/α`, one decimal, same layout as [`EXPECTED_TESTS`].
///
/// The (a = 20, q = 1) entry is printed as 68.7; the formula gives 69.66.
pub const CENTRED_PREDICTION: [[f64; 7]; 3] = [
    [9.8, 17.0, 20.1, 23.2, 27.3, 30.4, 33.5],
    [27.3, 42.6, 49.2, 55.8, 64.5, 71.0, 77.6],
    [68.7, 101.0, 114.5, 128.1, 145.9, 159.4, 173.0],
];

/// Bank sizes of the standard-deviation band table.
pub const SD_A: [u32; 6] = [2, 3, 4, 5, 10, 20];
/// `(sd_min, sd_max)`, three decimals.
pub const SD_BOUNDS: [(f64, f64); 6] = [
    (0.641, 2.537),
    (2.323, 3.823),
    (3.697, 5.107),
    (5.024, 6.390),
    (11.507, 12.804),
    (24.362, 25.630),
];

/// `E₁(1)` to four decimals.
pub const E1_AT_ONE: f64 = 0.2194;

/// The q grid of the wide figure: 1..20, then a sparser tail to 200.
pub const FIG_HIGH_Q: [u64; 35] = [
    1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15, 16, 17, 18, 19, 20, 25, 30, 35, 40, 42, 44,
    45, 46, 48, 50, 60, 80, 100, 150, 200,
];

/// Plotted `E N_q` on [`FIG_HIGH_Q`], one series per bank size in [`TABLE_A`].
pub const FIG_HIGH_POINTS: [[f64; 35]; 3] = [
    [
        11.4, 14.0, 15.7, 16.9, 17.8, 18.6, 19.2, 19.8, 20.3, 20.8, 21.2, 21.6, 21.9, 22.2, 22.5,
        22.8, 23.1, 23.3, 23.6, 23.8, 24.8, 25.6, 26.3, 26.9, 27.1, 27.3, 27.4, 27.5, 27.7, 27.9,
        28.7, 30.0, 31.0, 32.8, 34.1,
    ],
    [
        29.3, 35.2, 38.9, 41.5, 43.5, 45.2, 46.6, 47.8, 48.9, 49.9, 50.8, 51.6, 52.3, 53.0, 53.7,
        54.3, 54.9, 55.4, 55.9, 56.4, 58.5, 60.2, 61.6, 62.9, 63.4, 63.8, 64.0, 64.2, 64.6, 65.0,
        66.7, 69.5, 71.6, 75.4, 78.1,
    ],
    [
        72.0, 84.7, 92.3, 97.8, 102.0, 105.5, 108.5, 111.0, 113.3, 115.3, 117.1, 118.8, 120.4,
        121.8, 123.1, 124.4, 125.6, 126.7, 127.7, 128.7, 133.0, 136.6, 139.6, 142.2, 143.1, 144.0,
        144.4, 144.9, 145.7, 146.5, 150.0, 155.6, 160.0, 167.9, 173.5,
    ],
];

/// Looks up the plotted point for `(a, q)`, if any.
pub fn figure_point(a: u32, q: u64) -> Option<f64> {
    let row = TABLE_A.iter().position(|&x| x == a)?;
    let col = FIG_HIGH_Q.iter().position(|&x| x == q)?;
    Some(FIG_HIGH_POINTS[row][col])
}

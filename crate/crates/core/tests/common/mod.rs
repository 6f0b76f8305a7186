#![allow(dead_code)]

//! Reference data and independent oracles shared by the integration tests.
//!
//! The tables below are transcribed directly from the published case-study
//! tables and deliberately not read from the bundled fixture files, so a
//! corrupted fixture cannot validate itself.

/// Sector rows: id, centrality, number of firms, degree rank, firm rank, ICC.
pub const TABLE3: [(&str, f64, u64, usize, u8, usize); 29] = [
    ("1", 0.25, 19, 4, 4, 8),
    ("2", 0.179, 22, 2, 3, 5),
    ("3", 0.5, 4, 10, 4, 14),
    ("4", 0.357, 4, 7, 4, 11),
    ("5", 0.571, 41, 11, 3, 14),
    ("6", 0.429, 3, 9, 5, 14),
    ("7", 0.357, 2, 7, 5, 12),
    ("8", 0.607, 3, 12, 5, 17),
    ("9", 0.357, 13, 7, 4, 11),
    ("10", 0.893, 639, 14, 1, 15),
    ("11", 0.786, 226, 13, 1, 14),
    ("12", 0.429, 1, 9, 5, 14),
    ("13", 0.321, 40, 6, 3, 9),
    ("14", 0.286, 1, 5, 5, 10),
    ("15", 0.571, 49, 11, 3, 14),
    ("16", 0.250, 1, 4, 5, 9),
    ("17", 0.286, 2, 5, 5, 10),
    ("18", 0.321, 9, 6, 4, 10),
    ("19", 0.179, 1, 2, 5, 7),
    ("20", 0.321, 10, 6, 4, 10),
    ("21", 0.143, 1, 1, 5, 6),
    ("22", 0.393, 66, 8, 2, 10),
    ("23", 0.214, 31, 3, 3, 6),
    ("24", 0.321, 4, 6, 4, 10),
    ("25", 0.357, 3, 7, 5, 12),
    ("26", 0.500, 3, 10, 5, 15),
    ("27", 0.143, 2, 1, 5, 6),
    ("28", 0.393, 2, 8, 5, 13),
    ("29", 0.607, 55, 12, 3, 15),
];

pub const TABLE3_MEAN_ICC: f64 = 11.070;

/// Firm rows: id and published centrality, in published order.
pub const TABLE4: [(&str, f64); 49] = [
    ("49", 0.583), ("28", 0.208), ("27", 0.167), ("37", 0.146), ("25", 0.125), ("31", 0.125),
    ("44", 0.125), ("20", 0.104), ("23", 0.104), ("35", 0.104), ("40", 0.104), ("2", 0.083),
    ("4", 0.083), ("7", 0.083), ("8", 0.083), ("14", 0.083), ("22", 0.083), ("39", 0.083),
    ("43", 0.083), ("45", 0.083), ("1", 0.063), ("11", 0.063), ("16", 0.063), ("17", 0.063),
    ("21", 0.063), ("34", 0.063), ("42", 0.063), ("47", 0.063), ("3", 0.042), ("5", 0.042),
    ("6", 0.042), ("9", 0.042), ("12", 0.042), ("13", 0.042), ("15", 0.042), ("24", 0.042),
    ("33", 0.042), ("36", 0.042), ("38", 0.042), ("10", 0.021), ("18", 0.021), ("26", 0.021),
    ("29", 0.021), ("30", 0.021), ("46", 0.021), ("48", 0.021), ("19", 0.000), ("32", 0.000),
    ("41", 0.000),
];

pub const TABLE4_INFILTRATION: f64 = 0.233;

/// Summary statistics: shape, scale, mean, variance, sd, skewness, kurtosis.
pub const TABLE5: [(&str, f64); 7] = [
    ("shape", 3.915),
    ("scale", 0.087),
    ("mean", 0.340),
    ("variance", 0.029),
    ("std_dev", 0.172),
    ("skewness", 1.011),
    ("kurtosis", 4.533),
];

/// Exact rendering at three decimals, half-up, via integer thousandths of
/// the published value. Independent of the library's formatter.
pub fn published_thousandths(x: f64) -> i64 {
    (x * 1000.0).round() as i64
}

// Gauss–Kronrod 7/15 nodes and weights on [-1, 1].
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_728,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kronrod = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    for j in 0..7 {
        let x = h * XGK[j];
        let s = f(c - x) + f(c + x);
        kronrod += WGK[j] * s;
        if j % 2 == 1 {
            gauss += WG[j / 2] * s;
        }
    }
    (kronrod * h, ((kronrod - gauss) * h).abs())
}

/// Adaptive Gauss–Kronrod integration of `f` over `[a, b]`.
pub fn integrate<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> f64 {
    fn recurse<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64, whole: (f64, f64), depth: u32) -> f64 {
        let (value, err) = whole;
        if err <= tol || depth == 0 {
            return value;
        }
        let m = 0.5 * (a + b);
        let left = gk15(f, a, m);
        let right = gk15(f, m, b);
        recurse(f, a, m, 0.5 * tol, left, depth - 1) + recurse(f, m, b, 0.5 * tol, right, depth - 1)
    }
    if a == b {
        return 0.0;
    }
    recurse(f, a, b, tol, gk15(f, a, b), 60)
}

/// CDF values at increasing grid points by cumulative quadrature of `pdf`.
pub fn cumulative_quadrature<F: Fn(f64) -> f64>(pdf: &F, grid: &[f64], tol: f64) -> Vec<f64> {
    let mut acc = 0.0;
    let mut prev = 0.0;
    grid.iter()
        .map(|&x| {
            acc += integrate(pdf, prev, x, tol);
            prev = x;
            acc
        })
        .collect()
}

/// Dense ranks by brute force: 1 + number of distinct values strictly below.
pub fn dense_rank_oracle(values: &[f64]) -> Vec<usize> {
    values
        .iter()
        .map(|v| {
            let mut below: Vec<f64> = values.iter().copied().filter(|w| w < v).collect();
            below.sort_by(|a, b| a.partial_cmp(b).unwrap());
            below.dedup();
            below.len() + 1
        })
        .collect()
}

#[test]
fn quadrature_oracle_self_check() {
    let exact = 1.0 - (-2.0f64).exp();
    assert!((integrate(&|x: f64| (-x).exp(), 0.0, 2.0, 1e-14) - exact).abs() < 1e-14);
    let half = integrate(&|x: f64| x.sqrt(), 0.0, 1.0, 1e-13);
    assert!((half - 2.0 / 3.0).abs() < 1e-12);
}

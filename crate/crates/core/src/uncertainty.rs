//! Gamma-distribution model for the uncertainty on the infiltration index.
//!
//! Parameters follow the shape/scale convention: mean = kθ, variance = kθ².

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fmt::ser3;

const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEF: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

const MAX_ITER: usize = 100_000;
const EPS: f64 = 1e-16;
const TINY: f64 = 1e-300;

/// Natural log of the gamma function for `x > 0` (Lanczos, g = 7).
pub fn ln_gamma(x: f64) -> f64 {
    if x < 0.5 {
        // reflection: Γ(x)Γ(1-x) = π / sin(πx)
        let pi = std::f64::consts::PI;
        return (pi / (pi * x).sin()).abs().ln() - ln_gamma(1.0 - x);
    }
    let x = x - 1.0;
    let t = x + LANCZOS_G + 0.5;
    let mut sum = LANCZOS_COEF[0];
    for (i, &c) in LANCZOS_COEF.iter().enumerate().skip(1) {
        sum += c / (x + i as f64);
    }
    0.5 * (2.0 * std::f64::consts::PI).ln() + (x + 0.5) * t.ln() - t + sum.ln()
}

/// Regularized lower incomplete gamma P(a, x) for `a > 0`, `x >= 0`.
///
/// Power series below `x = a + 1`, Lentz continued fraction for the upper
/// tail above it.
pub fn regularized_lower_gamma(a: f64, x: f64) -> Result<f64> {
    if a.is_nan() || a <= 0.0 || !a.is_finite() || x.is_nan() {
        return Err(Error::Numerical(format!("P(a, x) undefined for a = {a}, x = {x}")));
    }
    if x <= 0.0 {
        return Ok(0.0);
    }
    if x == f64::INFINITY {
        return Ok(1.0);
    }
    let log_prefactor = a * x.ln() - x - ln_gamma(a);
    if x < a + 1.0 {
        let mut ap = a;
        let mut term = 1.0 / a;
        let mut sum = term;
        for _ in 0..MAX_ITER {
            ap += 1.0;
            term *= x / ap;
            sum += term;
            if term.abs() < sum.abs() * EPS {
                return Ok((log_prefactor + sum.ln()).exp().min(1.0));
            }
        }
        Err(Error::Numerical(format!("incomplete gamma series did not converge (a = {a}, x = {x})")))
    } else {
        // Q(a, x) = e^{-x} x^a / Γ(a) · 1/(x+1-a- 1(1-a)/(x+3-a- 2(2-a)/(x+5-a- ...)))
        let mut b = x + 1.0 - a;
        let mut c = 1.0 / TINY;
        let mut d = 1.0 / b;
        let mut h = d;
        for i in 1..=MAX_ITER {
            let an = -(i as f64) * (i as f64 - a);
            b += 2.0;
            d = an * d + b;
            if d.abs() < TINY {
                d = TINY;
            }
            c = b + an / c;
            if c.abs() < TINY {
                c = TINY;
            }
            d = 1.0 / d;
            let delta = d * c;
            h *= delta;
            if (delta - 1.0).abs() < EPS {
                let q = (log_prefactor + h.ln()).exp();
                return Ok((1.0 - q).clamp(0.0, 1.0));
            }
        }
        Err(Error::Numerical(format!("incomplete gamma continued fraction did not converge (a = {a}, x = {x})")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GammaParams {
    shape: f64,
    scale: f64,
}

impl GammaParams {
    /// Distribution used for the case-study construction market.
    pub const CASE_STUDY: GammaParams = GammaParams { shape: 3.915, scale: 0.087 };

    pub fn new(shape: f64, scale: f64) -> Result<Self> {
        let ok = |v: f64| v.is_finite() && v > 0.0;
        if !ok(shape) || !ok(scale) {
            return Err(Error::InvalidGammaParams { shape, scale });
        }
        Ok(GammaParams { shape, scale })
    }

    pub fn shape(&self) -> f64 {
        self.shape
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn moments(&self) -> GammaMoments {
        gamma_moments(self)
    }

    /// Mode `(k-1)θ`, or 0 when `k < 1`.
    pub fn mode(&self) -> f64 {
        ((self.shape - 1.0) * self.scale).max(0.0)
    }

    pub fn pdf(&self, x: f64) -> f64 {
        gamma_pdf(self, x)
    }

    pub fn cdf(&self, x: f64) -> Result<f64> {
        gamma_cdf(self, x)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GammaMoments {
    #[serde(serialize_with = "ser3")]
    pub mean: f64,
    #[serde(serialize_with = "ser3")]
    pub variance: f64,
    #[serde(serialize_with = "ser3")]
    pub std_dev: f64,
    #[serde(serialize_with = "ser3")]
    pub skewness: f64,
    /// Non-excess kurtosis, `3 + 6/k`.
    #[serde(serialize_with = "ser3")]
    pub kurtosis: f64,
}

pub fn gamma_moments(p: &GammaParams) -> GammaMoments {
    let (k, theta) = (p.shape, p.scale);
    let variance = k * theta * theta;
    GammaMoments {
        mean: k * theta,
        variance,
        std_dev: k.sqrt() * theta,
        skewness: 2.0 / k.sqrt(),
        kurtosis: 3.0 + 6.0 / k,
    }
}

pub fn gamma_pdf(p: &GammaParams, x: f64) -> f64 {
    let (k, theta) = (p.shape, p.scale);
    if x.is_nan() {
        return f64::NAN;
    }
    if x < 0.0 || x == f64::INFINITY {
        return 0.0;
    }
    if x == 0.0 {
        return match k.partial_cmp(&1.0) {
            Some(std::cmp::Ordering::Less) => f64::INFINITY,
            Some(std::cmp::Ordering::Equal) => 1.0 / theta,
            _ => 0.0,
        };
    }
    ((k - 1.0) * x.ln() - x / theta - ln_gamma(k) - k * theta.ln()).exp()
}

pub fn gamma_cdf(p: &GammaParams, x: f64) -> Result<f64> {
    if x <= 0.0 {
        return Ok(0.0);
    }
    regularized_lower_gamma(p.shape, x / p.scale)
}

/// Shape/scale whose mean and standard deviation equal the given values.
pub fn fit_method_of_moments(mean: f64, std_dev: f64) -> Result<GammaParams> {
    let ok = |v: f64| v.is_finite() && v > 0.0;
    if !ok(mean) || !ok(std_dev) {
        return Err(Error::InvalidMoments { mean, std_dev });
    }
    let ratio = mean / std_dev;
    GammaParams::new(ratio * ratio, std_dev * std_dev / mean)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct UncertaintyInterval {
    #[serde(serialize_with = "ser3")]
    pub lower: f64,
    #[serde(serialize_with = "ser3")]
    pub upper: f64,
    #[serde(serialize_with = "ser3")]
    pub cdf_lower: f64,
    #[serde(serialize_with = "ser3")]
    pub cdf_upper: f64,
    /// `F(upper) - F(lower)`.
    #[serde(serialize_with = "ser3")]
    pub coverage_between: f64,
    /// Coverage renormalized to the mass above the observation,
    /// `(F(upper) - F(lower)) / (1 - F(lower))`.
    #[serde(serialize_with = "ser3")]
    pub coverage_above_lower: f64,
}

/// Interval from the observed index up to one standard deviation above the
/// model mean.
pub fn uncertainty_interval(observed: f64, params: &GammaParams) -> Result<UncertaintyInterval> {
    if !observed.is_finite() || observed < 0.0 {
        return Err(Error::InvalidObserved(observed));
    }
    let m = params.moments();
    let upper = m.mean + m.std_dev;
    if observed > upper {
        return Err(Error::IntervalInverted { observed, upper });
    }
    let cdf_lower = params.cdf(observed)?;
    let cdf_upper = params.cdf(upper)?;
    let coverage_between = cdf_upper - cdf_lower;
    let tail = 1.0 - cdf_lower;
    let coverage_above_lower = if tail > 0.0 { (coverage_between / tail).clamp(0.0, 1.0) } else { 0.0 };
    Ok(UncertaintyInterval { lower: observed, upper, cdf_lower, cdf_upper, coverage_between, coverage_above_lower })
}

/// Qualitative expectations on the fitted distribution: little mass to the
/// left of the observation, a mean above it and a long right tail.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ShapeChecks {
    #[serde(serialize_with = "ser3")]
    pub left_probe: f64,
    pub short_left_tail: bool,
    pub mean_above_observed: bool,
    pub right_skewed: bool,
}

impl ShapeChecks {
    pub fn all_hold(&self) -> bool {
        self.short_left_tail && self.mean_above_observed && self.right_skewed
    }
}

pub const DEFAULT_LEFT_PROBE: f64 = 0.15;

pub fn shape_checks(params: &GammaParams, observed: f64, left_probe: f64) -> ShapeChecks {
    let m = params.moments();
    ShapeChecks {
        left_probe,
        short_left_tail: params.pdf(left_probe) < params.pdf(params.mode()),
        mean_above_observed: m.mean > observed,
        right_skewed: m.skewness > 0.0,
    }
}

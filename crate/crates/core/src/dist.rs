//! F distribution CDF and quantile on top of the regularized incomplete beta
//! function.

use core::f64::consts::PI;

use crate::error::{Error, Result};

/// Degrees of freedom of an F distribution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FParams {
    pub d1: f64,
    pub d2: f64,
}

impl FParams {
    pub fn new(d1: f64, d2: f64) -> Result<Self> {
        if !(d1 > 0.0 && d1.is_finite() && d2 > 0.0 && d2.is_finite()) {
            return Err(Error::Domain("F degrees of freedom must be positive and finite"));
        }
        Ok(Self { d1, d2 })
    }
}

// Lanczos approximation, g = 7, nine terms.
const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEF: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// Natural log of the gamma function for `x > 0`.
pub fn ln_gamma(x: f64) -> f64 {
    if x < 0.5 {
        // Reflection: Gamma(x) Gamma(1 - x) = pi / sin(pi x)
        return libm::log(PI / libm::sin(PI * x)) - ln_gamma(1.0 - x);
    }
    let x = x - 1.0;
    let mut sum = LANCZOS_COEF[0];
    for (i, c) in LANCZOS_COEF.iter().enumerate().skip(1) {
        sum += c / (x + i as f64);
    }
    let t = x + LANCZOS_G + 0.5;
    0.5 * libm::log(2.0 * PI) + (x + 0.5) * libm::log(t) - t + libm::log(sum)
}

pub fn ln_beta(a: f64, b: f64) -> f64 {
    ln_gamma(a) + ln_gamma(b) - ln_gamma(a + b)
}

/// Regularized incomplete beta function `I_x(a, b)`.
pub fn reg_inc_beta(x: f64, a: f64, b: f64) -> Result<f64> {
    if !(a > 0.0 && b > 0.0 && a.is_finite() && b.is_finite()) {
        return Err(Error::Domain("incomplete beta shape parameters must be positive"));
    }
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::Domain("incomplete beta argument must lie in [0, 1]"));
    }
    Ok(inc_beta_unchecked(x, a, b))
}

fn inc_beta_unchecked(x: f64, a: f64, b: f64) -> f64 {
    inc_beta_tails(x, 1.0 - x, a, b).0
}

/// `(I_x(a, b), 1 - I_x(a, b))` with the smaller tail evaluated directly.
/// `y` must equal `1 - x`, computed without cancellation by the caller.
fn inc_beta_tails(x: f64, y: f64, a: f64, b: f64) -> (f64, f64) {
    if x == 0.0 {
        return (0.0, 1.0);
    }
    if y == 0.0 {
        return (1.0, 0.0);
    }
    let ln_front = a * libm::log(x) + b * libm::log(y) - ln_beta(a, b);
    if x < (a + 1.0) / (a + b + 2.0) {
        let lower = libm::exp(ln_front) * beta_continued_fraction(x, a, b) / a;
        (lower, 1.0 - lower)
    } else {
        let upper = libm::exp(ln_front) * beta_continued_fraction(y, b, a) / b;
        (1.0 - upper, upper)
    }
}

/// Modified Lentz evaluation of the incomplete beta continued fraction.
fn beta_continued_fraction(x: f64, a: f64, b: f64) -> f64 {
    const TINY: f64 = 1e-300;
    const EPS: f64 = 1e-16;
    const MAX_ITER: usize = 100_000;

    let qab = a + b;
    let qap = a + 1.0;
    let qam = a - 1.0;
    let mut c = 1.0;
    let mut d = 1.0 - qab * x / qap;
    if d.abs() < TINY {
        d = TINY;
    }
    d = 1.0 / d;
    let mut h = d;
    for m in 1..=MAX_ITER {
        let m = m as f64;
        let m2 = 2.0 * m;
        let aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if d.abs() < TINY {
            d = TINY;
        }
        c = 1.0 + aa / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        h *= d * c;
        let aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if d.abs() < TINY {
            d = TINY;
        }
        c = 1.0 + aa / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let del = d * c;
        h *= del;
        if (del - 1.0).abs() < EPS {
            break;
        }
    }
    h
}

/// `P(F <= f)`.
pub fn f_cdf(f: f64, params: FParams) -> Result<f64> {
    if f.is_nan() || f < 0.0 {
        return Err(Error::Domain("F statistic must be non-negative"));
    }
    if f == f64::INFINITY {
        return Ok(1.0);
    }
    let FParams { d1, d2 } = params;
    // Compute x and 1 - x without cancellation.
    let denom = d1 * f + d2;
    let x = d1 * f / denom;
    let one_minus_x = d2 / denom;
    Ok(inc_beta_tails(x, one_minus_x, d1 / 2.0, d2 / 2.0).0)
}

/// Upper tail `P(F > f)`, accurate far into the tail.
pub fn f_sf(f: f64, params: FParams) -> Result<f64> {
    if f.is_nan() || f < 0.0 {
        return Err(Error::Domain("F statistic must be non-negative"));
    }
    if f == f64::INFINITY {
        return Ok(0.0);
    }
    let FParams { d1, d2 } = params;
    let denom = d1 * f + d2;
    let x = d1 * f / denom;
    let one_minus_x = d2 / denom;
    Ok(inc_beta_tails(x, one_minus_x, d1 / 2.0, d2 / 2.0).1)
}

/// Density of the F distribution.
pub fn f_pdf(f: f64, params: FParams) -> f64 {
    let FParams { d1, d2 } = params;
    if f < 0.0 {
        return 0.0;
    }
    if f == 0.0 {
        return if d1 < 2.0 {
            f64::INFINITY
        } else if d1 == 2.0 {
            1.0
        } else {
            0.0
        };
    }
    let ln = 0.5 * d1 * libm::log(d1) + 0.5 * d2 * libm::log(d2) + (0.5 * d1 - 1.0) * libm::log(f)
        - 0.5 * (d1 + d2) * libm::log(d1 * f + d2)
        - ln_beta(d1 / 2.0, d2 / 2.0);
    libm::exp(ln)
}

/// Inverse of [`f_cdf`]. Returns `+inf` for `prob = 1`.
///
/// Safeguarded Newton iteration inside a bracket grown geometrically from
/// `[0, 1]`; falls back to bisection whenever a Newton step leaves the
/// bracket. Upper-tail probabilities are matched through [`f_sf`] so extreme
/// quantiles keep full relative precision.
pub fn f_quantile(prob: f64, params: FParams) -> Result<f64> {
    if !(0.0..=1.0).contains(&prob) {
        return Err(Error::Domain("probability must lie in [0, 1]"));
    }
    if prob == 0.0 {
        return Ok(0.0);
    }
    if prob == 1.0 {
        return Ok(f64::INFINITY);
    }
    let upper = prob > 0.5;
    let tail = 1.0 - prob;
    // Increasing in f, zero at the quantile.
    let residual = |f: f64| -> f64 {
        if upper {
            tail - f_sf(f, params).unwrap_or(0.0)
        } else {
            f_cdf(f, params).unwrap_or(1.0) - prob
        }
    };

    let mut lo = 0.0;
    let mut hi = 1.0;
    while residual(hi) < 0.0 {
        lo = hi;
        hi *= 2.0;
        if hi > 1e300 {
            return Ok(hi);
        }
    }

    let mut f = 0.5 * (lo + hi);
    for _ in 0..1000 {
        let r = residual(f);
        if r == 0.0 {
            return Ok(f);
        }
        if r < 0.0 {
            lo = f;
        } else {
            hi = f;
        }
        if hi - lo <= 4.0 * f64::EPSILON * hi {
            break;
        }
        let slope = f_pdf(f, params);
        let newton = f - r / slope;
        let next = if slope > 0.0 && newton.is_finite() && newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
        if (next - f).abs() <= 2.0 * f64::EPSILON * f {
            f = next;
            break;
        }
        f = next;
    }
    Ok(f)
}

//! Exponential integral on the negative real axis.
//!
//! The coverage closed forms only ever need `Ei(-x)` for `x > 0`, usually in
//! the product `e^x Ei(-x)`. The product form is exposed separately because
//! the arguments grow like `d^alpha / gbar` and `e^x` alone would overflow
//! long before the product leaves the representable range (`e^x Ei(-x) ~ -1/x`
//! for large `x`).

use crate::error::{Error, Result};

pub const EULER_MASCHERONI: f64 = 0.57721566490153286060651209008240243104215933593992;

/// Crossover between the power series and the continued fraction. Both sides
/// hold ~1e-13 relative error here; the splice is checked in the tests.
const SERIES_CUTOFF: f64 = 6.0;

/// Ei(-x) = gamma + ln x + sum_{k>=1} (-x)^k / (k * k!), for modest x.
fn ei_neg_series(x: f64) -> f64 {
    let mut sum = 0.0_f64;
    let mut term = 1.0_f64;
    for k in 1..=400_u32 {
        term *= -x / k as f64;
        sum += term / k as f64;
        if term.abs() < 1e-20 * sum.abs() {
            break;
        }
    }
    EULER_MASCHERONI + x.ln() + sum
}

/// Modified Lentz evaluation of the Legendre continued fraction,
/// E1(x) = e^{-x} / (x + 1 - 1^2/(x + 3 - 2^2/(x + 5 - ...))).
/// Returns h(x) = e^x E1(x), i.e. the fraction without the exponential.
fn e1_scaled_cf(x: f64) -> f64 {
    const TINY: f64 = 1e-300;
    let mut f = x + 1.0;
    if f == 0.0 {
        f = TINY;
    }
    let mut c = f;
    let mut d = 0.0_f64;
    for k in 1..=200_u32 {
        let kf = k as f64;
        let a = -(kf * kf);
        let b = x + 2.0 * kf + 1.0;
        d = b + a * d;
        if d == 0.0 {
            d = TINY;
        }
        c = b + a / c;
        if c == 0.0 {
            c = TINY;
        }
        d = 1.0 / d;
        let delta = c * d;
        f *= delta;
        if (delta - 1.0).abs() < 1e-16 {
            break;
        }
    }
    1.0 / f
}

fn check_domain(x: f64) -> Result<()> {
    if x <= 0.0 || x.is_nan() {
        return Err(Error::Domain(format!(
            "Ei(-x) evaluation needs x > 0, got {x}"
        )));
    }
    Ok(())
}

/// Ei(-x) for x > 0. Always negative, increasing towards zero.
pub fn ei_neg(x: f64) -> Result<f64> {
    check_domain(x)?;
    if x <= SERIES_CUTOFF {
        Ok(ei_neg_series(x))
    } else {
        Ok(-(-x).exp() * e1_scaled_cf(x))
    }
}

/// e^x Ei(-x) for x > 0, without intermediate overflow.
pub fn exp_ei_neg(x: f64) -> Result<f64> {
    check_domain(x)?;
    if x <= SERIES_CUTOFF {
        Ok(x.exp() * ei_neg_series(x))
    } else {
        Ok(-e1_scaled_cf(x))
    }
}

/// Single-exponential surrogate Ei(-x) ~ -(sqrt(pi)/2) e^{-16x/pi^2}.
///
/// Exact at x = 0 in value and at the origin in integral mass, but only
/// order-of-magnitude accurate pointwise; it exists so that rate expressions
/// collapse to elementary functions. Keep it out of anything quantitative.
pub fn ei_neg_approx(x: f64) -> Result<f64> {
    check_domain(x)?;
    let pi = std::f64::consts::PI;
    Ok(-(pi.sqrt() / 2.0) * (-16.0 * x / (pi * pi)).exp())
}

/// e^x * ei_neg_approx(x); the exponent 1 - 16/pi^2 is negative, so this
/// decays and never overflows.
pub fn exp_ei_neg_approx(x: f64) -> Result<f64> {
    check_domain(x)?;
    let pi = std::f64::consts::PI;
    Ok(-(pi.sqrt() / 2.0) * (x * (1.0 - 16.0 / (pi * pi))).exp())
}

//! Gauss hypergeometric function on `[0, 1)`.

use super::rgamma;
use crate::{Error, Result};

const SERIES_MAX_TERMS: usize = 2_000_000;

/// Distance from an integer below which `c − a − b` is treated as integral
/// and the 1−x connection formula (which then needs log terms) is skipped.
const INTEGER_GUARD: f64 = 1e-3;

fn is_nonpositive_integer(v: f64) -> bool {
    v <= 0.0 && v == v.floor()
}

/// Defining power series `Σ (a)_k (b)_k / ((c)_k k!) x^k`, summed until the
/// terms stop contributing at machine precision.
pub fn hyp2f1_series(a: f64, b: f64, c: f64, x: f64) -> Result<f64> {
    if is_nonpositive_integer(c) {
        return Err(Error::domain(format!("2F1: c = {c} is a nonpositive integer")));
    }
    let mut term = 1.0f64;
    let mut sum = 1.0f64;
    let mut quiet = 0;
    for k in 0..SERIES_MAX_TERMS {
        let kf = k as f64;
        term *= (a + kf) * (b + kf) / ((c + kf) * (kf + 1.0)) * x;
        sum += term;
        if term == 0.0 {
            return Ok(sum);
        }
        if term.abs() <= f64::EPSILON * 0.25 * sum.abs() {
            quiet += 1;
            // the ratio of successive terms tends to x < 1; two quiet
            // terms past the peak mean the tail is below rounding
            if quiet >= 2 && (a + kf).abs() * (b + kf).abs() <= (c + kf).abs() * (kf + 1.0) {
                return Ok(sum);
            }
        } else {
            quiet = 0;
        }
        if !sum.is_finite() {
            break;
        }
    }
    Err(Error::numeric(format!(
        "2F1({a}, {b}; {c}; {x}) series did not converge: partial sum {sum:e}, last term {term:e}"
    )))
}

/// `₂F₁(a, b; c; x)` for `0 ≤ x < 1`.
///
/// The raw series is used up to `x = 1/2`; beyond that the 1−x connection
/// formula moves the argument back below 1/2. When `c − a − b` is an integer
/// the connection coefficients are singular and the raw series is summed
/// instead (it still converges for `x < 1`).
pub fn hyp2f1(a: f64, b: f64, c: f64, x: f64) -> Result<f64> {
    if !(a.is_finite() && b.is_finite() && c.is_finite() && x.is_finite()) {
        return Err(Error::domain("2F1: non-finite argument"));
    }
    if is_nonpositive_integer(c) {
        return Err(Error::domain(format!("2F1: c = {c} is a nonpositive integer")));
    }
    if !(0.0..1.0).contains(&x) {
        return Err(Error::domain(format!("2F1: x = {x} outside [0, 1)")));
    }
    if x == 0.0 {
        return Ok(1.0);
    }
    let terminating = is_nonpositive_integer(a) || is_nonpositive_integer(b);
    if terminating || x <= 0.5 {
        return hyp2f1_series(a, b, c, x);
    }
    let s = c - a - b;
    if (s - s.round()).abs() < INTEGER_GUARD {
        return hyp2f1_series(a, b, c, x);
    }
    let y = 1.0 - x;
    let gc = libm::tgamma(c);
    let first = gc * libm::tgamma(s) * (rgamma(c - a) * rgamma(c - b));
    let second = gc * libm::tgamma(-s) * (rgamma(a) * rgamma(b));
    let mut value = 0.0;
    if first != 0.0 {
        value += first * hyp2f1_series(a, b, 1.0 - s, y)?;
    }
    if second != 0.0 {
        value += second * y.powf(s) * hyp2f1_series(c - a, c - b, 1.0 + s, y)?;
    }
    if !value.is_finite() {
        return Err(Error::numeric(format!(
            "2F1({a}, {b}; {c}; {x}) connection formula overflowed"
        )));
    }
    Ok(value)
}

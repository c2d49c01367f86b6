//! Upper incomplete gamma function for real order, positive and negative
//! real argument, and the auxiliary function `beta(x) = x^{1/2} Gamma(-1/2, x)`.

use super::gamma::gamma;
use crate::error::{MaassError, Result};
use crate::sum::Neumaier;
use num_complex::Complex64;
use std::f64::consts::PI;

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// Lower incomplete gamma via `x^a e^{-x} sum x^n / (a (a+1) ... (a+n))`, `a > 0`.
fn lower_series(a: f64, x: f64) -> f64 {
    let mut sum = Neumaier::new();
    let mut t = 1.0 / a;
    sum.add(t);
    let mut n = 1.0;
    while n < 10_000.0 {
        t *= x / (a + n);
        sum.add(t);
        if t.abs() < 1e-17 * sum.value().abs() {
            break;
        }
        n += 1.0;
    }
    (a * x.ln() - x).exp() * sum.value()
}

/// Continued fraction for `Gamma(a, x)`, modified Lentz.
fn upper_cf(a: f64, x: f64) -> f64 {
    const TINY: f64 = 1e-300;
    let mut b = x + 1.0 - a;
    let mut c = 1.0 / TINY;
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..100_000 {
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
        let del = d * c;
        h *= del;
        if (del - 1.0).abs() < 1e-16 {
            break;
        }
    }
    (a * x.ln() - x).exp() * h
}

/// `E_1(x) = Gamma(0, x)`.
fn exp_integral_e1(x: f64) -> f64 {
    if x >= 1.0 {
        return upper_cf(0.0, x);
    }
    let mut sum = Neumaier::new();
    sum.add(-EULER_GAMMA - x.ln());
    let mut t = 1.0;
    let mut k = 1.0;
    loop {
        t *= -x / k;
        let term = -t / k;
        sum.add(term);
        if term.abs() < 1e-18 {
            break;
        }
        k += 1.0;
    }
    sum.value()
}

/// `Gamma(a, x)` for real `a` and `x > 0`.
pub fn inc_gamma_upper(a: f64, x: f64) -> Result<f64> {
    if x <= 0.0 {
        return Err(MaassError::NonPositiveX(x));
    }
    if a > 0.0 {
        if x < a + 1.0 {
            return Ok(gamma(a)? - lower_series(a, x));
        }
        return Ok(upper_cf(a, x));
    }
    if x >= 1.0 {
        return Ok(upper_cf(a, x));
    }
    // downward recurrence Gamma(a, x) = (Gamma(a+1, x) - x^a e^{-x}) / a
    let steps = (-a).floor() as i64 + 1;
    let top = a + steps as f64;
    let mut g = if top == 1.0 {
        // a is a non-positive integer: start from Gamma(0, x)
        exp_integral_e1(x)
    } else {
        inc_gamma_upper(top, x)?
    };
    let mut ap = if top == 1.0 { 0.0 } else { top };
    while ap > a + 0.5 {
        ap -= 1.0;
        g = (g - (ap * x.ln() - x).exp()) / ap;
    }
    Ok(g)
}

/// `Gamma(a, x)` for `x < 0` on the principal branch, where
/// `(-X)^a = X^a e^{i pi a}`. Computed as `Gamma(a) - gamma(a, x)` with the
/// lower function summed from its entire series in `X = -x`.
pub fn inc_gamma_upper_negative(a: f64, x: f64) -> Result<Complex64> {
    if x >= 0.0 {
        return Err(MaassError::InvalidArgument(format!(
            "expected negative argument, got {x}"
        )));
    }
    if a <= 0.0 && a == a.floor() {
        return Err(MaassError::Pole(a));
    }
    let xx = -x;
    let mut sum = Neumaier::new();
    let mut t = 1.0;
    let mut n = 0.0;
    loop {
        let term = t / (a + n);
        sum.add(term);
        if n > xx && term.abs() < 1e-17 * sum.value().abs() {
            break;
        }
        n += 1.0;
        t *= xx / n;
    }
    let lower = Complex64::from_polar(xx.powf(a), PI * a) * sum.value();
    Ok(Complex64::new(gamma(a)?, 0.0) - lower)
}

/// `beta(x) = x^{1/2} Gamma(-1/2, x)` for `x > 0`, with `beta(0) = 2`.
pub fn beta_zagier(x: f64) -> Result<f64> {
    if x == 0.0 {
        return Ok(2.0);
    }
    Ok(x.sqrt() * inc_gamma_upper(-0.5, x)?)
}

//! Bessel functions `J_nu` and `I_nu` of real order for positive argument.
//!
//! Power series below [`BESSEL_SWITCH`], Hankel asymptotics above. The
//! alternating `J` series is summed in double-double so its cancellation
//! does not cost accuracy up to the switch point.

use super::dd::Dd;
use super::gamma::rgamma;
use crate::error::{MaassError, Result};
use crate::sum::Neumaier;
use std::f64::consts::PI;

pub const BESSEL_SWITCH: f64 = 30.0;

fn is_integer(x: f64) -> bool {
    x == x.floor()
}

/// Coefficients `a_k(nu) = prod_{j=1}^k (4 nu^2 - (2j-1)^2) / (k! 8^k)` of the
/// Hankel expansions, truncated where the terms stop decreasing.
fn hankel_terms(nu: f64, x: f64) -> Vec<f64> {
    let mu = 4.0 * nu * nu;
    let mut out = vec![1.0];
    let mut a = 1.0;
    let mut prev = f64::INFINITY;
    for k in 1..200 {
        let j = (2 * k - 1) as f64;
        a *= (mu - j * j) / (k as f64 * 8.0 * x);
        if a.abs() >= prev && k > 2 {
            break;
        }
        prev = a.abs();
        out.push(a);
        if a.abs() < 1e-18 {
            break;
        }
    }
    out
}

fn j_series(nu: f64, x: f64) -> f64 {
    let half = x / 2.0;
    let prefactor = half.powf(nu) * rgamma(nu + 1.0);
    let q = Dd::from_f64(half) * Dd::from_f64(half);
    let mut term = Dd::from_f64(1.0);
    let mut sum = term;
    let nu_dd = Dd::from_f64(nu);
    for k in 1..500 {
        let kd = Dd::from_f64(k as f64);
        term = -(term * q) / (kd * (kd + nu_dd));
        sum = sum + term;
        if term.abs().hi < 1e-34 * sum.abs().hi.max(1e-300) && k as f64 > half {
            break;
        }
    }
    prefactor * sum.to_f64()
}

fn j_asymptotic(nu: f64, x: f64) -> f64 {
    let a = hankel_terms(nu, x);
    let (mut p, mut q) = (Neumaier::new(), Neumaier::new());
    for (k, ak) in a.iter().enumerate() {
        let sign = if (k / 2) % 2 == 0 { 1.0 } else { -1.0 };
        if k % 2 == 0 {
            p.add(sign * ak);
        } else {
            q.add(sign * ak);
        }
    }
    let omega = x - (nu / 2.0 + 0.25) * PI;
    (2.0 / (PI * x)).sqrt() * (p.value() * omega.cos() - q.value() * omega.sin())
}

/// Bessel function of the first kind `J_nu(x)`, `x > 0`, real `nu`.
pub fn bessel_j(nu: f64, x: f64) -> Result<f64> {
    if x <= 0.0 {
        return Err(MaassError::NonPositiveX(x));
    }
    if nu < 0.0 && is_integer(nu) {
        let n = -nu;
        let sign = if (n as i64) % 2 == 0 { 1.0 } else { -1.0 };
        return Ok(sign * bessel_j(n, x)?);
    }
    if x <= BESSEL_SWITCH {
        Ok(j_series(nu, x))
    } else {
        Ok(j_asymptotic(nu, x))
    }
}

fn i_series(nu: f64, x: f64) -> f64 {
    let half = x / 2.0;
    let q = half * half;
    let mut sum = Neumaier::new();
    let mut term = half.powf(nu) * rgamma(nu + 1.0);
    sum.add(term);
    for k in 1..2000 {
        let kf = k as f64;
        term *= q / (kf * (kf + nu));
        sum.add(term);
        if term.abs() < 1e-17 * sum.value().abs() && kf > half {
            break;
        }
    }
    sum.value()
}

fn i_asymptotic(nu: f64, x: f64) -> f64 {
    let a = hankel_terms(nu, x);
    let mut s = Neumaier::new();
    for (k, ak) in a.iter().enumerate() {
        s.add(if k % 2 == 0 { *ak } else { -ak });
    }
    x.exp() / (2.0 * PI * x).sqrt() * s.value()
}

/// Modified Bessel function `I_nu(x)`, `x > 0`, real `nu`.
pub fn bessel_i(nu: f64, x: f64) -> Result<f64> {
    if x <= 0.0 {
        return Err(MaassError::NonPositiveX(x));
    }
    if nu < 0.0 && is_integer(nu) {
        return bessel_i(-nu, x);
    }
    if x <= BESSEL_SWITCH {
        Ok(i_series(nu, x))
    } else {
        Ok(i_asymptotic(nu, x))
    }
}

/// Series and asymptotic values side by side, for overlap validation.
pub fn bessel_j_both_routes(nu: f64, x: f64) -> (f64, f64) {
    (j_series(nu, x), j_asymptotic(nu, x))
}

pub fn bessel_i_both_routes(nu: f64, x: f64) -> (f64, f64) {
    (i_series(nu, x), i_asymptotic(nu, x))
}

//! The normalized Whittaker kernels `script M_{n,k}(y, s)` and
//! `script W_{n,k}(y, s)` of weak Maass-Poincare series, with closed forms at
//! the harmonic points `s = k/2` and `s = 1 - k/2`.

use super::gamma::rgamma;
use super::incgamma::{inc_gamma_upper, inc_gamma_upper_negative};
use super::whittaker::{whittaker_m, whittaker_w};
use crate::error::{MaassError, Result};
use num_complex::Complex64;
use std::f64::consts::PI;

fn is_point(s: f64, target: f64) -> bool {
    (s - target).abs() < 1e-15
}

/// Principal value of `(-1)^e = e^{i pi e}`.
pub fn minus_one_pow(e: f64) -> Complex64 {
    Complex64::from_polar(1.0, PI * e)
}

fn check_s(s: f64) -> Result<()> {
    if s <= 0.5 {
        return Err(MaassError::InvalidArgument(format!("s = {s} must exceed 1/2")));
    }
    Ok(())
}

/// `script M_{n,k}(y, s)`; for `n = 0` this is `y^{s - k/2}`.
pub fn script_m(n: i64, k: f64, y: f64, s: f64) -> Result<f64> {
    check_s(s)?;
    if n == 0 {
        return Ok(y.powf(s - k / 2.0));
    }
    let nf = n as f64;
    let x = 4.0 * PI * nf.abs() * y;
    if is_point(s, k / 2.0) {
        return Ok((-2.0 * PI * nf * y).exp() * rgamma(k));
    }
    if is_point(s, 1.0 - k / 2.0) && k <= 0.5 {
        let a = 1.0 - k;
        let e = (-2.0 * PI * nf * y).exp();
        if n > 0 {
            // (-1)^k [Gamma(1-k)^{-1} Gamma(1-k, -4 pi n y) - 1] e^{-2 pi n y}
            let g = inc_gamma_upper_negative(a, -x)?;
            return Ok((minus_one_pow(k) * (g * rgamma(a) - 1.0) * e).re);
        }
        return Ok((1.0 - inc_gamma_upper(a, x)? * rgamma(a)) * e);
    }
    let mu = k / 2.0 * nf.signum();
    Ok(rgamma(2.0 * s) * x.powf(-k / 2.0) * whittaker_m(mu, s - 0.5, x)?)
}

/// `script W_{n,k}(y, s)`; for `n = 0` the power
/// `(4 pi)^{1-k} y^{1-s-k/2} / ((2s-1) Gamma(s-k/2) Gamma(s+k/2))`.
pub fn script_w(n: i64, k: f64, y: f64, s: f64) -> Result<f64> {
    check_s(s)?;
    if n == 0 {
        return Ok((4.0 * PI).powf(1.0 - k) * y.powf(1.0 - s - k / 2.0) / (2.0 * s - 1.0)
            * rgamma(s - k / 2.0)
            * rgamma(s + k / 2.0));
    }
    let nf = n as f64;
    let an = nf.abs();
    let x = 4.0 * PI * an * y;
    if is_point(s, k / 2.0) {
        return Ok(if n > 0 {
            rgamma(k) * an.powf(k - 1.0) * (-2.0 * PI * nf * y).exp()
        } else {
            0.0
        });
    }
    if is_point(s, 1.0 - k / 2.0) {
        return Ok(if n > 0 {
            an.powf(k - 1.0) * (-2.0 * PI * nf * y).exp()
        } else {
            (-2.0 * PI * nf * y).exp()
                * an.powf(k - 1.0)
                * rgamma(1.0 - k)
                * inc_gamma_upper(1.0 - k, x)?
        });
    }
    script_w_generic(n, k, y, s)
}

/// The general Whittaker route for `script W`, bypassing the closed forms.
pub fn script_w_generic(n: i64, k: f64, y: f64, s: f64) -> Result<f64> {
    let an = (n as f64).abs();
    let x = 4.0 * PI * an * y;
    let mu = k / 2.0 * (n as f64).signum();
    Ok(rgamma(s + mu) * an.powf(k / 2.0 - 1.0) * (4.0 * PI * y).powf(-k / 2.0) * whittaker_w(mu, s - 0.5, x)?)
}

/// The general Whittaker route for `script M`, bypassing the closed forms.
pub fn script_m_generic(n: i64, k: f64, y: f64, s: f64) -> Result<f64> {
    let x = 4.0 * PI * (n as f64).abs() * y;
    let mu = k / 2.0 * (n as f64).signum();
    Ok(rgamma(2.0 * s) * x.powf(-k / 2.0) * whittaker_m(mu, s - 0.5, x)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weight_three_halves_closed_form() {
        let y = 0.37;
        let w = script_w(5, 1.5, y, 0.75).unwrap();
        let want = 2.0 / PI.sqrt() * 5f64.sqrt() * (-10.0 * PI * y).exp();
        assert!(((w - want) / want).abs() < 1e-13);
    }

    #[test]
    fn closed_forms_match_generic() {
        for (k, s) in [(-0.5, 1.25), (0.5, 0.75), (1.5, 0.75), (2.5, 1.25)] {
            for n in -10i64..=10 {
                if n == 0 {
                    continue;
                }
                for y in [0.05, 0.3, 2.0] {
                    let fast = script_w(n, k, y, s).unwrap();
                    let slow = script_w_generic(n, k, y, s).unwrap();
                    let scale = fast.abs().max(1e-300);
                    assert!((fast - slow).abs() <= 1e-10 * scale, "W k={k} n={n} y={y}: {fast} vs {slow}");
                    let fast = script_m(n, k, y, s).unwrap();
                    let slow = script_m_generic(n, k, y, s).unwrap();
                    let scale = fast.abs().max(1e-300);
                    assert!((fast - slow).abs() <= 1e-10 * scale, "M k={k} n={n} y={y}: {fast} vs {slow}");
                }
            }
        }
    }
}

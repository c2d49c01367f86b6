//! Whittaker functions `M_{mu,nu}` and `W_{mu,nu}` for real parameters and
//! positive argument.

use super::hyper::{kummer_m, kummer_u};
use super::incgamma::inc_gamma_upper;
use crate::error::{MaassError, Result};

fn is_integer(x: f64) -> bool {
    x == x.floor()
}

/// `M_{mu,nu}(y) = e^{-y/2} y^{nu+1/2} M(nu - mu + 1/2, 1 + 2 nu, y)`.
pub fn whittaker_m(mu: f64, nu: f64, y: f64) -> Result<f64> {
    if y <= 0.0 {
        return Err(MaassError::NonPositiveX(y));
    }
    let b = 1.0 + 2.0 * nu;
    if b <= 0.0 && is_integer(b) {
        return Err(MaassError::PoleAtB(b));
    }
    Ok((-y / 2.0).exp() * y.powf(nu + 0.5) * kummer_m(nu - mu + 0.5, b, y)?)
}

/// `W_{mu,nu}(y) = e^{-y/2} y^{nu+1/2} U(nu - mu + 1/2, 1 + 2 nu, y)`.
///
/// When `2 nu` is an integer the closed forms `W_{mu,nu} = y^mu e^{-y/2}`
/// (for `mu = 1/2 +- nu`) and `W_{nu-1/2,nu} = e^{y/2} y^{1/2-nu} Gamma(2nu, y)`
/// are used where they apply.
pub fn whittaker_w(mu: f64, nu: f64, y: f64) -> Result<f64> {
    if y <= 0.0 {
        return Err(MaassError::NonPositiveX(y));
    }
    if is_integer(2.0 * nu) {
        if mu + nu == 0.5 || mu - nu == 0.5 {
            return Ok(y.powf(mu) * (-y / 2.0).exp());
        }
        if mu == nu - 0.5 {
            return Ok((y / 2.0).exp() * y.powf(0.5 - nu) * inc_gamma_upper(2.0 * nu, y)?);
        }
        if mu == -nu - 0.5 {
            return Ok((y / 2.0).exp() * y.powf(0.5 + nu) * inc_gamma_upper(-2.0 * nu, y)?);
        }
    }
    let u = kummer_u(nu - mu + 0.5, 1.0 + 2.0 * nu, y).map_err(|e| match e {
        MaassError::IntegerB(_) => {
            MaassError::Unsupported(format!("W_{{{mu},{nu}}} with integral 2nu"))
        }
        other => other,
    })?;
    Ok((-y / 2.0).exp() * y.powf(nu + 0.5) * u)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * b.abs()
    }

    #[test]
    fn symmetry_in_nu() {
        for (mu, nu, y) in [(0.75, 0.25, 3.0), (0.3, 0.2, 1.1), (-0.75, 0.25, 7.0), (0.1, 0.4, 40.0)] {
            let a = whittaker_w(mu, nu, y).unwrap();
            let b = whittaker_w(mu, -nu, y).unwrap();
            assert!(close(a, b, 1e-11), "mu={mu} nu={nu} y={y}: {a} vs {b}");
        }
    }

    #[test]
    fn closed_form_vs_generic() {
        // 2nu = 1 hits the closed form; nudging nu must move continuously
        let y = 2.7;
        let exact = whittaker_w(-0.25, 0.5, y).unwrap();
        let near = whittaker_w(-0.25, 0.5 + 1e-9, y).unwrap();
        assert!(close(exact, near, 1e-7), "{exact} vs {near}");
    }

    #[test]
    fn large_argument_asymptotics() {
        let (mu, nu, y) = (0.5, 0.2, 40.0);
        let w = whittaker_w(mu, nu, y).unwrap();
        let leading = y.powf(mu) * (-y / 2.0).exp();
        assert!(((w - leading) / leading).abs() < 1e-2);
    }
}

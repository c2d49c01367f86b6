//! Double-exponential quadrature on `[0, inf)` for integrands with an
//! algebraic endpoint singularity at 0 and exponential decay at infinity.

/// Integrates `f` over `(0, inf)` using `u = exp(t - exp(-t))`, halving the
/// step until two successive trapezoid sums agree to `rel_tol`.
pub fn integrate_exp_decay<F: Fn(f64) -> f64>(f: F, t_min: f64, t_max: f64, rel_tol: f64) -> f64 {
    let g = |t: f64| {
        let u = (t - (-t).exp()).exp();
        let du = u * (1.0 + (-t).exp());
        if u == 0.0 || !du.is_finite() {
            0.0
        } else {
            let v = f(u) * du;
            if v.is_finite() {
                v
            } else {
                0.0
            }
        }
    };
    let mut h = 0.125;
    let mut n = ((t_max - t_min) / h).ceil() as usize;
    let mut sum: f64 = (0..=n).map(|i| g(t_min + i as f64 * h)).sum();
    let mut est = sum * h;
    for _ in 0..8 {
        let odd: f64 = (0..n).map(|i| g(t_min + (i as f64 + 0.5) * h)).sum();
        sum += odd;
        h *= 0.5;
        n *= 2;
        let next = sum * h;
        if (next - est).abs() <= rel_tol * next.abs() {
            return next;
        }
        est = next;
    }
    est
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gamma_integral() {
        // int u^{-1/2} e^{-u} du = sqrt(pi)
        let v = integrate_exp_decay(|u| u.powf(-0.5) * (-u).exp(), -6.0, 5.0, 1e-14);
        assert!((v - std::f64::consts::PI.sqrt()).abs() < 1e-13);
    }
}

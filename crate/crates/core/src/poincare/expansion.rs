use super::{CoefficientQuery, Engine, TruncationPolicy};
use crate::arith::{eps, kronecker};
use crate::error::{MaassError, Result};
use crate::poincare::residue::{is_pole_pair, residue_b_plus};
use crate::specfun::{
    inc_gamma_upper, inc_gamma_upper_negative, minus_one_pow, rgamma, script_m, script_w,
};
use crate::weight::Weight;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::f64::consts::PI;

pub const DEFAULT_Y_MIN: f64 = 0.1;

/// Fourier expansion of a harmonic weak Maass form
///
/// ```text
/// h(z) = sum c+(n) q^n + c-(0) y^{1-k} + sum_{n != 0} c-(n) Gamma(1-k, -4 pi n y) q^n
/// ```
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HarmonicExpansion {
    pub weight: Weight,
    pub level: u64,
    pub hol: BTreeMap<i64, Complex64>,
    pub nonhol: BTreeMap<i64, Complex64>,
    pub ypow: Complex64,
    pub n_max: i64,
    /// Truncation error estimates of the coefficients, keyed like `hol` or,
    /// for non-holomorphic terms, by `n` in `nonhol_errors`.
    pub hol_errors: BTreeMap<i64, f64>,
    pub nonhol_errors: BTreeMap<i64, f64>,
    pub ypow_error: f64,
}

impl HarmonicExpansion {
    pub fn new(weight: Weight, level: u64, n_max: i64) -> Self {
        HarmonicExpansion {
            weight,
            level,
            hol: BTreeMap::new(),
            nonhol: BTreeMap::new(),
            ypow: Complex64::new(0.0, 0.0),
            n_max,
            hol_errors: BTreeMap::new(),
            nonhol_errors: BTreeMap::new(),
            ypow_error: 0.0,
        }
    }

    pub fn add_hol(&mut self, n: i64, v: Complex64, err: f64) {
        *self.hol.entry(n).or_default() += v;
        *self.hol_errors.entry(n).or_default() += err;
    }

    pub fn add_nonhol(&mut self, n: i64, v: Complex64, err: f64) {
        *self.nonhol.entry(n).or_default() += v;
        *self.nonhol_errors.entry(n).or_default() += err;
    }

    pub fn add_ypow(&mut self, v: Complex64, err: f64) {
        self.ypow += v;
        self.ypow_error += err;
    }

    /// `self += factor * other`.
    pub fn add_scaled(&mut self, other: &HarmonicExpansion, factor: Complex64) {
        for (n, v) in &other.hol {
            let e = other.hol_errors.get(n).copied().unwrap_or(0.0);
            self.add_hol(*n, v * factor, e * factor.norm());
        }
        for (n, v) in &other.nonhol {
            let e = other.nonhol_errors.get(n).copied().unwrap_or(0.0);
            self.add_nonhol(*n, v * factor, e * factor.norm());
        }
        self.add_ypow(other.ypow * factor, other.ypow_error * factor.norm());
        self.n_max = self.n_max.min(other.n_max);
    }

    pub fn scaled(&self, factor: Complex64) -> HarmonicExpansion {
        let mut out = HarmonicExpansion::new(self.weight, self.level, self.n_max);
        out.add_scaled(self, factor);
        out
    }

    pub fn is_holomorphic(&self) -> bool {
        self.nonhol.values().all(|v| *v == Complex64::new(0.0, 0.0))
            && self.ypow == Complex64::new(0.0, 0.0)
    }

    /// The image under `xi_k`, as coefficients of `q^n` of a form of weight
    /// `2 - k`: `(1-k) conj(c-(0)) - sum conj(c-(n) (-4 pi n)^{1-k}) q^{-n}`.
    pub fn shadow(&self) -> BTreeMap<i64, Complex64> {
        let k = self.weight.k();
        let mut out = BTreeMap::new();
        if self.ypow != Complex64::new(0.0, 0.0) {
            out.insert(0, (self.ypow * (1.0 - k)).conj());
        }
        for (n, c) in &self.nonhol {
            let base = Complex64::new(-4.0 * PI * *n as f64, 0.0);
            let p = if *n < 0 {
                Complex64::new(base.re.powf(1.0 - k), 0.0)
            } else {
                // principal branch of a power of a negative real
                Complex64::from_polar((4.0 * PI * *n as f64).powf(1.0 - k), PI * (1.0 - k))
            };
            *out.entry(-n).or_default() -= (c * p).conj();
        }
        out
    }
}

/// The expansion of `theta(z) = sum q^{n^2}` up to `q^{n_max}`.
pub fn theta_expansion(n_max: i64) -> HarmonicExpansion {
    let mut e = HarmonicExpansion::new(Weight::new(1), 4, n_max);
    let mut r = 0i64;
    while r * r <= n_max {
        let v = if r == 0 { 1.0 } else { 2.0 };
        e.add_hol(r * r, Complex64::new(v, 0.0), 0.0);
        r += 1;
    }
    e
}

/// A pointwise value with an estimate of the omitted Fourier tail.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Evaluation {
    pub value: Complex64,
    pub tail_bound: f64,
}

fn q_power(z: Complex64, n: i64) -> Complex64 {
    (Complex64::new(0.0, 2.0 * PI * n as f64) * z).exp()
}

/// Incomplete gamma factor `Gamma(1-k, -4 pi n y)` for `n != 0`.
fn nonhol_factor(k: f64, n: i64, y: f64) -> Result<Complex64> {
    let x = -4.0 * PI * n as f64 * y;
    if x > 0.0 {
        Ok(Complex64::new(inc_gamma_upper(1.0 - k, x)?, 0.0))
    } else {
        inc_gamma_upper_negative(1.0 - k, x)
    }
}

/// Sums the expansion at `z`; `y_min` guards against a slowly decaying tail.
pub fn evaluate(exp: &HarmonicExpansion, z: Complex64, y_min: f64) -> Result<Evaluation> {
    let y = z.im;
    if y < y_min {
        return Err(MaassError::TailTooLarge {
            y,
            bound: f64::INFINITY,
        });
    }
    let k = exp.weight.k();
    let mut value = Complex64::new(0.0, 0.0);
    let mut last_hol = 0.0f64;
    for (n, c) in &exp.hol {
        let t = c * q_power(z, *n);
        if *n > 0 {
            last_hol = t.norm();
        }
        value += t;
    }
    let mut last_nonhol = 0.0f64;
    for (n, c) in &exp.nonhol {
        // e^{-4 pi |n| y} times q^n underflows before it overflows
        if *c == Complex64::new(0.0, 0.0) || (*n < 0 && 2.0 * PI * (-*n) as f64 * y > 700.0) {
            continue;
        }
        let t = c * nonhol_factor(k, *n, y)? * q_power(z, *n);
        if *n < 0 && last_nonhol == 0.0 {
            last_nonhol = t.norm();
        }
        value += t;
    }
    value += exp.ypow * y.powf(1.0 - k);
    let r = (-2.0 * PI * y).exp();
    let tail_bound = (last_hol + last_nonhol) * r / (1.0 - r);
    Ok(Evaluation { value, tail_bound })
}

/// Evaluates `F_{m,k,N}(z, s)` (or its plus-space projection) from the
/// generic kernels: `script M_m(y,s) e(mx) + sum_{0 < |n| <= n_max} c(n) script W_n(y,s) e(nx)`
/// plus the `n = 0` term.
#[allow(clippy::too_many_arguments)]
pub fn evaluate_raw(
    engine: &Engine,
    m: i64,
    weight: Weight,
    level: u64,
    s: f64,
    plus: bool,
    z: Complex64,
    n_max: i64,
    policy: &TruncationPolicy,
    y_min: f64,
) -> Result<Evaluation> {
    let (x, y) = (z.re, z.im);
    if y < y_min {
        return Err(MaassError::TailTooLarge {
            y,
            bound: f64::INFINITY,
        });
    }
    let k = weight.k();
    let e = |n: i64| Complex64::from_polar(1.0, 2.0 * PI * n as f64 * x);
    let mut value = e(m) * script_m(m, k, y, s)?;
    let mut last = 0.0f64;
    for n in -n_max..=n_max {
        if plus && !weight.in_plus_class(n) {
            continue;
        }
        let w = script_w(n, k, y, s)?;
        if w == 0.0 {
            continue;
        }
        let q = CoefficientQuery::new(m, weight, level, n, s);
        let c = if plus {
            engine.coeff_b_plus(&q, policy)?.value
        } else {
            engine.coeff_c(&q, policy)?.value
        };
        let t = c * w * e(n);
        if n.abs() >= n_max - 1 {
            last = last.max(t.norm());
        }
        value += t;
    }
    Ok(Evaluation {
        value,
        tail_bound: last * 2.0,
    })
}

/// `j(gamma, z)^{2k}`: for half-integral `k`,
/// `j(gamma, z) = (c/d) eps_d^{-1} sqrt(cz + d)`; for integral `k`,
/// `j(gamma, z)^2 = cz + d`. Powers of `cz + d` use the principal branch.
pub fn automorphy_factor(weight: Weight, gamma: [[i64; 2]; 2], z: Complex64) -> Result<Complex64> {
    let [[_, _], [c, d]] = gamma;
    let w = Complex64::new(c as f64, 0.0) * z + d as f64;
    let k = weight.k();
    let base = w.powf(k);
    if weight.is_integral() {
        return Ok(base);
    }
    let unit = crate::arith::Unit4::from_sign(kronecker(c, d)).mul(eps(d)?.pow(-1));
    Ok(unit.pow(weight.twice_k as i64).to_complex() * base)
}

fn mobius(gamma: [[i64; 2]; 2], z: Complex64) -> Complex64 {
    let [[a, b], [c, d]] = gamma;
    (z * a as f64 + b as f64) / (z * c as f64 + d as f64)
}

/// `|j(gamma, z)^{-2k} f(gamma z) - f(z)|`.
pub fn modularity_residual(
    f: impl Fn(Complex64) -> Result<Complex64>,
    weight: Weight,
    gamma: [[i64; 2]; 2],
    z: Complex64,
) -> Result<f64> {
    let [[a, b], [c, d]] = gamma;
    if a * d - b * c != 1 {
        return Err(MaassError::InvalidArgument("det gamma != 1".into()));
    }
    let lhs = f(mobius(gamma, z))? / automorphy_factor(weight, gamma, z)?;
    Ok((lhs - f(z)?).norm())
}

impl Engine {
    /// Expansion of the Poincare series at a harmonic point:
    ///
    /// - `k > 2`, `s = k/2`: weakly holomorphic;
    /// - `k < 0`, `s = 1 - k/2`: harmonic;
    /// - `k = 3/2`, plus space, level 4, `s = 3/4`: the limit of `F^+_m`,
    ///   with pole-bearing coefficients replaced by their residue limits.
    pub fn expansion_special(
        &self,
        m: i64,
        weight: Weight,
        level: u64,
        n_max: i64,
        policy: &TruncationPolicy,
    ) -> Result<HarmonicExpansion> {
        let k = weight.k();
        if weight.twice_k == 3 {
            return self.expansion_three_halves(m, level, n_max, policy);
        }
        let mut exp = HarmonicExpansion::new(weight, level, n_max);
        if k > 2.0 {
            let s = k / 2.0;
            let g = rgamma(k);
            exp.add_hol(m, Complex64::new(if m == 0 { 1.0 } else { g }, 0.0), 0.0);
            for n in 1..=n_max {
                let v = self.coeff_c(&CoefficientQuery::new(m, weight, level, n, s), policy)?;
                let f = g * (n as f64).powf(k - 1.0);
                exp.add_hol(n, v.value * f, v.error_estimate * f);
            }
            return Ok(exp);
        }
        if k < 0.0 {
            let s = 1.0 - k / 2.0;
            let rg = rgamma(1.0 - k);
            let one = Complex64::new(1.0, 0.0);
            match m.signum() {
                0 => exp.add_ypow(one, 0.0),
                -1 => {
                    exp.add_hol(m, one, 0.0);
                    exp.add_nonhol(m, -one * rg, 0.0);
                }
                _ => {
                    let sign = minus_one_pow(k - 1.0);
                    exp.add_hol(m, sign, 0.0);
                    exp.add_nonhol(m, -sign * rg, 0.0);
                }
            }
            for n in -n_max..=n_max {
                let v = self.coeff_c(&CoefficientQuery::new(m, weight, level, n, s), policy)?;
                let an = (n as f64).abs();
                match n.signum() {
                    1 => {
                        let f = an.powf(k - 1.0);
                        exp.add_hol(n, v.value * f, v.error_estimate * f);
                    }
                    0 => {
                        let f = (4.0 * PI).powf(1.0 - k) / (1.0 - k) * rg;
                        exp.add_hol(0, v.value * f, v.error_estimate * f);
                    }
                    _ => {
                        let f = an.powf(k - 1.0) * rg;
                        exp.add_nonhol(n, v.value * f, v.error_estimate * f);
                    }
                }
            }
            return Ok(exp);
        }
        Err(MaassError::UnsupportedWeightRange(weight.twice_k))
    }

    fn expansion_three_halves(
        &self,
        big_d: i64,
        level: u64,
        n_max: i64,
        policy: &TruncationPolicy,
    ) -> Result<HarmonicExpansion> {
        if level != 4 {
            return Err(MaassError::Unsupported(
                "weight 3/2 harmonic expansions are implemented for level 4".into(),
            ));
        }
        let w = Weight::new(3);
        if !w.in_plus_class(big_d) {
            return Err(MaassError::PlusSpaceViolation { m: big_d, twice_k: 3 });
        }
        let mut exp = HarmonicExpansion::new(w, level, n_max);
        let two_over_sqrt_pi = 2.0 / PI.sqrt();
        let head = if big_d == 0 { 1.0 } else { two_over_sqrt_pi };
        exp.add_hol(big_d, Complex64::new(head, 0.0), 0.0);
        for n in -n_max..=n_max {
            if !w.in_plus_class(n) {
                continue;
            }
            if is_pole_pair(-big_d, -n) {
                let r = residue_b_plus(big_d, w, n)?;
                if n == 0 {
                    exp.add_ypow(Complex64::new(r * 2.0 / PI, 0.0), 0.0);
                } else {
                    exp.add_nonhol(n, Complex64::new(r * (n.abs() as f64).sqrt(), 0.0), 0.0);
                }
                continue;
            }
            if n <= 0 {
                // script W_{n,3/2}(y, 3/4) = 0 away from the poles
                continue;
            }
            let v = self.coeff_b_plus(&CoefficientQuery::new(big_d, w, 4, n, 0.75), policy)?;
            let f = two_over_sqrt_pi * (n as f64).sqrt();
            exp.add_hol(n, v.value * f, v.error_estimate * f);
        }
        Ok(exp)
    }

    /// Expansion of `d/ds F^+_{D,3/2,4}(z, s)` at `s = 3/4` for `D > 0`.
    ///
    /// Holomorphic coefficients `(2 sqrt(n)/sqrt(pi)) d/ds b_D(n)` for
    /// `n > 0`, the head `-2 sqrt(pi) i q^D - i Gamma(-1/2, -4 pi D y) q^D`
    /// (the product rule term at `n = D` is kept on top of the head),
    /// constant `(2/pi) b_D(0) y^{-1/2}` and non-holomorphic coefficients
    /// `sqrt|n| b_D(n)` for `n < 0`.
    pub fn expansion_derivative_three_halves(
        &self,
        big_d: i64,
        n_max: i64,
        policy: &TruncationPolicy,
        step: f64,
    ) -> Result<HarmonicExpansion> {
        let w = Weight::new(3);
        if big_d <= 0 || !w.in_plus_class(big_d) {
            return Err(MaassError::IndexClass { index: big_d });
        }
        let mut exp = HarmonicExpansion::new(w, 4, n_max);
        exp.add_hol(big_d, Complex64::new(0.0, -2.0 * PI.sqrt()), 0.0);
        exp.add_nonhol(big_d, Complex64::new(0.0, -1.0), 0.0);
        for n in -n_max..=n_max {
            if !w.in_plus_class(n) {
                continue;
            }
            let q = CoefficientQuery::new(big_d, w, 4, n, 0.75);
            if n > 0 {
                let d = self.coeff_b_plus_ds(&q, policy, step)?;
                let f = 2.0 * (n as f64).sqrt() / PI.sqrt();
                exp.add_hol(n, d.value.value * f, d.value.error_estimate * f);
            } else {
                let v = self.coeff_b_plus(&q, policy)?;
                if n == 0 {
                    exp.add_ypow(v.value * (2.0 / PI), v.error_estimate * 2.0 / PI);
                } else {
                    let f = (n.abs() as f64).sqrt();
                    exp.add_nonhol(n, v.value * f, v.error_estimate * f);
                }
            }
        }
        Ok(exp)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn theta_matches_direct_sum() {
        let z = Complex64::new(0.1, 0.8);
        let exp = theta_expansion(400);
        let v = evaluate(&exp, z, DEFAULT_Y_MIN).unwrap();
        let direct: Complex64 = (-30i64..=30).map(|n| q_power(z, n * n)).sum();
        assert!((v.value - direct).norm() < 1e-10);
    }

    #[test]
    fn theta_automorphy() {
        let exp = theta_expansion(3000);
        let f = |z: Complex64| Ok(evaluate(&exp, z, 0.01)?.value);
        let z = Complex64::new(0.13, 0.9);
        let r = modularity_residual(f, Weight::new(1), [[1, 0], [4, 1]], z).unwrap();
        assert!(r < 1e-9, "residual {r}");
        let r = modularity_residual(f, Weight::new(1), [[1, 0], [0, 1]], z).unwrap();
        assert_eq!(r, 0.0);
        let r = modularity_residual(f, Weight::new(1), [[3, -1], [4, -1]], z).unwrap();
        assert!(r < 1e-9, "residual {r}");
    }

    #[test]
    fn tail_guard() {
        let exp = theta_expansion(10);
        assert!(matches!(
            evaluate(&exp, Complex64::new(0.0, 0.05), DEFAULT_Y_MIN),
            Err(MaassError::TailTooLarge { .. })
        ));
    }
}

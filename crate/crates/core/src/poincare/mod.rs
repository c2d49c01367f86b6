//! Fourier coefficients of the weak Maass-Poincare series `F_{m,k,N}(z, s)`
//! and of their plus-space projections, with truncated c-sums.
//!
//! A coefficient is `2 pi i^{-k} sum_{c >= 1} w(c) K_k(m, n, Nc)/(Nc) B(c, s)`
//! where `B` is one of four branches selected by the signs of `m` and `n`
//! (Bessel `J`, Bessel `I`, or a power of `Nc`) and `w(c)` is 1 or the
//! plus-space weight `1 + (4/N'c)`. The sum is accumulated in ascending `c`
//! and stopped by stability doubling.

mod expansion;
mod residue;

pub use expansion::{
    automorphy_factor, evaluate, evaluate_raw, modularity_residual, theta_expansion, Evaluation,
    HarmonicExpansion, DEFAULT_Y_MIN,
};
pub use residue::{is_pole_pair, residue_b_half, residue_b_plus};

use crate::arith::kronecker;
use crate::error::{MaassError, Result};
use crate::kloosterman::{KloostermanEvaluator, KloostermanKey};
use crate::specfun::{bessel_i, bessel_j, gamma};
use crate::sum::ComplexNeumaier;
use crate::weight::Weight;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Stopping rule for a c-sum.
///
/// Partial sums are compared at checkpoints `c_start, f c_start, f^2 c_start,
/// ..., c_max` (`f = stability_factor`). The error estimate is the change
/// between the last two checkpoints; the sum counts as converged once two
/// consecutive changes are at most `tol` (absolute).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TruncationPolicy {
    pub c_max: u64,
    pub tol: f64,
    pub stability_factor: u64,
    pub c_start: u64,
}

impl Default for TruncationPolicy {
    fn default() -> Self {
        TruncationPolicy {
            c_max: 100_000,
            tol: 1e-6,
            stability_factor: 2,
            c_start: 16,
        }
    }
}

impl TruncationPolicy {
    pub fn new(c_max: u64, tol: f64) -> Self {
        TruncationPolicy {
            c_max,
            tol,
            ..Default::default()
        }
    }

    /// A policy that always sums exactly `c_max` terms.
    pub fn fixed(c_max: u64) -> Self {
        TruncationPolicy {
            c_max,
            tol: 0.0,
            stability_factor: 2,
            c_start: c_max,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.c_max == 0 || self.stability_factor < 2 || self.tol < 0.0 || self.c_start == 0 {
            return Err(MaassError::InvalidArgument(format!("bad truncation policy {self:?}")));
        }
        Ok(())
    }

    pub fn checkpoints(&self) -> Vec<u64> {
        let mut out = Vec::new();
        let mut c = self.c_start.min(self.c_max);
        loop {
            out.push(c);
            if c >= self.c_max {
                break;
            }
            c = (c * self.stability_factor).min(self.c_max);
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TruncatedValue<T> {
    pub value: T,
    pub error_estimate: f64,
    pub c_used: u64,
    pub converged: bool,
}

impl<T> TruncatedValue<T> {
    /// Turns an unconverged value into an error.
    pub fn strict(self, n: i64) -> Result<Self> {
        if self.converged {
            Ok(self)
        } else {
            Err(MaassError::NotConverged {
                n,
                c_used: self.c_used,
                error_estimate: self.error_estimate,
            })
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoefficientQuery {
    pub m: i64,
    pub weight: Weight,
    pub level: u64,
    pub n: i64,
    pub s: f64,
}

impl CoefficientQuery {
    pub fn new(m: i64, weight: Weight, level: u64, n: i64, s: f64) -> Self {
        CoefficientQuery {
            m,
            weight,
            level,
            n,
            s,
        }
    }

    fn validate(&self) -> Result<()> {
        if !(self.s > 0.5) {
            return Err(MaassError::InvalidArgument(format!("s = {} must exceed 1/2", self.s)));
        }
        if self.level == 0 {
            return Err(MaassError::InvalidArgument("level must be positive".into()));
        }
        if !self.weight.is_integral() && self.level % 4 != 0 {
            return Err(MaassError::InvalidArgument(format!(
                "half-integral weight needs 4 | N, got N = {}",
                self.level
            )));
        }
        Ok(())
    }
}

/// The s-dependent factor of a c-term, with everything independent of `c`
/// hoisted out.
#[derive(Debug, Clone, Copy)]
enum Branch {
    /// `A J_{2s-1}(x0 / Q)`
    J { a: f64, x0: f64 },
    /// `A I_{2s-1}(x0 / Q)`
    I { a: f64, x0: f64 },
    /// `A Q^{1-2s}`
    Power { a: f64 },
    /// `A (2Q)^{1-2s}`
    Zero { a: f64 },
}

impl Branch {
    fn new(m: i64, n: i64, k: f64, s: f64) -> Result<Branch> {
        let mn = m as f64 * n as f64;
        Ok(if mn > 0.0 {
            Branch::J {
                a: mn.abs().powf((1.0 - k) / 2.0),
                x0: 4.0 * PI * mn.abs().sqrt(),
            }
        } else if mn < 0.0 {
            Branch::I {
                a: mn.abs().powf((1.0 - k) / 2.0),
                x0: 4.0 * PI * mn.abs().sqrt(),
            }
        } else if m + n != 0 {
            Branch::Power {
                a: 2f64.powf(k - 1.0)
                    * PI.powf(s + k / 2.0 - 1.0)
                    * ((m + n).abs() as f64).powf(s - k / 2.0),
            }
        } else {
            Branch::Zero {
                a: 2f64.powf(2.0 * k - 2.0) * PI.powf(k - 1.0) * gamma(2.0 * s)?,
            }
        })
    }

    #[inline]
    fn eval(&self, q: f64, s: f64) -> Result<f64> {
        let order = 2.0 * s - 1.0;
        Ok(match *self {
            Branch::J { a, x0 } => a * bessel_j(order, x0 / q)?,
            Branch::I { a, x0 } => a * bessel_i(order, x0 / q)?,
            Branch::Power { a } => a * q.powf(1.0 - 2.0 * s),
            Branch::Zero { a } => a * (2.0 * q).powf(1.0 - 2.0 * s),
        })
    }
}

/// Outcome of a (possibly multi-point) c-sum.
#[derive(Debug, Clone)]
struct SeriesOutcome<const L: usize> {
    sums: [Complex64; L],
    error_estimate: f64,
    c_used: u64,
    converged: bool,
}

fn run_series<const L: usize>(
    policy: &TruncationPolicy,
    combine: impl Fn(&[Complex64; L]) -> Complex64,
    mut term: impl FnMut(u64) -> Result<Option<[Complex64; L]>>,
) -> Result<SeriesOutcome<L>> {
    policy.validate()?;
    let mut acc = [ComplexNeumaier::new(); L];
    let mut c = 1u64;
    let mut prev: Option<Complex64> = None;
    let mut prev_delta = f64::INFINITY;
    let mut error_estimate = f64::INFINITY;
    let mut converged = false;
    let mut c_used = 0;
    for cp in policy.checkpoints() {
        while c <= cp {
            if let Some(t) = term(c)? {
                for (a, v) in acc.iter_mut().zip(t.iter()) {
                    a.add(*v);
                }
            }
            c += 1;
        }
        c_used = cp;
        let sums: [Complex64; L] = std::array::from_fn(|i| acc[i].value());
        let current = combine(&sums);
        if let Some(p) = prev {
            let delta = (current - p).norm();
            error_estimate = delta;
            if delta <= policy.tol && prev_delta <= policy.tol {
                converged = true;
                break;
            }
            prev_delta = delta;
        }
        prev = Some(current);
    }
    let sums: [Complex64; L] = std::array::from_fn(|i| acc[i].value());
    Ok(SeriesOutcome {
        sums,
        error_estimate,
        c_used,
        converged,
    })
}

/// Central difference with one Richardson step, as returned by
/// [`Engine::coeff_b_plus_ds`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DerivativeValue {
    pub value: TruncatedValue<Complex64>,
    /// `(b(s+h) - b(s-h)) / 2h`
    pub d_h: Complex64,
    /// `(b(s+h/2) - b(s-h/2)) / h`
    pub d_h2: Complex64,
    /// The plain value `b(s)` from the same truncation.
    pub center: Complex64,
}

impl DerivativeValue {
    /// Relative disagreement of the two central differences.
    pub fn richardson_spread(&self) -> f64 {
        (self.d_h - self.d_h2).norm() / self.d_h2.norm().max(1e-300)
    }
}

pub const DEFAULT_STEP: f64 = 1e-3;

/// Coefficient engine with a shared Kloosterman cache.
#[derive(Debug)]
pub struct Engine {
    kloosterman: KloostermanEvaluator,
}

impl Default for Engine {
    fn default() -> Self {
        Engine::new(1 << 20)
    }
}

impl Engine {
    /// `max_modulus` sizes the factorization sieve; larger moduli still work
    /// but factor by trial division.
    pub fn new(max_modulus: u64) -> Engine {
        Engine {
            kloosterman: KloostermanEvaluator::new(max_modulus),
        }
    }

    pub fn kloosterman(&self) -> &KloostermanEvaluator {
        &self.kloosterman
    }

    fn prefactor(weight: Weight) -> Complex64 {
        Complex64::from_polar(2.0 * PI, -PI * weight.k() / 2.0)
    }

    /// Generic c-sum at several `s` values sharing one Kloosterman evaluation
    /// per `c`. `plus_odd` is `Some(N')` for the plus-space weight.
    fn series<const L: usize>(
        &self,
        q: &CoefficientQuery,
        s_values: [f64; L],
        plus: Option<u64>,
        policy: &TruncationPolicy,
        combine: impl Fn(&[Complex64; L]) -> Complex64,
    ) -> Result<SeriesOutcome<L>> {
        q.validate()?;
        let k = q.weight.k();
        let branches: Vec<Branch> = s_values
            .iter()
            .map(|&s| Branch::new(q.m, q.n, k, s))
            .collect::<Result<_>>()?;
        let pre = Self::prefactor(q.weight);
        let term = |c: u64| -> Result<Option<[Complex64; L]>> {
            let w = match plus {
                Some(np) => 1.0 + kronecker(4, (np * c) as i64) as f64,
                None => 1.0,
            };
            if w == 0.0 {
                return Ok(None);
            }
            let modulus = q.level * c;
            let kl = self
                .kloosterman
                .eval(&KloostermanKey::new(q.weight, q.m, q.n, modulus))?;
            if kl.norm() < 1e-9 {
                return Ok(None);
            }
            let qf = modulus as f64;
            let base = pre * kl * (w / qf);
            let mut out = [Complex64::new(0.0, 0.0); L];
            for i in 0..L {
                out[i] = base * branches[i].eval(qf, s_values[i])?;
            }
            Ok(Some(out))
        };
        run_series(policy, combine, term)
    }

    /// `c_{m,k}(n, s)` for `F_{m,k,N}`.
    pub fn coeff_c(
        &self,
        q: &CoefficientQuery,
        policy: &TruncationPolicy,
    ) -> Result<TruncatedValue<Complex64>> {
        let out = self.series(q, [q.s], None, policy, |v| v[0])?;
        Ok(TruncatedValue {
            value: out.sums[0],
            error_estimate: out.error_estimate,
            c_used: out.c_used,
            converged: out.converged,
        })
    }

    fn plus_level(q: &CoefficientQuery) -> Result<u64> {
        if q.weight.is_integral() || q.level % 4 != 0 {
            return Err(MaassError::InvalidArgument(
                "plus space needs half-integral weight and 4 | N".into(),
            ));
        }
        let np = q.level / 4;
        if np % 2 == 0 {
            return Err(MaassError::FourNotInvertible(np));
        }
        if !q.weight.in_plus_class(q.m) {
            return Err(MaassError::PlusSpaceViolation {
                m: q.m,
                twice_k: q.weight.twice_k,
            });
        }
        Ok(np)
    }

    fn pole_guard(q: &CoefficientQuery, s: f64) -> Result<()> {
        if q.level == 4 && (q.weight.twice_k == 1 || q.weight.twice_k == 3) && (s - 0.75).abs() < 1e-6 {
            let (a, b) = if q.weight.twice_k == 1 {
                (q.m, q.n)
            } else {
                (-q.m, -q.n)
            };
            if is_pole_pair(a, b) {
                return Err(MaassError::PoleAtS { m: q.m, n: q.n, s });
            }
        }
        Ok(())
    }

    /// `b_{m,k}(n, s)` for the plus-space projection `F^+_{m,k,N}`, `N = 4N'`.
    ///
    /// For `n` outside the plus-space class the coefficient vanishes; it is
    /// still computed, from the complementary weight `1 - (4/N'c)`, so that the
    /// vanishing is observed rather than assumed.
    pub fn coeff_b_plus(
        &self,
        q: &CoefficientQuery,
        policy: &TruncationPolicy,
    ) -> Result<TruncatedValue<Complex64>> {
        let np = Self::plus_level(q)?;
        Self::pole_guard(q, q.s)?;
        let out = if q.weight.in_plus_class(q.n) {
            self.series(q, [q.s], Some(np), policy, |v| v[0])?
        } else {
            self.off_class_series(q, np, policy)?
        };
        Ok(TruncatedValue {
            value: out.sums[0],
            error_estimate: out.error_estimate,
            c_used: out.c_used,
            converged: out.converged,
        })
    }

    fn off_class_series(
        &self,
        q: &CoefficientQuery,
        np: u64,
        policy: &TruncationPolicy,
    ) -> Result<SeriesOutcome<1>> {
        q.validate()?;
        let branch = Branch::new(q.m, q.n, q.weight.k(), q.s)?;
        let pre = Self::prefactor(q.weight);
        run_series(policy, |v| v[0], |c| {
            let w = 1.0 - kronecker(4, (np * c) as i64) as f64;
            if w == 0.0 {
                return Ok(None);
            }
            let modulus = q.level * c;
            let kl = self
                .kloosterman
                .eval(&KloostermanKey::new(q.weight, q.m, q.n, modulus))?;
            let qf = modulus as f64;
            Ok(Some([pre * kl * (w / qf) * branch.eval(qf, q.s)?]))
        })
    }

    /// `d/ds b_{m,k}(n, s)` by central differences at `s +- h` and
    /// `s +- h/2`, combined by one Richardson step. All four stencil points
    /// share the Kloosterman sums and the truncation point.
    pub fn coeff_b_plus_ds(
        &self,
        q: &CoefficientQuery,
        policy: &TruncationPolicy,
        step: f64,
    ) -> Result<DerivativeValue> {
        let np = Self::plus_level(q)?;
        let h = step;
        for s in [q.s - h, q.s + h, q.s - h / 2.0, q.s + h / 2.0] {
            Self::pole_guard(q, s)?;
        }
        Self::pole_guard(q, q.s)?;
        if !q.weight.in_plus_class(q.n) {
            return Err(MaassError::InvalidArgument(format!(
                "n = {} outside the plus-space class",
                q.n
            )));
        }
        let richardson = move |v: &[Complex64; 5]| {
            let d1 = (v[1] - v[0]) / (2.0 * h);
            let d2 = (v[3] - v[2]) / h;
            (d2 * 4.0 - d1) / 3.0
        };
        let out = self.series(
            q,
            [q.s - h, q.s + h, q.s - h / 2.0, q.s + h / 2.0, q.s],
            Some(np),
            policy,
            richardson,
        )?;
        let v = out.sums;
        let diff = (v[1] - v[0]).norm();
        let mag = v[1].norm().max(v[0].norm());
        if mag > 0.0 && diff < 1e-6 * mag {
            return Err(MaassError::StepTooSmall(h));
        }
        Ok(DerivativeValue {
            value: TruncatedValue {
                value: richardson(&v),
                error_estimate: out.error_estimate,
                c_used: out.c_used,
                converged: out.converged,
            },
            d_h: (v[1] - v[0]) / (2.0 * h),
            d_h2: (v[3] - v[2]) / h,
            center: v[4],
        })
    }
}

/// Central difference plus one Richardson step applied to a scalar function,
/// using the same stencil as [`Engine::coeff_b_plus_ds`].
pub fn richardson_derivative(f: impl Fn(f64) -> f64, s: f64, h: f64) -> f64 {
    let d1 = (f(s + h) - f(s - h)) / (2.0 * h);
    let d2 = (f(s + h / 2.0) - f(s - h / 2.0)) / h;
    (4.0 * d2 - d1) / 3.0
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::divisor_sigma;

    #[test]
    fn checkpoints_double() {
        let p = TruncationPolicy {
            c_max: 100,
            tol: 1e-3,
            stability_factor: 2,
            c_start: 16,
        };
        assert_eq!(p.checkpoints(), vec![16, 32, 64, 100]);
        assert_eq!(TruncationPolicy::fixed(50).checkpoints(), vec![50]);
    }

    #[test]
    fn eisenstein_weight_four() {
        let engine = Engine::new(10_000);
        let policy = TruncationPolicy::new(4000, 1e-9);
        let w = Weight::new(8);
        let c1 = engine
            .coeff_c(&CoefficientQuery::new(0, w, 1, 1, 2.0), &policy)
            .unwrap();
        assert!(c1.converged);
        for n in [2i64, 3, 6, 10] {
            let cn = engine
                .coeff_c(&CoefficientQuery::new(0, w, 1, n, 2.0), &policy)
                .unwrap();
            let ratio = (cn.value * (n as f64).powi(3) / c1.value).re;
            let want = divisor_sigma(3, n as u64) as f64;
            assert!(((ratio - want) / want).abs() < 1e-6, "n={n}: {ratio} vs {want}");
        }
    }

    #[test]
    fn plus_space_guards() {
        let engine = Engine::new(1000);
        let p = TruncationPolicy::new(50, 1e-3);
        let w = Weight::new(3);
        let bad_m = engine.coeff_b_plus(&CoefficientQuery::new(1, w, 4, 3, 0.9), &p);
        assert!(matches!(bad_m, Err(MaassError::PlusSpaceViolation { .. })));
        let pole = engine.coeff_b_plus(&CoefficientQuery::new(0, w, 4, -4, 0.75), &p);
        assert!(matches!(pole, Err(MaassError::PoleAtS { .. })));
        let even = engine.coeff_b_plus(&CoefficientQuery::new(0, w, 8, 3, 0.9), &p);
        assert!(matches!(even, Err(MaassError::FourNotInvertible(2))));
    }

    #[test]
    fn stencil_on_closed_form() {
        // d/ds Gamma(2s)(2N)^{1-2s} at s = 3/4, N = 4
        let f = |s: f64| gamma(2.0 * s).unwrap() * 8f64.powf(1.0 - 2.0 * s);
        let s = 0.75;
        // Gamma'(x) = Gamma(x) psi(x), psi(3/2) = 2 - gamma - 2 ln 2
        let psi = 2.0 - 0.577_215_664_901_532_9 - 2.0 * 2f64.ln();
        let want = f(s) * (2.0 * psi - 2.0 * 8f64.ln());
        let got = richardson_derivative(f, s, DEFAULT_STEP);
        assert!((got - want).abs() < 1e-8, "{got} vs {want}");
    }
}

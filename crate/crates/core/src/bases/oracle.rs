//! Exact integer q-expansions built without the Kloosterman engine.
//!
//! Every series is a truncated Laurent series `sum_{start <= n < prec} a_n q^n`
//! whose coefficients are exact for all exponents below `prec`.

use crate::arith::divisor_sigma;
use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::ops::{Add, Mul, Neg, Sub};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntSeries {
    start: i64,
    prec: i64,
    coeffs: Vec<BigInt>,
}

impl IntSeries {
    pub fn zero(prec: i64) -> Self {
        IntSeries {
            start: prec,
            prec,
            coeffs: Vec::new(),
        }
    }

    pub fn monomial(c: impl Into<BigInt>, e: i64, prec: i64) -> Self {
        if e >= prec {
            return Self::zero(prec);
        }
        IntSeries {
            start: e,
            prec,
            coeffs: vec![c.into()],
        }
        .normalized()
    }

    pub fn constant(c: i64, prec: i64) -> Self {
        Self::monomial(c, 0, prec)
    }

    /// Coefficients `f(n)` for `start <= n < prec`.
    pub fn from_fn(start: i64, prec: i64, mut f: impl FnMut(i64) -> BigInt) -> Self {
        let coeffs = (start..prec.max(start)).map(&mut f).collect();
        IntSeries { start, prec, coeffs }.normalized()
    }

    fn normalized(mut self) -> Self {
        let lead = self.coeffs.iter().take_while(|c| c.is_zero()).count();
        self.coeffs.drain(..lead);
        self.start += lead as i64;
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
        if self.coeffs.is_empty() {
            self.start = self.prec;
        }
        self
    }

    pub fn prec(&self) -> i64 {
        self.prec
    }

    /// Exponent of the first nonzero term (`prec` for the zero series).
    pub fn valuation(&self) -> i64 {
        self.start
    }

    pub fn coeff(&self, n: i64) -> BigInt {
        assert!(n < self.prec, "q^{n} is beyond the precision {}", self.prec);
        if n < self.start {
            return BigInt::zero();
        }
        self.coeffs
            .get((n - self.start) as usize)
            .cloned()
            .unwrap_or_default()
    }

    pub fn coeff_i64(&self, n: i64) -> Option<i64> {
        self.coeff(n).to_i64()
    }

    /// `(n, a_n)` over the nonzero known terms.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &BigInt)> {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(move |(i, c)| (self.start + i as i64, c))
    }

    pub fn truncate(&self, prec: i64) -> Self {
        let prec = prec.min(self.prec);
        Self::from_fn(self.start.min(prec), prec, |n| self.coeff(n))
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        IntSeries {
            start: self.start,
            prec: self.prec,
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
        .normalized()
    }

    /// `f(q^r)`.
    pub fn substitute(&self, r: i64) -> Self {
        assert!(r >= 1);
        let start = self.start * r;
        Self::from_fn(start, self.prec * r, |n| {
            if (n - start) % r == 0 {
                self.coeff(n / r)
            } else {
                BigInt::zero()
            }
        })
    }

    /// Multiplicative inverse; the leading coefficient must be a unit.
    pub fn inverse(&self) -> Self {
        assert!(!self.coeffs.is_empty(), "inverse of zero series");
        let lead = &self.coeffs[0];
        assert!(lead.abs().is_one(), "leading coefficient {lead} is not a unit");
        let len = (self.prec - self.start) as usize;
        let mut out: Vec<BigInt> = Vec::with_capacity(len);
        for i in 0..len {
            let mut acc = if i == 0 { BigInt::one() } else { BigInt::zero() };
            for j in 1..=i.min(self.coeffs.len() - 1) {
                acc -= &self.coeffs[j] * &out[i - j];
            }
            out.push(acc * lead);
        }
        IntSeries {
            start: -self.start,
            prec: -self.start + len as i64,
            coeffs: out,
        }
        .normalized()
    }
}

impl<'a> Add<&'a IntSeries> for &'a IntSeries {
    type Output = IntSeries;
    fn add(self, o: &IntSeries) -> IntSeries {
        let prec = self.prec.min(o.prec);
        IntSeries::from_fn(self.start.min(o.start).min(prec), prec, |n| {
            self.coeff(n) + o.coeff(n)
        })
    }
}

impl<'a> Sub<&'a IntSeries> for &'a IntSeries {
    type Output = IntSeries;
    fn sub(self, o: &IntSeries) -> IntSeries {
        self + &(-o)
    }
}

impl Neg for &IntSeries {
    type Output = IntSeries;
    fn neg(self) -> IntSeries {
        self.scale(&BigInt::from(-1))
    }
}

impl<'a> Mul<&'a IntSeries> for &'a IntSeries {
    type Output = IntSeries;
    fn mul(self, o: &IntSeries) -> IntSeries {
        let prec = (self.start + o.prec).min(o.start + self.prec);
        let start = self.start + o.start;
        if self.coeffs.is_empty() || o.coeffs.is_empty() || start >= prec {
            return IntSeries::zero(prec);
        }
        let len = (prec - start) as usize;
        let mut out = vec![BigInt::zero(); len];
        for (i, a) in self.coeffs.iter().enumerate().take(len) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate().take(len - i) {
                out[i + j] += a * b;
            }
        }
        IntSeries {
            start,
            prec,
            coeffs: out,
        }
        .normalized()
    }
}

/// `prod_{n >= 1} (1 - q^{r n})^e`, exact below `prec`.
pub fn euler_product(r: i64, e: i32, prec: i64) -> IntSeries {
    assert!(r >= 1);
    let len = prec.max(0) as usize;
    let mut a = vec![BigInt::zero(); len];
    if len > 0 {
        a[0] = BigInt::one();
    }
    let mut step = r as usize;
    while step < len {
        for _ in 0..e.unsigned_abs() {
            if e > 0 {
                for k in (step..len).rev() {
                    let t = a[k - step].clone();
                    a[k] -= t;
                }
            } else {
                for k in step..len {
                    let t = a[k - step].clone();
                    a[k] += t;
                }
            }
        }
        step += r as usize;
    }
    IntSeries::from_fn(0, prec, |k| std::mem::take(&mut a[k as usize]))
}

/// `theta(z) = sum_{n in Z} q^{n^2}`.
pub fn theta(prec: i64) -> IntSeries {
    theta_twisted(prec, false)
}

/// `sum_{n in Z} (-1)^n q^{n^2}`.
pub fn theta_alternating(prec: i64) -> IntSeries {
    theta_twisted(prec, true)
}

fn theta_twisted(prec: i64, alternate: bool) -> IntSeries {
    IntSeries::from_fn(0, prec, |n| {
        let r = (n as f64).sqrt().round() as i64;
        if r * r != n {
            return BigInt::zero();
        }
        let sign = if alternate && r % 2 == 1 { -1 } else { 1 };
        BigInt::from(if n == 0 { 1 } else { 2 * sign })
    })
}

/// `E_4 = 1 + 240 sum sigma_3(n) q^n`.
pub fn e4(prec: i64) -> IntSeries {
    IntSeries::from_fn(0, prec, |n| {
        if n == 0 {
            BigInt::one()
        } else {
            BigInt::from(240u32) * BigInt::from(divisor_sigma(3, n as u64))
        }
    })
}

/// `Delta = q prod (1 - q^n)^24`.
pub fn delta(prec: i64) -> IntSeries {
    &IntSeries::monomial(1, 1, prec) * &euler_product(1, 24, prec)
}

/// `j = E_4^3 / Delta`, exact below `prec`.
pub fn j_invariant(prec: i64) -> IntSeries {
    let p = prec + 2;
    let e = e4(p);
    (&(&e * &e) * &e).truncate(p).mul_truncated(&delta(p).inverse(), prec)
}

impl IntSeries {
    fn mul_truncated(&self, o: &IntSeries, prec: i64) -> IntSeries {
        (self * o).truncate(prec)
    }
}

/// `j_m = q^{-m} + O(q)` by reducing `j^m` against lower powers of `j`.
pub fn j_m_faber(m: u32, prec: i64) -> IntSeries {
    assert!(m >= 1);
    let j = j_invariant(prec + m as i64);
    let mut powers = vec![IntSeries::constant(1, prec + m as i64), j.clone()];
    for e in 2..=m as usize {
        let next = &powers[e - 1] * &j;
        powers.push(next);
    }
    let mut r = powers[m as usize].truncate(prec);
    for e in (0..m as i64).rev() {
        let c = r.coeff(-e);
        if !c.is_zero() {
            r = &r - &powers[e as usize].truncate(prec).scale(&c);
        }
    }
    r
}

/// `j_m` from the Hecke relation `c_m(n) = sum_{d | (m, n)} (m/d) c_1(mn/d^2)`.
pub fn j_m_hecke(m: u32, prec: i64) -> IntSeries {
    assert!(m >= 1);
    let m = m as i64;
    let j = j_invariant(m * prec.max(1) + 1);
    IntSeries::from_fn(-m, prec, |n| {
        if n == -m {
            return BigInt::one();
        }
        if n <= 0 {
            return BigInt::zero();
        }
        let mut acc = BigInt::zero();
        for d in 1..=m.min(n) {
            if m % d == 0 && n % d == 0 {
                acc += BigInt::from(m / d) * j.coeff(m * n / (d * d));
            }
        }
        acc
    })
}

/// `t = eta(z)^8 / eta(4z)^8 = q^{-1} - 8 + 20 q - 62 q^3 + ...`, a Hauptmodul
/// for `Gamma_0(4)` with a simple pole at infinity.
pub fn hauptmodul_four(prec: i64) -> IntSeries {
    let p = prec + 1;
    let num = euler_product(1, 8, p);
    let den = euler_product(4, -8, p);
    (&IntSeries::monomial(1, -1, prec) * &(&num * &den)).truncate(prec)
}

/// The weight 1/2 plus-space form `f_{-3} = q^{-3} - 248 q + 26752 q^4 - ...`,
/// obtained as `theta` times a rational function of the Hauptmodul:
///
/// ```text
/// f_{-3} = theta (t^3 + 22 t^2 + 104 t + 8 - 128/(t + 16))
/// ```
///
/// The pole of the last term sits at the cusp `1/2` of `Gamma_0(4)`, where
/// `theta` vanishes.
pub fn f_minus_three(prec: i64) -> IntSeries {
    let p = prec + 4;
    let t = hauptmodul_four(p);
    let t2 = &t * &t;
    let t3 = &t2 * &t;
    let mut poly = &t3 + &t2.scale(&BigInt::from(22));
    poly = &poly + &t.scale(&BigInt::from(104));
    poly = &poly + &IntSeries::constant(8, p);
    let shifted = &t + &IntSeries::constant(16, p);
    poly = &poly - &shifted.inverse().scale(&BigInt::from(128));
    (&theta(p) * &poly).truncate(prec)
}

/// The weight 3/2 plus-space form `g_{-1} = q^{-1} - 2 + 248 q^3 - 492 q^4 + ...`,
/// `g_{-1}(z) = theta_1(z) E_4(4z) / eta(4z)^6` with `theta_1 = sum (-1)^n q^{n^2}`.
pub fn g_minus_one(prec: i64) -> IntSeries {
    let p = prec + 1;
    let body = &(&theta_alternating(p) * &e4(p).substitute(4)) * &euler_product(4, -6, p);
    (&IntSeries::monomial(1, -1, prec) * &body).truncate(prec)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(s: &IntSeries, range: std::ops::Range<i64>) -> Vec<i64> {
        range.map(|n| s.coeff_i64(n).unwrap()).collect()
    }

    #[test]
    fn basic_forms() {
        assert_eq!(ints(&theta(10), 0..10), vec![1, 2, 0, 0, 2, 0, 0, 0, 0, 2]);
        assert_eq!(ints(&e4(4), 0..4), vec![1, 240, 2160, 6720]);
        assert_eq!(ints(&delta(5), 1..5), vec![1, -24, 252, -1472]);
    }

    #[test]
    fn j_expansion() {
        let j = j_invariant(4);
        assert_eq!(j.valuation(), -1);
        assert_eq!(ints(&j, -1..4), vec![1, 744, 196884, 21493760, 864299970]);
    }

    #[test]
    fn j_m_two_routes() {
        for m in 1..=4 {
            let a = j_m_faber(m, 12);
            let b = j_m_hecke(m, 12);
            assert_eq!(a, b, "m = {m}");
            assert_eq!(a.coeff(0), BigInt::zero());
        }
        assert_eq!(j_m_faber(2, 3).coeff_i64(1), Some(42987520));
    }

    #[test]
    fn inverse_roundtrip() {
        let t = hauptmodul_four(20);
        let prod = &t * &t.inverse();
        assert_eq!(prod.truncate(prod.prec()), IntSeries::constant(1, prod.prec()));
        assert_eq!(ints(&t, -1..4), vec![1, -8, 20, 0, -62]);
    }

    #[test]
    fn f_minus_three_is_plus_space() {
        let f = f_minus_three(40);
        assert_eq!(f.valuation(), -3);
        assert_eq!(f.coeff_i64(-3), Some(1));
        for n in -2i64..40 {
            if n.rem_euclid(4) >= 2 || n == 0 {
                assert!(f.coeff(n).is_zero(), "q^{n}");
            }
        }
        assert_eq!(ints(&f, 1..6), vec![-248, 0, 0, 26752, -85995]);
        assert_eq!(f.coeff_i64(8), Some(1707264));
    }

    #[test]
    fn g_minus_one_is_plus_space() {
        let g = g_minus_one(30);
        assert_eq!(ints(&g, -1..5), vec![1, -2, 0, 0, 248, -492]);
        for n in 0..30 {
            if n % 4 == 1 || n % 4 == 2 {
                assert!(g.coeff(n).is_zero(), "q^{n}");
            }
        }
    }
}

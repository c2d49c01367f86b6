//! Generalized Kloosterman sums
//!
//! ```text
//! K_k(m, n, c) = sum_{v mod c, (v,c)=1} chi(v) e((m vbar + n v) / c)
//! ```
//!
//! with `chi = 1` for integral `k` and `chi(v) = (c/v) eps_v^{2k}` for
//! half-integral `k` (then `4 | c`). [`kloosterman_sum`] enumerates all
//! residues and serves as the reference. [`kloosterman_sum_fast`] splits the
//! sum over the prime-power factors of `c` and uses closed forms (Ramanujan
//! and Salie sums) for the prime factors where they apply.

use crate::arith::{
    eps, factorize, jacobi, kronecker, mod_inverse, mul_mod, sqrt_mod_prime, Sieve, Unit4,
};
use crate::error::{MaassError, Result};
use crate::weight::Weight;
use num_complex::Complex64;
use num_integer::Integer;
use parking_lot::RwLock;
use std::collections::HashMap;
use std::f64::consts::PI;

const DEFAULT_CACHE_CAPACITY: usize = 1 << 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct KloostermanKey {
    pub weight: Weight,
    pub m: i64,
    pub n: i64,
    pub c: u64,
}

impl KloostermanKey {
    pub fn new(weight: Weight, m: i64, n: i64, c: u64) -> Self {
        KloostermanKey { weight, m, n, c }
    }

    fn normalized(self) -> Self {
        let c = self.c as i64;
        KloostermanKey {
            m: self.m.rem_euclid(c),
            n: self.n.rem_euclid(c),
            ..self
        }
    }

    fn validate(&self) -> Result<()> {
        if self.c == 0 {
            return Err(MaassError::InvalidArgument("modulus c must be positive".into()));
        }
        if !self.weight.is_integral() && self.c % 4 != 0 {
            return Err(MaassError::InvalidArgument(format!(
                "half-integral weight requires 4 | c, got c = {}",
                self.c
            )));
        }
        Ok(())
    }
}

/// `e(r/q)` for `0 <= r < q`, evaluated on the shorter arc.
#[inline]
fn phase(r: u64, q: u64) -> Complex64 {
    let r = r as f64;
    let q = q as f64;
    let x = if 2.0 * r > q { r - q } else { r };
    let (s, c) = (2.0 * PI * x / q).sin_cos();
    Complex64::new(c, s)
}

#[inline]
fn reduce(x: i64, q: u64) -> u64 {
    x.rem_euclid(q as i64) as u64
}

/// Reference evaluation by enumerating every unit modulo `c`.
pub fn kloosterman_sum(key: &KloostermanKey) -> Result<Complex64> {
    key.validate()?;
    let c = key.c;
    let m = reduce(key.m, c);
    let n = reduce(key.n, c);
    let mut acc = Complex64::new(0.0, 0.0);
    for v in 0..c {
        if v.gcd(&c) != 1 {
            continue;
        }
        let vb = mod_inverse(v as i64, c)?;
        let r = (mul_mod(m, vb, c) + mul_mod(n, v, c)) % c;
        let mut term = phase(r, c);
        if !key.weight.is_integral() {
            let unit = Unit4::from_sign(kronecker(c as i64, v as i64))
                .mul(eps(v as i64)?.pow(key.weight.twice_k as i64));
            term *= unit.to_complex();
        }
        acc += term;
    }
    Ok(acc)
}

fn euler_phi_prime_power(p: u64, e: u32) -> u64 {
    p.pow(e - 1) * (p - 1)
}

/// Plain Kloosterman sum `S(a, b; p^e)`.
fn plain_prime_power(a: u64, b: u64, p: u64, e: u32) -> Complex64 {
    let q = p.pow(e);
    if a == 0 && b == 0 {
        return Complex64::new(euler_phi_prime_power(p, e) as f64, 0.0);
    }
    if a == 0 || b == 0 {
        // Ramanujan sum c_{p^e}(x)
        let mut x = a.max(b);
        let mut v = 0;
        while x % p == 0 {
            x /= p;
            v += 1;
        }
        let val = if v + 1 == e { -(p.pow(e - 1) as f64) } else { 0.0 };
        return Complex64::new(val, 0.0);
    }
    let mut acc = Complex64::new(0.0, 0.0);
    for v in 1..q {
        if v % p == 0 {
            continue;
        }
        let vb = mod_inverse(v as i64, q).expect("unit");
        acc += phase((mul_mod(a, vb, q) + mul_mod(b, v, q)) % q, q);
    }
    acc
}

/// Gauss sum `sum_v (v/p) e(v/p) = eps_p sqrt(p)`.
fn gauss_sum(p: u64) -> Complex64 {
    let r = (p as f64).sqrt();
    if p % 4 == 1 {
        Complex64::new(r, 0.0)
    } else {
        Complex64::new(0.0, r)
    }
}

/// Salie sum `sum_{v mod p} (v/p) e((a vbar + b v)/p)` for an odd prime `p`.
fn salie(a: u64, b: u64, p: u64) -> Complex64 {
    let g = gauss_sum(p);
    match (a == 0, b == 0) {
        (true, true) => Complex64::new(0.0, 0.0),
        (true, false) => g * jacobi(b as i64, p) as f64,
        (false, true) => g * jacobi(a as i64, p) as f64,
        (false, false) => match sqrt_mod_prime(mul_mod(a, b, p), p) {
            None => Complex64::new(0.0, 0.0),
            Some(x) => {
                let s = 2.0 * (4.0 * PI * x as f64 / p as f64).cos();
                g * (jacobi(b as i64, p) as f64 * s)
            }
        },
    }
}

/// `sum_{v mod p^e}^* (v/p)^e e((a vbar + b v)/p^e)` by enumeration.
fn twisted_prime_power(a: u64, b: u64, p: u64, e: u32) -> Complex64 {
    let q = p.pow(e);
    let mut acc = Complex64::new(0.0, 0.0);
    for v in 1..q {
        if v % p == 0 {
            continue;
        }
        let vb = mod_inverse(v as i64, q).expect("unit");
        let t = phase((mul_mod(a, vb, q) + mul_mod(b, v, q)) % q, q);
        acc += t * jacobi(v as i64, p) as f64;
    }
    acc
}

/// The 2-power factor of a half-integral weight sum with modulus `2^a * q`.
fn two_part(weight: Weight, a2: u64, b2: u64, two_exp: u32, q_odd: u64) -> Complex64 {
    let q2 = 1u64 << two_exp;
    let recip_sign_odd_q = (q_odd % 4) == 3;
    let mut acc = Complex64::new(0.0, 0.0);
    let mut v = 1;
    while v < q2 {
        let vb = mod_inverse(v as i64, q2).expect("odd");
        let mut unit = eps(v as i64).expect("odd").pow(weight.twice_k as i64);
        if two_exp % 2 == 1 && (v % 8 == 3 || v % 8 == 5) {
            unit = unit.mul(Unit4(2));
        }
        if recip_sign_odd_q && v % 4 == 3 {
            unit = unit.mul(Unit4(2));
        }
        let r = (mul_mod(a2, vb, q2) + mul_mod(b2, v, q2)) % q2;
        acc += phase(r, q2) * unit.to_complex();
        v += 2;
    }
    acc
}

/// Kloosterman sum via the factorization of `c`, optionally using a sieve.
pub fn kloosterman_sum_fast(key: &KloostermanKey, sieve: Option<&Sieve>) -> Result<Complex64> {
    key.validate()?;
    let c = key.c;
    let factors = match sieve {
        Some(s) => s.factorize(c),
        None => factorize(c),
    };
    let mut prod = Complex64::new(1.0, 0.0);
    let half = !key.weight.is_integral();
    for &(p, e) in &factors {
        let q = p.pow(e);
        let t = mod_inverse((c / q) as i64, q)?;
        let a = mul_mod(reduce(key.m, q), t, q);
        let b = mul_mod(reduce(key.n, q), t, q);
        let part = if !half {
            plain_prime_power(a, b, p, e)
        } else if p == 2 {
            two_part(key.weight, a, b, e, c / q)
        } else if e == 1 {
            salie(a, b, p)
        } else if e % 2 == 0 {
            plain_prime_power(a, b, p, e)
        } else {
            twisted_prime_power(a, b, p, e)
        };
        if part == Complex64::new(0.0, 0.0) {
            return Ok(part);
        }
        prod *= part;
    }
    Ok(prod)
}

/// Factorized evaluation with a bounded memo table keyed by the reduced
/// indices. Safe to share between threads.
#[derive(Debug)]
pub struct KloostermanEvaluator {
    sieve: Sieve,
    cache: RwLock<HashMap<KloostermanKey, Complex64>>,
    capacity: usize,
}

impl KloostermanEvaluator {
    pub fn new(max_modulus: u64) -> Self {
        Self::with_capacity(max_modulus, DEFAULT_CACHE_CAPACITY)
    }

    pub fn with_capacity(max_modulus: u64, capacity: usize) -> Self {
        KloostermanEvaluator {
            sieve: Sieve::new(max_modulus.max(16)),
            cache: RwLock::new(HashMap::new()),
            capacity,
        }
    }

    pub fn eval(&self, key: &KloostermanKey) -> Result<Complex64> {
        key.validate()?;
        let norm = key.normalized();
        if let Some(v) = self.cache.read().get(&norm) {
            return Ok(*v);
        }
        let v = kloosterman_sum_fast(&norm, Some(&self.sieve))?;
        let mut cache = self.cache.write();
        if cache.len() < self.capacity {
            cache.insert(norm, v);
        }
        Ok(v)
    }

    pub fn cache_len(&self) -> usize {
        self.cache.read().len()
    }
}

/// The odd-modulus sum appearing in the plus-space projection:
///
/// ```text
/// H(m, n, M) = (4/-M) (-4/M)^{-k} sum_{d mod M}^* (d/M) e((n d + 4bar m dbar)/M)
/// ```
///
/// for odd `M`, with `(-1)^{-k} = e^{-i pi k}`.
pub fn h_sum(weight: Weight, m: i64, n: i64, modulus: u64) -> Result<Complex64> {
    if modulus % 2 == 0 {
        return Err(MaassError::FourNotInvertible(modulus));
    }
    let big_m = modulus;
    let inv4 = mod_inverse(4, big_m)?;
    let mm = mul_mod(reduce(m, big_m), inv4, big_m);
    let nn = reduce(n, big_m);
    let mut acc = Complex64::new(0.0, 0.0);
    for d in 0..big_m {
        if d.gcd(&big_m) != 1 {
            continue;
        }
        let db = mod_inverse(d as i64, big_m)?;
        let r = (mul_mod(nn, d, big_m) + mul_mod(mm, db, big_m)) % big_m;
        acc += phase(r, big_m) * jacobi(d as i64, big_m) as f64;
    }
    let outer = kronecker(4, -(big_m as i64)) as f64;
    let twist = if kronecker(-4, big_m as i64) == -1 {
        Complex64::from_polar(1.0, -PI * weight.k())
    } else {
        Complex64::new(1.0, 0.0)
    };
    Ok(acc * twist * outer)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
        (a - b).norm() <= tol
    }

    #[test]
    fn integral_weight_known_values() {
        // S(1, 1; 5) = 2 cos(4 pi/5) + 2 cos(8 pi/5) ... = -(1 + sqrt 5)/2 + ...
        let s = kloosterman_sum(&KloostermanKey::new(Weight::new(0), 1, 1, 5)).unwrap();
        let want: f64 = (1..5)
            .map(|v: u64| {
                let vb = mod_inverse(v as i64, 5).unwrap();
                (2.0 * PI * (v + vb) as f64 / 5.0).cos()
            })
            .sum();
        assert!((s.re - want).abs() < 1e-13 && s.im.abs() < 1e-13);
        // Ramanujan sums
        let s = kloosterman_sum(&KloostermanKey::new(Weight::new(0), 1, 0, 12)).unwrap();
        assert!(close(s, Complex64::new(0.0, 0.0), 1e-12));
        let s = kloosterman_sum(&KloostermanKey::new(Weight::new(0), 0, 0, 12)).unwrap();
        assert!(close(s, Complex64::new(4.0, 0.0), 1e-12));
    }

    #[test]
    fn fast_matches_direct() {
        for twice_k in [-1, 0, 1, 2, 3, 5] {
            let w = Weight::new(twice_k);
            for c in 1..=260u64 {
                if !w.is_integral() && c % 4 != 0 {
                    continue;
                }
                for (m, n) in [(0, 0), (1, 1), (-1, 3), (4, -7), (0, 5), (12, 0), (-3, -8)] {
                    let key = KloostermanKey::new(w, m, n, c);
                    let a = kloosterman_sum(&key).unwrap();
                    let b = kloosterman_sum_fast(&key, None).unwrap();
                    assert!(close(a, b, 1e-9), "2k={twice_k} m={m} n={n} c={c}: {a} vs {b}");
                }
            }
        }
    }

    #[test]
    fn evaluator_caches() {
        let ev = KloostermanEvaluator::new(1000);
        let key = KloostermanKey::new(Weight::new(1), 3, -5, 36);
        let a = ev.eval(&key).unwrap();
        let b = ev.eval(&KloostermanKey::new(Weight::new(1), 3 + 36, -5, 36)).unwrap();
        assert_eq!(a, b);
        assert_eq!(ev.cache_len(), 1);
    }

    #[test]
    fn rejects_bad_modulus() {
        assert!(kloosterman_sum(&KloostermanKey::new(Weight::new(1), 1, 1, 6)).is_err());
        assert!(h_sum(Weight::new(1), 1, 1, 4).is_err());
    }
}

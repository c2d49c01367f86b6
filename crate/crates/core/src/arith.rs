//! Exact integer arithmetic: inverses, Kronecker symbols, the theta multiplier
//! unit, divisor sums, factorization and Hurwitz class numbers.

use crate::error::{MaassError, Result};
use num_integer::Integer;
use num_rational::Rational64;

/// A power of `i`, stored as the exponent modulo 4.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Unit4(pub u8);

impl Unit4 {
    pub const ONE: Unit4 = Unit4(0);
    pub const I: Unit4 = Unit4(1);

    pub fn from_sign(sign: i32) -> Unit4 {
        if sign < 0 {
            Unit4(2)
        } else {
            Unit4(0)
        }
    }

    pub fn mul(self, other: Unit4) -> Unit4 {
        Unit4((self.0 + other.0) % 4)
    }

    /// Integer power, negative exponents allowed.
    pub fn pow(self, e: i64) -> Unit4 {
        Unit4(((self.0 as i64 * e).rem_euclid(4)) as u8)
    }

    pub fn to_complex(self) -> num_complex::Complex64 {
        match self.0 {
            0 => num_complex::Complex64::new(1.0, 0.0),
            1 => num_complex::Complex64::new(0.0, 1.0),
            2 => num_complex::Complex64::new(-1.0, 0.0),
            _ => num_complex::Complex64::new(0.0, -1.0),
        }
    }
}

/// Modular inverse of `v` modulo `c`, returned in `[0, c)`.
pub fn mod_inverse(v: i64, c: u64) -> Result<u64> {
    if c == 0 {
        return Err(MaassError::NotInvertible { v, c });
    }
    if c == 1 {
        return Ok(0);
    }
    let m = c as i128;
    let a = (v as i128).rem_euclid(m);
    let ext = a.extended_gcd(&m);
    if ext.gcd != 1 {
        return Err(MaassError::NotInvertible { v, c });
    }
    Ok(ext.x.rem_euclid(m) as u64)
}

/// `(a * b) mod m` without overflow.
#[inline]
pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, b, m);
        }
        b = mul_mod(b, b, m);
        e >>= 1;
    }
    r
}

/// Jacobi symbol `(a/n)` for odd positive `n`.
pub fn jacobi(a: i64, n: u64) -> i32 {
    debug_assert!(n % 2 == 1);
    let mut a = (a as i128).rem_euclid(n as i128) as u64;
    let mut n = n;
    let mut t = 1;
    while a != 0 {
        while a % 2 == 0 {
            a /= 2;
            let r = n % 8;
            if r == 3 || r == 5 {
                t = -t;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            t = -t;
        }
        a %= n;
    }
    if n == 1 {
        t
    } else {
        0
    }
}

/// Kronecker symbol `(a/b)` for arbitrary integers, with `(a/-1) = -1`
/// exactly when `a < 0`.
pub fn kronecker(a: i64, b: i64) -> i32 {
    if b == 0 {
        return if a == 1 || a == -1 { 1 } else { 0 };
    }
    let mut result = 1;
    let mut b = b as i128;
    if b < 0 {
        b = -b;
        if a < 0 {
            result = -result;
        }
    }
    let tz = b.trailing_zeros();
    if tz > 0 {
        if a % 2 == 0 {
            return 0;
        }
        let r = (a as i128).rem_euclid(8);
        if (r == 3 || r == 5) && tz % 2 == 1 {
            result = -result;
        }
        b >>= tz;
    }
    result * jacobi(a, b as u64)
}

/// The theta multiplier unit: 1 for `d = 1 (mod 4)`, `i` for `d = 3 (mod 4)`.
pub fn eps(d: i64) -> Result<Unit4> {
    match d.rem_euclid(4) {
        1 => Ok(Unit4::ONE),
        3 => Ok(Unit4::I),
        _ => Err(MaassError::EvenArgument(d)),
    }
}

/// Whether `n` is a perfect square (`0` counts, negative numbers do not).
pub fn is_square(n: i64) -> bool {
    if n < 0 {
        return false;
    }
    let r = isqrt(n as u64);
    r * r == n as u64
}

pub fn isqrt(n: u64) -> u64 {
    if n == 0 {
        return 0;
    }
    let mut r = (n as f64).sqrt() as u64;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

/// Sum of `d^k` over the positive divisors of `n`.
pub fn divisor_sigma(k: u32, n: u64) -> u128 {
    assert!(n > 0);
    let mut s: u128 = 0;
    let mut d = 1u64;
    while d * d <= n {
        if n % d == 0 {
            s += (d as u128).pow(k);
            let e = n / d;
            if e != d {
                s += (e as u128).pow(k);
            }
        }
        d += 1;
    }
    s
}

/// Prime factorization by trial division, primes in increasing order.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= n {
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Smallest-prime-factor table for fast repeated factorization.
#[derive(Debug, Clone)]
pub struct Sieve {
    spf: Vec<u32>,
}

impl Sieve {
    pub fn new(limit: u64) -> Sieve {
        let n = limit as usize + 1;
        let mut spf = vec![0u32; n];
        for i in 2..n {
            if spf[i] == 0 {
                let mut j = i;
                while j < n {
                    if spf[j] == 0 {
                        spf[j] = i as u32;
                    }
                    j += i;
                }
            }
        }
        Sieve { spf }
    }

    pub fn limit(&self) -> u64 {
        self.spf.len() as u64 - 1
    }

    pub fn factorize(&self, mut n: u64) -> Vec<(u64, u32)> {
        if n > self.limit() {
            return factorize(n);
        }
        let mut out: Vec<(u64, u32)> = Vec::new();
        while n > 1 {
            let p = self.spf[n as usize] as u64;
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        out
    }
}

/// Square root of `a` modulo an odd prime `p`, if `a` is a square.
pub fn sqrt_mod_prime(a: u64, p: u64) -> Option<u64> {
    let a = a % p;
    if a == 0 {
        return Some(0);
    }
    if pow_mod(a, (p - 1) / 2, p) != 1 {
        return None;
    }
    if p % 4 == 3 {
        return Some(pow_mod(a, (p + 1) / 4, p));
    }
    let mut q = p - 1;
    let mut s = 0;
    while q % 2 == 0 {
        q /= 2;
        s += 1;
    }
    let mut z = 2;
    while pow_mod(z, (p - 1) / 2, p) != p - 1 {
        z += 1;
    }
    let mut m = s;
    let mut c = pow_mod(z, q, p);
    let mut t = pow_mod(a, q, p);
    let mut r = pow_mod(a, (q + 1) / 2, p);
    while t != 1 {
        let mut i = 0;
        let mut tt = t;
        while tt != 1 {
            tt = mul_mod(tt, tt, p);
            i += 1;
        }
        let b = pow_mod(c, 1 << (m - i - 1), p);
        m = i;
        c = mul_mod(b, b, p);
        t = mul_mod(t, c, p);
        r = mul_mod(r, b, p);
    }
    Some(r)
}

/// Hurwitz class number as an exact rational.
pub type ClassNumberValue = Rational64;

/// Hurwitz class number `H(n)`: `H(0) = -1/12`, `H(n) = 0` for
/// `n = 1, 2 (mod 4)`, otherwise the number of `SL2(Z)` classes of positive
/// definite forms of discriminant `-n`, with the classes of `a(x^2+y^2)` and
/// `a(x^2+xy+y^2)` weighted by 1/2 and 1/3.
pub fn hurwitz_class_number(n: i64) -> Result<ClassNumberValue> {
    if n < 0 {
        return Err(MaassError::NotADiscriminant(n));
    }
    if n == 0 {
        return Ok(Rational64::new(-1, 12));
    }
    if n % 4 == 1 || n % 4 == 2 {
        return Ok(Rational64::from_integer(0));
    }
    // reduced forms (a, b, c): b^2 - 4ac = -n, |b| <= a <= c,
    // b >= 0 whenever |b| = a or a = c
    let mut twelve_h: i64 = 0;
    let mut a = 1i64;
    while 3 * a * a <= n {
        for b in -a + 1..=a {
            let num = b * b + n;
            if num % (4 * a) != 0 {
                continue;
            }
            let c = num / (4 * a);
            if c < a || (c == a && b < 0) {
                continue;
            }
            twelve_h += if a == b && b == c {
                4
            } else if b == 0 && a == c {
                6
            } else {
                12
            };
        }
        a += 1;
    }
    Ok(Rational64::new(twelve_h, 12))
}

/// `H(n)` as a float.
pub fn hurwitz_class_number_f64(n: i64) -> Result<f64> {
    let h = hurwitz_class_number(n)?;
    Ok(*h.numer() as f64 / *h.denom() as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hurwitz_small_values() {
        let expect = [
            (3, (1, 3)),
            (4, (1, 2)),
            (7, (1, 1)),
            (8, (1, 1)),
            (11, (1, 1)),
            (12, (4, 3)),
            (15, (2, 1)),
            (16, (3, 2)),
            (19, (1, 1)),
            (20, (2, 1)),
            (23, (3, 1)),
            (24, (2, 1)),
        ];
        for (n, (p, q)) in expect {
            assert_eq!(hurwitz_class_number(n).unwrap(), Rational64::new(p, q), "n={n}");
        }
        assert_eq!(hurwitz_class_number(5).unwrap(), Rational64::from_integer(0));
        assert!(hurwitz_class_number(-3).is_err());
    }

    #[test]
    fn kronecker_conventions() {
        assert_eq!(kronecker(-1, -1), -1);
        assert_eq!(kronecker(1, -1), 1);
        assert_eq!(kronecker(0, -1), 1);
        assert_eq!(kronecker(3, 8), -1);
        assert_eq!(kronecker(7, 8), 1);
        assert_eq!(kronecker(-4, 3), -1);
        assert_eq!(kronecker(4, 6), 0);
        assert_eq!(kronecker(5, 0), 0);
        assert_eq!(kronecker(-1, 0), 1);
    }

    #[test]
    fn eps_values() {
        assert_eq!(eps(1).unwrap(), Unit4::ONE);
        assert_eq!(eps(-1).unwrap(), Unit4::I);
        assert_eq!(eps(7).unwrap(), Unit4::I);
        assert_eq!(eps(4), Err(MaassError::EvenArgument(4)));
    }

    #[test]
    fn inverse_and_sqrt() {
        assert_eq!(mod_inverse(3, 7).unwrap(), 5);
        assert_eq!(mod_inverse(-3, 7).unwrap(), 2);
        assert!(mod_inverse(6, 9).is_err());
        for p in [3u64, 5, 13, 17, 41, 97, 257] {
            for a in 1..p {
                if let Some(r) = sqrt_mod_prime(a, p) {
                    assert_eq!(mul_mod(r, r, p), a);
                }
            }
        }
    }

    #[test]
    fn sieve_matches_trial_division() {
        let s = Sieve::new(5000);
        for n in 1..=5000u64 {
            assert_eq!(s.factorize(n), factorize(n));
        }
    }

    #[test]
    fn sigma() {
        assert_eq!(divisor_sigma(3, 2), 9);
        assert_eq!(divisor_sigma(1, 12), 28);
        assert_eq!(divisor_sigma(0, 36), 9);
    }
}

use crate::arith::{is_square, isqrt};
use crate::error::{MaassError, Result};
use crate::weight::Weight;
use std::f64::consts::PI;

/// Whether `a` and `b` are each zero or a perfect square.
pub fn is_pole_pair(a: i64, b: i64) -> bool {
    is_square(a) && is_square(b)
}

/// `Res_{s=3/4} b_{-D,1/2}(d, s)` at level 4.
///
/// The case `-D` a nonzero square with `d = 0` follows from the symmetry
/// `b_{0,1/2}(d, s) = b_{d,1/2}(0, s)`.
pub fn residue_b_half(big_d: i64, d: i64) -> Result<f64> {
    let neg_d = -big_d;
    if !is_pole_pair(neg_d, d) {
        return Err(MaassError::NotAPolePair { m: neg_d, n: d });
    }
    let m = isqrt(d as u64) as f64;
    let r = isqrt(neg_d as u64) as f64;
    Ok(match (neg_d == 0, d == 0) {
        (true, true) => 3.0 / (16.0 * PI),
        (true, false) => 3.0 * m / (2.0 * PI),
        (false, true) => 3.0 * r / (2.0 * PI),
        (false, false) => 12.0 * m * r / PI,
    })
}

/// `Res_{s=3/4} b_{m,k}(n, s)` at level 4 for `k = 1/2` or `3/2`.
///
/// Weight 3/2 residues come from the weight 1/2 table through
/// `b_{D,3/2}(-d, s) = f(D, d) b_{-D,1/2}(d, s)` with
/// `f = -|Dd|^{-1/2}`, `-2 sqrt(pi) |D-d|^{-1/2}` or `-4 pi`.
pub fn residue_b_plus(m: i64, weight: Weight, n: i64) -> Result<f64> {
    match weight.twice_k {
        1 => residue_b_half(-m, n),
        3 => {
            let (big_d, d) = (m, -n);
            let res = residue_b_half(big_d, d)?;
            let factor = if big_d != 0 && d != 0 {
                -1.0 / ((big_d as f64 * d as f64).abs()).sqrt()
            } else if big_d != d {
                -2.0 * PI.sqrt() / ((big_d - d).abs() as f64).sqrt()
            } else {
                -4.0 * PI
            };
            Ok(factor * res)
        }
        t => Err(MaassError::UnsupportedWeightRange(t)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table() {
        assert!(is_pole_pair(0, 0) && is_pole_pair(4, 9) && !is_pole_pair(3, 4));
        assert!(!is_pole_pair(-4, 1));
        assert!((residue_b_half(0, 0).unwrap() - 3.0 / (16.0 * PI)).abs() < 1e-15);
        assert!((residue_b_half(0, 4).unwrap() - 3.0 / PI).abs() < 1e-15);
        assert!((residue_b_half(-4, 1).unwrap() - 24.0 / PI).abs() < 1e-15);
        assert!(residue_b_half(-3, 1).is_err());
    }

    #[test]
    fn weight_three_halves_limits() {
        let w = Weight::new(3);
        // constant term of F_0^+ at s = 3/4 is Res * 2/pi = -3/(2 pi)
        let r = residue_b_plus(0, w, 0).unwrap();
        assert!((r * 2.0 / PI + 3.0 / (2.0 * PI)).abs() < 1e-14);
        // q^{-d} terms of F_0^+: Res * sqrt(d) = -3 sqrt(d)/sqrt(pi)
        let r = residue_b_plus(0, w, -9).unwrap();
        assert!((r * 3.0 + 9.0 / PI.sqrt()).abs() < 1e-13);
        // -D = 4: Res * sqrt(d) = -12 sqrt(d)/pi
        let r = residue_b_plus(-4, w, -1).unwrap();
        assert!((r + 12.0 / PI).abs() < 1e-13);
    }
}

use maass_core::arith::{hurwitz_class_number, jacobi, kronecker, Sieve};
use maass_core::bases::oracle::{theta, IntSeries};
use maass_core::kloosterman::{kloosterman_sum, kloosterman_sum_fast, KloostermanKey};
use maass_core::poincare::{CoefficientQuery, Engine, TruncationPolicy};
use maass_core::specfun::{gamma, whittaker_m, whittaker_w};
use maass_core::Weight;
use num_bigint::BigInt;
use num_rational::Rational64;
use proptest::prelude::*;

/// Reduced forms of discriminant `-n`, with weights 1/2 and 1/3 on the forms
/// equivalent to multiples of `x^2 + y^2` and `x^2 + xy + y^2`.
fn class_number_by_forms(n: i64) -> Rational64 {
    let mut h = Rational64::from_integer(0);
    let mut a = 1;
    while 3 * a * a <= n {
        for b in -a + 1..=a {
            if (b * b + n) % (4 * a) != 0 {
                continue;
            }
            let c = (b * b + n) / (4 * a);
            if c < a || (c == a && b < 0) {
                continue;
            }
            h += if a == c && b == 0 {
                Rational64::new(1, 2)
            } else if a == b && b == c {
                Rational64::new(1, 3)
            } else {
                Rational64::from_integer(1)
            };
        }
        a += 1;
    }
    h
}

#[test]
fn class_numbers_match_form_enumeration() {
    for n in 1..400i64 {
        if n % 4 == 1 || n % 4 == 2 {
            assert_eq!(hurwitz_class_number(n).unwrap(), Rational64::from_integer(0), "n = {n}");
            continue;
        }
        assert_eq!(hurwitz_class_number(n).unwrap(), class_number_by_forms(n), "n = {n}");
    }
    assert_eq!(hurwitz_class_number(0).unwrap(), Rational64::new(-1, 12));
}

fn series_strategy() -> impl Strategy<Value = IntSeries> {
    (-3i64..3, proptest::collection::vec(-20i64..20, 1..12)).prop_map(|(start, v)| {
        IntSeries::from_fn(start, start + 12, |n| {
            BigInt::from(v.get((n - start) as usize).copied().unwrap_or(0))
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn fast_kloosterman_matches_direct(m in -30i64..30, n in -30i64..30, c4 in 1u64..60, half in any::<bool>()) {
        let (weight, c) = if half { (Weight::new(3), 4 * c4) } else { (Weight::new(0), c4) };
        let key = KloostermanKey::new(weight, m, n, c);
        let sieve = Sieve::new(1000);
        let a = kloosterman_sum(&key).unwrap();
        let b = kloosterman_sum_fast(&key, Some(&sieve)).unwrap();
        prop_assert!((a - b).norm() < 1e-9, "{a} vs {b}");
    }

    #[test]
    fn kronecker_is_multiplicative(a in -500i64..500, b in 1i64..300, c in 1i64..300) {
        prop_assert_eq!(kronecker(a, b * c), kronecker(a, b) * kronecker(a, c));
    }

    #[test]
    fn jacobi_agrees_with_kronecker_on_odd_moduli(a in -500i64..500, n in 0u64..200) {
        let n = 2 * n + 1;
        prop_assert_eq!(jacobi(a, n), kronecker(a, n as i64));
    }

    #[test]
    fn gamma_recurrence(x in 0.05f64..30.0) {
        let l = gamma(x + 1.0).unwrap();
        let r = x * gamma(x).unwrap();
        prop_assert!((l - r).abs() <= 1e-12 * r.abs());
    }

    #[test]
    fn whittaker_wronskian(mu in -1.0f64..1.5, nu in 0.05f64..1.2, y in 0.2f64..20.0) {
        // W(M, W) = -Gamma(1 + 2 nu) / Gamma(1/2 + nu - mu)
        let h = 1e-4 * y;
        let d = |f: &dyn Fn(f64) -> f64| (f(y + h) - f(y - h)) / (2.0 * h);
        let m = |t: f64| whittaker_m(mu, nu, t).unwrap();
        let w = |t: f64| whittaker_w(mu, nu, t).unwrap();
        let wr = m(y) * d(&w) - d(&m) * w(y);
        let want = -gamma(1.0 + 2.0 * nu).unwrap() / gamma(0.5 + nu - mu).unwrap();
        prop_assert!((wr - want).abs() <= 1e-5 * want.abs().max(1.0), "{wr} vs {want}");
    }

    #[test]
    fn series_inverse_roundtrip(a in series_strategy(), neg in any::<bool>()) {
        let lead = IntSeries::monomial(if neg { -1 } else { 1 }, a.valuation().min(a.prec()) - 1, a.prec());
        let a = &a + &lead;
        let one = &a * &a.inverse();
        let prec = one.prec();
        prop_assert_eq!(one, IntSeries::constant(1, prec));
    }

    #[test]
    fn series_product_commutes_and_distributes(a in series_strategy(), b in series_strategy(), c in series_strategy()) {
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
    }

    #[test]
    fn theta_squares(n in 0i64..400) {
        let t = theta(401);
        let r = (n as f64).sqrt().round() as i64;
        let want = if r * r == n { if n == 0 { 1 } else { 2 } } else { 0 };
        prop_assert_eq!(t.coeff_i64(n), Some(want));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn plus_projection_vanishes_off_class(m in -8i64..8, n in -12i64..12, s in 0.8f64..1.3, three in any::<bool>()) {
        let w = Weight::new(if three { 3 } else { 1 });
        prop_assume!(w.in_plus_class(m) && !w.in_plus_class(n));
        let engine = Engine::new(4096);
        let v = engine
            .coeff_b_plus(&CoefficientQuery::new(m, w, 4, n, s), &TruncationPolicy::fixed(256))
            .unwrap();
        prop_assert!(v.value.norm() < 1e-10);
    }

    #[test]
    fn coefficients_are_deterministic(m in -4i64..4, n in 1i64..10) {
        let w = Weight::new(3);
        prop_assume!(w.in_plus_class(m) && w.in_plus_class(n) && m != 0);
        let q = CoefficientQuery::new(m, w, 4, n, 0.9);
        let p = TruncationPolicy::new(512, 1e-9);
        let a = Engine::new(4096).coeff_b_plus(&q, &p).unwrap();
        let pool = rayon::ThreadPoolBuilder::new().num_threads(3).build().unwrap();
        let b = pool.install(|| Engine::new(64).coeff_b_plus(&q, &p).unwrap());
        prop_assert_eq!(a.value.re.to_bits(), b.value.re.to_bits());
        prop_assert_eq!(a.value.im.to_bits(), b.value.im.to_bits());
        prop_assert_eq!(a.error_estimate.to_bits(), b.error_estimate.to_bits());
    }
}

use super::oracle;
use super::qseries::QSeries;
use crate::arith::{hurwitz_class_number, hurwitz_class_number_f64, is_square};
use crate::error::{MaassError, Result};
use crate::poincare::{
    CoefficientQuery, Engine, HarmonicExpansion, TruncatedValue, TruncationPolicy, DEFAULT_STEP,
};
use crate::weight::Weight;
use num_complex::Complex64;
use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::f64::consts::PI;

const HALF: Weight = Weight { twice_k: 1 };
const THREE_HALVES: Weight = Weight { twice_k: 3 };

fn zero() -> Complex64 {
    Complex64::new(0.0, 0.0)
}

fn real(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

fn exact(v: Complex64) -> TruncatedValue<Complex64> {
    TruncatedValue {
        value: v,
        error_estimate: 0.0,
        c_used: 0,
        converged: true,
    }
}

/// Linear combination of truncated values; errors add up in absolute value.
fn combine(parts: &[(f64, &TruncatedValue<Complex64>)]) -> TruncatedValue<Complex64> {
    let mut out = exact(zero());
    for (f, v) in parts {
        out.value += v.value * *f;
        out.error_estimate += v.error_estimate * f.abs();
        out.c_used = out.c_used.max(v.c_used);
        out.converged &= v.converged;
    }
    out
}

fn check_f_index(d: i64) -> Result<()> {
    if d > 0 || !HALF.in_plus_class(d) {
        return Err(MaassError::IndexClass { index: d });
    }
    Ok(())
}

fn check_g_index(big_d: i64, negative: bool) -> Result<()> {
    let sign_ok = if negative { big_d < 0 } else { big_d >= 0 };
    if !sign_ok || !THREE_HALVES.in_plus_class(big_d) {
        return Err(MaassError::IndexClass { index: big_d });
    }
    Ok(())
}

/// Evaluates `f(n)` for each `n` in parallel, keeping the input order.
fn per_index<T: Send>(
    ns: &[i64],
    f: impl Fn(i64) -> Result<T> + Sync,
) -> Result<Vec<(i64, T)>> {
    ns.par_iter()
        .map(|&n| f(n).map(|v| (n, v)))
        .collect::<Vec<_>>()
        .into_iter()
        .collect()
}

fn fill(series: &mut QSeries, unconverged: &mut Vec<i64>, rows: Vec<(i64, TruncatedValue<Complex64>)>) {
    for (n, v) in rows {
        series.set(n, v.value, v.error_estimate);
        if !v.converged {
            unconverged.push(n);
        }
    }
}

/// A basis element together with the indices whose c-sums did not converge.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BasisSeries {
    pub series: QSeries,
    pub unconverged: Vec<i64>,
}

impl BasisSeries {
    pub fn converged(&self) -> bool {
        self.unconverged.is_empty()
    }
}

/// Coefficient of `q^n`, `n > 0`, of `f_d` for `d < 0`, given the value
/// `b_{d,1/2}(0, 3/4)`:
/// `(b_{d,1/2}(n, 3/4) - [n square] 8 sqrt(n) b_{d,1/2}(0, 3/4)) / sqrt(n)`.
fn f_coefficient_with(
    engine: &Engine,
    d: i64,
    n: i64,
    b0: &TruncatedValue<Complex64>,
    policy: &TruncationPolicy,
) -> Result<TruncatedValue<Complex64>> {
    let bn = engine.coeff_b_plus(&CoefficientQuery::new(d, HALF, 4, n, 0.75), policy)?;
    let rn = (n as f64).sqrt();
    let sq = if is_square(n) { 8.0 * rn } else { 0.0 };
    Ok(combine(&[(1.0 / rn, &bn), (-sq / rn, b0)]))
}

/// One coefficient of the weight 1/2 basis element `f_d`.
pub fn f_coefficient(
    engine: &Engine,
    d: i64,
    n: i64,
    policy: &TruncationPolicy,
) -> Result<TruncatedValue<Complex64>> {
    check_f_index(d)?;
    if d == 0 {
        return Ok(exact(real(oracle::theta(n.max(0) + 1).coeff(n).to_f64().unwrap_or(0.0))));
    }
    if n == d {
        return Ok(exact(real(1.0)));
    }
    if n <= 0 || !HALF.in_plus_class(n) {
        return Ok(exact(zero()));
    }
    let b0 = engine.coeff_b_plus(&CoefficientQuery::new(d, HALF, 4, 0, 0.75), policy)?;
    f_coefficient_with(engine, d, n, &b0, policy)
}

/// `f_d = q^d + sum_{n > 0} A(-n, d) q^n`, the weakly holomorphic weight 1/2
/// plus-space form with principal part `q^d`. `f_0 = theta`.
pub fn f_series(
    engine: &Engine,
    d: i64,
    n_max: i64,
    policy: &TruncationPolicy,
) -> Result<BasisSeries> {
    check_f_index(d)?;
    if d == 0 {
        let series = QSeries::from_exact(&oracle::theta(n_max + 1), 4, HALF, true, n_max);
        return Ok(BasisSeries {
            series,
            unconverged: Vec::new(),
        });
    }
    let mut series = QSeries::new(4, HALF, true, n_max);
    series.set(d, real(1.0), 0.0);
    let b0 = engine.coeff_b_plus(&CoefficientQuery::new(d, HALF, 4, 0, 0.75), policy)?;
    let ns: Vec<i64> = (1..=n_max).filter(|&n| HALF.in_plus_class(n)).collect();
    let rows = per_index(&ns, |n| f_coefficient_with(engine, d, n, &b0, policy))?;
    let mut unconverged = Vec::new();
    fill(&mut series, &mut unconverged, rows);
    Ok(BasisSeries {
        series,
        unconverged,
    })
}

/// One coefficient of the weight 3/2 basis element `g_D`, `D < 0`, at `n >= 0`.
pub fn g_coefficient(
    engine: &Engine,
    big_d: i64,
    n: i64,
    policy: &TruncationPolicy,
) -> Result<TruncatedValue<Complex64>> {
    check_g_index(big_d, true)?;
    let square = is_square(-big_d);
    if n == big_d {
        return Ok(exact(real(1.0)));
    }
    if n < 0 || !THREE_HALVES.in_plus_class(n) {
        return Ok(exact(zero()));
    }
    if n == 0 {
        return Ok(exact(real(if square { -2.0 } else { 0.0 })));
    }
    let rn = (n as f64).sqrt();
    let b = engine.coeff_b_plus(&CoefficientQuery::new(big_d, THREE_HALVES, 4, n, 0.75), policy)?;
    if !square {
        return Ok(combine(&[(rn, &b)]));
    }
    let b0 = engine.coeff_b_plus(&CoefficientQuery::new(0, THREE_HALVES, 4, n, 0.75), policy)?;
    Ok(combine(&[(rn, &b), (-4.0 / PI.sqrt() * rn, &b0)]))
}

/// `g_D = q^D + sum_{n >= 0} B(D, -n) q^n` for `D < 0`: `(sqrt(pi)/2) F_D^+(z, 3/4)`,
/// corrected by `-(4/sqrt(pi)) F_0^+(z, 3/4)` when `-D` is a square.
pub fn g_series_neg(
    engine: &Engine,
    big_d: i64,
    n_max: i64,
    policy: &TruncationPolicy,
) -> Result<BasisSeries> {
    check_g_index(big_d, true)?;
    let mut series = QSeries::new(4, THREE_HALVES, true, n_max);
    series.set(big_d, real(1.0), 0.0);
    let ns: Vec<i64> = (0..=n_max).filter(|&n| THREE_HALVES.in_plus_class(n)).collect();
    let rows = per_index(&ns, |n| g_coefficient(engine, big_d, n, policy))?;
    let mut unconverged = Vec::new();
    fill(&mut series, &mut unconverged, rows);
    Ok(BasisSeries {
        series,
        unconverged,
    })
}

/// The harmonic form `h_{D,3/2}` behind a mock modular `g_D` and the
/// holomorphic part extracted from it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MockForm {
    pub big_d: i64,
    /// `b(D, n)`, assembled coefficient by coefficient.
    pub series: QSeries,
    pub unconverged: Vec<i64>,
    /// `h_{D,3/2}`, assembled from whole expansions.
    pub harmonic: HarmonicExpansion,
}

impl MockForm {
    /// The scale `c` with `g_D = hol(c h_{D,3/2})`.
    pub fn scale(big_d: i64) -> f64 {
        if big_d == 0 {
            4.0 * PI / 3.0
        } else {
            2.0 * (PI * big_d as f64).sqrt()
        }
    }

    /// The holomorphic part of `scale * harmonic`, for comparison with
    /// `series`.
    pub fn holomorphic_from_expansion(&self) -> BTreeMap<i64, Complex64> {
        let c = Self::scale(self.big_d);
        self.harmonic
            .hol
            .iter()
            .map(|(n, v)| (*n, v * c))
            .collect()
    }

    /// Largest difference between the two assembly routes over `n <= n_max`.
    pub fn route_defect(&self) -> f64 {
        let a = self.holomorphic_from_expansion();
        let keys: std::collections::BTreeSet<i64> =
            a.keys().chain(self.series.coeffs.keys()).copied().collect();
        keys.into_iter()
            .map(|n| {
                let x = a.get(&n).copied().unwrap_or_default();
                (x - self.series.coeff(n)).norm()
            })
            .fold(0.0, f64::max)
    }

    /// `xi_{3/2}` of the harmonic form, as coefficients of a weight 1/2 form.
    pub fn shadow(&self) -> BTreeMap<i64, Complex64> {
        self.harmonic.shadow()
    }

    /// The expected shadow: `f_{-D}/(2 sqrt(pi D))`, or `(3/(4 pi)) theta`
    /// for `D = 0`.
    pub fn expected_shadow_factor(big_d: i64) -> f64 {
        if big_d == 0 {
            3.0 / (4.0 * PI)
        } else {
            1.0 / (2.0 * (PI * big_d as f64).sqrt())
        }
    }
}

/// `b(D, n)` for `D > 0`, `n != D`, `n > 0`, from the explicit formula
/// `2 sqrt(pi D) [ (2 sqrt(n)/sqrt(pi)) db_D(n) - 8 sqrt(pi/D) H(D) (2 sqrt(n)/sqrt(pi)) b_0(n) ]`.
fn mock_coefficient(
    engine: &Engine,
    big_d: i64,
    hd: f64,
    n: i64,
    policy: &TruncationPolicy,
    step: f64,
) -> Result<TruncatedValue<Complex64>> {
    let scale = MockForm::scale(big_d);
    let w = 2.0 * (n as f64).sqrt() / PI.sqrt();
    let corr = 8.0 * (PI / big_d as f64).sqrt() * hd;
    let db = engine.coeff_b_plus_ds(&CoefficientQuery::new(big_d, THREE_HALVES, 4, n, 0.75), policy, step)?;
    let b0 = engine.coeff_b_plus(&CoefficientQuery::new(0, THREE_HALVES, 4, n, 0.75), policy)?;
    let mut out = combine(&[(scale * w, &db.value), (-scale * corr * w, &b0)]);
    if n == big_d {
        out.value += Complex64::new(0.0, -2.0 * PI.sqrt()) * scale;
    }
    Ok(out)
}

/// The mock modular form `g_D = sum_{n >= 0} b(D, n) q^n`, `D >= 0`, with
/// shadow proportional to `f_{-D}`.
///
/// `g_D` is the holomorphic part of `2 sqrt(pi D) h_D` with
/// `h_D = d/ds F_D^+(z, s)|_{3/4} - 8 sqrt(pi/D) H(D) F_0^+(z, 3/4)`, and
/// `g_0` that of `(4 pi/3) F_0^+(z, 3/4)`. The `q^D` coefficient keeps the
/// complex head `-2 sqrt(pi) i` of the derivative.
pub fn g_mock_series(
    engine: &Engine,
    big_d: i64,
    n_max: i64,
    policy: &TruncationPolicy,
    step: f64,
) -> Result<MockForm> {
    check_g_index(big_d, false)?;
    let f0 = engine.expansion_special(0, THREE_HALVES, 4, n_max, policy)?;
    let scale = MockForm::scale(big_d);
    let mut series = QSeries::new(4, THREE_HALVES, true, n_max);
    let mut unconverged = Vec::new();
    let ns: Vec<i64> = (1..=n_max).filter(|&n| THREE_HALVES.in_plus_class(n)).collect();
    if big_d == 0 {
        series.set(0, real(scale), 0.0);
        let rows = per_index(&ns, |n| {
            let b = engine.coeff_b_plus(&CoefficientQuery::new(0, THREE_HALVES, 4, n, 0.75), policy)?;
            Ok(combine(&[(scale * 2.0 * (n as f64).sqrt() / PI.sqrt(), &b)]))
        })?;
        fill(&mut series, &mut unconverged, rows);
        return Ok(MockForm {
            big_d,
            series,
            unconverged,
            harmonic: f0,
        });
    }
    let hd = hurwitz_class_number_f64(big_d)?;
    let corr = 8.0 * (PI / big_d as f64).sqrt() * hd;
    series.set(0, real(-scale * corr), 0.0);
    let rows = per_index(&ns, |n| mock_coefficient(engine, big_d, hd, n, policy, step))?;
    fill(&mut series, &mut unconverged, rows);
    let mut harmonic = engine.expansion_derivative_three_halves(big_d, n_max, policy, step)?;
    harmonic.add_scaled(&f0, real(-corr));
    Ok(MockForm {
        big_d,
        series,
        unconverged,
        harmonic,
    })
}

/// [`g_mock_series`] with the default derivative step.
pub fn g_mock_series_default(
    engine: &Engine,
    big_d: i64,
    n_max: i64,
    policy: &TruncationPolicy,
) -> Result<MockForm> {
    g_mock_series(engine, big_d, n_max, policy, DEFAULT_STEP)
}

/// Zagier's weight 3/2 Eisenstein series
///
/// ```text
/// E(z) = sum H(n) q^n + (1/(16 pi sqrt(y))) sum_{n in Z} beta(4 pi n^2 y) q^{-n^2}
/// ```
///
/// with exact class numbers. In the expansion's normalization the constant
/// `y^{-1/2}` coefficient is `1/(8 pi)` and the `q^{-d}` coefficient for a
/// nonzero square `d` is `sqrt(d)/(4 sqrt(pi))`.
pub fn zagier_eisenstein(n_max: i64) -> Result<HarmonicExpansion> {
    let mut e = HarmonicExpansion::new(THREE_HALVES, 4, n_max);
    for n in 0..=n_max {
        if !THREE_HALVES.in_plus_class(n) {
            continue;
        }
        let h = hurwitz_class_number(n)?;
        let v = *h.numer() as f64 / *h.denom() as f64;
        if v != 0.0 {
            e.add_hol(n, real(v), 0.0);
        }
    }
    e.add_ypow(real(1.0 / (8.0 * PI)), 0.0);
    let mut r = 1i64;
    while r * r <= n_max {
        e.add_nonhol(-r * r, real(r as f64 / (4.0 * PI.sqrt())), 0.0);
        r += 1;
    }
    Ok(e)
}

/// Outcome of comparing `A(D, d)` (from `f_d`) with `-B(D, d)` (from `g_D`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DualityReport {
    pub big_d: i64,
    pub d: i64,
    pub a_value: Complex64,
    pub b_value: Complex64,
    pub a_error: f64,
    pub b_error: f64,
    /// `|A + B| / max(1, |A|)`
    pub defect: f64,
    pub tolerance: f64,
    pub c_used: u64,
    pub converged: bool,
    pub pass: bool,
}

/// Checks `A(D, d) = -B(D, d)`, where `A(D, d)` is the `q^{|D|}` coefficient
/// of `f_d` and `B(D, d)` the `q^{|d|}` coefficient of `g_D`.
pub fn duality_check(
    engine: &Engine,
    big_d: i64,
    d: i64,
    policy: &TruncationPolicy,
    tolerance: f64,
) -> Result<DualityReport> {
    check_g_index(big_d, true)?;
    check_f_index(d)?;
    let a = f_coefficient(engine, d, -big_d, policy)?;
    let b = g_coefficient(engine, big_d, -d, policy)?;
    let defect = (a.value + b.value).norm() / a.value.norm().max(1.0);
    Ok(DualityReport {
        big_d,
        d,
        a_value: a.value,
        b_value: b.value,
        a_error: a.error_estimate,
        b_error: b.error_estimate,
        defect,
        tolerance,
        c_used: a.c_used.max(b.c_used),
        converged: a.converged && b.converged,
        pass: defect <= tolerance,
    })
}

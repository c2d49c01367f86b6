use super::oracle::IntSeries;
use crate::error::{MaassError, Result};
use crate::weight::Weight;
use num_complex::Complex64;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};
use serde_json::{json, Number, Value};
use std::collections::BTreeMap;
use std::io::Write;

/// A truncated q-expansion with per-coefficient error estimates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QSeries {
    pub level: u64,
    pub weight: Weight,
    pub plus_space: bool,
    pub coeffs: BTreeMap<i64, Complex64>,
    pub errors: BTreeMap<i64, f64>,
    pub n_max: i64,
}

impl QSeries {
    pub fn new(level: u64, weight: Weight, plus_space: bool, n_max: i64) -> Self {
        QSeries {
            level,
            weight,
            plus_space,
            coeffs: BTreeMap::new(),
            errors: BTreeMap::new(),
            n_max,
        }
    }

    /// Converts an exact series, keeping exponents up to `n_max`.
    pub fn from_exact(s: &IntSeries, level: u64, weight: Weight, plus_space: bool, n_max: i64) -> Self {
        let mut out = QSeries::new(level, weight, plus_space, n_max);
        for (n, c) in s.terms() {
            if n <= n_max {
                out.set(n, Complex64::new(c.to_f64().unwrap_or(f64::NAN), 0.0), 0.0);
            }
        }
        out
    }

    pub fn set(&mut self, n: i64, v: Complex64, err: f64) {
        self.coeffs.insert(n, v);
        self.errors.insert(n, err);
    }

    pub fn coeff(&self, n: i64) -> Complex64 {
        self.coeffs.get(&n).copied().unwrap_or_default()
    }

    pub fn error(&self, n: i64) -> f64 {
        self.errors.get(&n).copied().unwrap_or(0.0)
    }

    pub fn max_error(&self) -> f64 {
        self.errors.values().fold(0.0, |a, &b| a.max(b))
    }

    /// Fails if a stored coefficient violates the plus-space class.
    pub fn check_plus_space(&self) -> Result<()> {
        if !self.plus_space || self.weight.is_integral() {
            return Ok(());
        }
        for (n, v) in &self.coeffs {
            if *v != Complex64::new(0.0, 0.0) && !self.weight.in_plus_class(*n) {
                return Err(MaassError::PlusSpaceViolation {
                    m: *n,
                    twice_k: self.weight.twice_k,
                });
            }
        }
        Ok(())
    }

    /// Largest distance of a real part from the nearest integer, over the
    /// given exponents.
    pub fn integrality_defect(&self, exponents: impl IntoIterator<Item = i64>) -> f64 {
        exponents
            .into_iter()
            .map(|n| {
                let re = self.coeff(n).re;
                (re - re.round()).abs()
            })
            .fold(0.0, f64::max)
    }

    pub fn to_json(&self) -> Value {
        let coeffs: Vec<Value> = self
            .coeffs
            .iter()
            .map(|(n, v)| json!([n, number(v.re), number(v.im)]))
            .collect();
        let errors: Vec<Value> = self
            .errors
            .iter()
            .map(|(n, e)| json!([n, number(*e)]))
            .collect();
        json!({
            "level": self.level,
            "weight_times_2": self.weight.twice_k,
            "plus_space": self.plus_space,
            "n_max": self.n_max,
            "coeffs": coeffs,
            "error_estimates": errors,
        })
    }

    /// CSV rows `n,re,im,err`, preceded by a comment line.
    pub fn write_csv(&self, w: impl Write) -> Result<()> {
        let mut w = w;
        writeln!(w, "# lossy export; JSON is canonical")
            .map_err(|e| MaassError::InvalidArgument(e.to_string()))?;
        let mut wr = csv::Writer::from_writer(w);
        let io = |e: csv::Error| MaassError::InvalidArgument(e.to_string());
        wr.write_record(["n", "re", "im", "err"]).map_err(io)?;
        for (n, v) in &self.coeffs {
            wr.write_record([
                n.to_string(),
                format_17(v.re),
                format_17(v.im),
                format_17(self.error(*n)),
            ])
            .map_err(io)?;
        }
        wr.flush()
            .map_err(|e| MaassError::InvalidArgument(e.to_string()))?;
        Ok(())
    }
}

/// `x` with 17 significant digits.
pub fn format_17(x: f64) -> String {
    format!("{x:.16e}")
}

/// A JSON number carrying 17 significant digits; non-finite values become
/// strings.
pub fn number(x: f64) -> Value {
    if !x.is_finite() {
        return Value::String(x.to_string());
    }
    format_17(x)
        .parse::<Number>()
        .map(Value::Number)
        .unwrap_or(Value::Null)
}

use crate::args::{
    parse_range, BasisArgs, BasisKind, CoeffArgs, Format, GridArg, KloostermanArgs, OutputArgs, VerifyArgs,
};
use anyhow::{anyhow, bail, Context, Result};
use maass_core::bases::{f_series, format_17, g_mock_series, g_series_neg, number, QSeries};
use maass_core::kloosterman::{kloosterman_sum, KloostermanKey};
use maass_core::poincare::{CoefficientQuery, Engine, TruncatedValue, TruncationPolicy};
use maass_core::verify::{run_suite, Grid, SuiteReport, VerifyOptions, SUITES};
use maass_core::Weight;
use num_complex::Complex64;
use rayon::prelude::*;
use serde_json::{json, Map, Value};
use std::io::Write;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_NOT_CONVERGED: i32 = 2;
pub const EXIT_CHECK_FAILED: i32 = 3;

/// Sieve size for the Kloosterman factorizations; larger moduli fall back to
/// trial division.
fn engine_for(policy: &TruncationPolicy) -> Engine {
    Engine::new((8 * policy.c_max).clamp(1024, 1 << 22))
}

fn sink(out: &OutputArgs) -> Result<Box<dyn Write>> {
    Ok(match &out.out {
        Some(p) => Box::new(std::io::BufWriter::new(
            std::fs::File::create(p).with_context(|| format!("cannot create {}", p.display()))?,
        )),
        None => Box::new(std::io::stdout().lock()),
    })
}

fn stamp(obj: &mut Map<String, Value>, out: &OutputArgs) {
    if !out.reproducible {
        let secs = std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        obj.insert("generated_at".into(), json!(secs));
    }
}

fn write_json(mut obj: Map<String, Value>, out: &OutputArgs) -> Result<()> {
    stamp(&mut obj, out);
    let mut w = sink(out)?;
    serde_json::to_writer_pretty(&mut w, &Value::Object(obj))?;
    writeln!(w)?;
    w.flush()?;
    Ok(())
}

fn policy_json(p: &TruncationPolicy) -> Value {
    json!({
        "c_max": p.c_max,
        "tol": number(p.tol),
        "stability_factor": p.stability_factor,
        "c_start": p.c_start,
    })
}

fn report_unconverged(ns: &[i64]) -> i32 {
    eprintln!("not converged at n = {ns:?}; nothing written (strict mode)");
    EXIT_NOT_CONVERGED
}

pub fn coeff(args: &CoeffArgs, out: &OutputArgs) -> Result<i32> {
    let (a, b) = parse_range(&args.n).map_err(|e| anyhow!(e))?;
    let policy = args.policy.policy();
    let engine = engine_for(&policy);
    let weight = Weight::new(args.twice_k);
    let ns: Vec<i64> = (a..=b)
        .filter(|&n| !args.plus || weight.in_plus_class(n))
        .collect();
    let rows: Vec<(i64, TruncatedValue<Complex64>)> = ns
        .par_iter()
        .map(|&n| {
            let q = CoefficientQuery::new(args.m, weight, args.level, n, args.s);
            let v = if args.plus {
                engine.coeff_b_plus(&q, &policy)
            } else {
                engine.coeff_c(&q, &policy)
            };
            v.map(|v| (n, v))
        })
        .collect::<maass_core::Result<_>>()?;
    let bad: Vec<i64> = rows.iter().filter(|(_, v)| !v.converged).map(|(n, _)| *n).collect();
    if out.strict && !bad.is_empty() {
        return Ok(report_unconverged(&bad));
    }
    match out.format {
        Format::Json => {
            let mut obj = Map::new();
            obj.insert("command".into(), json!("coeff"));
            obj.insert(
                "query".into(),
                json!({
                    "m": args.m,
                    "weight_times_2": args.twice_k,
                    "level": args.level,
                    "s": number(args.s),
                    "plus_space": args.plus,
                }),
            );
            obj.insert("policy".into(), policy_json(&policy));
            let table: Vec<Value> = rows
                .iter()
                .map(|(n, v)| {
                    json!({
                        "n": n,
                        "re": number(v.value.re),
                        "im": number(v.value.im),
                        "error_estimate": number(v.error_estimate),
                        "c_used": v.c_used,
                        "converged": v.converged,
                    })
                })
                .collect();
            obj.insert("rows".into(), Value::Array(table));
            write_json(obj, out)?;
        }
        Format::Csv => {
            let mut w = sink(out)?;
            writeln!(w, "# lossy export; JSON is canonical")?;
            let mut wr = csv::Writer::from_writer(w);
            wr.write_record(["n", "re", "im", "error_estimate", "c_used", "converged"])?;
            for (n, v) in &rows {
                wr.write_record([
                    n.to_string(),
                    format_17(v.value.re),
                    format_17(v.value.im),
                    format_17(v.error_estimate),
                    v.c_used.to_string(),
                    v.converged.to_string(),
                ])?;
            }
            wr.flush()?;
        }
    }
    Ok(EXIT_OK)
}

fn write_series(
    series: &QSeries,
    kind: &str,
    index: i64,
    unconverged: &[i64],
    policy: &TruncationPolicy,
    out: &OutputArgs,
) -> Result<i32> {
    if out.strict && !unconverged.is_empty() {
        return Ok(report_unconverged(unconverged));
    }
    match out.format {
        Format::Json => {
            let Value::Object(mut obj) = series.to_json() else {
                unreachable!()
            };
            obj.insert("basis".into(), json!(kind));
            obj.insert("index".into(), json!(index));
            obj.insert("unconverged".into(), json!(unconverged));
            obj.insert("policy".into(), policy_json(policy));
            write_json(obj, out)?;
        }
        Format::Csv => {
            series.write_csv(sink(out)?)?;
        }
    }
    Ok(EXIT_OK)
}

pub fn basis(args: &BasisArgs, out: &OutputArgs) -> Result<i32> {
    let policy = args.policy.policy();
    let engine = engine_for(&policy);
    match args.kind {
        BasisKind::F => {
            let d = args.d.ok_or_else(|| anyhow!("basis f needs --d"))?;
            let s = f_series(&engine, d, args.nmax, &policy)?;
            write_series(&s.series, "f", d, &s.unconverged, &policy, out)
        }
        BasisKind::G => {
            let d = args.big_d.ok_or_else(|| anyhow!("basis g needs --D"))?;
            if d >= 0 {
                bail!("basis g takes D < 0; use gmock for D >= 0");
            }
            let s = g_series_neg(&engine, d, args.nmax, &policy)?;
            write_series(&s.series, "g", d, &s.unconverged, &policy, out)
        }
        BasisKind::Gmock => {
            let d = args.big_d.ok_or_else(|| anyhow!("basis gmock needs --D"))?;
            let m = g_mock_series(&engine, d, args.nmax, &policy, args.step)?;
            write_series(&m.series, "gmock", d, &m.unconverged, &policy, out)
        }
    }
}

fn suite_json(r: &SuiteReport) -> Value {
    let checks: Vec<Value> = r
        .checks
        .iter()
        .map(|c| {
            let mut o = json!({
                "name": c.name,
                "defect": number(c.defect),
                "tolerance": number(c.tolerance),
                "pass": c.pass,
            });
            if let Some(n) = &c.note {
                o["note"] = json!(n);
            }
            o
        })
        .collect();
    json!({ "suite": r.suite, "pass": r.pass(), "checks": checks })
}

pub fn verify(args: &VerifyArgs, out: &OutputArgs) -> Result<i32> {
    let names: Vec<&str> = if args.suite == "all" {
        SUITES.to_vec()
    } else if SUITES.contains(&args.suite.as_str()) {
        vec![args.suite.as_str()]
    } else {
        bail!("unknown suite {:?}; known: all, {}", args.suite, SUITES.join(", "));
    };
    let policy = args.policy.policy();
    let engine = engine_for(&policy);
    let opts = VerifyOptions {
        policy,
        grid: match args.grid {
            GridArg::Small => Grid::Small,
            GridArg::Full => Grid::Full,
        },
    };
    let reports: Vec<SuiteReport> = names
        .iter()
        .map(|n| run_suite(n, &engine, &opts))
        .collect::<maass_core::Result<_>>()?;
    let pass = reports.iter().all(SuiteReport::pass);
    match out.format {
        Format::Json => {
            let mut obj = Map::new();
            obj.insert("command".into(), json!("verify"));
            obj.insert("pass".into(), json!(pass));
            obj.insert("policy".into(), policy_json(&policy));
            obj.insert("suites".into(), Value::Array(reports.iter().map(suite_json).collect()));
            write_json(obj, out)?;
        }
        Format::Csv => {
            let mut w = sink(out)?;
            writeln!(w, "# lossy export; JSON is canonical")?;
            let mut wr = csv::Writer::from_writer(w);
            wr.write_record(["suite", "check", "defect", "tolerance", "pass"])?;
            for r in &reports {
                for c in &r.checks {
                    wr.write_record([
                        r.suite.clone(),
                        c.name.clone(),
                        format_17(c.defect),
                        format_17(c.tolerance),
                        c.pass.to_string(),
                    ])?;
                }
            }
            wr.flush()?;
        }
    }
    Ok(if pass { EXIT_OK } else { EXIT_CHECK_FAILED })
}

pub fn kloosterman(args: &KloostermanArgs, out: &OutputArgs) -> Result<i32> {
    let (a, b) = parse_range(&args.c).map_err(|e| anyhow!(e))?;
    if a < 1 {
        bail!("moduli must be positive");
    }
    let weight = Weight::new(args.twice_k);
    // half-integral weight sums need 4 | c
    let rows: Vec<(u64, Complex64)> = (a as u64..=b as u64)
        .filter(|c| weight.is_integral() || c % 4 == 0)
        .map(|c| kloosterman_sum(&KloostermanKey::new(weight, args.m, args.n, c)).map(|v| (c, v)))
        .collect::<maass_core::Result<_>>()?;
    match out.format {
        Format::Json => {
            let mut obj = Map::new();
            obj.insert("command".into(), json!("kloosterman"));
            obj.insert(
                "query".into(),
                json!({ "weight_times_2": args.twice_k, "m": args.m, "n": args.n }),
            );
            let table: Vec<Value> = rows
                .iter()
                .map(|(c, v)| json!({ "c": c, "re": number(v.re), "im": number(v.im) }))
                .collect();
            obj.insert("rows".into(), Value::Array(table));
            write_json(obj, out)?;
        }
        Format::Csv => {
            let mut w = sink(out)?;
            writeln!(w, "# lossy export; JSON is canonical")?;
            let mut wr = csv::Writer::from_writer(w);
            wr.write_record(["c", "re", "im"])?;
            for (c, v) in &rows {
                wr.write_record([c.to_string(), format_17(v.re), format_17(v.im)])?;
            }
            wr.flush()?;
        }
    }
    Ok(EXIT_OK)
}

//! Canonical report serialization.

use std::fmt::Write as _;

use serde_json::{json, Map, Value};

use crate::verify::{CheckResult, VerificationReport};

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Text,
}

fn num(x: f64) -> Value {
    // non-finite residuals (errored checks) have no JSON number
    serde_json::Number::from_f64(x).map_or(Value::Null, Value::Number)
}

fn check_json(c: &CheckResult) -> Value {
    json!({
        "name": c.name,
        "residual_max": num(c.residual_max),
        "residual_mean": num(c.residual_mean),
        "tolerance": num(c.tolerance),
        "pass": c.pass,
        "points": c.points,
        "notes": c.notes,
    })
}

pub fn report_json(r: &VerificationReport) -> Value {
    let ledger: Map<String, Value> = r.sign_ledger.iter().map(|(k, v)| (k.clone(), Value::String(v.clone()))).collect();
    json!({
        "model": r.model_name,
        "seed": r.seed,
        "points": r.points,
        "modes": r.mode_cutoff,
        "amplitude": num(r.amplitude),
        "engine_version": r.engine_version,
        "sign_ledger": ledger,
        "checks": r.checks.iter().map(check_json).collect::<Vec<_>>(),
    })
}

fn fmt_residual(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.3e}")
    } else {
        "error".to_string()
    }
}

fn text_table(r: &VerificationReport) -> String {
    let mut out = String::new();
    writeln!(
        out,
        "model {}  seed {}  points {}  modes {}  amplitude {}  engine {}",
        r.model_name, r.seed, r.points, r.mode_cutoff, r.amplitude, r.engine_version
    )
    .unwrap();
    let width = r.checks.iter().map(|c| c.name.len()).max().unwrap_or(5).max(5);
    writeln!(out, "{:<width$}  {:<4}  {:>10}  {:>10}  {:>10}  {:>6}", "check", "pass", "max", "mean", "tol", "points").unwrap();
    for c in &r.checks {
        writeln!(
            out,
            "{:<width$}  {:<4}  {:>10}  {:>10}  {:>10.1e}  {:>6}",
            c.name,
            if c.pass { "ok" } else { "FAIL" },
            fmt_residual(c.residual_max),
            fmt_residual(c.residual_mean),
            c.tolerance,
            c.points
        )
        .unwrap();
    }
    writeln!(out, "\nnotes:").unwrap();
    for c in r.checks.iter().filter(|c| !c.notes.is_empty()) {
        writeln!(out, "  {}: {}", c.name, c.notes).unwrap();
    }
    writeln!(out, "\nsign ledger:").unwrap();
    for (k, v) in &r.sign_ledger {
        writeln!(out, "  {k} = {v}").unwrap();
    }
    let failed = r.checks.iter().filter(|c| !c.pass).count();
    writeln!(out, "\n{} of {} checks passed", r.checks.len() - failed, r.checks.len()).unwrap();
    out
}

/// Rebuilds objects with keys inserted in sorted order, so the output does
/// not depend on which map backs `serde_json::Map`.
fn canonical(v: Value) -> Value {
    match v {
        Value::Object(m) => {
            let mut entries: Vec<(String, Value)> = m.into_iter().collect();
            entries.sort_by(|a, b| a.0.cmp(&b.0));
            Value::Object(entries.into_iter().map(|(k, v)| (k, canonical(v))).collect())
        }
        Value::Array(a) => Value::Array(a.into_iter().map(canonical).collect()),
        other => other,
    }
}

/// JSON: sorted keys, two-space indent, shortest round-trip floats, trailing newline.
pub fn emit_report(r: &VerificationReport, format: Format) -> Vec<u8> {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&canonical(report_json(r))).expect("report serializes");
            s.push('\n');
            s.into_bytes()
        }
        Format::Text => text_table(r).into_bytes(),
    }
}

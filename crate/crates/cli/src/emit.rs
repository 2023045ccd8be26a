//! Report rendering.
//!
//! Canonical JSON is produced through `serde_json::Value`, whose object maps
//! sort keys, so identical inputs yield byte-identical stdout. Timing is
//! observational, not part of a report's identity: `elapsed_ms` is attached
//! only to `--out` file writes.

use std::fmt::Write as _;
use std::path::Path;
use std::time::Instant;

use coinv_core::{CoinvariantReport, FockVector, LaurentPoly};
use serde::Serialize;
use serde_json::{json, Value};

use crate::args::Format;
use crate::Failure;

#[derive(Serialize)]
pub struct LaurentOut {
    pub terms: Vec<(i64, String)>,
    pub trunc: Option<i64>,
}

pub fn laurent_out(poly: &LaurentPoly) -> LaurentOut {
    LaurentOut {
        terms: poly.terms().map(|(e, c)| (e, c.to_string())).collect(),
        trunc: poly.trunc(),
    }
}

/// A module vector as `[[ [i, n], ... ], "coeff"]` pairs with 1-based
/// direction indices.
pub fn fock_out(vector: &FockVector) -> Vec<(Vec<(usize, i64)>, String)> {
    vector
        .terms()
        .map(|(mono, coeff)| {
            let factors = mono.factors().iter().map(|&(n, i)| (i + 1, n)).collect();
            (factors, coeff.to_string())
        })
        .collect()
}

#[derive(Serialize)]
pub struct ReportOut {
    pub filtered_dims: Vec<u64>,
    pub stabilized: Vec<bool>,
    pub generator_count: u64,
    pub rank: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle_match: Option<bool>,
}

impl ReportOut {
    pub fn new(report: &CoinvariantReport) -> Self {
        ReportOut {
            filtered_dims: report.filtered_dims.clone(),
            stabilized: report.stabilized.clone(),
            generator_count: report.generator_count,
            rank: report.rank,
            oracle_match: None,
        }
    }
}

pub fn to_value<T: Serialize>(value: &T) -> Result<Value, Failure> {
    serde_json::to_value(value).map_err(|e| Failure::Config(format!("serialization: {e}")))
}

/// Canonical string form of a value: pretty JSON with sorted keys.
pub fn canonical_string(value: &Value) -> String {
    serde_json::to_string_pretty(value).expect("JSON values always serialize")
}

pub fn report_table(report: &ReportOut) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{:>6}  {:>6}  {}", "degree", "dim", "stabilized");
    for (n, (dim, stab)) in report.filtered_dims.iter().zip(&report.stabilized).enumerate() {
        let _ = writeln!(out, "{n:>6}  {dim:>6}  {}", if *stab { "yes" } else { "no" });
    }
    let _ = writeln!(out, "generators  {}", report.generator_count);
    let _ = writeln!(out, "rank        {}", report.rank);
    if let Some(matched) = report.oracle_match {
        let _ = writeln!(out, "oracle      {}", if matched { "match" } else { "MISMATCH" });
    }
    out
}

/// Prints the canonical report and, if requested, writes it to a file with
/// `elapsed_ms` attached.
pub fn deliver(
    canonical: Value,
    table: String,
    format: Format,
    out: Option<&Path>,
    started: Instant,
) -> Result<(), Failure> {
    match format {
        Format::Json => println!("{}", canonical_string(&canonical)),
        Format::Table => print!("{table}"),
    }
    if let Some(path) = out {
        let mut timed = canonical;
        if let Value::Object(ref mut map) = timed {
            map.insert("elapsed_ms".into(), json!(started.elapsed().as_millis() as u64));
        }
        std::fs::write(path, canonical_string(&timed) + "\n")
            .map_err(|e| Failure::Config(format!("writing {}: {e}", path.display())))?;
    }
    Ok(())
}

//! CSV and JSON emitters and the moment-table readers.
//!
//! Every JSON document carries `"schema": "1"`.

use std::io::{Read, Write};
use std::path::Path;

use fockpsi_core::criteria::{Condition, Verdict};
use fockpsi_core::{Complex64, KernelValue, MomentTable, ResidualReport, TruncatedOperator};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

pub const SCHEMA: &str = "1";

/// Column header of moment CSV files.
pub const MOMENTS_HEADER: [&str; 3] = ["r", "c_r", "err_r"];

#[derive(Debug)]
pub struct FormatError(pub String);

impl std::fmt::Display for FormatError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for FormatError {}

impl From<csv::Error> for FormatError {
    fn from(e: csv::Error) -> Self {
        FormatError(e.to_string())
    }
}

impl From<serde_json::Error> for FormatError {
    fn from(e: serde_json::Error) -> Self {
        FormatError(e.to_string())
    }
}

impl From<std::io::Error> for FormatError {
    fn from(e: std::io::Error) -> Self {
        FormatError(e.to_string())
    }
}

#[derive(Debug, Serialize, Deserialize)]
struct MomentRow {
    r: usize,
    c_r: f64,
    err_r: f64,
}

#[derive(Debug, Serialize, Deserialize)]
struct MomentsDoc {
    schema: String,
    weight: String,
    tol: f64,
    moments: Vec<MomentRow>,
}

fn rows(m: &MomentTable) -> impl Iterator<Item = MomentRow> + '_ {
    m.values().iter().zip(m.errors()).enumerate().map(|(r, (&c_r, &err_r))| MomentRow { r, c_r, err_r })
}

pub fn write_moments_csv<W: Write>(m: &MomentTable, out: W) -> Result<(), FormatError> {
    let mut w = csv::Writer::from_writer(out);
    for row in rows(m) {
        w.serialize(row)?;
    }
    w.flush()?;
    Ok(())
}

pub fn moments_json(m: &MomentTable) -> Value {
    let doc = MomentsDoc {
        schema: SCHEMA.into(),
        weight: m.weight_name().into(),
        tol: m.tol(),
        moments: rows(m).collect(),
    };
    serde_json::to_value(doc).expect("moment rows are plain numbers")
}

fn table(weight: String, tol: f64, rows: Vec<MomentRow>) -> Result<MomentTable, FormatError> {
    if let Some((i, row)) = rows.iter().enumerate().find(|(i, row)| row.r != *i) {
        return Err(FormatError(format!("row {i} has r = {}, expected consecutive r from 0", row.r)));
    }
    let (c, err) = rows.into_iter().map(|row| (row.c_r, row.err_r)).unzip();
    MomentTable::from_values(weight, c, err, tol).map_err(|e| FormatError(e.to_string()))
}

pub fn read_moments_csv<R: Read>(input: R, weight: &str, tol: f64) -> Result<MomentTable, FormatError> {
    let mut rdr = csv::Reader::from_reader(input);
    let header: Vec<String> = rdr.headers()?.iter().map(|h| h.trim().to_string()).collect();
    if header != MOMENTS_HEADER {
        return Err(FormatError(format!("expected header r,c_r,err_r, found {}", header.join(","))));
    }
    let rows = rdr.deserialize().collect::<Result<Vec<MomentRow>, _>>()?;
    table(weight.into(), tol, rows)
}

pub fn read_moments_json<R: Read>(input: R) -> Result<MomentTable, FormatError> {
    let doc: MomentsDoc = serde_json::from_reader(input)?;
    if doc.schema != SCHEMA {
        return Err(FormatError(format!("unsupported schema `{}`", doc.schema)));
    }
    table(doc.weight, doc.tol, doc.moments)
}

/// Reads JSON when the extension is `.json`, CSV otherwise.
pub fn read_moments_file(path: &Path, weight: &str, tol: f64) -> Result<MomentTable, FormatError> {
    let file = std::fs::File::open(path)
        .map_err(|e| FormatError(format!("cannot open moments file {}: {e}", path.display())))?;
    let reader = std::io::BufReader::new(file);
    if path.extension().is_some_and(|e| e.eq_ignore_ascii_case("json")) {
        read_moments_json(reader)
    } else {
        read_moments_csv(reader, weight, tol)
    }
}

fn complex(z: Complex64) -> Value {
    json!([z.re, z.im])
}

/// JSON has no infinities; unbounded residuals are written as `null`.
fn real(x: f64) -> Value {
    if x.is_finite() {
        json!(x)
    } else {
        Value::Null
    }
}

pub fn kernel_json(value: &KernelValue) -> Value {
    json!({
        "schema": SCHEMA,
        "value": complex(value.value),
        "tail_bound": real(value.tail_bound),
        "terms": value.terms,
    })
}

fn condition_json(c: &Condition) -> Value {
    json!({ "name": c.name, "passed": c.passed, "residual": real(c.residual), "threshold": real(c.threshold) })
}

pub fn verdict_json(v: &Verdict) -> Value {
    json!({
        "schema": SCHEMA,
        "theorem": v.theorem.as_str(),
        "satisfied": v.satisfied,
        "necessary_only": v.necessary_only,
        "conditions_hold": v.conditions_hold(),
        "conditions": v.conditions.iter().map(condition_json).collect::<Vec<_>>(),
        "notes": v.notes,
        "seed": v.seed,
    })
}

/// `entries[i][j]` is the coefficient of basis monomial `index[i]` in the image of `index[j]`.
pub fn matrix_json(t: &TruncatedOperator) -> Value {
    let m = t.matrix();
    let entries: Vec<Vec<Value>> =
        (0..m.nrows()).map(|i| (0..m.ncols()).map(|j| complex(m[(i, j)])).collect()).collect();
    json!({
        "schema": SCHEMA,
        "n": t.n(),
        "N": t.max_degree(),
        "guard": t.guard(),
        "index": t.index().iter().map(|a| a.exponents().to_vec()).collect::<Vec<_>>(),
        "entries": entries,
    })
}

/// Long format: `row,col,re,im` with row and column as `e1 e2 ..` exponent strings.
pub fn write_matrix_csv<W: Write>(t: &TruncatedOperator, out: W) -> Result<(), FormatError> {
    let label = |k: usize| t.index()[k].exponents().iter().map(u32::to_string).collect::<Vec<_>>().join(" ");
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["row", "col", "re", "im"])?;
    let m = t.matrix();
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            let z = m[(i, j)];
            w.write_record([label(i), label(j), z.re.to_string(), z.im.to_string()])?;
        }
    }
    w.flush()?;
    Ok(())
}

pub fn residual_json(r: &ResidualReport, threshold: f64) -> Value {
    json!({
        "schema": SCHEMA,
        "name": r.name,
        "max_residual": real(r.max_residual),
        "threshold": threshold,
        "passed": r.max_residual <= threshold,
        "points_tested": r.points_tested,
        "seed": r.seed,
    })
}

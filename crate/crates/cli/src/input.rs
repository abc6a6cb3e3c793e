//! JSON documents: matrix polynomials and isometries.
//!
//! Complex numbers are `[re, im]` pairs. Each part is a JSON number or a
//! hex-float string such as `"0x1.8p1"`, so exact values survive a round trip.

use std::path::Path;

use polyrange::matpoly::MatrixPolynomial;
use polyrange::numkit::{orthonormality_defect, CMatrix, Isometry};
use polyrange::C64;
use serde_json::{json, Value};

use crate::error::{CliError, CliResult};

/// Isometries within this defect are re-orthonormalized; beyond it they are
/// rejected.
pub const ISOMETRY_REPAIR_TOL: f64 = 1e-6;

pub fn read_json(path: &Path) -> CliResult<Value> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::NoInput {
        path: path.to_path_buf(),
        source,
    })?;
    serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("{}: malformed JSON: {e}", path.display())))
}

fn usage(field: &str, what: impl std::fmt::Display) -> CliError {
    CliError::Usage(format!("{field}: {what}"))
}

fn real(v: &Value, field: &str) -> CliResult<f64> {
    let x = match v {
        Value::Number(n) => n.as_f64().ok_or_else(|| usage(field, "number out of range"))?,
        Value::String(s) => parse_hex(s).ok_or_else(|| usage(field, format!("cannot parse {s:?} as a hex float")))?,
        _ => return Err(usage(field, "expected a number or a hex-float string")),
    };
    if !x.is_finite() {
        return Err(usage(field, "value is not finite"));
    }
    Ok(x)
}

fn parse_hex(s: &str) -> Option<f64> {
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s.strip_prefix('+').unwrap_or(s)),
    };
    let x = hexf_parse::parse_hexf64(body, false).ok()?;
    Some(if neg { -x } else { x })
}

fn complex(v: &Value, field: &str) -> CliResult<C64> {
    match v.as_array().map(Vec::as_slice) {
        Some([re, im]) => Ok(C64::new(
            real(re, &format!("{field}[0]"))?,
            real(im, &format!("{field}[1]"))?,
        )),
        _ => Err(usage(field, "expected a [re, im] pair")),
    }
}

fn usize_field(doc: &Value, key: &str) -> CliResult<usize> {
    doc.get(key)
        .ok_or_else(|| usage(key, "missing"))?
        .as_u64()
        .map(|x| x as usize)
        .ok_or_else(|| usage(key, "expected a non-negative integer"))
}

fn matrix(v: &Value, rows: usize, cols: usize, field: &str) -> CliResult<CMatrix> {
    let r = v.as_array().ok_or_else(|| usage(field, "expected an array of rows"))?;
    if r.len() != rows {
        return Err(usage(field, format!("expected {rows} rows, found {}", r.len())));
    }
    let mut data = Vec::with_capacity(rows * cols);
    for (i, row) in r.iter().enumerate() {
        let f = format!("{field}[{i}]");
        let entries = row
            .as_array()
            .ok_or_else(|| usage(&f, "expected an array of entries"))?;
        if entries.len() != cols {
            return Err(usage(&f, format!("expected {cols} entries, found {}", entries.len())));
        }
        for (j, e) in entries.iter().enumerate() {
            data.push(complex(e, &format!("{f}[{j}]"))?);
        }
    }
    Ok(CMatrix::from_row_major(rows, cols, data)?)
}

/// Parses `{"n": n, "m": m, "coefficients": [A_0, …, A_m]}`.
pub fn polynomial_from_json(doc: &Value) -> CliResult<MatrixPolynomial> {
    let n = usize_field(doc, "n")?;
    let m = usize_field(doc, "m")?;
    if n == 0 {
        return Err(usage("n", "must be at least 1"));
    }
    let list = doc
        .get("coefficients")
        .ok_or_else(|| usage("coefficients", "missing"))?
        .as_array()
        .ok_or_else(|| usage("coefficients", "expected an array of matrices"))?;
    if list.len() != m + 1 {
        return Err(usage(
            "coefficients",
            format!("expected m+1 = {} matrices, found {}", m + 1, list.len()),
        ));
    }
    let coeffs = list
        .iter()
        .enumerate()
        .map(|(j, a)| matrix(a, n, n, &format!("coefficients[{j}]")))
        .collect::<CliResult<Vec<_>>>()?;
    if coeffs[m].frobenius_norm() == 0.0 {
        return Err(usage(&format!("coefficients[{m}]"), "leading coefficient is all zero"));
    }
    Ok(MatrixPolynomial::new(coeffs)?)
}

pub fn read_polynomial(path: &Path) -> CliResult<MatrixPolynomial> {
    polynomial_from_json(&read_json(path)?)
}

fn matrix_to_json(a: &CMatrix) -> Value {
    Value::Array(
        (0..a.rows())
            .map(|i| Value::Array((0..a.cols()).map(|j| json!([a[(i, j)].re, a[(i, j)].im])).collect()))
            .collect(),
    )
}

/// Serializes with shortest round-trip decimals.
pub fn polynomial_to_json(l: &MatrixPolynomial) -> Value {
    json!({
        "n": l.n(),
        "m": l.degree(),
        "coefficients": l.coeffs().iter().map(matrix_to_json).collect::<Vec<_>>(),
    })
}

/// Parses `{"rows": n, "cols": k, "entries": [[re, im], …]}` (row-major).
/// Columns with a small orthonormality defect are repaired, larger defects
/// are refused.
pub fn isometry_from_json(doc: &Value) -> CliResult<Isometry> {
    let rows = usize_field(doc, "rows")?;
    let cols = usize_field(doc, "cols")?;
    if cols == 0 || cols > rows {
        return Err(usage("cols", format!("need 1 <= cols <= rows, got {cols} and {rows}")));
    }
    let entries = doc
        .get("entries")
        .ok_or_else(|| usage("entries", "missing"))?
        .as_array()
        .ok_or_else(|| usage("entries", "expected an array of [re, im] pairs"))?;
    if entries.len() != rows * cols {
        return Err(usage(
            "entries",
            format!("expected {} pairs, found {}", rows * cols, entries.len()),
        ));
    }
    let data = entries
        .iter()
        .enumerate()
        .map(|(i, e)| complex(e, &format!("entries[{i}]")))
        .collect::<CliResult<Vec<_>>>()?;
    let q = CMatrix::from_row_major(rows, cols, data)?;
    let defect = orthonormality_defect(&q);
    if defect > ISOMETRY_REPAIR_TOL {
        return Err(CliError::Data(format!(
            "isometry columns are not orthonormal (defect {defect:e} > {ISOMETRY_REPAIR_TOL:e})"
        )));
    }
    Ok(Isometry::orthonormalize(&q)?)
}

pub fn read_isometry(path: &Path) -> CliResult<Isometry> {
    isometry_from_json(&read_json(path)?)
}

//! JSON file formats: complex entries as [re, im], matrices as row-major
//! nested arrays, frames as lists of column vectors.

use holonomy::bundle::{Frame, Gate};
use holonomy::lambda::PulseEnvelope;
use holonomy::linalg::{c, CMat};
use holonomy::propagate::{HamiltonianSchedule, Interpolation};
use holonomy::{Error, Result};
use serde_json::{json, Value};

pub fn read_json(path: &str) -> Result<Value> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Validation(format!("cannot read {path}: {e}")))?;
    serde_json::from_str(&text).map_err(|e| Error::Validation(format!("bad JSON in {path}: {e}")))
}

fn parse_complex(v: &Value, context: &str) -> Result<holonomy::linalg::C64> {
    let pair = v
        .as_array()
        .filter(|a| a.len() == 2)
        .ok_or_else(|| Error::Validation(format!("{context}: complex entries are [re, im]")))?;
    let re = pair[0]
        .as_f64()
        .ok_or_else(|| Error::Validation(format!("{context}: non-numeric real part")))?;
    let im = pair[1]
        .as_f64()
        .ok_or_else(|| Error::Validation(format!("{context}: non-numeric imaginary part")))?;
    Ok(c(re, im))
}

/// Row-major nested array of [re, im] pairs.
pub fn parse_matrix(v: &Value, context: &str) -> Result<CMat> {
    let rows = v
        .as_array()
        .ok_or_else(|| Error::Validation(format!("{context}: matrix must be an array of rows")))?;
    if rows.is_empty() {
        return Err(Error::Validation(format!("{context}: matrix has no rows")));
    }
    let ncols = rows[0]
        .as_array()
        .map(|r| r.len())
        .ok_or_else(|| Error::Validation(format!("{context}: rows must be arrays")))?;
    let mut out = CMat::zeros(rows.len(), ncols);
    for (i, row) in rows.iter().enumerate() {
        let entries = row
            .as_array()
            .filter(|r| r.len() == ncols)
            .ok_or_else(|| Error::Validation(format!("{context}: row {i} has ragged length")))?;
        for (j, entry) in entries.iter().enumerate() {
            out[(i, j)] = parse_complex(entry, context)?;
        }
    }
    Ok(out)
}

/// A frame file is a list of column vectors, each a list of [re, im] pairs.
pub fn parse_frame(v: &Value, context: &str) -> Result<Frame> {
    let columns = v
        .as_array()
        .ok_or_else(|| Error::Validation(format!("{context}: frame must be a list of columns")))?;
    if columns.is_empty() {
        return Err(Error::Validation(format!("{context}: frame has no columns")));
    }
    let d = columns[0]
        .as_array()
        .map(|col| col.len())
        .ok_or_else(|| Error::Validation(format!("{context}: columns must be arrays")))?;
    let mut m = CMat::zeros(d, columns.len());
    for (j, col) in columns.iter().enumerate() {
        let entries = col
            .as_array()
            .filter(|col| col.len() == d)
            .ok_or_else(|| Error::Validation(format!("{context}: column {j} has ragged length")))?;
        for (i, entry) in entries.iter().enumerate() {
            m[(i, j)] = parse_complex(entry, context)?;
        }
    }
    Frame::new(m)
}

/// Schedule files: either {"tau": t, "matrix": m} for a constant field or
/// {"interpolation": "linear"|"piecewise-constant", "samples": [{"time": t, "matrix": m}, ...]}.
pub fn parse_schedule(v: &Value, context: &str) -> Result<HamiltonianSchedule> {
    let obj = v
        .as_object()
        .ok_or_else(|| Error::Validation(format!("{context}: schedule must be an object")))?;
    if let Some(tau) = obj.get("tau") {
        let tau = tau
            .as_f64()
            .ok_or_else(|| Error::Validation(format!("{context}: tau must be a number")))?;
        let matrix = obj
            .get("matrix")
            .ok_or_else(|| Error::Validation(format!("{context}: constant schedule needs a matrix")))?;
        return HamiltonianSchedule::constant(parse_matrix(matrix, context)?, tau);
    }
    let interpolation = match obj.get("interpolation").and_then(|x| x.as_str()) {
        Some("linear") | None => Interpolation::Linear,
        Some("piecewise-constant") => Interpolation::PiecewiseConstant,
        Some(other) => {
            return Err(Error::Validation(format!(
                "{context}: unknown interpolation {other:?}"
            )))
        }
    };
    let samples = obj
        .get("samples")
        .and_then(|s| s.as_array())
        .ok_or_else(|| Error::Validation(format!("{context}: sampled schedule needs samples")))?;
    let mut parsed = Vec::with_capacity(samples.len());
    for (i, sample) in samples.iter().enumerate() {
        let time = sample
            .get("time")
            .and_then(|t| t.as_f64())
            .ok_or_else(|| Error::Validation(format!("{context}: sample {i} lacks a time")))?;
        let matrix = sample
            .get("matrix")
            .ok_or_else(|| Error::Validation(format!("{context}: sample {i} lacks a matrix")))?;
        parsed.push((time, parse_matrix(matrix, context)?));
    }
    HamiltonianSchedule::from_samples(parsed, interpolation)
}

/// Envelope files: {"times": [...], "values": [...]}.
pub fn parse_envelope(v: &Value, context: &str) -> Result<PulseEnvelope> {
    let times = v
        .get("times")
        .and_then(|t| t.as_array())
        .ok_or_else(|| Error::Validation(format!("{context}: envelope needs a times array")))?;
    let values = v
        .get("values")
        .and_then(|t| t.as_array())
        .ok_or_else(|| Error::Validation(format!("{context}: envelope needs a values array")))?;
    let times: Option<Vec<f64>> = times.iter().map(|x| x.as_f64()).collect();
    let values: Option<Vec<f64>> = values.iter().map(|x| x.as_f64()).collect();
    match (times, values) {
        (Some(t), Some(v)) => PulseEnvelope::from_samples(t, v),
        _ => Err(Error::Validation(format!("{context}: envelope entries must be numbers"))),
    }
}

/// A gate argument is a catalog key or `@file.json` holding a unitary matrix
/// (either the bare nested array or {"matrix": ...}).
pub fn resolve_gate(spec: &str) -> Result<Gate> {
    if let Some(path) = spec.strip_prefix('@') {
        let value = read_json(path)?;
        let matrix = match &value {
            Value::Array(_) => parse_matrix(&value, path)?,
            Value::Object(obj) => parse_matrix(
                obj.get("matrix")
                    .ok_or_else(|| Error::Validation(format!("{path}: gate file needs a matrix")))?,
                path,
            )?,
            _ => return Err(Error::Validation(format!("{path}: gate file must hold a matrix"))),
        };
        Gate::in_standard_basis(matrix)
    } else {
        holonomy::bounds::named_gate(spec)
    }
}

pub fn resolve_frame(spec: &str) -> Result<Frame> {
    let path = spec.strip_prefix('@').ok_or_else(|| {
        Error::Validation(format!("frame argument must be @file.json, got {spec:?}"))
    })?;
    parse_frame(&read_json(path)?, path)
}

pub fn resolve_schedule(spec: &str) -> Result<HamiltonianSchedule> {
    let path = spec.strip_prefix('@').ok_or_else(|| {
        Error::Validation(format!("hamiltonian argument must be @file.json, got {spec:?}"))
    })?;
    parse_schedule(&read_json(path)?, path)
}

/// Envelope argument: `square`, `sin2`, or `@file.json`; tau and area apply to
/// the named shapes.
pub fn resolve_envelope(spec: &str, tau: f64, area: f64) -> Result<PulseEnvelope> {
    match spec {
        "square" => PulseEnvelope::square(tau, area),
        "sin2" => PulseEnvelope::sin_squared(tau, area),
        other => {
            let path = other.strip_prefix('@').ok_or_else(|| {
                Error::Validation(format!(
                    "envelope must be square, sin2, or @file.json, got {other:?}"
                ))
            })?;
            parse_envelope(&read_json(path)?, path)
        }
    }
}

pub fn matrix_value(m: &CMat) -> Value {
    let rows: Vec<Value> = (0..m.nrows())
        .map(|i| {
            let row: Vec<Value> = (0..m.ncols()).map(|j| json!([m[(i, j)].re, m[(i, j)].im])).collect();
            Value::Array(row)
        })
        .collect();
    Value::Array(rows)
}

pub fn frame_value(f: &Frame) -> Value {
    let m = f.matrix();
    let cols: Vec<Value> = (0..m.ncols())
        .map(|j| {
            let col: Vec<Value> = (0..m.nrows()).map(|i| json!([m[(i, j)].re, m[(i, j)].im])).collect();
            Value::Array(col)
        })
        .collect();
    Value::Array(cols)
}

/// Ratios can be +inf (zero bound, positive length) or NaN (degenerate loop);
/// JSON numbers cannot hold either, so they serialize as strings.
pub fn ratio_value(ratio: f64) -> Value {
    if ratio.is_nan() {
        Value::String("nan".into())
    } else if ratio.is_infinite() {
        Value::String(if ratio > 0.0 { "inf" } else { "-inf" }.into())
    } else {
        json!(ratio)
    }
}

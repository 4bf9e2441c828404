//! JSON schema for process specifications and the named families.
//!
//! ```json
//! {"schema_version": 1, "kind": "family", "family": "stable", "alpha": 0.5}
//! {"kind": "triplet", "gamma": 1.0, "a": 0.0,
//!  "nu": [{"type": "power", "coeff": 1.0, "alpha": 0.5, "upper": 1.0, "side": "positive"}]}
//! {"kind": "subordinator", "laplace": {"family": "log", "alpha": 1.0}}
//! {"kind": "product", "dimension": 2, "direction": [1, 0],
//!  "y": [{"at": [0, 1], "mass": 1}], "z": {"kind": "family", "family": "brownian"}}
//! {"kind": "space_time", "x": {"kind": "family", "family": "brownian"}}
//! ```

use serde_json::Value;

use super::laplace::{LaplaceExponent, LaplaceFamily};
use super::measure::{JumpLaw, MeasurePart};
use super::spec::{LevyTriplet, ProcessSpec, ProductSpec};
use crate::error::{Error, Result};

pub const SCHEMA_VERSION: u32 = 1;

fn bad(msg: impl Into<String>) -> Error {
    Error::InvalidSpec(msg.into())
}

fn num(v: &Value, key: &str, default: Option<f64>) -> Result<f64> {
    match v.get(key) {
        Some(x) => x.as_f64().ok_or_else(|| bad(format!("field '{key}' must be a number"))),
        None => default.ok_or_else(|| bad(format!("missing field '{key}'"))),
    }
}

fn vector(v: Option<&Value>, d: usize, key: &str) -> Result<Vec<f64>> {
    match v {
        None => Ok(vec![0.0; d]),
        Some(Value::Number(n)) if d == 1 => Ok(vec![n.as_f64().unwrap()]),
        Some(Value::Array(a)) => a.iter().map(|x| x.as_f64().ok_or_else(|| bad(format!("'{key}' entries must be numbers")))).collect(),
        _ => Err(bad(format!("'{key}' must be a number (d = 1) or an array"))),
    }
}

fn matrix(v: Option<&Value>, d: usize) -> Result<Vec<Vec<f64>>> {
    match v {
        None => Ok(vec![vec![0.0; d]; d]),
        Some(Value::Number(n)) => {
            let s = n.as_f64().unwrap();
            Ok((0..d).map(|i| (0..d).map(|j| if i == j { s } else { 0.0 }).collect()).collect())
        }
        Some(Value::Array(rows)) => rows.iter().map(|r| vector(Some(r), d, "a")).collect(),
        _ => Err(bad("'a' must be a number (multiple of the identity) or a matrix")),
    }
}

/// Parses a JSON document into a validated spec.
pub fn parse_spec(text: &str) -> Result<ProcessSpec> {
    let v: Value = serde_json::from_str(text)?;
    spec_from_value(&v)
}

pub fn spec_from_value(v: &Value) -> Result<ProcessSpec> {
    if let Some(sv) = v.get("schema_version") {
        if sv.as_u64() != Some(SCHEMA_VERSION as u64) {
            return Err(bad(format!("unsupported schema_version {sv}; expected {SCHEMA_VERSION}")));
        }
    }
    let kind = v.get("kind").and_then(Value::as_str).ok_or_else(|| bad("missing string field 'kind'"))?;
    let spec = match kind {
        "triplet" => {
            let d = v.get("dimension").and_then(Value::as_u64).unwrap_or(1) as usize;
            let nu: Vec<MeasurePart> = match v.get("nu") {
                None | Some(Value::Null) => vec![],
                Some(x) => serde_json::from_value(x.clone()).map_err(|e| bad(format!("nu: {e}")))?,
            };
            ProcessSpec::Triplet(LevyTriplet { dimension: d, gamma: vector(v.get("gamma"), d, "gamma")?, a: matrix(v.get("a"), d)?, nu })
        }
        "family" => {
            let name = v.get("family").and_then(Value::as_str).ok_or_else(|| bad("missing 'family'"))?;
            let params = v.get("params").unwrap_or(v);
            family(name, params)?
        }
        "subordinator" => {
            let l = v.get("laplace").ok_or_else(|| bad("missing 'laplace'"))?;
            let laplace: LaplaceExponent = serde_json::from_value(l.clone()).map_err(|e| bad(format!("laplace: {e}")))?;
            ProcessSpec::Subordinator { laplace }
        }
        "product" => {
            let d = v.get("dimension").and_then(Value::as_u64).ok_or_else(|| bad("product needs 'dimension'"))? as usize;
            let direction = vector(v.get("direction"), d, "direction")?;
            let y = match v.get("y") {
                None => vec![],
                Some(x) => serde_json::from_value(x.clone()).map_err(|e| bad(format!("y: {e}")))?,
            };
            let z = spec_from_value(v.get("z").ok_or_else(|| bad("product needs 'z'"))?)?;
            ProcessSpec::Product(ProductSpec { dimension: d, direction, y, z: Box::new(z) })
        }
        "space_time" => {
            let x = spec_from_value(v.get("x").ok_or_else(|| bad("space_time needs 'x'"))?)?;
            ProcessSpec::SpaceTime { x: Box::new(x) }
        }
        other => return Err(bad(format!("unknown kind '{other}'"))),
    };
    spec.validate()?;
    Ok(spec)
}

/// Named families. Parameters are read from `p` with documented defaults.
pub fn family(name: &str, p: &Value) -> Result<ProcessSpec> {
    let d = p.get("dimension").and_then(Value::as_u64).unwrap_or(1) as usize;
    let drift = num(p, "drift", Some(0.0))?;
    let sub = |family: LaplaceFamily| -> Result<ProcessSpec> {
        Ok(ProcessSpec::Subordinator { laplace: LaplaceExponent { family, drift, sbf_shift: p.get("sbf_shift").and_then(Value::as_f64) } })
    };
    let spec = match name {
        "brownian" => {
            let a = num(p, "a", Some(1.0))?;
            let mut g = vec![0.0; d];
            g[0] = drift;
            ProcessSpec::Triplet(LevyTriplet { dimension: d, gamma: g, a: matrix(Some(&Value::from(a)), d)?, nu: vec![] })
        }
        "stable" => {
            let alpha = num(p, "alpha", None)?;
            let scale = num(p, "scale", Some(1.0))?;
            let mut g = vec![0.0; d];
            g[0] = drift;
            ProcessSpec::Triplet(LevyTriplet { dimension: d, gamma: g, a: vec![vec![0.0; d]; d], nu: vec![MeasurePart::Stable { alpha, scale }] })
        }
        "dyadic" => ProcessSpec::Triplet(LevyTriplet::one_dim(
            0.0,
            0.0,
            vec![MeasurePart::Dyadic {
                m: num(p, "m", Some(1.0))?,
                beta: num(p, "beta", Some(1.0))?,
                delta: num(p, "delta", Some(1.0))?,
                alpha: num(p, "alpha", None)?,
            }],
        )),
        "cp" => {
            let rate = num(p, "rate", Some(1.0))?;
            let jump: JumpLaw = match p.get("jump") {
                Some(j) => serde_json::from_value(j.clone()).map_err(|e| bad(format!("jump: {e}")))?,
                None => JumpLaw::Atom { at: 1.0 },
            };
            let part = MeasurePart::Finite { rate, jump };
            part.validate(1)?;
            // γ chosen so that γ₀ = drift (0 for a genuine compound Poisson process).
            let gamma = drift + part.small_mean();
            ProcessSpec::Triplet(LevyTriplet::one_dim(gamma, 0.0, vec![part]))
        }
        "stable_subordinator" => sub(LaplaceFamily::ShiftedStable { delta: num(p, "scale", Some(1.0))?, m: 0.0, alpha: num(p, "alpha", None)? })?,
        "shifted_stable_sub" => sub(LaplaceFamily::ShiftedStable {
            delta: num(p, "delta", Some(1.0))?,
            m: num(p, "m", Some(1.0))?,
            alpha: num(p, "alpha", None)?,
        })?,
        "log_sub" => sub(LaplaceFamily::Log { alpha: num(p, "alpha", Some(1.0))? })?,
        "u_over_log_sub" => sub(LaplaceFamily::UOverLog { alpha: num(p, "alpha", None)? })?,
        other => return Err(bad(format!("unknown family '{other}'"))),
    };
    spec.validate()?;
    Ok(spec)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_each_kind() {
        let docs = [
            r#"{"schema_version":1,"kind":"family","family":"brownian"}"#,
            r#"{"kind":"family","family":"stable","alpha":0.5}"#,
            r#"{"kind":"family","family":"dyadic","m":1,"beta":1,"delta":1,"alpha":1.5}"#,
            r#"{"kind":"family","family":"cp","rate":1,"jump":{"law":"atom","at":1}}"#,
            r#"{"kind":"family","family":"stable_subordinator","alpha":0.5}"#,
            r#"{"kind":"family","family":"shifted_stable_sub","delta":1,"m":1,"alpha":0.5}"#,
            r#"{"kind":"family","family":"log_sub"}"#,
            r#"{"kind":"family","family":"u_over_log_sub","alpha":0.5}"#,
            r#"{"kind":"triplet","gamma":1,"nu":[{"type":"power","coeff":1,"alpha":0.5,"upper":1,"side":"positive"}]}"#,
            r#"{"kind":"subordinator","laplace":{"family":"log","alpha":1}}"#,
            r#"{"kind":"product","dimension":2,"direction":[1,0],"y":[{"at":[0,1],"mass":1}],"z":{"kind":"family","family":"brownian"}}"#,
            r#"{"kind":"space_time","x":{"kind":"family","family":"brownian"}}"#,
        ];
        for d in docs {
            parse_spec(d).unwrap_or_else(|e| panic!("{d}: {e}"));
        }
    }

    #[test]
    fn rejects_bad_documents() {
        for d in [
            r#"{"kind":"family","family":"stable","alpha":2.5}"#,
            r#"{"kind":"family","family":"nope"}"#,
            r#"{"kind":"triplet","a":-1}"#,
            r#"{"schema_version":7,"kind":"family","family":"brownian"}"#,
            r#"{"kind":"product","dimension":2,"direction":[1,0],"y":[{"at":[2,0],"mass":1}],"z":{"kind":"family","family":"brownian"}}"#,
        ] {
            assert!(parse_spec(d).is_err(), "{d}");
        }
    }
}

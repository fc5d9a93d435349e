//! JSON interchange: rationals as exact `"p/q"` strings, enclosures as
//! two-element arrays, Cantor specs and tree shapes as small objects.
//! Round-trips are bit-exact; no floating point is ever emitted.

use std::str::FromStr;

use serde_json::{json, Value};

use cantor_forge_core::tree::TreeSpec;
use cantor_forge_core::{CantorSpec, Enclosure, Rational};

pub type FmtResult<T> = std::result::Result<T, String>;

pub fn rational_to_json(r: &Rational) -> Value {
    Value::String(r.to_string())
}

pub fn rational_from_str(s: &str) -> FmtResult<Rational> {
    Rational::from_str(s.trim()).map_err(|e| format!("invalid rational {s:?}: {e}"))
}

pub fn rational_from_json(v: &Value) -> FmtResult<Rational> {
    match v {
        Value::String(s) => rational_from_str(s),
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                Ok(Rational::from_integer(i.into()))
            } else {
                Err(format!("non-integer number {n}; use a \"p/q\" string"))
            }
        }
        other => Err(format!("expected a rational, got {other}")),
    }
}

pub fn enclosure_to_json(e: &Enclosure) -> Value {
    json!([rational_to_json(&e.lo), rational_to_json(&e.hi)])
}

pub fn enclosure_from_json(v: &Value) -> FmtResult<Enclosure> {
    let arr = v.as_array().ok_or_else(|| format!("expected [lo, hi], got {v}"))?;
    if arr.len() != 2 {
        return Err(format!("expected [lo, hi], got {v}"));
    }
    Enclosure::new(rational_from_json(&arr[0])?, rational_from_json(&arr[1])?)
        .map_err(|e| e.to_string())
    }

/// A plain rational pair: used for hulls, windows, and (offset, length)
/// child rows, so no ordering is enforced here.
pub fn interval_from_json(v: &Value) -> FmtResult<(Rational, Rational)> {
    let arr = v.as_array().ok_or_else(|| format!("expected [a, b], got {v}"))?;
    if arr.len() != 2 {
        return Err(format!("expected [a, b], got {v}"));
    }
    Ok((rational_from_json(&arr[0])?, rational_from_json(&arr[1])?))
}

pub fn interval_to_json(iv: &(Rational, Rational)) -> Value {
    json!([rational_to_json(&iv.0), rational_to_json(&iv.1)])
}

pub fn spec_to_json(spec: &CantorSpec) -> Value {
    json!({
        "hull": interval_to_json(spec.hull()),
        "children": spec.children().iter().map(interval_to_json).collect::<Vec<_>>(),
    })
}

pub fn spec_from_json(v: &Value) -> FmtResult<CantorSpec> {
    let obj = v.as_object().ok_or_else(|| format!("expected a spec object, got {v}"))?;
    if let Some(alpha) = obj.get("middle_alpha") {
        return CantorSpec::middle_alpha(&rational_from_json(alpha)?).map_err(|e| e.to_string());
    }
    let hull = interval_from_json(
        obj.get("hull").ok_or_else(|| "spec is missing \"hull\"".to_string())?,
    )?;
    let children = obj
        .get("children")
        .and_then(Value::as_array)
        .ok_or_else(|| "spec is missing \"children\"".to_string())?
        .iter()
        .map(interval_from_json)
        .collect::<FmtResult<Vec<_>>>()?;
    CantorSpec::new(hull, children).map_err(|e| e.to_string())
}

pub fn tree_spec_from_json(v: &Value) -> FmtResult<TreeSpec> {
    let obj = v.as_object().ok_or_else(|| format!("expected a tree object, got {v}"))?;
    if let Some(t) = obj.get("tstar") {
        let branching = t
            .get("branching")
            .and_then(Value::as_u64)
            .ok_or_else(|| "tstar needs integer \"branching\"".to_string())?;
        let depth = t
            .get("depth")
            .and_then(Value::as_u64)
            .ok_or_else(|| "tstar needs integer \"depth\"".to_string())?;
        return Ok(TreeSpec::TStar { branching: branching as u32, depth: depth as u32 });
    }
    let parents = obj
        .get("parents")
        .and_then(Value::as_array)
        .ok_or_else(|| "tree needs \"tstar\" or \"parents\"".to_string())?
        .iter()
        .map(|p| match p {
            Value::Null => Ok(None),
            Value::Number(n) => n
                .as_u64()
                .map(|n| Some(n as usize))
                .ok_or_else(|| format!("bad parent index {n}")),
            other => Err(format!("bad parent entry {other}")),
        })
        .collect::<FmtResult<Vec<_>>>()?;
    Ok(TreeSpec::Explicit { parents })
}

pub fn obj_get<'a>(v: &'a Value, key: &str) -> FmtResult<&'a Value> {
    v.get(key).ok_or_else(|| format!("missing field {key:?}"))
}

/// Parse a comma-separated pair of rationals, e.g. `25/144,7/12`.
pub fn point_from_str(s: &str) -> FmtResult<(Rational, Rational)> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 2 {
        return Err(format!("expected \"a,b\", got {s:?}"));
    }
    Ok((rational_from_str(parts[0])?, rational_from_str(parts[1])?))
}

//! JSON body descriptors:
//! `{"kind": "polygon" | "lp" | "samples" | "ellipse" | "circle", ...}` with
//! exactly the payload field that matches the kind.

use std::path::Path;

use serde_json::{json, Map, Value};

use crate::ellipse::EllipseParams;
use crate::error::{Error, Result};
use crate::gauge::{Gauge, Interpolation};

const PAYLOADS: [&str; 4] = ["vertices", "p", "samples", "params"];

#[derive(Debug, Clone, PartialEq)]
pub enum BodyDescriptor {
    Circle,
    Polygon { vertices: Vec<[f64; 2]>, symmetrize: bool },
    /// `p = ∞` is written as the string `"inf"`.
    Lp { p: f64 },
    Samples { values: Vec<f64>, interpolation: Interpolation },
    Ellipse { params: [f64; 3] },
}

fn bad(msg: impl Into<String>) -> Error {
    Error::Descriptor(msg.into())
}

fn number(v: &Value, what: &str) -> Result<f64> {
    v.as_f64().ok_or_else(|| bad(format!("{what} must be a number")))
}

fn numbers(v: &Value, what: &str) -> Result<Vec<f64>> {
    v.as_array()
        .ok_or_else(|| bad(format!("{what} must be an array of numbers")))?
        .iter()
        .map(|x| number(x, what))
        .collect()
}

impl BodyDescriptor {
    pub fn from_json(text: &str) -> Result<Self> {
        let value: Value = serde_json::from_str(text).map_err(|e| bad(format!("invalid JSON: {e}")))?;
        Self::from_value(&value)
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::InvalidInput(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn from_value(value: &Value) -> Result<Self> {
        let obj = value.as_object().ok_or_else(|| bad("body descriptor must be a JSON object"))?;
        let kind = obj
            .get("kind")
            .and_then(Value::as_str)
            .ok_or_else(|| bad("missing string field \"kind\""))?;
        let expected = match kind {
            "polygon" => Some("vertices"),
            "lp" => Some("p"),
            "samples" => Some("samples"),
            "ellipse" => Some("params"),
            "circle" => None,
            other => return Err(bad(format!("unknown kind {other:?}"))),
        };
        for field in PAYLOADS {
            if obj.contains_key(field) && Some(field) != expected {
                return Err(bad(format!("field {field:?} does not belong to kind {kind:?}")));
            }
        }
        if obj.contains_key("symmetrize") && kind != "polygon" {
            return Err(bad("\"symmetrize\" only applies to polygons"));
        }
        if obj.contains_key("interpolation") && kind != "samples" {
            return Err(bad("\"interpolation\" only applies to samples"));
        }
        let payload = |field: &str| obj.get(field).ok_or_else(|| bad(format!("kind {kind:?} requires field {field:?}")));
        Ok(match kind {
            "circle" => BodyDescriptor::Circle,
            "polygon" => {
                let vertices = payload("vertices")?
                    .as_array()
                    .ok_or_else(|| bad("vertices must be an array of [x, y] pairs"))?
                    .iter()
                    .map(|v| match numbers(v, "vertex")?.as_slice() {
                        [x, y] => Ok([*x, *y]),
                        _ => Err(bad("each vertex must be an [x, y] pair")),
                    })
                    .collect::<Result<Vec<_>>>()?;
                let symmetrize = match obj.get("symmetrize") {
                    None => false,
                    Some(v) => v.as_bool().ok_or_else(|| bad("symmetrize must be a boolean"))?,
                };
                BodyDescriptor::Polygon { vertices, symmetrize }
            }
            "lp" => {
                let p = match payload("p")? {
                    Value::String(s) if matches!(s.to_ascii_lowercase().as_str(), "inf" | "infinity") => f64::INFINITY,
                    v => number(v, "p")?,
                };
                BodyDescriptor::Lp { p }
            }
            "samples" => {
                let values = numbers(payload("samples")?, "samples")?;
                let interpolation = match obj.get("interpolation").map(|v| v.as_str()) {
                    None | Some(Some("linear")) => Interpolation::Linear,
                    Some(Some("cubic")) => Interpolation::MonotoneCubic,
                    _ => return Err(bad("interpolation must be \"linear\" or \"cubic\"")),
                };
                BodyDescriptor::Samples { values, interpolation }
            }
            _ => match numbers(payload("params")?, "params")?.as_slice() {
                [a2, b2, c2] => BodyDescriptor::Ellipse { params: [*a2, *b2, *c2] },
                other => return Err(bad(format!("params must hold [a2, b2, c2], got {} numbers", other.len()))),
            },
        })
    }

    pub fn to_value(&self) -> Value {
        match self {
            BodyDescriptor::Circle => json!({"kind": "circle"}),
            BodyDescriptor::Polygon { vertices, symmetrize } => {
                json!({"kind": "polygon", "vertices": vertices, "symmetrize": symmetrize})
            }
            BodyDescriptor::Lp { p } => {
                let p = if p.is_infinite() { json!("inf") } else { json!(p) };
                json!({"kind": "lp", "p": p})
            }
            BodyDescriptor::Samples { values, interpolation } => {
                let mut m = Map::new();
                m.insert("kind".into(), json!("samples"));
                m.insert("samples".into(), json!(values));
                if *interpolation == Interpolation::MonotoneCubic {
                    m.insert("interpolation".into(), json!("cubic"));
                }
                Value::Object(m)
            }
            BodyDescriptor::Ellipse { params } => json!({"kind": "ellipse", "params": params}),
        }
    }

    pub fn to_gauge(&self) -> Result<Gauge> {
        match self {
            BodyDescriptor::Circle => Ok(Gauge::circle()),
            BodyDescriptor::Polygon { vertices, symmetrize } => Gauge::from_polygon(vertices, *symmetrize),
            BodyDescriptor::Lp { p } => Gauge::from_lp(*p),
            BodyDescriptor::Samples { values, interpolation } => Gauge::from_samples_with(values, *interpolation),
            BodyDescriptor::Ellipse { params } => Ok(Gauge::from_ellipse(EllipseParams::from_array(*params)?)),
        }
    }
}

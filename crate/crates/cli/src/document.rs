//! The JSON polytope document: `{"dim": n, "points": [[...], ...], "name": ...}`.
//!
//! Coordinates may be JSON integers of any size or decimal strings.

use std::str::FromStr;

use latsize::{LatticePoint, LatticePolytope};
use num_bigint::BigInt;
use serde_json::{Map, Number, Value};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum DocumentError {
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("document must be a JSON object")]
    NotAnObject,
    #[error("missing or invalid field `{0}`")]
    Field(&'static str),
    #[error("point {index} has {found} coordinates, expected {expected}")]
    Length {
        index: usize,
        expected: usize,
        found: usize,
    },
    #[error("point {index}: `{value}` is not an integer")]
    NotInteger { index: usize, value: String },
    #[error("document needs at least one point")]
    NoPoints,
    #[error("dimension must be at least 1")]
    ZeroDimension,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolytopeDocument {
    pub dim: usize,
    pub points: Vec<Vec<BigInt>>,
    pub name: Option<String>,
}

impl PolytopeDocument {
    pub fn from_polytope(p: &LatticePolytope, name: Option<String>) -> Self {
        Self {
            dim: p.dim(),
            points: p.points().iter().map(|x| x.coords().to_vec()).collect(),
            name,
        }
    }

    pub fn parse(text: &str) -> Result<Self, DocumentError> {
        let value: Value = serde_json::from_str(text)?;
        let obj = value.as_object().ok_or(DocumentError::NotAnObject)?;
        let dim = obj
            .get("dim")
            .and_then(Value::as_u64)
            .ok_or(DocumentError::Field("dim"))? as usize;
        if dim == 0 {
            return Err(DocumentError::ZeroDimension);
        }
        let raw = obj
            .get("points")
            .and_then(Value::as_array)
            .ok_or(DocumentError::Field("points"))?;
        if raw.is_empty() {
            return Err(DocumentError::NoPoints);
        }
        let mut points = Vec::with_capacity(raw.len());
        for (index, pt) in raw.iter().enumerate() {
            let coords = pt.as_array().ok_or(DocumentError::Field("points"))?;
            if coords.len() != dim {
                return Err(DocumentError::Length {
                    index,
                    expected: dim,
                    found: coords.len(),
                });
            }
            points.push(
                coords
                    .iter()
                    .map(|c| integer(c).ok_or_else(|| DocumentError::NotInteger {
                        index,
                        value: c.to_string(),
                    }))
                    .collect::<Result<Vec<_>, _>>()?,
            );
        }
        let name = match obj.get("name") {
            None | Some(Value::Null) => None,
            Some(Value::String(s)) => Some(s.clone()),
            Some(_) => return Err(DocumentError::Field("name")),
        };
        Ok(Self { dim, points, name })
    }

    pub fn to_polytope(&self) -> LatticePolytope {
        let pts = self
            .points
            .iter()
            .map(|c| LatticePoint::new(c.clone()).expect("dimension checked on parse"))
            .collect();
        LatticePolytope::new(pts).expect("points checked on parse")
    }

    pub fn to_json(&self) -> Value {
        let mut obj = Map::new();
        obj.insert("dim".into(), Value::from(self.dim));
        obj.insert(
            "points".into(),
            Value::Array(
                self.points
                    .iter()
                    .map(|p| Value::Array(p.iter().map(big_json).collect()))
                    .collect(),
            ),
        );
        if let Some(name) = &self.name {
            obj.insert("name".into(), Value::String(name.clone()));
        }
        Value::Object(obj)
    }
}

fn integer(v: &Value) -> Option<BigInt> {
    match v {
        Value::Number(n) => BigInt::from_str(&n.to_string()).ok(),
        Value::String(s) => BigInt::from_str(s.trim()).ok(),
        _ => None,
    }
}

/// A JSON integer of any size.
pub fn big_json(x: &BigInt) -> Value {
    Value::Number(Number::from_str(&x.to_string()).expect("integers are valid JSON numbers"))
}

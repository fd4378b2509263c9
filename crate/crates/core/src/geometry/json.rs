//! JSON form of a [`ProductConfig`].
//!
//! ```json
//! {"ambient_radius": 1, "factors": [{"dim": 2, "radius": "1/2", "label": "L1"}]}
//! ```
//!
//! Numbers may be JSON numbers or strings such as `"1/2"` or `"0.25"`. A
//! factor may give `radius_sq` instead of `radius` (and the config
//! `ambient_radius_sq`), which keeps radii like `1/sqrt(2)` exact. The config
//! is exact when every number in it is.

use serde::ser::{Serialize, Serializer};
use serde_json::{json, Map, Value};

use super::{FactorSpec, ProductConfig};
use crate::error::{Error, Result};
use crate::scalar::{rational_string, Number, Rational, Scalar};

#[derive(Clone, Debug, PartialEq)]
pub enum AnyConfig {
    Exact(ProductConfig<Rational>),
    Float(ProductConfig<f64>),
}

impl AnyConfig {
    pub fn from_json(v: &Value) -> Result<Self> {
        let obj = v.as_object().ok_or_else(|| Error::Parse("config must be an object".into()))?;
        let r_sq = squared_field(obj, "ambient_radius", "config")?;
        let factors = obj
            .get("factors")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Parse("config needs a \"factors\" array".into()))?;
        let mut parsed = Vec::with_capacity(factors.len());
        for (i, f) in factors.iter().enumerate() {
            let fo = f
                .as_object()
                .ok_or_else(|| Error::Parse(format!("factor {i} must be an object")))?;
            let dim = fo
                .get("dim")
                .and_then(Value::as_u64)
                .filter(|&d| d >= 1 && d <= u32::MAX as u64)
                .ok_or_else(|| Error::Parse(format!("factor {i} needs a positive integer \"dim\"")))?;
            let a_sq = squared_field(fo, "radius", &format!("factor {i}"))?;
            let label = fo
                .get("label")
                .and_then(Value::as_str)
                .map(str::to_string)
                .unwrap_or_else(|| format!("F{}", i + 1));
            parsed.push((dim as u32, a_sq, label));
        }
        let all_exact = r_sq.exact().is_some() && parsed.iter().all(|(_, a, _)| a.exact().is_some());
        if all_exact {
            let factors = parsed
                .into_iter()
                .map(|(d, a, l)| FactorSpec::new(d, a.exact().cloned().unwrap(), l))
                .collect();
            Ok(AnyConfig::Exact(ProductConfig::new(factors, r_sq.exact().cloned().unwrap())?))
        } else {
            let factors =
                parsed.into_iter().map(|(d, a, l)| FactorSpec::new(d, a.to_f64(), l)).collect();
            Ok(AnyConfig::Float(ProductConfig::new(factors, r_sq.to_f64())?))
        }
    }

    pub fn to_f64(&self) -> ProductConfig<f64> {
        match self {
            AnyConfig::Exact(c) => c.to_f64(),
            AnyConfig::Float(c) => c.clone(),
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            AnyConfig::Exact(c) => c.to_json(),
            AnyConfig::Float(c) => c.to_json(),
        }
    }
}

fn squared_field(obj: &Map<String, Value>, name: &str, owner: &str) -> Result<Number> {
    let sq_name = format!("{name}_sq");
    let value = if let Some(v) = obj.get(&sq_name) {
        Number::from_json(v)?
    } else if let Some(v) = obj.get(name) {
        Number::from_json(v)?.squared()
    } else {
        return Err(Error::Parse(format!("{owner} needs \"{name}\" or \"{sq_name}\"")));
    };
    if value.to_f64() <= 0.0 {
        return Err(Error::domain(format!("{owner}: {name} must be positive")));
    }
    Ok(value)
}

/// Accepts a config, an object carrying one under `"config"`, an object with
/// a `"solutions"` array of such objects, or an array of any of these.
pub fn parse_configs(v: &Value) -> Result<Vec<AnyConfig>> {
    let mut out = Vec::new();
    collect(v, &mut out)?;
    if out.is_empty() {
        return Err(Error::Parse("no product configuration found in input".into()));
    }
    Ok(out)
}

fn collect(v: &Value, out: &mut Vec<AnyConfig>) -> Result<()> {
    match v {
        Value::Array(items) => items.iter().try_for_each(|item| collect(item, out)),
        Value::Object(obj) if obj.contains_key("factors") => {
            out.push(AnyConfig::from_json(v)?);
            Ok(())
        }
        Value::Object(obj) if obj.contains_key("config") => collect(&obj["config"], out),
        Value::Object(obj) if obj.contains_key("solutions") => collect(&obj["solutions"], out),
        Value::Object(obj) if obj.contains_key("reports") => collect(&obj["reports"], out),
        _ => Err(Error::Parse("expected a product configuration object".into())),
    }
}

fn number_value<S: Scalar>(sq: &S) -> (Value, Option<Value>) {
    match sq.exact() {
        Some(q) => match Scalar::sqrt_checked(&q) {
            Some(root) => (Value::String(rational_string(&root)), None),
            None => (json!(sq.to_f64().sqrt()), Some(Value::String(rational_string(&q)))),
        },
        None => (json!(sq.to_f64().sqrt()), None),
    }
}

impl<S: Scalar> ProductConfig<S> {
    pub fn to_json(&self) -> Value {
        let mut root = Map::new();
        let (r, r_sq) = number_value(self.ambient_radius_sq());
        root.insert("ambient_radius".into(), r);
        if let Some(r_sq) = r_sq {
            root.insert("ambient_radius_sq".into(), r_sq);
        }
        let factors = self
            .factors()
            .iter()
            .map(|f| {
                let mut o = Map::new();
                o.insert("dim".into(), json!(f.dim));
                let (a, a_sq) = number_value(&f.radius_sq);
                o.insert("radius".into(), a);
                if let Some(a_sq) = a_sq {
                    o.insert("radius_sq".into(), a_sq);
                }
                o.insert("label".into(), json!(f.label));
                Value::Object(o)
            })
            .collect();
        root.insert("factors".into(), Value::Array(factors));
        Value::Object(root)
    }
}

impl<S: Scalar> Serialize for ProductConfig<S> {
    fn serialize<Z: Serializer>(&self, s: Z) -> std::result::Result<Z::Ok, Z::Error> {
        self.to_json().serialize(s)
    }
}

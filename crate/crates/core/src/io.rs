//! JSON readers and writers.
//!
//! Edges are named in files by their key, the smallest side index of the edge
//! in the triangulation the file refers to. Rationals are written as `"p/q"`
//! strings and floats with 17 significant digits, so output is byte-stable.

use std::io;
use std::str::FromStr;

use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::hyperbolic::LambdaLengths;
use crate::lamination::{Component, MultiCurve};
use crate::measures::{Measure, Q};
use crate::simplify::FlipPath;
use crate::tri::{EdgeId, Mode, Triangulation};

fn bad(msg: impl Into<String>) -> Error {
    Error::Format(msg.into())
}

/// Parses JSON text.
pub fn parse(text: &str) -> Result<Value> {
    serde_json::from_str(text).map_err(|e| bad(e.to_string()))
}

// ---------------------------------------------------------------------------
// Floats

/// `x` with exactly 17 significant digits, positional for moderate exponents.
pub fn fmt_f64(x: f64) -> String {
    if !x.is_finite() {
        return "null".into();
    }
    if x == 0.0 {
        return "0.0".into();
    }
    let sci = format!("{:.16e}", x);
    let (mant, exp) = sci.split_once('e').expect("exponent");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-5..=16).contains(&exp) {
        return sci;
    }
    let (sign, mant) = match mant.strip_prefix('-') {
        Some(m) => ("-", m),
        None => ("", mant),
    };
    let digits: String = mant.chars().filter(|c| *c != '.').collect();
    let body = if exp >= 0 {
        let (int, frac) = digits.split_at(exp as usize + 1);
        if frac.is_empty() {
            format!("{int}.0")
        } else {
            format!("{int}.{frac}")
        }
    } else {
        format!("0.{}{}", "0".repeat((-exp - 1) as usize), digits)
    };
    format!("{sign}{body}")
}

struct FixedFloats;

impl serde_json::ser::Formatter for FixedFloats {
    fn write_f64<W: ?Sized + io::Write>(&mut self, w: &mut W, value: f64) -> io::Result<()> {
        w.write_all(fmt_f64(value).as_bytes())
    }

    fn write_f32<W: ?Sized + io::Write>(&mut self, w: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(w, value as f64)
    }
}

/// Compact JSON with fixed float formatting.
pub fn to_json_string<T: Serialize>(value: &T) -> Result<String> {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, FixedFloats);
    value
        .serialize(&mut ser)
        .map_err(|e| Error::Internal(e.to_string()))?;
    String::from_utf8(out).map_err(|e| Error::Internal(e.to_string()))
}

// ---------------------------------------------------------------------------
// Triangulations

pub fn triangulation_to_json(tri: &Triangulation) -> Value {
    let mode = match tri.mode() {
        Mode::Closed => "closed",
        Mode::Polygon => "polygon",
    };
    json!({
        "mode": mode,
        "triangle_count": tri.triangle_count(),
        "gluing": tri.gluing_pairs().iter().map(|&(s, t)| json!([s, t])).collect::<Vec<_>>(),
    })
}

fn as_usize(v: &Value, what: &str) -> Result<usize> {
    v.as_u64()
        .map(|x| x as usize)
        .ok_or_else(|| bad(format!("{what} must be a nonnegative integer")))
}

pub fn triangulation_from_json(v: &Value) -> Result<Triangulation> {
    let obj = v
        .as_object()
        .ok_or_else(|| bad("triangulation must be an object"))?;
    let mode = match obj.get("mode").and_then(Value::as_str) {
        Some("closed") => Mode::Closed,
        Some("polygon") => Mode::Polygon,
        _ => return Err(bad("mode must be \"closed\" or \"polygon\"")),
    };
    let t = as_usize(
        obj.get("triangle_count").unwrap_or(&Value::Null),
        "triangle_count",
    )?;
    let gluing = obj
        .get("gluing")
        .and_then(Value::as_array)
        .ok_or_else(|| bad("gluing must be a list of side pairs"))?;
    let pairs = gluing
        .iter()
        .map(|p| match p.as_array().map(Vec::as_slice) {
            Some([a, b]) => Ok((as_usize(a, "side")?, as_usize(b, "side")?)),
            _ => Err(bad("gluing entries must be pairs")),
        })
        .collect::<Result<Vec<_>>>()?;
    Triangulation::new(mode, t, &pairs)
}

// ---------------------------------------------------------------------------
// Measures and lengths

fn edge_map<'a>(v: &'a Value, what: &str) -> Result<&'a Map<String, Value>> {
    v.get("edges")
        .and_then(Value::as_object)
        .ok_or_else(|| bad(format!("{what} needs an \"edges\" object")))
}

fn edge_by_key_text(tri: &Triangulation, key: &str) -> Result<EdgeId> {
    let k: usize = key
        .parse()
        .map_err(|_| bad(format!("edge key {key:?} is not an integer")))?;
    tri.edge_by_key(k)
}

pub fn parse_rational(text: &str) -> Result<Q> {
    let t = text.trim();
    if t.contains(['.', 'e', 'E']) {
        return Err(bad(format!("{text:?} is not an exact rational")));
    }
    let v = Q::from_str(t).map_err(|_| bad(format!("{text:?} is not a rational")))?;
    Ok(v)
}

fn rational_value(v: &Value) -> Result<Q> {
    match v {
        Value::String(s) => parse_rational(s),
        Value::Number(n) if n.is_i64() => Ok(Q::from_integer(n.as_i64().expect("i64").into())),
        _ => Err(bad(format!("{v} is not an exact rational"))),
    }
}

pub fn measure_to_json(tri: &Triangulation, mu: &Measure) -> Value {
    let mut edges: Vec<(usize, String)> = tri
        .edges()
        .map(|e| (tri.key(e), mu[e].to_string()))
        .collect();
    edges.sort();
    let map: Map<String, Value> = edges
        .into_iter()
        .map(|(k, v)| (k.to_string(), Value::String(v)))
        .collect();
    json!({ "edges": map })
}

/// Reads a measure; every edge must be present.
pub fn measure_from_json(tri: &Triangulation, v: &Value) -> Result<Measure> {
    let (mu, present) = measure_from_json_partial(tri, v)?;
    if let Some(e) = tri.edges().find(|e| !present[e.0]) {
        return Err(bad(format!("measure misses edge {}", tri.key(e))));
    }
    Ok(mu)
}

/// Reads a measure that may omit edges; missing values are zero.
pub fn measure_from_json_partial(tri: &Triangulation, v: &Value) -> Result<(Measure, Vec<bool>)> {
    let map = edge_map(v, "measure")?;
    let mut mu = Measure::zero(tri.edge_count());
    let mut present = vec![false; tri.edge_count()];
    for (k, x) in map {
        let e = edge_by_key_text(tri, k)?;
        mu.set(e, rational_value(x)?);
        present[e.0] = true;
    }
    Ok((mu, present))
}

pub fn lambda_to_json(tri: &Triangulation, lambda: &LambdaLengths) -> Value {
    let mut edges: Vec<(usize, f64)> = tri.edges().map(|e| (tri.key(e), lambda.value(e))).collect();
    edges.sort_by_key(|p| p.0);
    let map: Map<String, Value> = edges
        .into_iter()
        .map(|(k, v)| (k.to_string(), json!(v)))
        .collect();
    json!({ "edges": map })
}

pub fn lambda_from_json(tri: &Triangulation, v: &Value) -> Result<LambdaLengths> {
    let map = edge_map(v, "lambda")?;
    let mut vals = vec![f64::NAN; tri.edge_count()];
    for (k, x) in map {
        let e = edge_by_key_text(tri, k)?;
        vals[e.0] = x
            .as_f64()
            .ok_or_else(|| bad(format!("lambda of edge {k} is not a number")))?;
    }
    if let Some(e) = tri.edges().find(|e| vals[e.0].is_nan()) {
        return Err(bad(format!("lambda misses edge {}", tri.key(e))));
    }
    LambdaLengths::from_values(&vals)
}

// ---------------------------------------------------------------------------
// Multicurves and flip paths

pub fn multicurve_to_json(tri: &Triangulation, mc: &MultiCurve) -> Value {
    let comps: Vec<Value> = mc
        .components
        .iter()
        .map(|c| {
            json!({
                "weight": c.weight.to_string(),
                "itinerary": c.itinerary.iter().map(|&(e, t)| json!([tri.key(e), t])).collect::<Vec<_>>(),
            })
        })
        .collect();
    json!({ "components": comps })
}

pub fn multicurve_from_json(tri: &Triangulation, v: &Value) -> Result<MultiCurve> {
    let comps = v
        .get("components")
        .and_then(Value::as_array)
        .ok_or_else(|| bad("multicurve needs a \"components\" list"))?;
    let components = comps
        .iter()
        .map(|c| {
            let weight = rational_value(c.get("weight").unwrap_or(&Value::Null))?;
            let itinerary = c
                .get("itinerary")
                .and_then(Value::as_array)
                .ok_or_else(|| bad("component needs an itinerary"))?
                .iter()
                .map(|x| match x.as_array().map(Vec::as_slice) {
                    Some([e, t]) => {
                        let e = tri.edge_by_key(as_usize(e, "edge")?)?;
                        let t = as_usize(t, "triangle")?;
                        if t >= tri.triangle_count() {
                            return Err(bad(format!("triangle {t} out of range")));
                        }
                        Ok((e, t))
                    }
                    _ => Err(bad("crossings must be [edge, triangle] pairs")),
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(Component { itinerary, weight })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(MultiCurve { components })
}

/// Flip path with each flip named by its key in the triangulation it is applied to.
pub fn flip_path_to_json(start: &Triangulation, path: &FlipPath) -> Result<Value> {
    let mut tri = start.clone();
    let mut keys = Vec::with_capacity(path.flips.len());
    for &e in &path.flips {
        keys.push(tri.key(e));
        tri = tri.flip(e)?.0;
    }
    Ok(json!({
        "start_certificate": path.start_certificate.to_hex(),
        "flips": keys,
        "end_certificate": path.end_certificate.to_hex(),
    }))
}

/// Reads a flip path relative to `start`, checking both certificates.
pub fn flip_path_from_json(start: &Triangulation, v: &Value) -> Result<FlipPath> {
    let keys = v
        .get("flips")
        .and_then(Value::as_array)
        .ok_or_else(|| bad("flip path needs a \"flips\" list"))?;
    let mut tri = start.clone();
    let mut flips = Vec::with_capacity(keys.len());
    for k in keys {
        let e = tri.edge_by_key(as_usize(k, "flip")?)?;
        flips.push(e);
        tri = tri.flip(e)?.0;
    }
    let path = FlipPath {
        start_certificate: start.certificate(),
        flips,
        end_certificate: tri.certificate(),
    };
    for (field, cert) in [
        ("start_certificate", &path.start_certificate),
        ("end_certificate", &path.end_certificate),
    ] {
        if let Some(text) = v.get(field).and_then(Value::as_str) {
            if text != cert.to_hex() {
                return Err(bad(format!("{field} does not match the replayed path")));
            }
        }
    }
    Ok(path)
}

// ---------------------------------------------------------------------------
// Bundles

/// Any subset of a triangulation with a measure and lambda lengths on it.
#[derive(Clone, Debug, Default)]
pub struct Bundle {
    pub triangulation: Option<Triangulation>,
    pub measure: Option<Value>,
    pub lambda: Option<Value>,
}

impl Bundle {
    pub fn from_json(v: &Value) -> Result<Bundle> {
        let obj = v
            .as_object()
            .ok_or_else(|| bad("bundle must be an object"))?;
        if let Some(k) = obj
            .keys()
            .find(|k| !matches!(k.as_str(), "triangulation" | "measure" | "lambda"))
        {
            return Err(bad(format!("unknown bundle field {k:?}")));
        }
        Ok(Bundle {
            triangulation: obj
                .get("triangulation")
                .map(triangulation_from_json)
                .transpose()?,
            measure: obj.get("measure").cloned(),
            lambda: obj.get("lambda").cloned(),
        })
    }

    pub fn triangulation(&self) -> Result<&Triangulation> {
        self.triangulation
            .as_ref()
            .ok_or_else(|| Error::Precondition("input has no triangulation".into()))
    }

    pub fn measure(&self) -> Result<Measure> {
        let tri = self.triangulation()?;
        let v = self
            .measure
            .as_ref()
            .ok_or_else(|| Error::Precondition("input has no measure".into()))?;
        measure_from_json(tri, v)
    }

    pub fn measure_partial(&self) -> Result<(Measure, Vec<bool>)> {
        let tri = self.triangulation()?;
        let v = self
            .measure
            .as_ref()
            .ok_or_else(|| Error::Precondition("input has no measure".into()))?;
        measure_from_json_partial(tri, v)
    }

    pub fn lambda(&self) -> Result<LambdaLengths> {
        let tri = self.triangulation()?;
        let v = self
            .lambda
            .as_ref()
            .ok_or_else(|| Error::Precondition("input has no lambda lengths".into()))?;
        lambda_from_json(tri, v)
    }

    pub fn to_json(
        tri: &Triangulation,
        mu: Option<&Measure>,
        lambda: Option<&LambdaLengths>,
    ) -> Value {
        let mut m = Map::new();
        m.insert("triangulation".into(), triangulation_to_json(tri));
        if let Some(mu) = mu {
            m.insert("measure".into(), measure_to_json(tri, mu));
        }
        if let Some(l) = lambda {
            m.insert("lambda".into(), lambda_to_json(tri, l));
        }
        Value::Object(m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measures::q_frac;
    use crate::tri::surfaces::once_punctured_torus;

    #[test]
    fn float_format() {
        assert_eq!(fmt_f64(0.5f64.sqrt()), "0.70710678118654757");
        assert_eq!(fmt_f64(2f64.sqrt()), "1.4142135623730951");
        assert_eq!(fmt_f64(1.0), "1.0000000000000000");
        assert_eq!(fmt_f64(-12.8), "-12.800000000000001");
        assert_eq!(fmt_f64(1e20), "1.0000000000000000e20");
        assert_eq!(fmt_f64(0.001), "0.0010000000000000000");
        for x in [0.1, 3.0e-7, 123456.789, -2.5e18] {
            assert_eq!(fmt_f64(x).parse::<f64>().unwrap(), x);
        }
    }

    #[test]
    fn round_trips() {
        let t = once_punctured_torus();
        let t2 = triangulation_from_json(&triangulation_to_json(&t)).unwrap();
        assert_eq!(t2.gluing_pairs(), t.gluing_pairs());
        let mu = Measure::new(vec![q_frac(1, 3), q_frac(-2, 1), q_frac(7, 4)]);
        let text = to_json_string(&measure_to_json(&t, &mu)).unwrap();
        assert_eq!(text, r#"{"edges":{"0":"1/3","1":"-2","2":"7/4"}}"#);
        assert_eq!(measure_from_json(&t, &parse(&text).unwrap()).unwrap(), mu);
        let lam = LambdaLengths::from_values(&[1.0, 2.0, 0.25]).unwrap();
        let back = lambda_from_json(
            &t,
            &parse(&to_json_string(&lambda_to_json(&t, &lam)).unwrap()).unwrap(),
        )
        .unwrap();
        for (a, b) in back.values().iter().zip(lam.values()) {
            assert!((a - b).abs() < 1e-15);
        }
    }

    #[test]
    fn rejects_bad_input() {
        let t = once_punctured_torus();
        assert!(
            measure_from_json(&t, &json!({"edges": {"0": "1.5", "1": "1", "2": "1"}})).is_err()
        );
        assert!(measure_from_json(&t, &json!({"edges": {"0": "1", "1": "1"}})).is_err());
        assert!(measure_from_json(&t, &json!({"edges": {"9": "1"}})).is_err());
        assert!(triangulation_from_json(&json!({"mode": "torus"})).is_err());
        assert!(Bundle::from_json(&json!({"extra": 1})).is_err());
    }
}

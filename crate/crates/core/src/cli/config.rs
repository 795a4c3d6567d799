//! Input documents. Numbers are JSON integers or strings holding integers,
//! `p/q` fractions or finite decimals. Points have `d` (affine) or `d + 1`
//! (homogeneous) coordinates.

use serde_json::{json, Map, Value};

use crate::centerpoint::SearchConfig;
use crate::error::{Error, Result};
use crate::geometry::{LinSubspace, PointConfig, ProjPoint};
use crate::partition::PartitionWitness;
use crate::scalar::{format_vec, parse_scalar, Scalar};

use super::measure::MeasureSpec;

#[derive(Clone, Debug, PartialEq)]
pub struct ConfigEntry {
    pub x: PointConfig,
    pub r: Option<usize>,
    pub partition: Option<PartitionWitness>,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Params {
    pub v: Option<usize>,
    pub w: Option<usize>,
    pub m: Option<usize>,
    pub r: Option<usize>,
    pub p: Option<u64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ParsedInput {
    pub d: usize,
    pub configs: Vec<ConfigEntry>,
    pub v: Option<LinSubspace>,
    pub w: Option<LinSubspace>,
    pub params: Params,
    pub search: Option<SearchConfig>,
    pub measure: Option<MeasureSpec>,
    pub warnings: Vec<String>,
}

fn scalar_at(value: &Value, field: &str) -> Result<Scalar> {
    match value {
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                Ok(Scalar::from_integer(i.into()))
            } else if let Some(u) = n.as_u64() {
                Ok(Scalar::from_integer(u.into()))
            } else {
                Err(Error::parse(field, format!("{n} is not an integer; write it as a string such as \"1/3\"")))
            }
        }
        Value::String(s) => parse_scalar(s).map_err(|_| Error::parse(field, format!("malformed number '{s}'"))),
        other => Err(Error::parse(field, format!("expected a number, found {other}"))),
    }
}

fn array_at<'a>(value: &'a Value, field: &str) -> Result<&'a Vec<Value>> {
    value.as_array().ok_or_else(|| Error::parse(field, "expected an array"))
}

fn usize_at(value: &Value, field: &str) -> Result<usize> {
    value
        .as_u64()
        .map(|x| x as usize)
        .ok_or_else(|| Error::parse(field, format!("expected a nonnegative integer, found {value}")))
}

/// A point of `d` (affine) or `d + 1` (homogeneous) coordinates.
fn point_at(value: &Value, d: usize, field: &str) -> Result<ProjPoint> {
    let coords = array_at(value, field)?
        .iter()
        .enumerate()
        .map(|(k, c)| scalar_at(c, &format!("{field}[{k}]")))
        .collect::<Result<Vec<_>>>()?;
    if coords.len() == d {
        Ok(ProjPoint::from_affine(&coords))
    } else if coords.len() == d + 1 {
        ProjPoint::new(coords).map_err(|_| Error::parse(field, "the zero vector is not a projective point"))
    } else {
        Err(Error::parse(field, format!("expected {d} or {} coordinates, found {}", d + 1, coords.len())))
    }
}

fn subspace_at(value: &Value, d: usize, field: &str, warnings: &mut Vec<String>) -> Result<LinSubspace> {
    if value.as_str() == Some("infinity") {
        return Ok(LinSubspace::hyperplane_at_infinity(d));
    }
    let gens = array_at(value, field)?;
    let mut rows = Vec::with_capacity(gens.len());
    for (i, g) in gens.iter().enumerate() {
        let f = format!("{field}[{i}]");
        let coords = array_at(g, &f)?
            .iter()
            .enumerate()
            .map(|(k, c)| scalar_at(c, &format!("{f}[{k}]")))
            .collect::<Result<Vec<_>>>()?;
        if coords.len() == d {
            rows.push(ProjPoint::from_affine(&coords).coords().to_vec());
        } else if coords.len() == d + 1 {
            rows.push(coords);
        } else {
            return Err(Error::parse(f, format!("expected {d} or {} coordinates, found {}", d + 1, coords.len())));
        }
    }
    let s = LinSubspace::span(d + 1, &rows)?;
    if s.rank() == 0 {
        return Err(Error::parse(field, "subspace has rank 0"));
    }
    if s.rank() < rows.len() {
        warnings.push(format!("{field}: {} generators are dependent and span rank {}", rows.len(), s.rank()));
    }
    Ok(s)
}

fn partition_at(value: &Value, n: usize, field: &str) -> Result<PartitionWitness> {
    let parts = array_at(value, field)?
        .iter()
        .enumerate()
        .map(|(j, p)| {
            let f = format!("{field}[{j}]");
            array_at(p, &f)?.iter().enumerate().map(|(k, i)| usize_at(i, &format!("{f}[{k}]"))).collect()
        })
        .collect::<Result<Vec<Vec<usize>>>>()?;
    PartitionWitness::new(n, parts).map_err(|e| Error::parse(field, e.to_string()))
}

fn entry_at(obj: &Map<String, Value>, d: usize, prefix: &str) -> Result<ConfigEntry> {
    let pf = |k: &str| if prefix.is_empty() { k.to_string() } else { format!("{prefix}.{k}") };
    let pts = obj.get("points").ok_or_else(|| Error::parse(pf("points"), "missing"))?;
    let points = array_at(pts, &pf("points"))?
        .iter()
        .enumerate()
        .map(|(i, p)| point_at(p, d, &format!("{}[{i}]", pf("points"))))
        .collect::<Result<Vec<_>>>()?;
    let colors = match obj.get("colors") {
        None | Some(Value::Null) => None,
        Some(c) => Some(
            array_at(c, &pf("colors"))?
                .iter()
                .enumerate()
                .map(|(i, v)| usize_at(v, &format!("{}[{i}]", pf("colors"))).map(|x| x as u32))
                .collect::<Result<Vec<_>>>()?,
        ),
    };
    let x = PointConfig::new(d, points, colors).map_err(|e| Error::parse(pf("colors"), e.to_string()))?;
    let r = obj.get("r").map(|v| usize_at(v, &pf("r"))).transpose()?;
    let partition = obj.get("partition").map(|v| partition_at(v, x.len(), &pf("partition"))).transpose()?;
    Ok(ConfigEntry { x, r, partition })
}

const TOP_KEYS: &[&str] =
    &["d", "points", "colors", "r", "partition", "configs", "V", "W", "v", "w", "m", "p", "search", "measure"];

/// Parses an input document.
pub fn parse_config(text: &str) -> Result<ParsedInput> {
    let doc: Value = serde_json::from_str(text)?;
    let obj = doc.as_object().ok_or_else(|| Error::parse("document", "expected a JSON object"))?;
    if let Some(k) = obj.keys().find(|k| !TOP_KEYS.contains(&k.as_str())) {
        return Err(Error::parse(k.clone(), "unknown field"));
    }
    let d = obj.get("d").map(|v| usize_at(v, "d")).transpose()?.ok_or_else(|| Error::parse("d", "missing"))?;
    if d == 0 {
        return Err(Error::parse("d", "must be positive"));
    }
    let mut warnings = Vec::new();
    let mut configs = Vec::new();
    if obj.contains_key("points") {
        configs.push(entry_at(obj, d, "")?);
    }
    if let Some(list) = obj.get("configs") {
        for (j, c) in array_at(list, "configs")?.iter().enumerate() {
            let f = format!("configs[{j}]");
            let o = c.as_object().ok_or_else(|| Error::parse(f.clone(), "expected an object"))?;
            configs.push(entry_at(o, d, &f)?);
        }
    }
    let v = obj.get("V").map(|s| subspace_at(s, d, "V", &mut warnings)).transpose()?;
    let w = obj.get("W").map(|s| subspace_at(s, d, "W", &mut warnings)).transpose()?;
    let opt = |k: &str| obj.get(k).map(|v| usize_at(v, k)).transpose();
    let params = Params {
        v: opt("v")?,
        w: opt("w")?,
        m: opt("m")?,
        r: opt("r")?,
        p: opt("p")?.map(|p| p as u64),
    };
    let search = obj
        .get("search")
        .map(|s| serde_json::from_value::<SearchConfig>(s.clone()).map_err(|e| Error::parse("search", e.to_string())))
        .transpose()?;
    let measure = obj
        .get("measure")
        .map(|s| serde_json::from_value::<MeasureSpec>(s.clone()).map_err(|e| Error::parse("measure", e.to_string())))
        .transpose()?;
    Ok(ParsedInput { d, configs, v, w, params, search, measure, warnings })
}

fn points_json(x: &PointConfig) -> Value {
    Value::Array(x.points.iter().map(|p| json!(format_vec(p.coords()))).collect())
}

pub(crate) fn subspace_json(s: &LinSubspace) -> Value {
    Value::Array(s.basis().iter().map(|row| json!(format_vec(row))).collect())
}

/// Canonical document for a parsed input: homogeneous points, reduced
/// subspace bases, rationals as strings.
pub fn serialize_config(input: &ParsedInput) -> Value {
    let mut obj = Map::new();
    obj.insert("d".into(), json!(input.d));
    let entry = |c: &ConfigEntry| {
        let mut o = Map::new();
        o.insert("points".into(), points_json(&c.x));
        if let Some(colors) = &c.x.colors {
            o.insert("colors".into(), json!(colors));
        }
        if let Some(r) = c.r {
            o.insert("r".into(), json!(r));
        }
        if let Some(p) = &c.partition {
            o.insert("partition".into(), json!(p.parts));
        }
        Value::Object(o)
    };
    obj.insert("configs".into(), Value::Array(input.configs.iter().map(entry).collect()));
    if let Some(v) = &input.v {
        obj.insert("V".into(), subspace_json(v));
    }
    if let Some(w) = &input.w {
        obj.insert("W".into(), subspace_json(w));
    }
    let p = &input.params;
    for (k, val) in [("v", p.v), ("w", p.w), ("m", p.m), ("r", p.r)] {
        if let Some(x) = val {
            obj.insert(k.into(), json!(x));
        }
    }
    if let Some(x) = p.p {
        obj.insert("p".into(), json!(x));
    }
    if let Some(s) = &input.search {
        obj.insert("search".into(), serde_json::to_value(s).expect("plain data"));
    }
    if let Some(m) = &input.measure {
        obj.insert("measure".into(), serde_json::to_value(m).expect("plain data"));
    }
    Value::Object(obj)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{frac, ints};

    #[test]
    fn affine_points_are_homogenized() {
        let input = parse_config(r#"{"d": 2, "points": [[1, 2], ["2/3", 0, 1]]}"#).unwrap();
        let x = &input.configs[0].x;
        assert_eq!(x.points[0].coords(), ints(&[1, 2, 1]).as_slice());
        assert_eq!(x.points[1], ProjPoint::new(vec![frac(2, 3), frac(0, 1), frac(1, 1)]).unwrap());
    }

    #[test]
    fn dependent_generators_warn() {
        let input = parse_config(r#"{"d": 2, "V": [[1, 0, 0], [2, 0, 0]]}"#).unwrap();
        assert_eq!(input.v.unwrap().rank(), 1);
        assert_eq!(input.warnings.len(), 1);
    }

    #[test]
    fn diagnostics_name_the_field() {
        let err = parse_config(r#"{"d": 2, "points": [[1, 2], [1, "x"]]}"#).unwrap_err();
        assert!(err.to_string().contains("points[1][1]"), "{err}");
        let err = parse_config(r#"{"d": 2, "points": [[1, 2, 3, 4]]}"#).unwrap_err();
        assert!(err.to_string().contains("points[0]"), "{err}");
        let err = parse_config(r#"{"d": 2, "V": [[0, 0, 0]]}"#).unwrap_err();
        assert!(err.to_string().contains("rank 0"), "{err}");
        assert!(parse_config(r#"{"d": 2, "bogus": 1}"#).is_err());
    }

    #[test]
    fn round_trip() {
        let text = r#"{"d": 2, "configs": [{"points": [[1, 1], [-1, "1/2"], [3, 0, 0]], "colors": [0, 1, 0], "r": 2,
            "partition": [[0, 2], [1]]}], "V": "infinity", "W": [[0, 0, 5]], "p": 2}"#;
        let a = parse_config(text).unwrap();
        let b = parse_config(&serialize_config(&a).to_string()).unwrap();
        assert_eq!(a, b);
    }
}

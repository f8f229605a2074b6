//! Shared JSON encoding. Every integer is written as a decimal string;
//! rationals are written as `"n/d"` or `"n"`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use serde_json::{json, Map, Value};
use thiserror::Error;

use crate::exactnum::FieldElem;
use crate::subdivision::{validate_subdivision, Ctx};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{0}")]
pub struct FormatError(pub String);

impl FormatError {
    pub fn new(msg: impl Into<String>) -> Self {
        FormatError(msg.into())
    }
}

pub fn int(n: &BigInt) -> Value {
    Value::String(n.to_string())
}

pub fn usize_value(n: usize) -> Value {
    Value::String(n.to_string())
}

pub fn rat(r: &BigRational) -> Value {
    if r.denom().is_one() {
        Value::String(r.numer().to_string())
    } else {
        Value::String(format!("{}/{}", r.numer(), r.denom()))
    }
}

pub fn get<'a>(v: &'a Value, key: &str) -> Result<&'a Value, FormatError> {
    v.get(key).ok_or_else(|| FormatError::new(format!("missing field \"{key}\"")))
}

pub fn array<'a>(v: &'a Value, what: &str) -> Result<&'a Vec<Value>, FormatError> {
    v.as_array().ok_or_else(|| FormatError::new(format!("{what} must be an array")))
}

pub fn str_of<'a>(v: &'a Value, what: &str) -> Result<&'a str, FormatError> {
    v.as_str().ok_or_else(|| FormatError::new(format!("{what} must be a string")))
}

/// Accepts a decimal string or a JSON integer.
pub fn parse_int(v: &Value, what: &str) -> Result<BigInt, FormatError> {
    let s = match v {
        Value::String(s) => s.clone(),
        Value::Number(n) if n.is_i64() || n.is_u64() => n.to_string(),
        _ => return Err(FormatError::new(format!("{what} must be an integer string"))),
    };
    s.trim()
        .parse()
        .map_err(|_| FormatError::new(format!("{what}: cannot parse integer \"{s}\"")))
}

pub fn parse_usize(v: &Value, what: &str) -> Result<usize, FormatError> {
    let n = parse_int(v, what)?;
    usize::try_from(n).map_err(|_| FormatError::new(format!("{what} must be a nonnegative index")))
}

pub fn parse_rat_str(s: &str, what: &str) -> Result<BigRational, FormatError> {
    let bad = || FormatError::new(format!("{what}: cannot parse rational \"{s}\""));
    match s.trim().split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d == BigInt::from(0) {
                return Err(bad());
            }
            Ok(BigRational::new(n, d))
        }
        None => Ok(BigRational::from_integer(s.trim().parse().map_err(|_| bad())?)),
    }
}

pub fn parse_rat(v: &Value, what: &str) -> Result<BigRational, FormatError> {
    match v {
        Value::String(s) => parse_rat_str(s, what),
        Value::Number(_) => Ok(BigRational::from_integer(parse_int(v, what)?)),
        _ => Err(FormatError::new(format!("{what} must be a rational string"))),
    }
}

/// `{"coeffs": ["a_1", ..., "a_n"]}`
pub fn context(ctx: &Ctx) -> Value {
    let coeffs: Vec<Value> = ctx
        .poly()
        .coeffs()
        .iter()
        .map(|a| Value::String(a.to_string()))
        .collect();
    json!({ "coeffs": coeffs })
}

pub fn parse_context(v: &Value) -> Result<Ctx, FormatError> {
    let coeffs = array(get(v, "coeffs")?, "coeffs")?
        .iter()
        .map(|c| parse_int(c, "coefficient"))
        .collect::<Result<Vec<_>, _>>()?;
    validate_subdivision(&coeffs).map_err(|e| FormatError::new(e.to_string()))
}

/// Coordinates in the basis `1, β, ..., β^{n-1}`, without the context.
pub fn field_coords(x: &FieldElem) -> Value {
    Value::Array(x.coeffs().iter().map(rat).collect())
}

pub fn parse_field_coords(ctx: &Ctx, v: &Value) -> Result<FieldElem, FormatError> {
    let coeffs = array(v, "field element")?
        .iter()
        .map(|c| parse_rat(c, "coordinate"))
        .collect::<Result<Vec<_>, _>>()?;
    if coeffs.len() > ctx.degree() {
        return Err(FormatError::new(format!(
            "field element has {} coordinates, context degree is {}",
            coeffs.len(),
            ctx.degree()
        )));
    }
    Ok(FieldElem::from_coeffs(ctx, coeffs))
}

/// `{"context": {...}, "coeffs": [...]}`
pub fn field(x: &FieldElem) -> Value {
    let mut m = Map::new();
    m.insert("context".into(), context(x.context()));
    m.insert("coeffs".into(), field_coords(x));
    Value::Object(m)
}

pub fn parse_field(v: &Value) -> Result<FieldElem, FormatError> {
    let ctx = parse_context(get(v, "context")?)?;
    parse_field_coords(&ctx, get(v, "coeffs")?)
}

/// Bit string, `'1'` for a set position.
pub fn bits(b: &[bool]) -> Value {
    Value::String(b.iter().map(|&x| if x { '1' } else { '0' }).collect())
}

pub fn parse_bits(v: &Value, what: &str) -> Result<Vec<bool>, FormatError> {
    str_of(v, what)?
        .chars()
        .map(|c| match c {
            '0' => Ok(false),
            '1' => Ok(true),
            _ => Err(FormatError::new(format!("{what}: expected a bit string"))),
        })
        .collect()
}

pub fn to_pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("values serialize");
    s.push('\n');
    s
}

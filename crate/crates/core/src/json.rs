//! JSON encodings shared by the certificates and the command-line tool.
//!
//! Integers that fit in 64 bits are JSON numbers; larger ones are decimal strings.
//! Forms are `{"dim": n, "gram": [[..], ..]}`, vectors are flat arrays and
//! matrices are arrays of rows.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::form::GramForm;
use crate::matrix::{IntMatrix, LatticeVector};

pub fn int(x: &BigInt) -> Value {
    match x.to_i64() {
        Some(v) => Value::from(v),
        None => Value::String(x.to_string()),
    }
}

pub fn rational(x: &BigRational) -> Value {
    if x.is_integer() {
        int(&x.to_integer())
    } else {
        Value::String(format!("{}/{}", x.numer(), x.denom()))
    }
}

pub fn vector(v: &LatticeVector) -> Value {
    Value::Array(v.0.iter().map(int).collect())
}

pub fn matrix(m: &IntMatrix) -> Value {
    Value::Array((0..m.nrows()).map(|i| Value::Array(m.row(i).iter().map(int).collect())).collect())
}

pub fn form(f: &GramForm) -> Value {
    json!({ "dim": f.dim(), "gram": matrix(f.gram()) })
}

pub fn parse_int(v: &Value) -> Result<BigInt> {
    match v {
        Value::Number(n) => n
            .as_i64()
            .map(BigInt::from)
            .ok_or_else(|| Error::Parse(format!("not an integer: {n}"))),
        Value::String(s) => s.trim().parse().map_err(|_| Error::Parse(format!("not an integer: {s:?}"))),
        other => Err(Error::Parse(format!("expected integer, got {other}"))),
    }
}

pub fn parse_vector(v: &Value) -> Result<LatticeVector> {
    let arr = v.as_array().ok_or_else(|| Error::Parse("expected an integer array".into()))?;
    Ok(LatticeVector(arr.iter().map(parse_int).collect::<Result<_>>()?))
}

pub fn parse_matrix(v: &Value) -> Result<IntMatrix> {
    let rows = v.as_array().ok_or_else(|| Error::Parse("expected an array of rows".into()))?;
    let rows: Vec<Vec<BigInt>> = rows.iter().map(|r| parse_vector(r).map(|x| x.0)).collect::<Result<_>>()?;
    let width = rows.first().map_or(0, Vec::len);
    if rows.iter().any(|r| r.len() != width) {
        return Err(Error::Parse("ragged matrix".into()));
    }
    Ok(IntMatrix::from_rows(rows))
}

/// Accepts `{"dim": n, "gram": [...]}` or a bare array of rows.
pub fn parse_form(v: &Value) -> Result<GramForm> {
    let gram = match v.get("gram") {
        Some(g) => parse_matrix(g)?,
        None => parse_matrix(v)?,
    };
    if let Some(dim) = v.get("dim") {
        let dim = dim.as_u64().ok_or_else(|| Error::Parse("dim must be a positive integer".into()))? as usize;
        if dim != gram.nrows() || dim != gram.ncols() {
            return Err(Error::DimensionMismatch { expected: dim, got: gram.nrows() });
        }
    }
    if gram.nrows() != gram.ncols() {
        return Err(Error::NotSymmetric);
    }
    GramForm::new(gram)
}

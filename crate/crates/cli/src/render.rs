use std::collections::BTreeMap;

use num_bigint::BigInt;
use serde_json::{json, Map, Value};

use morsekit::symfunc::Partition;
use morsekit::{Field, Matrix};

/// Entries row by row: plain numbers over R, `[re, im]` over C and
/// `[re, i, j, k]` over H.
pub fn matrix(m: &Matrix) -> Value {
    let width = m.field().real_dim();
    let rows: Vec<Value> = (0..m.rows())
        .map(|r| {
            let row: Vec<Value> = (0..m.cols())
                .map(|c| {
                    let z = m[(r, c)].components();
                    if m.field() == Field::Real {
                        json!(z[0])
                    } else {
                        Value::Array(z[..width].iter().map(|v| json!(v)).collect())
                    }
                })
                .collect();
            Value::Array(row)
        })
        .collect();
    Value::Array(rows)
}

pub fn bigint(v: &BigInt) -> Value {
    match i64::try_from(v) {
        Ok(x) => json!(x),
        Err(_) => json!(v.to_string()),
    }
}

pub fn constants(c: &BTreeMap<Partition, BigInt>) -> Value {
    let mut obj = Map::new();
    for (k, v) in c {
        obj.insert(k.to_string(), bigint(v));
    }
    Value::Object(obj)
}

pub fn constants_text(c: &BTreeMap<Partition, BigInt>) -> String {
    if c.is_empty() {
        return "0".into();
    }
    c.iter()
        .map(|(k, v)| format!("{v}*s{k}"))
        .collect::<Vec<_>>()
        .join(" + ")
}

pub fn compact(v: &Value) -> String {
    let mut s = serde_json::to_string(v).expect("JSON values always serialise");
    s.push('\n');
    s
}

/// A CSV line from already formatted fields.
pub fn csv_row<S: AsRef<str>>(fields: &[S]) -> String {
    let mut line = fields.iter().map(|f| f.as_ref()).collect::<Vec<_>>().join(",");
    line.push('\n');
    line
}

/// Labels contain commas, so quote them in CSV.
pub fn csv_label(s: &str) -> String {
    format!("\"{s}\"")
}

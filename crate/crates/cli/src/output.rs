//! Rendering helpers: JSON encoding of big integers, table emission.
//!
//! Integers print in plain decimal everywhere. In JSON, values that fit in
//! the IEEE-754 exact-integer window (|v| <= 2^53 - 1) are numbers; larger
//! ones are decimal strings so consumers cannot silently lose precision.

use serde_json::{json, Value};
use tcores::num_bigint::BigInt;
use tcores::num_traits::ToPrimitive;

const JSON_SAFE_MAX: i64 = (1 << 53) - 1;

/// A BigInt as a JSON value: number inside the exact window, string outside.
pub fn bigint_json(v: &BigInt) -> Value {
    match v.to_i64() {
        Some(x) if (-JSON_SAFE_MAX..=JSON_SAFE_MAX).contains(&x) => json!(x),
        _ => json!(v.to_string()),
    }
}

/// One output row of `table`: absent options are methods that were not
/// requested (or not available at this n).
pub struct TableRow {
    pub n: u64,
    pub formula: Option<BigInt>,
    pub series: Option<BigInt>,
    pub oracle: Option<BigInt>,
}

/// RFC-style CSV with the fixed header and LF line endings; skipped
/// methods leave their cells blank.
pub fn table_csv(rows: &[TableRow]) -> String {
    let mut out = String::from("n,formula,series,oracle\n");
    let cell = |v: &Option<BigInt>| v.as_ref().map(BigInt::to_string).unwrap_or_default();
    for row in rows {
        out.push_str(&format!(
            "{},{},{},{}\n",
            row.n,
            cell(&row.formula),
            cell(&row.series),
            cell(&row.oracle)
        ));
    }
    out
}

/// JSON array of records; only computed methods appear as keys.
pub fn table_json(rows: &[TableRow]) -> String {
    let records: Vec<Value> = rows
        .iter()
        .map(|row| {
            let mut obj = serde_json::Map::new();
            obj.insert("n".into(), json!(row.n));
            if let Some(v) = &row.formula {
                obj.insert("formula".into(), bigint_json(v));
            }
            if let Some(v) = &row.series {
                obj.insert("series".into(), bigint_json(v));
            }
            if let Some(v) = &row.oracle {
                obj.insert("oracle".into(), bigint_json(v));
            }
            Value::Object(obj)
        })
        .collect();
    let mut text = serde_json::to_string_pretty(&Value::Array(records)).expect("in-memory json");
    text.push('\n');
    text
}

/// One verification report as a JSON line.
pub fn report_json(report: &tcores::VerificationReport) -> String {
    let mismatch = match &report.first_mismatch {
        None => Value::Null,
        Some(m) => {
            let mut obj = serde_json::Map::new();
            obj.insert("n".into(), json!(m.n));
            obj.insert("formula".into(), bigint_json(&m.formula));
            obj.insert("series".into(), bigint_json(&m.series));
            obj.insert(
                "oracle".into(),
                m.oracle.as_ref().map(bigint_json).unwrap_or(Value::Null),
            );
            Value::Object(obj)
        }
    };
    let value = json!({
        "theorem": report.theorem,
        "ok": report.is_ok(),
        "terms_checked": report.terms_checked,
        "sturm_bound": report.sturm_bound,
        "sturm_met": report.meets_sturm_bound(),
        "first_mismatch": mismatch,
        "elapsed_ms": report.elapsed.as_millis() as u64,
    });
    serde_json::to_string(&value).expect("in-memory json")
}

//! Deterministic JSON and CSV writers.
//!
//! Floating-point values are written with 17 significant digits so that
//! every double round-trips and repeated runs compare byte for byte.

use std::fmt::Write as _;

use serde::Serialize;
use serde_json::Value;

use crate::linalg::Point2;

/// 17 significant digits in scientific notation; non-finite values become `null`.
pub fn fmt_f64(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        "null".to_string()
    }
}

pub fn to_json_string<T: Serialize + ?Sized>(value: &T) -> String {
    let v = serde_json::to_value(value).expect("serializable report");
    let mut out = String::new();
    write_value(&mut out, &v, 0);
    out.push('\n');
    out
}

fn write_value(out: &mut String, v: &Value, indent: usize) {
    match v {
        Value::Null => out.push_str("null"),
        Value::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                let _ = write!(out, "{i}");
            } else if let Some(u) = n.as_u64() {
                let _ = write!(out, "{u}");
            } else {
                out.push_str(&fmt_f64(n.as_f64().unwrap_or(f64::NAN)));
            }
        }
        Value::String(s) => out.push_str(&Value::String(s.clone()).to_string()),
        Value::Array(a) => {
            if a.is_empty() {
                out.push_str("[]");
                return;
            }
            let flat = a.iter().all(|e| !e.is_array() && !e.is_object());
            if flat {
                out.push('[');
                for (i, e) in a.iter().enumerate() {
                    if i > 0 {
                        out.push_str(", ");
                    }
                    write_value(out, e, indent);
                }
                out.push(']');
                return;
            }
            out.push_str("[\n");
            for (i, e) in a.iter().enumerate() {
                pad(out, indent + 1);
                write_value(out, e, indent + 1);
                if i + 1 < a.len() {
                    out.push(',');
                }
                out.push('\n');
            }
            pad(out, indent);
            out.push(']');
        }
        Value::Object(m) => {
            if m.is_empty() {
                out.push_str("{}");
                return;
            }
            out.push_str("{\n");
            for (i, (k, e)) in m.iter().enumerate() {
                pad(out, indent + 1);
                out.push_str(&Value::String(k.clone()).to_string());
                out.push_str(": ");
                write_value(out, e, indent + 1);
                if i + 1 < m.len() {
                    out.push(',');
                }
                out.push('\n');
            }
            pad(out, indent);
            out.push('}');
        }
    }
}

fn pad(out: &mut String, indent: usize) {
    for _ in 0..indent {
        out.push_str("  ");
    }
}

/// CSV with header `re_x,im_x,re_y,im_y`, one point per row.
pub fn points_csv(points: &[Point2]) -> String {
    let mut out = String::from("re_x,im_x,re_y,im_y\n");
    for p in points {
        let r = p.to_reals();
        let _ = writeln!(
            out,
            "{},{},{},{}",
            fmt_f64(r[0]),
            fmt_f64(r[1]),
            fmt_f64(r[2]),
            fmt_f64(r[3])
        );
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn floats_round_trip_with_17_digits() {
        for &x in &[0.1, 1.0 / 3.0, 2.618033988749895, -1e-300, 6.02e23] {
            let s = fmt_f64(x);
            assert_eq!(s.parse::<f64>().unwrap(), x);
        }
        assert_eq!(fmt_f64(1.5), "1.5000000000000000e0");
    }

    #[test]
    fn json_is_valid_and_stable() {
        let v = json!({"b": [1, 2.5, {"c": null}], "a": "x\"y", "n": 3});
        let s = to_json_string(&v);
        let back: Value = serde_json::from_str(&s).unwrap();
        assert_eq!(back["b"][1].as_f64(), Some(2.5));
        assert_eq!(back["n"].as_u64(), Some(3));
        assert_eq!(s, to_json_string(&v));
    }
}

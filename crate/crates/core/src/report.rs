//! Canonical JSON serialization for reports: keys sorted, floats with 17
//! significant digits, LF endings. Byte-identical output for identical
//! inputs is part of the toolkit's determinism contract, so this module
//! formats numbers itself instead of relying on a serializer's shortest
//! representation.

use std::path::Path;

use serde_json::Value;

/// Format a float with 17 significant digits (1 leading + 16 fractional).
/// Non-finite values serialize as JSON null.
pub fn fmt_float(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        "null".to_string()
    }
}

/// Render a JSON value canonically. `serde_json`'s default map preserves
/// sorted key order, so object iteration is already alphabetical.
pub fn to_canonical_json(v: &Value) -> String {
    let mut out = String::new();
    write_value(v, 0, &mut out);
    out.push('\n');
    out
}

fn write_value(v: &Value, indent: usize, out: &mut String) {
    match v {
        Value::Null => out.push_str("null"),
        Value::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                out.push_str(&i.to_string());
            } else if let Some(u) = n.as_u64() {
                out.push_str(&u.to_string());
            } else {
                out.push_str(&fmt_float(n.as_f64().unwrap_or(f64::NAN)));
            }
        }
        Value::String(s) => write_string(s, out),
        Value::Array(items) => {
            if items.is_empty() {
                out.push_str("[]");
                return;
            }
            out.push('[');
            for (k, item) in items.iter().enumerate() {
                if k > 0 {
                    out.push(',');
                }
                out.push('\n');
                push_indent(indent + 1, out);
                write_value(item, indent + 1, out);
            }
            out.push('\n');
            push_indent(indent, out);
            out.push(']');
        }
        Value::Object(map) => {
            if map.is_empty() {
                out.push_str("{}");
                return;
            }
            out.push('{');
            for (k, (key, item)) in map.iter().enumerate() {
                if k > 0 {
                    out.push(',');
                }
                out.push('\n');
                push_indent(indent + 1, out);
                write_string(key, out);
                out.push_str(": ");
                write_value(item, indent + 1, out);
            }
            out.push('\n');
            push_indent(indent, out);
            out.push('}');
        }
    }
}

fn push_indent(n: usize, out: &mut String) {
    for _ in 0..n {
        out.push_str("  ");
    }
}

fn write_string(s: &str, out: &mut String) {
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            '\t' => out.push_str("\\t"),
            c if (c as u32) < 0x20 => out.push_str(&format!("\\u{:04x}", c as u32)),
            c => out.push(c),
        }
    }
    out.push('"');
}

/// JSON number node carrying the float (formatting happens at write time).
pub fn float(x: f64) -> Value {
    serde_json::Number::from_f64(x)
        .map(Value::Number)
        .unwrap_or(Value::Null)
}

pub fn float_pair(p: (f64, f64)) -> Value {
    Value::Array(vec![float(p.0), float(p.1)])
}

pub fn float_triple(p: [f64; 3]) -> Value {
    Value::Array(vec![float(p[0]), float(p[1]), float(p[2])])
}

/// Write a canonical report to `path` atomically.
pub fn write_json(v: &Value, path: impl AsRef<Path>) -> std::io::Result<()> {
    crate::mesh::write_atomic(path.as_ref(), to_canonical_json(v).as_bytes())
}

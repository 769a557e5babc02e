//! JSON text output with floats printed to 17 significant digits.

use serde_json::Value;

fn write_float(out: &mut String, x: f64) {
    if !x.is_finite() {
        out.push_str("null");
        return;
    }
    if x == 0.0 {
        out.push_str("0.0");
        return;
    }
    let exp = x.abs().log10().floor() as i32;
    if (-5..=16).contains(&exp) {
        let decimals = (16 - exp).max(1) as usize;
        out.push_str(&format!("{x:.decimals$}"));
    } else {
        out.push_str(&format!("{x:.16e}"));
    }
}

fn write_value(out: &mut String, v: &Value) {
    match v {
        Value::Null => out.push_str("null"),
        Value::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
        Value::Number(n) => {
            if n.is_f64() {
                write_float(out, n.as_f64().expect("f64 number"));
            } else {
                out.push_str(&n.to_string());
            }
        }
        Value::String(s) => out.push_str(&Value::String(s.clone()).to_string()),
        Value::Array(items) => {
            out.push('[');
            for (i, item) in items.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                write_value(out, item);
            }
            out.push(']');
        }
        Value::Object(map) => {
            out.push('{');
            for (i, (k, item)) in map.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                out.push_str(&Value::String(k.clone()).to_string());
                out.push(':');
                write_value(out, item);
            }
            out.push('}');
        }
    }
}

/// One line of JSON (no trailing newline).
pub fn to_line(v: &Value) -> String {
    let mut out = String::new();
    write_value(&mut out, v);
    out
}

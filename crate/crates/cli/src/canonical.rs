//! Canonical JSON: sorted keys, no whitespace, every float written with 17
//! significant digits in exponent form. Integers are written as integers.

use serde::Serialize;
use serde_json::Value;

pub fn to_canonical_string<T: Serialize>(value: &T) -> serde_json::Result<String> {
    let value = serde_json::to_value(value)?;
    let mut out = String::new();
    write_value(&value, &mut out);
    Ok(out)
}

pub fn write_value(value: &Value, out: &mut String) {
    match value {
        Value::Null => out.push_str("null"),
        Value::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                out.push_str(&i.to_string());
            } else if let Some(u) = n.as_u64() {
                out.push_str(&u.to_string());
            } else {
                out.push_str(&format_float(n.as_f64().expect("json numbers are finite")));
            }
        }
        Value::String(s) => out.push_str(&Value::String(s.clone()).to_string()),
        Value::Array(items) => {
            out.push('[');
            for (i, item) in items.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                write_value(item, out);
            }
            out.push(']');
        }
        Value::Object(map) => {
            let mut keys: Vec<&String> = map.keys().collect();
            keys.sort();
            out.push('{');
            for (i, key) in keys.into_iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                out.push_str(&Value::String(key.clone()).to_string());
                out.push(':');
                write_value(&map[key], out);
            }
            out.push('}');
        }
    }
}

/// `d.dddddddddddddddde±x`, 17 significant digits.
pub fn format_float(v: f64) -> String {
    let v = if v == 0.0 { 0.0 } else { v };
    format!("{v:.16e}")
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn sorts_keys_and_formats_floats() {
        let v = json!({"b": 1.5, "a": [1, -2, 0.1], "c": {"z": null, "y": "q\"s"}});
        let mut out = String::new();
        write_value(&v, &mut out);
        assert_eq!(
            out,
            r#"{"a":[1,-2,1.0000000000000001e-1],"b":1.5000000000000000e0,"c":{"y":"q\"s","z":null}}"#
        );
    }

    #[test]
    fn floats_round_trip() {
        for v in [601.636_520_24_f64, -1e-300, 1e300, 0.1 + 0.2, -0.0] {
            let text = format_float(v);
            assert_eq!(text.parse::<f64>().unwrap(), if v == 0.0 { 0.0 } else { v });
            let digits = text.split('e').next().unwrap().replace(['-', '.'], "");
            assert_eq!(digits.len(), 17);
        }
    }

    #[test]
    fn output_is_valid_json() {
        let v = json!({"x": [1.25, {"k": 3}], "t": true});
        let text = to_canonical_string(&v).unwrap();
        let back: Value = serde_json::from_str(&text).unwrap();
        assert_eq!(back, v);
    }
}

use std::io::Write;

use serde_json::Value;

/// Rounds to 12 significant digits.
pub fn round12(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{x:.11e}").parse().unwrap_or(x)
}

pub fn fmt12(x: f64) -> String {
    format!("{}", round12(x))
}

/// Applies [`round12`] to every non-integer number in `v`.
pub fn round_floats(v: &mut Value) {
    match v {
        Value::Number(n) if n.is_f64() => {
            if let Some(x) = n.as_f64() {
                if let Some(r) = serde_json::Number::from_f64(round12(x)) {
                    *n = r;
                }
            }
        }
        Value::Array(a) => a.iter_mut().for_each(round_floats),
        Value::Object(o) => o.values_mut().for_each(round_floats),
        _ => {}
    }
}

pub fn emit_json(mut v: Value) {
    round_floats(&mut v);
    println!("{}", serde_json::to_string_pretty(&v).expect("values serialize"));
}

/// One compact JSON document per line, flushed immediately.
pub fn emit_json_line(mut v: Value) {
    round_floats(&mut v);
    let mut out = std::io::stdout().lock();
    let _ = writeln!(out, "{}", serde_json::to_string(&v).expect("values serialize"));
    let _ = out.flush();
}

pub fn emit_csv_line(line: &str) {
    let mut out = std::io::stdout().lock();
    let _ = writeln!(out, "{line}");
    let _ = out.flush();
}

pub fn csv_header(seed: u64, header: &str) {
    emit_csv_line(&format!("# seed={seed}"));
    emit_csv_line(header);
}

/// Space-separated list, safe inside a CSV field.
pub fn join_spaced<T: ToString>(items: impl IntoIterator<Item = T>) -> String {
    items.into_iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
}

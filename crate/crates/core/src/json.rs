//! Fixed float formatting for report JSON, so golden files stay byte-stable.

use serde::Serializer;

/// Rounds to 9 decimal places before serializing.
pub fn fixed<S: Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_f64(round9(*x))
}

pub fn round9(x: f64) -> f64 {
    let r = (x * 1e9).round() / 1e9;
    // avoid "-0.0" in output
    if r == 0.0 {
        0.0
    } else {
        r
    }
}

/// Canonical pretty JSON with a trailing newline.
pub fn to_pretty<T: serde::Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("value serializes");
    s.push('\n');
    s
}

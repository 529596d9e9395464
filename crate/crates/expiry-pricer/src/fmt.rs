//! Deterministic 12-significant-digit float formatting for all emitted
//! artifacts (JSON, CSV, SVG).
//!
//! Every floating-point value the library or CLI writes goes through
//! [`fmt_f64`], so regression fixtures stay byte-stable across runs, thread
//! counts, and platforms.

/// Format a finite float with exactly 12 significant digits in scientific
/// notation (e.g. `1.96734670144e-1`). The output is a valid JSON number.
///
/// Negative zero is normalized to positive zero so semantically identical
/// results cannot differ textually.
pub fn fmt_f64(x: f64) -> String {
    assert!(x.is_finite(), "refusing to format non-finite value {x}");
    let x = if x == 0.0 { 0.0 } else { x };
    format!("{x:.11e}")
}

/// Format a float that may legitimately be infinite (threshold times use
/// `+inf` for "never buy"). Finite values go through [`fmt_f64`].
pub fn fmt_f64_or_inf(x: f64) -> String {
    if x.is_infinite() {
        if x > 0.0 { "inf".to_string() } else { "-inf".to_string() }
    } else {
        fmt_f64(x)
    }
}

/// Minimal JSON string escaping for the hand-written emitters (keys and
/// values we emit are plain identifiers/paths, but escape defensively).
pub fn json_escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    for ch in s.chars() {
        match ch {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            '\t' => out.push_str("\\t"),
            c if (c as u32) < 0x20 => out.push_str(&format!("\\u{:04x}", c as u32)),
            c => out.push(c),
        }
    }
    out
}

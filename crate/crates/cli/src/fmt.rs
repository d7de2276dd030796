//! Numeric output formatting: everything prints in full double precision.

/// Formats with 17 significant digits (round-trippable f64).
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

/// Optional value; absent prints as the empty field.
pub fn fmt_opt(v: Option<f64>) -> String {
    v.map(fmt_f64).unwrap_or_default()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trips_f64() {
        for v in [1.0, -0.1, 2.2250738585072014e-308, 12345.6789, std::f64::consts::PI] {
            let s = fmt_f64(v);
            let back: f64 = s.parse().unwrap();
            assert_eq!(back, v, "{s}");
        }
    }
}

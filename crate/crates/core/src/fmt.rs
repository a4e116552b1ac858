//! Bit-stable float rendering for machine-readable output.

/// Significant digits used by every CSV/JSON writer in the workspace.
pub const SIGNIFICANT_DIGITS: usize = 12;

/// Rounds `x` to [`SIGNIFICANT_DIGITS`] significant decimal digits.
pub fn round_sig(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x)
        .parse()
        .unwrap_or(x)
}

/// Shortest rendering of `round_sig(x)`; exponent notation outside
/// `[1e-4, 1e15)`.
pub fn sig(x: f64) -> String {
    let r = round_sig(x);
    if r == 0.0 {
        // avoid "-0"
        return "0".to_string();
    }
    if r.is_finite() && !(1e-4..1e15).contains(&r.abs()) {
        return format!("{r:e}");
    }
    format!("{r}")
}

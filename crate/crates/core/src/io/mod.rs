//! Scene and result files, and SVG rendering.

pub mod result;
pub mod scene;
pub mod svg;

pub use result::{JunctionResult, PlacementResult, ResultFile, TopEntry, SCHEMA_VERSION};
pub use scene::{Scene, SceneLine};

/// Significant digits kept in every emitted number.
pub const SIG_DIGITS: usize = 12;

/// `x` rounded to 12 significant digits, with `-0` folded into `0`.
pub fn round_sig(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return if x == 0.0 { 0.0 } else { x };
    }
    let r: f64 = format!("{:.*e}", SIG_DIGITS - 1, x).parse().unwrap_or(x);
    if r == 0.0 {
        0.0
    } else {
        r
    }
}

/// Shortest decimal text for `round_sig(x)`.
pub fn fmt_num(x: f64) -> String {
    format!("{}", round_sig(x))
}

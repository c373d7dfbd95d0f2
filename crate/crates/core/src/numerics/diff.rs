use crate::error::{Error, Result};

/// Symmetric difference quotient `(f(t + h) - f(t - h)) / 2h`.
///
/// Time-like callers keep `h < t`; that is their responsibility, since the
/// quotient itself is meaningful for any `h > 0`.
pub fn central_diff<F>(f: F, t: f64, h: f64) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    if !(h > 0.0 && h.is_finite()) {
        return Err(Error::argument("central_diff", format!("step must be positive, got {h}")));
    }
    Ok((f(t + h)? - f(t - h)?) / (2.0 * h))
}

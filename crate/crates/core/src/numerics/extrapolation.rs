//! Richardson extrapolation to `h -> 0`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Extrapolated limit together with the change between the last two
/// diagonal entries of the tableau.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Extrapolation {
    pub limit: f64,
    pub residual: f64,
}

/// Extrapolates samples `(h, value)` to `h = 0` assuming
/// `value(h) = L + c1 h^p + c2 h^{2p} + ...` with `p = order`.
///
/// This is Neville's scheme in the variable `x = h^p`, so samples need not
/// share a common ratio; they must be given with strictly decreasing `h > 0`.
pub fn richardson_limit(samples: &[(f64, f64)], order: f64) -> Result<Extrapolation> {
    const OP: &str = "richardson_limit";
    if samples.len() < 3 {
        return Err(Error::argument(OP, format!("need at least 3 samples, got {}", samples.len())));
    }
    if !(order > 0.0) {
        return Err(Error::argument(OP, format!("order must be positive, got {order}")));
    }
    for w in samples.windows(2) {
        if !(w[1].0 < w[0].0 && w[1].0 > 0.0) {
            return Err(Error::argument(OP, "step sizes must be positive and strictly decreasing"));
        }
    }
    let x: Vec<f64> = samples.iter().map(|(h, _)| h.powf(order)).collect();
    let mut prev_diag = samples[0].1;
    let mut row: Vec<f64> = vec![samples[0].1];
    let mut residual = f64::INFINITY;
    for i in 1..samples.len() {
        let mut next = vec![samples[i].1];
        for j in 1..=i {
            let t_left = next[j - 1];
            let t_up = row[j - 1];
            next.push(t_left + (t_left - t_up) / (x[i - j] / x[i] - 1.0));
        }
        let diag = next[i];
        residual = (diag - prev_diag).abs();
        prev_diag = diag;
        row = next;
    }
    Ok(Extrapolation { limit: prev_diag, residual })
}

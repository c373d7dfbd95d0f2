use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Least-squares line through `(ln t, ln y)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SlopeFit {
    pub slope: f64,
    pub intercept: f64,
    /// Standard error of the slope.
    pub std_error: f64,
    pub point_count: usize,
}

/// Fits `ln y = intercept + slope * ln t`.
pub fn fit_log_log_slope(points: &[(f64, f64)]) -> Result<SlopeFit> {
    const OP: &str = "fit_log_log_slope";
    if points.len() < 3 {
        return Err(Error::argument(OP, format!("need at least 3 points, got {}", points.len())));
    }
    for &(t, y) in points {
        if !(t > 0.0) || !(y > 0.0) || !t.is_finite() || !y.is_finite() {
            return Err(Error::argument(OP, format!("non-positive point ({t}, {y})")));
        }
    }
    let n = points.len() as f64;
    let xs: Vec<f64> = points.iter().map(|p| p.0.ln()).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.1.ln()).collect();
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    if !(sxx > 0.0) {
        return Err(Error::argument(OP, "abscissae must be distinct"));
    }
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ssr: f64 = xs.iter().zip(&ys).map(|(x, y)| (y - intercept - slope * x).powi(2)).sum();
    let std_error = (ssr / (n - 2.0) / sxx).sqrt();
    Ok(SlopeFit { slope, intercept, std_error, point_count: points.len() })
}

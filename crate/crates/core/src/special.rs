//! Cancellation-free forms of hyperbolic and trigonometric expressions that
//! vanish or blow up at the origin.

const SERIES_CUTOFF: f64 = 0.25;

fn poly(x2: f64, coeffs: &[f64]) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, c| acc * x2 + c)
}

/// `ln sinh x` for `x > 0`, safe for large `x`.
pub fn ln_sinh(x: f64) -> f64 {
    if x > 20.0 {
        x + (-(-2.0 * x).exp()).ln_1p() - std::f64::consts::LN_2
    } else {
        x.sinh().ln()
    }
}

/// `ln(x / sinh x)`.
pub fn ln_x_over_sinh(x: f64) -> f64 {
    let x = x.abs();
    if x < SERIES_CUTOFF {
        let x2 = x * x;
        x2 * poly(x2, &[-1.0 / 6.0, 1.0 / 180.0, -1.0 / 2835.0, 1.0 / 37800.0, -1.0 / 467775.0, 691.0 / 3831077250.0])
    } else {
        x.ln() - ln_sinh(x)
    }
}

/// `x coth x - 1`.
pub fn x_coth_x_minus_one(x: f64) -> f64 {
    let x = x.abs();
    if x < SERIES_CUTOFF {
        let x2 = x * x;
        x2 * poly(x2, &[1.0 / 3.0, -1.0 / 45.0, 2.0 / 945.0, -1.0 / 4725.0, 2.0 / 93555.0, -1382.0 / 638512875.0])
    } else {
        x / x.tanh() - 1.0
    }
}

/// `1/x - coth x`, odd in `x`.
pub fn inv_x_minus_coth(x: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        -x_coth_x_minus_one(x) / x
    }
}

/// `1/sinh^2 x - 1/x^2`.
pub fn inv_sinh2_minus_inv_x2(x: f64) -> f64 {
    let x = x.abs();
    if x < SERIES_CUTOFF {
        let x2 = x * x;
        poly(
            x2,
            &[-1.0 / 3.0, 1.0 / 15.0, -2.0 / 189.0, 1.0 / 675.0, -2.0 / 10395.0, 1382.0 / 58046625.0, -4.0 / 1403325.0],
        )
    } else {
        let s = x.sinh();
        1.0 / (s * s) - 1.0 / (x * x)
    }
}

/// `x cot x - 1` for `|x| < π`.
pub fn x_cot_x_minus_one(x: f64) -> f64 {
    let x = x.abs();
    if x < SERIES_CUTOFF {
        let x2 = x * x;
        -x2 * poly(x2, &[1.0 / 3.0, 1.0 / 45.0, 2.0 / 945.0, 1.0 / 4725.0, 2.0 / 93555.0, 1382.0 / 638512875.0])
    } else {
        x / x.tan() - 1.0
    }
}

/// `ln(sin x / x)` for `|x| < π`.
pub fn ln_sin_over_x(x: f64) -> f64 {
    let x = x.abs();
    if x < SERIES_CUTOFF {
        let x2 = x * x;
        -x2 * poly(x2, &[1.0 / 6.0, 1.0 / 180.0, 1.0 / 2835.0, 1.0 / 37800.0, 1.0 / 467775.0, 691.0 / 3831077250.0])
    } else {
        (x.sin() / x).ln()
    }
}

/// `sin x - x cos x`.
pub fn sin_minus_x_cos(x: f64) -> f64 {
    if x.abs() < SERIES_CUTOFF {
        let x2 = x * x;
        x * x2 * poly(x2, &[1.0 / 3.0, -1.0 / 30.0, 1.0 / 840.0, -1.0 / 45360.0, 1.0 / 3991680.0, -1.0 / 518918400.0])
    } else {
        x.sin() - x * x.cos()
    }
}

/// `x - sin x`.
pub fn x_minus_sin(x: f64) -> f64 {
    if x.abs() < SERIES_CUTOFF {
        let x2 = x * x;
        x * x2
            * poly(x2, &[1.0 / 6.0, -1.0 / 120.0, 1.0 / 5040.0, -1.0 / 362880.0, 1.0 / 39916800.0, -1.0 / 6227020800.0])
    } else {
        x - x.sin()
    }
}

//! Smooth cutoff `η(s) = φ(s / r)` with `φ = 1` on `[0, 1]` and `φ = 0` on `[2, ∞)`.
//!
//! On the transition interval `φ = ζ²`, where `ζ` is the normalized tail
//! integral of a smooth bump density `ρ` supported in `[1, 2]`. Writing the
//! profile as a square keeps `φ'² / φ = 4ρ²` bounded up to the point where
//! `φ` vanishes.

use std::sync::OnceLock;

use crate::numerics::Quadrature;

const LEFT_WIDTH: f64 = 0.3;
const RIGHT_WIDTH: f64 = 0.1;

/// Value and first two derivatives of the normalized profile.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CutoffValue {
    pub value: f64,
    pub d1: f64,
    pub d2: f64,
    /// `φ'² / φ`, taken as its limit where `φ = 0`.
    pub grad_sq_over_value: f64,
}

fn psi(u: f64) -> (f64, f64) {
    if u <= 0.0 {
        (0.0, 0.0)
    } else {
        let e = (-1.0 / u).exp();
        (e, e / (u * u))
    }
}

/// Smooth step from 0 at `u <= 0` to 1 at `u >= 1`, with its derivative.
fn step(u: f64) -> (f64, f64) {
    let (a, da) = psi(u);
    let (b, db) = psi(1.0 - u);
    let s = a + b;
    (a / s, (da * b + a * db) / (s * s))
}

/// Unnormalized density on `x ∈ [0, 1]` and its derivative.
fn density(x: f64) -> (f64, f64) {
    if !(x > 0.0 && x < 1.0) {
        return (0.0, 0.0);
    }
    let (l, dl) = step(x / LEFT_WIDTH);
    let (r, dr) = step((1.0 - x) / RIGHT_WIDTH);
    let w = 1.0 + x;
    let v = l * r * w;
    let dv = dl / LEFT_WIDTH * r * w - l * dr / RIGHT_WIDTH * w + l * r;
    (v, dv)
}

fn quadrature() -> Quadrature {
    Quadrature::new(1e-16).with_rel_tol(1e-15)
}

fn total() -> f64 {
    static TOTAL: OnceLock<f64> = OnceLock::new();
    *TOTAL.get_or_init(|| {
        quadrature().integrate(|x: f64| density(x).0, 0.0, 1.0).expect("cutoff density integrates").value
    })
}

/// Profile at the normalized argument `x = s / r`.
pub fn cutoff_profile(x: f64) -> CutoffValue {
    if x <= 1.0 {
        return CutoffValue { value: 1.0, d1: 0.0, d2: 0.0, grad_sq_over_value: 0.0 };
    }
    if x >= 2.0 {
        return CutoffValue { value: 0.0, d1: 0.0, d2: 0.0, grad_sq_over_value: 0.0 };
    }
    let u = x - 1.0;
    let a = total();
    let partial =
        |lo: f64, hi: f64| quadrature().integrate(|y: f64| density(y).0, lo, hi).map(|q| q.value).unwrap_or(0.0) / a;
    let zeta = if u < 0.5 { 1.0 - partial(0.0, u) } else { partial(u, 1.0) };
    let zeta = zeta.clamp(0.0, 1.0);
    let (rho, drho) = density(u);
    let (rho, drho) = (rho / a, drho / a);
    CutoffValue {
        value: zeta * zeta,
        d1: -2.0 * zeta * rho,
        d2: 2.0 * rho * rho - 2.0 * zeta * drho,
        grad_sq_over_value: 4.0 * rho * rho,
    }
}

/// `η(s) = φ(s / r)`: 1 for `s <= r`, 0 for `s >= 2r`.
pub fn smooth_cutoff(s: f64, r: f64) -> f64 {
    cutoff_profile(s / r).value
}

//! Heat kernel on the unit 2-sphere.
//!
//! Two representations are used:
//!
//! * the eigenfunction series `Σ_l (2l+1)/(4π) e^{-l(l+1)t} P_l(cos θ)`,
//!   which converges fast for moderate and large `t`;
//! * for small `t`, the image-sum integral
//!
//!   `H(θ,t) = 2 e^{t/4} (4πt)^{-3/2} ∫_0^{π/2} Σ_k (-1)^k φ_k e^{-φ_k²/4t} / sin(φ/2) dα`,
//!
//!   with `φ = 2 arccos(cos α cos(θ/2))` and `φ_k = φ + 2πk`. The Gaussian
//!   factor `e^{-θ²/4t}` is pulled out analytically, so the kernel and its
//!   logarithmic derivatives stay accurate where `H` itself underflows.
//!
//! The series alone cannot resolve `H` at `θ² / t ≫ 1`: its terms are O(1)
//! while the sum is exponentially small.

use std::f64::consts::PI;

use super::circle::images_per_side;
use super::KernelJet;
use crate::error::Result;
use crate::numerics::Quadrature;
use crate::special;

/// Times at or above this use the eigenfunction series.
pub const SERIES_SWITCH: f64 = 0.5;

const SERIES_TOL: f64 = 1e-16;

/// Truncation index `⌈sqrt(max(1, -ln tol) / t)⌉ + 10` for the eigenseries.
pub fn series_lmax(t: f64, tol: f64) -> usize {
    ((1f64).max(-tol.ln()) / t).sqrt().ceil() as usize + 10
}

/// Bound on `Σ_{j >= l} (2j+1)/(4π) e^{-j(j+1)t}`, which dominates the
/// absolute tail of the eigenseries since `|P_j| <= 1`.
pub fn series_tail_bound(l: usize, t: f64) -> f64 {
    let lf = l as f64;
    let q = (-2.0 * (lf + 1.0) * t).exp();
    (-lf * (lf + 1.0) * t).exp() * ((2.0 * lf + 1.0) / (1.0 - q) + 2.0 * q / (1.0 - q).powi(2)) / (4.0 * PI)
}

/// Termwise sums of the eigenseries: `H`, `∂_θ H`, `∂_θ² H`, `∂_t H`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesSums {
    pub h: f64,
    pub dh_dtheta: f64,
    pub d2h_dtheta2: f64,
    pub dh_dt: f64,
}

/// Evaluates the eigenseries through degree `lmax` with the three-term
/// Legendre recurrence and `P'_{l+1} = P'_{l-1} + (2l+1) P_l`.
pub fn series_sums(theta: f64, t: f64, lmax: usize) -> SeriesSums {
    let x = theta.cos();
    let sin = theta.sin();
    let (mut p_prev, mut p) = (0.0, 1.0);
    let (mut dp_prev, mut dp) = (0.0, 0.0);
    let mut acc = SeriesSums { h: 0.0, dh_dtheta: 0.0, d2h_dtheta2: 0.0, dh_dt: 0.0 };
    for l in 0..=lmax {
        let lf = l as f64;
        let ll = lf * (lf + 1.0);
        let c = (2.0 * lf + 1.0) / (4.0 * PI) * (-ll * t).exp();
        acc.h += c * p;
        acc.dh_dtheta -= c * sin * dp;
        // d²/dθ² P_l(cos θ) = cos θ P_l' - l(l+1) P_l by the Legendre equation.
        acc.d2h_dtheta2 += c * (x * dp - ll * p);
        acc.dh_dt -= c * ll * p;
        let p_next = ((2.0 * lf + 1.0) * x * p - lf * p_prev) / (lf + 1.0);
        let dp_next = if l == 0 { 1.0 } else { dp_prev + (2.0 * lf + 1.0) * p };
        p_prev = p;
        p = p_next;
        dp_prev = dp;
        dp = dp_next;
    }
    acc
}

pub(crate) fn jet(theta: f64, t: f64) -> Result<KernelJet> {
    if t >= SERIES_SWITCH {
        Ok(series_jet(theta, t))
    } else {
        integral_jet(theta, t)
    }
}

/// Jet from the eigenseries, valid for any `t` where the series sum is not
/// swamped by cancellation.
pub fn series_jet(theta: f64, t: f64) -> KernelJet {
    let s = series_sums(theta, t, series_lmax(t, SERIES_TOL));
    let g1 = s.dh_dtheta / s.h;
    KernelJet {
        n: 2,
        d: theta,
        t,
        log_w: (4.0 * PI * t * s.h).ln() + theta * theta / (4.0 * t),
        dlogw_dd: g1 + theta / (2.0 * t),
        d2logw_dd2: s.d2h_dtheta2 / s.h - g1 * g1 + 1.0 / (2.0 * t),
        dlogw_dt: s.dh_dt / s.h + 1.0 / t - theta * theta / (4.0 * t * t),
    }
}

/// Jet from the image-sum integral representation.
pub fn integral_jet(theta: f64, t: f64) -> Result<KernelJet> {
    let beta = 0.5 * theta;
    let (sb, cb) = beta.sin_cos();
    let m = images_per_side(t);
    let integrand = |alpha: f64| -> [f64; 4] {
        let (sa, ca) = alpha.sin_cos();
        // γ = φ/2 with cos γ = cos α cos β.
        let c = ca * cb;
        let s = (sb * sb + sa * sa * cb * cb).sqrt();
        let gamma = s.atan2(c);
        let phi = 2.0 * gamma;
        // φ - θ = 2(γ - β), from sin(γ - β) = sin²α cos²β / (sin γ cos β + cos γ sin β).
        let denom = s * cb + c * sb;
        let phi_minus_theta = if denom > 0.0 { 2.0 * (sa * sa * cb * cb / denom).atan2(c * cb + s * sb) } else { 0.0 };
        let phi_t = ca * sb / s;
        let phi_t_m1 = -sa * sa / (s * (ca * sb + s));
        let phi_tt = 0.5 * ca * cb * sa * sa / (s * s * s);
        let cot = c / s;

        let mut acc = [0.0; 4];
        for k in -m..=m {
            let phik = phi + 2.0 * PI * k as f64;
            let (e, l1, l2) = if k == 0 {
                let e = phi_minus_theta * (phi + theta) / (4.0 * t);
                // 1/φ - cot(γ)/2 and 1/(4 sin²γ) - 1/φ², both regular at γ = 0.
                let q1 = special::sin_minus_x_cos(gamma) / (2.0 * gamma * s);
                let q2 = special::x_minus_sin(gamma) * (gamma + s) / (4.0 * gamma * gamma * s * s);
                let e_th = (phi * phi_t_m1 + phi_minus_theta) / (2.0 * t);
                let e_thth = (phi_t_m1 * (phi_t + 1.0) + phi * phi_tt) / (2.0 * t);
                (e, phi_t * q1 - e_th, phi_tt * q1 + phi_t * phi_t * q2 - e_thth)
            } else {
                let e = (phik * phik - theta * theta) / (4.0 * t);
                let e_th = (phik * phi_t - theta) / (2.0 * t);
                let e_thth = (phi_t * phi_t - 1.0 + phik * phi_tt) / (2.0 * t);
                let r = phi_t / phik;
                (
                    e,
                    r - 0.5 * cot * phi_t - e_th,
                    phi_tt / phik - r * r - 0.5 * cot * phi_tt + phi_t * phi_t / (4.0 * s * s) - e_thth,
                )
            };
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            let g = sign * phik * (-e).exp() / s;
            acc[0] += g;
            acc[1] += g * l1;
            acc[2] += g * (l2 + l1 * l1);
            acc[3] += g * e;
        }
        acc
    };
    let q = Quadrature::new(1e-300).with_rel_tol(1e-12).with_scale(t.sqrt().min(0.5));
    let r = q.integrate(integrand, 0.0, 0.5 * PI)?;
    let [s0, s1, s2, s3] = r.value;
    let g1 = s1 / s0;
    Ok(KernelJet {
        n: 2,
        d: theta,
        t,
        log_w: std::f64::consts::LN_2 + 0.25 * t - 0.5 * (4.0 * PI * t).ln() + s0.ln(),
        dlogw_dd: g1,
        d2logw_dd2: s2 / s0 - g1 * g1,
        dlogw_dt: 0.25 - 0.5 / t + s3 / (t * s0),
    })
}

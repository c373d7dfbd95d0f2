//! Exact heat kernels on the model spaces.
//!
//! Every kernel is carried in Gaussian-factored form
//!
//! `H(d, t) = (4πt)^{-n/2} exp(-d²/4t) W(d, t)`
//!
//! and the jet of `ln W` is computed directly. The potential
//! `f = -ln((4πt)^{n/2} H) = d²/4t - ln W` and all logarithmic derivatives
//! therefore stay finite where `H` underflows.

mod circle;
pub mod sphere;

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::manifolds::ModelSpace;
use crate::numerics::{QuadValue, Quadrature, QuadratureResult};
use crate::special;

pub use circle::circle_kernel_images;

/// `ln W` and its first radial, second radial and time derivatives.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KernelJet {
    pub n: usize,
    pub d: f64,
    pub t: f64,
    pub log_w: f64,
    pub dlogw_dd: f64,
    pub d2logw_dd2: f64,
    pub dlogw_dt: f64,
}

impl KernelJet {
    fn half_n(&self) -> f64 {
        0.5 * self.n as f64
    }

    pub fn log_h(&self) -> f64 {
        -self.half_n() * (4.0 * PI * self.t).ln() - self.d * self.d / (4.0 * self.t) + self.log_w
    }

    /// The potential `f` with `H = (4πt)^{-n/2} e^{-f}`.
    pub fn f(&self) -> f64 {
        self.d * self.d / (4.0 * self.t) - self.log_w
    }

    pub fn f_d(&self) -> f64 {
        self.d / (2.0 * self.t) - self.dlogw_dd
    }

    pub fn f_dd(&self) -> f64 {
        0.5 / self.t - self.d2logw_dd2
    }

    pub fn f_t(&self) -> f64 {
        -self.d * self.d / (4.0 * self.t * self.t) - self.dlogw_dt
    }

    pub fn dlogh_dd(&self) -> f64 {
        -self.f_d()
    }

    pub fn d2logh_dd2(&self) -> f64 {
        -self.f_dd()
    }

    /// `H_t / H`.
    pub fn dlogh_dt(&self) -> f64 {
        -self.half_n() / self.t + self.d * self.d / (4.0 * self.t * self.t) + self.dlogw_dt
    }
}

/// Kernel value with its derivatives at one `(d, t)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KernelSample {
    pub d: f64,
    pub t: f64,
    pub h: f64,
    pub dh_dt: f64,
    pub dh_dd: f64,
    pub d2h_dd2: f64,
    pub laplacian_h: f64,
    pub f: f64,
}

fn check_args(m: &ModelSpace, op: &'static str, d: f64, t: f64) -> Result<()> {
    if !(t > 0.0) || !t.is_finite() {
        return Err(Error::domain(op, format!("time must be positive, got {t}")));
    }
    m.check_radius(op, d)
}

/// Jet of `ln W` for model `m` at distance `d` and time `t`.
pub fn kernel_jet(m: &ModelSpace, d: f64, t: f64) -> Result<KernelJet> {
    check_args(m, "kernel_jet", d, t)?;
    jet_unchecked(m, d, t)
}

pub(crate) fn jet_unchecked(m: &ModelSpace, d: f64, t: f64) -> Result<KernelJet> {
    let n = m.dimension();
    Ok(match *m {
        ModelSpace::Euclidean { .. } => {
            KernelJet { n, d, t, log_w: 0.0, dlogw_dd: 0.0, d2logw_dd2: 0.0, dlogw_dt: 0.0 }
        }
        ModelSpace::HyperbolicH3 { kappa } => {
            // W = (x / sinh x) e^{-κt}, x = √κ d.
            let k = kappa.sqrt();
            let x = k * d;
            KernelJet {
                n,
                d,
                t,
                log_w: special::ln_x_over_sinh(x) - kappa * t,
                dlogw_dd: k * special::inv_x_minus_coth(x),
                d2logw_dd2: kappa * special::inv_sinh2_minus_inv_x2(x),
                dlogw_dt: -kappa,
            }
        }
        ModelSpace::Sphere2 => sphere::jet(d, t)?,
        ModelSpace::Circle => circle::jet(d, t),
    })
}

/// `Δ ln H + |∇ ln H|^2 = ΔH / H` along the radial profile.
pub(crate) fn laplacian_over_h(m: &ModelSpace, jet: &KernelJet) -> f64 {
    let g1 = jet.dlogh_dd();
    let g2 = jet.d2logh_dd2();
    g2 + g1 * g1 + m.mean_curvature_times(jet.d, g1, g2)
}

/// Evaluates the heat kernel and its derivatives.
pub fn eval_kernel(m: &ModelSpace, d: f64, t: f64) -> Result<KernelSample> {
    check_args(m, "eval_kernel", d, t)?;
    let jet = jet_unchecked(m, d, t)?;
    let h = jet.log_h().exp();
    let g1 = jet.dlogh_dd();
    let g2 = jet.d2logh_dd2();
    Ok(KernelSample {
        d,
        t,
        h,
        dh_dt: h * jet.dlogh_dt(),
        dh_dd: h * g1,
        d2h_dd2: h * (g2 + g1 * g1),
        laplacian_h: h * laplacian_over_h(m, &jet),
        f: jet.f(),
    })
}

/// `t ln H(d, t)`, which tends to `-d²/4` as `t -> 0`.
pub fn log_kernel_scaled(m: &ModelSpace, d: f64, t: f64) -> Result<f64> {
    Ok(t * kernel_jet(m, d, t)?.log_h())
}

/// Integrates `g(jet) · H · A` over `[0, radius]` (clipped to the model's
/// radial extent; pass `f64::INFINITY` for the whole space).
pub fn integrate_against_kernel<V, G>(
    m: &ModelSpace,
    t: f64,
    radius: f64,
    tol: f64,
    g: G,
) -> Result<QuadratureResult<V>>
where
    V: QuadValue,
    G: Fn(&KernelJet) -> V,
{
    integrate_shell_against_kernel(m, t, 0.0, radius, tol, g)
}

/// Like [`integrate_against_kernel`] over the shell `[inner, outer]`.
pub fn integrate_shell_against_kernel<V, G>(
    m: &ModelSpace,
    t: f64,
    inner: f64,
    outer: f64,
    tol: f64,
    g: G,
) -> Result<QuadratureResult<V>>
where
    V: QuadValue,
    G: Fn(&KernelJet) -> V,
{
    integrate_shell_with(m, t, inner, outer, Quadrature::new(tol).with_scale(t.sqrt()), g)
}

/// Shell integral with caller-supplied quadrature settings, for integrands
/// whose size is far below any useful absolute tolerance.
pub fn integrate_shell_with<V, G>(
    m: &ModelSpace,
    t: f64,
    inner: f64,
    outer: f64,
    q: Quadrature,
    g: G,
) -> Result<QuadratureResult<V>>
where
    V: QuadValue,
    G: Fn(&KernelJet) -> V,
{
    const OP: &str = "integrate_against_kernel";
    if !(t > 0.0) || !t.is_finite() {
        return Err(Error::domain(OP, format!("time must be positive, got {t}")));
    }
    if !(inner >= 0.0) || !(outer >= inner) {
        return Err(Error::argument(OP, format!("bad shell [{inner}, {outer}]")));
    }
    let failure = std::cell::Cell::new(None);
    let weighted = |rho: f64| -> V {
        match jet_unchecked(m, rho, t) {
            Ok(jet) => {
                let w = (jet.log_h() + m.ln_area_density(rho)).exp();
                if w == 0.0 {
                    V::zero()
                } else {
                    g(&jet).scale(w)
                }
            }
            Err(e) => {
                failure.set(Some(e));
                V::zero()
            }
        }
    };
    let upper = outer.min(m.max_radius());
    let inner = inner.min(upper);
    let result = if upper.is_finite() {
        q.integrate(weighted, inner, upper)
    } else {
        // Polynomial factor covers the moments of f and H_t that callers integrate.
        let envelope = |rho: f64| {
            let poly = (1.0 + rho * rho / t).powi(3) * (1.0 + 1.0 / t);
            let log_h = jet_unchecked(m, rho, t).map(|j| j.log_h()).unwrap_or(0.0);
            poly * (log_h + m.ln_area_density(rho)).exp()
        };
        let end = q.truncation_point(inner, &envelope)?;
        q.integrate(weighted, inner, end)
    };
    if let Some(e) = failure.take() {
        return Err(e);
    }
    result
}

/// `∫ H(ρ, t) A(ρ) dρ` over the whole model; identically 1.
pub fn total_mass(m: &ModelSpace, t: f64, tol: f64) -> Result<f64> {
    Ok(integrate_against_kernel(m, t, f64::INFINITY, tol, |_| 1.0)?.value)
}

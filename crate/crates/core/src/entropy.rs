//! Nash entropy of the heat kernel and the moment functionals that govern
//! its small-time expansion.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernels::{integrate_against_kernel, integrate_shell_with, KernelJet};
use crate::manifolds::ModelSpace;
use crate::numerics::{fit_log_log_slope, richardson_limit, Quadrature, SlopeFit};

/// Default absolute quadrature tolerance for entropy integrals.
pub const DEFAULT_TOL: f64 = 1e-13;

/// Nash entropy at one time, optionally with its time derivative by two routes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EntropySample {
    pub t: f64,
    pub n: f64,
    /// Central difference of `N` with step `t/10`.
    pub dndt_direct: Option<f64>,
    /// Quadrature of the differentiated integrand.
    pub dndt_integrand: Option<f64>,
    /// Summed quadrature error estimates of everything above.
    pub quad_error: f64,
}

/// Short-time slope of `N(t)` against its curvature prediction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AsymptoticReport {
    pub slope_at_zero: f64,
    /// `-R / 2` from the model.
    pub predicted_slope: f64,
    /// Difference between the last two Richardson diagonals.
    pub extrapolation_residual: f64,
    /// Exponent fit of `|N - predicted_slope · t|`; `None` when the residual is
    /// below the floor at too many grid points.
    pub residual_fit: Option<SlopeFit>,
}

fn check_time(op: &'static str, t: f64) -> Result<()> {
    if !(t > 0.0) || !t.is_finite() {
        return Err(Error::domain(op, format!("time must be positive, got {t}")));
    }
    Ok(())
}

fn half_n(m: &ModelSpace) -> f64 {
    0.5 * m.dimension() as f64
}

/// `N(t) = ∫ f H dμ - n/2` and its quadrature error.
fn entropy_value(m: &ModelSpace, t: f64, tol: f64) -> Result<(f64, f64)> {
    let q = integrate_against_kernel(m, t, f64::INFINITY, tol, |j: &KernelJet| j.f())?;
    Ok((q.value - half_n(m), q.error_estimate))
}

/// Nash entropy `N(H, t)`.
pub fn nash_entropy(m: &ModelSpace, t: f64, tol: f64) -> Result<EntropySample> {
    check_time("nash_entropy", t)?;
    let (n, err) = entropy_value(m, t, tol)?;
    Ok(EntropySample { t, n, dndt_direct: None, dndt_integrand: None, quad_error: err })
}

/// `N` split at radius `r` into the ball and its complement.
pub fn nash_entropy_split(m: &ModelSpace, t: f64, r: f64, tol: f64) -> Result<(f64, f64)> {
    check_time("nash_entropy_split", t)?;
    let inner = integrate_against_kernel(m, t, r, tol, |j: &KernelJet| j.f())?.value;
    let q = Quadrature::new(tol).with_scale(t.sqrt());
    let outer = integrate_shell_with(m, t, r, f64::INFINITY, q, |j: &KernelJet| j.f())?.value;
    Ok((inner - half_n(m), outer))
}

/// `dN/dt = ∫ (f H_t - H_t - (n/2t) H) dμ`, integrand closed-form.
fn derivative_by_integrand(m: &ModelSpace, t: f64, tol: f64) -> Result<(f64, f64)> {
    let hn = half_n(m);
    let q = integrate_against_kernel(m, t, f64::INFINITY, tol, |j: &KernelJet| {
        let ht = j.dlogh_dt();
        j.f() * ht - ht - hn / t
    })?;
    Ok((q.value, q.error_estimate))
}

/// Nash entropy with `dN/dt` by central differences and by differentiating
/// under the integral. Routes disagreeing by more than 100 times their
/// combined error estimate raise a consistency error.
pub fn entropy_derivative(m: &ModelSpace, t: f64, tol: f64) -> Result<EntropySample> {
    const OP: &str = "entropy_derivative";
    check_time(OP, t)?;
    let (n, n_err) = entropy_value(m, t, tol)?;
    let h = 0.1 * t;
    let diff = |h: f64| -> Result<(f64, f64)> {
        let (a, ea) = entropy_value(m, t + h, tol)?;
        let (b, eb) = entropy_value(m, t - h, tol)?;
        Ok(((a - b) / (2.0 * h), (ea + eb) / (2.0 * h)))
    };
    let (direct, direct_err) = diff(h)?;
    let (half_step, half_err) = diff(0.5 * h)?;
    // Step-halving estimate of the O(h²) truncation error.
    let truncation = (direct - half_step).abs() * 4.0 / 3.0;
    let (integrand, integrand_err) = derivative_by_integrand(m, t, tol)?;
    let allowed = 100.0 * (truncation + direct_err + half_err + integrand_err);
    if !((direct - integrand).abs() <= allowed) {
        return Err(Error::Consistency { op: OP, a: direct, b: integrand, allowed });
    }
    Ok(EntropySample {
        t,
        n,
        dndt_direct: Some(direct),
        dndt_integrand: Some(integrand),
        quad_error: n_err + direct_err + integrand_err,
    })
}

/// Smallest admissible grid time: kernels evaluated by quadrature or series
/// are not pushed below `1e-4`.
pub fn min_grid_time(m: &ModelSpace) -> f64 {
    match m {
        ModelSpace::Sphere2 | ModelSpace::Circle => 1e-4,
        _ => 1e-5,
    }
}

/// Extrapolates `N(t)/t` to `t = 0` with half-order Richardson steps and fits
/// the exponent of the residual `|N - (-R/2) t|`.
pub fn entropy_slope_at_zero(m: &ModelSpace, t_grid: &[f64], tol: f64) -> Result<AsymptoticReport> {
    const OP: &str = "entropy_slope_at_zero";
    if t_grid.len() < 3 {
        return Err(Error::argument(OP, "need at least three times"));
    }
    let increasing = t_grid.windows(2).all(|w| w[1] > w[0]);
    let decreasing = t_grid.windows(2).all(|w| w[1] < w[0]);
    if !increasing && !decreasing {
        return Err(Error::argument(OP, "time grid must be strictly monotone"));
    }
    let floor = min_grid_time(m);
    if let Some(t) = t_grid.iter().find(|&&t| !(t >= floor) || !t.is_finite()) {
        return Err(Error::argument(OP, format!("time {t} below the grid floor {floor:e} for {m}")));
    }
    let mut samples: Vec<(f64, f64)> =
        t_grid.iter().map(|&t| Ok((t, entropy_value(m, t, tol)?.0))).collect::<Result<_>>()?;
    if increasing {
        samples.reverse();
    }
    let ratios: Vec<(f64, f64)> = samples.iter().map(|&(t, n)| (t, n / t)).collect();
    let ex = richardson_limit(&ratios, 0.5)?;
    let predicted = -0.5 * m.scalar_curvature();
    let residual_floor = 10.0 * tol;
    let residuals: Vec<(f64, f64)> =
        samples.iter().map(|&(t, n)| (t, (n - predicted * t).abs())).filter(|&(_, r)| r > residual_floor).collect();
    let residual_fit = if residuals.len() >= 3 { Some(fit_log_log_slope(&residuals)?) } else { None };
    Ok(AsymptoticReport {
        slope_at_zero: ex.limit,
        predicted_slope: predicted,
        extrapolation_residual: ex.residual,
        residual_fit,
    })
}

/// `-(1/4t) ∫_{B(r/2)} d² H dμ`; pass `r = ∞` for the whole space.
pub fn second_moment_functional(m: &ModelSpace, t: f64, r: f64, tol: f64) -> Result<f64> {
    check_time("second_moment_functional", t)?;
    let q = integrate_against_kernel(m, t, 0.5 * r, tol, |j: &KernelJet| j.d * j.d)?;
    Ok(-q.value / (4.0 * t))
}

/// `(1/4t²) ∫_{B(r/2)} (-f) H d² dμ`; pass `r = ∞` for the whole space.
pub fn fourth_moment_functional(m: &ModelSpace, t: f64, r: f64, tol: f64) -> Result<f64> {
    check_time("fourth_moment_functional", t)?;
    let q = integrate_against_kernel(m, t, 0.5 * r, tol, |j: &KernelJet| -j.f() * j.d * j.d)?;
    Ok(q.value / (4.0 * t * t))
}

/// Integrals over the complement of `B(r/2)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OuterIntegrals {
    /// `∫ |f| H dμ`.
    pub f_h: f64,
    /// `∫ |f H_t| dμ`.
    pub f_ht: f64,
}

/// Outer integrals with relative accuracy, since they are exponentially small.
pub fn outer_integral_bound(m: &ModelSpace, t: f64, r: f64) -> Result<OuterIntegrals> {
    check_time("outer_integral_bound", t)?;
    let q = Quadrature::new(1e-300).with_rel_tol(1e-10).with_scale(t.sqrt());
    let v = integrate_shell_with(m, t, 0.5 * r, f64::INFINITY, q, |j: &KernelJet| {
        let f = j.f().abs();
        [f, f * j.dlogh_dt().abs()]
    })?;
    Ok(OuterIntegrals { f_h: v.value[0], f_ht: v.value[1] })
}

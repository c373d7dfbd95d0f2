//! Pointwise checks of differential Harnack-type inequalities on the exact
//! kernels.
//!
//! All quantities are assembled from the jet of `ln W`, so they stay finite
//! where the kernel itself underflows.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernels::{jet_unchecked, kernel_jet, KernelJet};
use crate::manifolds::ModelSpace;
use crate::numerics::{fit_log_log_slope, richardson_limit, Extrapolation, SlopeFit};

/// Grid of `(d, t)` points with one value per point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SlackReport {
    pub grid: Vec<(f64, f64)>,
    /// Right-hand side minus left-hand side of the checked inequality.
    pub slack: Vec<f64>,
    pub min_slack: f64,
    pub argmin: (f64, f64),
}

impl SlackReport {
    /// Evaluates `f` over the tensor grid `d_grid × t_grid`, `d` varying fastest.
    pub fn scan<F>(d_grid: &[f64], t_grid: &[f64], f: F) -> Result<Self>
    where
        F: Fn(f64, f64) -> Result<f64>,
    {
        if d_grid.is_empty() || t_grid.is_empty() {
            return Err(Error::argument("SlackReport::scan", "empty grid"));
        }
        let mut grid = Vec::with_capacity(d_grid.len() * t_grid.len());
        let mut slack = Vec::with_capacity(grid.capacity());
        let mut min_slack = f64::INFINITY;
        let mut argmin = (f64::NAN, f64::NAN);
        for &t in t_grid {
            for &d in d_grid {
                let v = f(d, t)?;
                if v < min_slack || (argmin.0.is_nan() && v.is_nan()) {
                    min_slack = v;
                    argmin = (d, t);
                }
                grid.push((d, t));
                slack.push(v);
            }
        }
        Ok(SlackReport { grid, slack, min_slack, argmin })
    }
}

fn jet(m: &ModelSpace, d: f64, t: f64) -> Result<KernelJet> {
    kernel_jet(m, d, t)
}

/// `2Δf - |∇f|² + (f - n)/t`, rearranged so the `1/t²` terms cancel
/// analytically:
///
/// `(d A'/A - (n-1))/t - 2w'' - 2(A'/A)w' + d w'/t - w'² - ln W / t`
///
/// with `w = ln W`.
pub fn lyp_quantity(m: &ModelSpace, d: f64, t: f64) -> Result<f64> {
    let j = jet(m, d, t)?;
    let (w1, w2) = (j.dlogw_dd, j.d2logw_dd2);
    Ok(m.curvature_excess(d) / t - 2.0 * w2 - 2.0 * m.mean_curvature_times(d, w1, w2) + d * w1 / t
        - w1 * w1
        - j.log_w / t)
}

/// `lyp + R`; the claim under test says this tends to 0 as `(d, t) -> 0`.
pub fn perelman_residual(m: &ModelSpace, d: f64, t: f64) -> Result<f64> {
    Ok(lyp_quantity(m, d, t)? + m.scalar_curvature())
}

/// Richardson limit of the residual along `(d, t) = (1e-2, 1e-3) · 2^{-i}`.
pub fn perelman_limit(m: &ModelSpace, steps: usize) -> Result<Extrapolation> {
    let samples = (0..steps)
        .map(|i| {
            let s = 2f64.powi(-(i as i32));
            Ok((1e-3 * s, perelman_residual(m, 1e-2 * s, 1e-3 * s)?))
        })
        .collect::<Result<Vec<_>>>()?;
    richardson_limit(&samples, 1.0)
}

/// `ε = t ln H + (n/2) t ln(4πt) + d²/4`, which equals `t ln W`.
pub fn varadhan_residual(m: &ModelSpace, d: f64, t: f64) -> Result<f64> {
    Ok(t * jet(m, d, t)?.log_w)
}

/// `sup_{d ∈ [0, r]} |ε(t, d)|` over `samples + 1` equally spaced distances.
pub fn varadhan_sup(m: &ModelSpace, t: f64, r: f64, samples: usize) -> Result<f64> {
    if samples == 0 || !(r > 0.0) {
        return Err(Error::argument("varadhan_sup", "need a positive radius and at least one sample"));
    }
    (0..=samples).try_fold(0.0f64, |acc, i| {
        let d = r * i as f64 / samples as f64;
        Ok(acc.max(varadhan_residual(m, d, t)?.abs()))
    })
}

/// `u(x, s) = H(x, t₀ + s)` on `0 < s ≤ window`, bounded by `H(0, t₀)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ShiftedSolution {
    pub base: ModelSpace,
    pub t0: f64,
    pub window: f64,
    /// `ln 𝓜` with `𝓜 = H(0, t₀)`.
    pub ln_sup_bound: f64,
}

impl ShiftedSolution {
    pub fn new(base: ModelSpace, t0: f64, window: f64) -> Result<Self> {
        if !(t0 > 0.0) || !(window > 0.0) || !t0.is_finite() || !window.is_finite() {
            return Err(Error::argument(
                "ShiftedSolution::new",
                format!("shift {t0} and window {window} must be positive"),
            ));
        }
        let ln_sup_bound = jet(&base, 0.0, t0)?.log_h();
        Ok(ShiftedSolution { base, t0, window, ln_sup_bound })
    }

    pub fn sup_bound(&self) -> f64 {
        self.ln_sup_bound.exp()
    }

    fn check_s(&self, op: &'static str, s: f64) -> Result<()> {
        if !(s > 0.0 && s <= self.window) {
            return Err(Error::domain(op, format!("s = {s} outside (0, {}]", self.window)));
        }
        Ok(())
    }

    /// Ricci lower bound used in the estimate (`K = 0` on non-negatively curved models).
    pub fn k(&self) -> f64 {
        self.base.ricci_lower_bound()
    }
}

/// `n + (4 + 2Ks) ln(𝓜/u) - s(Δu/u + |∇u|²/u²)` for the shifted kernel.
pub fn hamilton_slack(sol: &ShiftedSolution, d: f64, s: f64) -> Result<f64> {
    sol.check_s("hamilton_slack", s)?;
    let m = &sol.base;
    let j = jet(m, d, sol.t0 + s)?;
    let g = j.dlogh_dd();
    let lhs = s * (j.dlogh_dt() + g * g);
    let n = m.dimension() as f64;
    Ok(n + (4.0 + 2.0 * sol.k() * s) * (sol.ln_sup_bound - j.log_h()) - lhs)
}

/// `s H_t/H + n`, a lower-bounded witness of the Li-Yau inequality.
pub fn li_yau_lower_check(m: &ModelSpace, d: f64, s: f64) -> Result<f64> {
    let j = jet(m, d, s)?;
    Ok(s * j.dlogh_dt() + m.dimension() as f64)
}

/// Fits the exponent of `sup_d s|Δu|` against `s` on the shifted window;
/// a non-negative exponent means no blow-up as `s -> 0`.
pub fn bernstein_scaling(sol: &ShiftedSolution, d_grid: &[f64], s_grid: &[f64]) -> Result<SlopeFit> {
    const OP: &str = "bernstein_scaling";
    if d_grid.is_empty() || s_grid.len() < 3 {
        return Err(Error::argument(OP, "need distances and at least three times"));
    }
    let points = s_grid
        .iter()
        .map(|&s| {
            sol.check_s(OP, s)?;
            let sup = d_grid.iter().try_fold(0.0f64, |acc, &d| {
                let j = jet_unchecked(&sol.base, d, sol.t0 + s)?;
                Ok::<_, Error>(acc.max((j.log_h().exp() * j.dlogh_dt()).abs()))
            })?;
            Ok((s, s * sup))
        })
        .collect::<Result<Vec<_>>>()?;
    fit_log_log_slope(&points)
}

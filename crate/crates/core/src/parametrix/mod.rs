//! Truncated small-time expansion of the heat kernel, the cutoff parametrix
//! built from it, and the remainder between parametrix and exact kernel.

mod cutoff;

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernels;
use crate::manifolds::ModelSpace;
use crate::numerics::{central_diff, fit_log_log_slope, richardson_limit, SlopeFit};

pub use cutoff::{cutoff_profile, smooth_cutoff, CutoffValue};

/// Gaussian `(4πt)^{-n/2} exp(-d² / (c t))` with divisor `c ∈ {4, 5}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TiltedGaussian {
    pub exponent_divisor: f64,
}

impl TiltedGaussian {
    pub const STANDARD: TiltedGaussian = TiltedGaussian { exponent_divisor: 4.0 };
    pub const WIDENED: TiltedGaussian = TiltedGaussian { exponent_divisor: 5.0 };

    pub fn new(exponent_divisor: f64) -> Result<Self> {
        if exponent_divisor != 4.0 && exponent_divisor != 5.0 {
            return Err(Error::argument(
                "TiltedGaussian::new",
                format!("exponent divisor must be 4 or 5, got {exponent_divisor}"),
            ));
        }
        Ok(TiltedGaussian { exponent_divisor })
    }

    pub fn ln_value(&self, n: usize, d: f64, t: f64) -> f64 {
        -0.5 * n as f64 * (4.0 * PI * t).ln() - d * d / (self.exponent_divisor * t)
    }

    pub fn value(&self, n: usize, d: f64, t: f64) -> f64 {
        self.ln_value(n, d, t).exp()
    }
}

/// `φ₀(d) = (sqrt det g)^{-1/2}` in normal coordinates.
pub fn phi0(m: &ModelSpace, d: f64) -> Result<f64> {
    check_inside_injectivity(m, "phi0", d)?;
    Ok((-0.5 * m.ln_normal_density(d)).exp())
}

/// Second coefficient of the expansion, `φ₁(0) = R/6`.
pub fn phi1(m: &ModelSpace, d: f64) -> Result<f64> {
    check_inside_injectivity(m, "phi1", d)?;
    match *m {
        ModelSpace::Euclidean { .. } => Ok(0.0),
        ModelSpace::HyperbolicH3 { kappa } => Ok(-kappa * phi0(m, d)?),
        ModelSpace::Sphere2 => sphere_phi1(d),
        ModelSpace::Circle => Err(Error::Capability { op: "phi1", model: m.to_string() }),
    }
}

/// On the 2-sphere `H / E = W`, so `φ₁(d) = lim (W - φ₀) / t`.
fn sphere_phi1(d: f64) -> Result<f64> {
    let p0 = phi0(&ModelSpace::Sphere2, d)?;
    let samples = (0..6)
        .map(|i| {
            let t = 0.02 / 2f64.powi(i);
            let j = kernels::sphere::integral_jet(d, t)?;
            Ok((t, j.log_w.exp_m1() / t - (p0 - 1.0) / t))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(richardson_limit(&samples, 1.0)?.limit)
}

fn check_inside_injectivity(m: &ModelSpace, op: &'static str, d: f64) -> Result<()> {
    if !(d >= 0.0) || !(d < m.injectivity_radius()) {
        return Err(Error::domain(op, format!("distance {d} outside [0, {}) for {m}", m.injectivity_radius())));
    }
    Ok(())
}

/// `Σ_{k > order} x^k / k!`.
fn exp_tail(x: f64, order: usize) -> f64 {
    if x.abs() >= 1.0 {
        let mut term = 1.0;
        let mut partial = 1.0;
        for k in 1..=order {
            term *= x / k as f64;
            partial += term;
        }
        return x.exp() - partial;
    }
    let mut term = 1.0;
    for k in 1..=order + 1 {
        term *= x / k as f64;
    }
    let mut sum = 0.0f64;
    let mut k = order + 1;
    while term != 0.0 && term.abs() > 1e-18 * sum.abs() {
        sum += term;
        k += 1;
        term *= x / k as f64;
    }
    sum
}

/// Cutoff parametrix data for one model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ParametrixData {
    pub model: ModelSpace,
    /// Cutoff radius.
    pub r: f64,
    /// Nominal truncation order `⌈n/2⌉ + 3`.
    pub n0: usize,
    /// Order actually used: `n0` where all coefficients are exact, lower otherwise.
    pub order: usize,
}

impl ParametrixData {
    pub fn new(model: ModelSpace, r: f64) -> Result<Self> {
        let inj = model.injectivity_radius();
        if !(r > 0.0) || !(4.0 * r < inj) || !r.is_finite() {
            return Err(Error::argument("ParametrixData::new", format!("cutoff radius {r} must lie in (0, {inj}/4)")));
        }
        let n0 = model.dimension().div_ceil(2) + 3;
        let order = n0.min(Self::available_order(&model));
        Ok(ParametrixData { model, r, n0, order })
    }

    pub fn with_default_radius(model: ModelSpace) -> Result<Self> {
        Self::new(model, model.default_cutoff_radius())
    }

    /// Highest `k` for which `φ_k` is available.
    pub fn available_order(model: &ModelSpace) -> usize {
        match model {
            ModelSpace::Euclidean { .. } | ModelSpace::HyperbolicH3 { .. } => usize::MAX,
            ModelSpace::Sphere2 => 1,
            ModelSpace::Circle => 0,
        }
    }

    pub fn eta(&self, s: f64) -> f64 {
        smooth_cutoff(s, self.r)
    }

    /// Coefficient `φ_k(d)`.
    pub fn phi(&self, k: usize, d: f64) -> Result<f64> {
        match (k, self.model) {
            (0, m) => phi0(&m, d),
            (_, ModelSpace::Euclidean { .. }) => {
                check_inside_injectivity(&self.model, "phi", d)?;
                Ok(0.0)
            }
            (_, ModelSpace::HyperbolicH3 { kappa }) => {
                let fact: f64 = (1..=k).map(|j| j as f64).product();
                Ok((-kappa).powi(k as i32) / fact * phi0(&self.model, d)?)
            }
            (1, m) => phi1(&m, d),
            (_, m) => Err(Error::Capability { op: "phi", model: m.to_string() }),
        }
    }

    /// `H_N = E(d,t) Σ_{k ≤ order} φ_k(d) t^k`.
    pub fn truncated_kernel(&self, d: f64, t: f64, order: usize) -> Result<f64> {
        const OP: &str = "truncated_kernel";
        check_time(OP, t)?;
        if order > Self::available_order(&self.model) {
            return Err(Error::Capability { op: OP, model: format!("{} at order {order}", self.model) });
        }
        let terms = match self.model {
            ModelSpace::Euclidean { .. } => 0,
            _ => order,
        };
        let mut sum = 0.0;
        let mut tk = 1.0;
        for k in 0..=terms {
            sum += self.phi(k, d)? * tk;
            tk *= t;
        }
        Ok(TiltedGaussian::STANDARD.value(self.model.dimension(), d, t) * sum)
    }

    /// `W = H / E` and `W - Σ_{k ≤ order} φ_k t^k`, the latter without cancellation
    /// where the closed form allows it.
    fn parts(&self, d: f64, t: f64) -> Result<(f64, f64)> {
        let w = kernels::jet_unchecked(&self.model, d, t)?.log_w.exp();
        let core = match self.model {
            ModelSpace::Euclidean { .. } => 0.0,
            ModelSpace::HyperbolicH3 { kappa } => phi0(&self.model, d)? * exp_tail(-kappa * t, self.order),
            ModelSpace::Sphere2 => w - phi0(&self.model, d)? - t * phi1(&self.model, d)?,
            ModelSpace::Circle => w - 1.0,
        };
        Ok((w, core))
    }

    /// `F / E` with `F = H - η H_N`.
    fn relative_remainder(&self, d: f64, t: f64) -> Result<f64> {
        let eta = self.eta(d);
        if eta == 0.0 {
            return Ok(kernels::jet_unchecked(&self.model, d, t)?.log_w.exp());
        }
        let (w, core) = self.parts(d, t)?;
        Ok((1.0 - eta) * w + eta * core)
    }

    /// Remainder `F = H - η(d) H_N(d, t)`.
    pub fn remainder(&self, d: f64, t: f64) -> Result<f64> {
        const OP: &str = "remainder";
        check_time(OP, t)?;
        self.model.check_radius(OP, d)?;
        if self.eta(d) == 0.0 {
            return Ok(kernels::eval_kernel(&self.model, d, t)?.h);
        }
        let e = TiltedGaussian::STANDARD.value(self.model.dimension(), d, t);
        Ok(e * self.relative_remainder(d, t)?)
    }

    /// `ln(H / H_N)` for `d <= r`, evaluated without forming the difference of
    /// two nearly equal kernels.
    pub fn log_ratio(&self, d: f64, t: f64) -> Result<f64> {
        const OP: &str = "log_ratio";
        check_time(OP, t)?;
        if !(d >= 0.0 && d <= self.r) {
            return Err(Error::domain(OP, format!("distance {d} outside the plateau [0, {}]", self.r)));
        }
        let (w, core) = self.parts(d, t)?;
        Ok(-(-core / w).ln_1p())
    }

    /// `F / Ẽ`, the remainder measured against the widened Gaussian.
    fn widened_remainder(&self, d: f64, t: f64) -> Result<f64> {
        Ok(self.relative_remainder(d, t)? * (-d * d / (20.0 * t)).exp())
    }

    /// `∂_t F / Ẽ`.
    fn widened_remainder_dt(&self, d: f64, t: f64) -> Result<f64> {
        let n = self.model.dimension() as f64;
        let g = self.widened_remainder(d, t)?;
        let g_t = central_diff(|s| self.widened_remainder(d, s), t, 1e-2 * t)?;
        Ok(g_t + g * (-0.5 * n / t + d * d / (5.0 * t * t)))
    }
}

fn check_time(op: &'static str, t: f64) -> Result<()> {
    if !(t > 0.0) || !t.is_finite() {
        return Err(Error::domain(op, format!("time must be positive, got {t}")));
    }
    Ok(())
}

/// Outcome of fitting a small-time exponent.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum ExponentFit {
    Fitted(SlopeFit),
    /// Every sampled value was below `1e-300`.
    ExactZero,
}

impl ExponentFit {
    pub fn slope(&self) -> Option<f64> {
        match self {
            ExponentFit::Fitted(f) => Some(f.slope),
            ExponentFit::ExactZero => None,
        }
    }

    /// True if the fitted exponent reaches `bound`, or the quantity vanishes.
    pub fn at_least(&self, bound: f64) -> bool {
        self.slope().is_none_or(|s| s >= bound)
    }
}

/// Fitted and predicted small-time exponents of the remainder.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RemainderScaling {
    /// `(t, sup_d |F| e^{d²/5t}, sup_d |∂_t F| e^{d²/5t})` per grid time.
    pub samples: Vec<[f64; 3]>,
    pub remainder: ExponentFit,
    pub time_derivative: ExponentFit,
    /// `order + 1 - n/2`.
    pub predicted_remainder: f64,
    /// `order - n/2`.
    pub predicted_derivative: f64,
}

/// Fits the `t`-exponents of `sup_d |F| e^{d²/5t}` and `sup_d |∂_t F| e^{d²/5t}`
/// over `d_grid ⊂ B(r/2)`.
pub fn remainder_scaling_fit(p: &ParametrixData, d_grid: &[f64], t_grid: &[f64]) -> Result<RemainderScaling> {
    const OP: &str = "remainder_scaling_fit";
    if d_grid.is_empty() || t_grid.len() < 3 {
        return Err(Error::argument(OP, "need at least one distance and three times"));
    }
    if let Some(d) = d_grid.iter().find(|&&d| !(d >= 0.0 && d <= 0.5 * p.r)) {
        return Err(Error::argument(OP, format!("distance {d} outside B(r/2), r = {}", p.r)));
    }
    if let Some(t) = t_grid.iter().find(|&&t| !(t > 0.0 && t.is_finite())) {
        return Err(Error::argument(OP, format!("time {t} is not positive")));
    }
    let n = p.model.dimension() as f64;
    let mut f_points = Vec::with_capacity(t_grid.len());
    let mut ft_points = Vec::with_capacity(t_grid.len());
    for &t in t_grid {
        let pref = (4.0 * PI * t).powf(-0.5 * n);
        let mut sup_f: f64 = 0.0;
        let mut sup_ft: f64 = 0.0;
        for &d in d_grid {
            sup_f = sup_f.max(p.widened_remainder(d, t)?.abs());
            sup_ft = sup_ft.max(p.widened_remainder_dt(d, t)?.abs());
        }
        f_points.push((t, pref * sup_f));
        ft_points.push((t, pref * sup_ft));
    }
    let order = p.order as f64;
    let samples = f_points.iter().zip(&ft_points).map(|(a, b)| [a.0, a.1, b.1]).collect();
    Ok(RemainderScaling {
        samples,
        remainder: exponent_fit(OP, &f_points)?,
        time_derivative: exponent_fit(OP, &ft_points)?,
        predicted_remainder: order + 1.0 - 0.5 * n,
        predicted_derivative: order - 0.5 * n,
    })
}

fn exponent_fit(op: &'static str, points: &[(f64, f64)]) -> Result<ExponentFit> {
    const FLOOR: f64 = 1e-300;
    if points.iter().all(|&(_, y)| y < FLOOR) {
        return Ok(ExponentFit::ExactZero);
    }
    if points.iter().any(|&(_, y)| y < FLOOR) {
        return Err(Error::argument(op, "remainder vanishes on part of the time grid"));
    }
    Ok(ExponentFit::Fitted(fit_log_log_slope(points)?))
}

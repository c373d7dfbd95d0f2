//! Rotationally symmetric model manifolds.
//!
//! Every quantity here is a function of the geodesic distance `ρ` from the
//! base point. The area density `A(ρ)` is the measure of the geodesic sphere
//! of radius `ρ`, so `dμ = A(ρ) dρ` after integrating out the angles.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::Quadrature;
use crate::special;

/// The supported model spaces.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum ModelSpace {
    /// Flat `R^n`.
    Euclidean { n: usize },
    /// Hyperbolic 3-space with sectional curvature `-kappa`.
    HyperbolicH3 { kappa: f64 },
    /// Unit round 2-sphere.
    Sphere2,
    /// Circle of length `2π`.
    Circle,
}

impl ModelSpace {
    pub fn euclidean(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::argument("ModelSpace::euclidean", "dimension must be at least 1"));
        }
        Ok(ModelSpace::Euclidean { n })
    }

    pub fn hyperbolic(kappa: f64) -> Result<Self> {
        if !(kappa > 0.0 && kappa.is_finite()) {
            return Err(Error::argument(
                "ModelSpace::hyperbolic",
                format!("curvature scale must be positive, got {kappa}"),
            ));
        }
        Ok(ModelSpace::HyperbolicH3 { kappa })
    }

    pub fn dimension(&self) -> usize {
        match *self {
            ModelSpace::Euclidean { n } => n,
            ModelSpace::HyperbolicH3 { .. } => 3,
            ModelSpace::Sphere2 => 2,
            ModelSpace::Circle => 1,
        }
    }

    /// Scalar curvature at the base point.
    pub fn scalar_curvature(&self) -> f64 {
        match *self {
            ModelSpace::Euclidean { .. } | ModelSpace::Circle => 0.0,
            ModelSpace::HyperbolicH3 { kappa } => -6.0 * kappa,
            ModelSpace::Sphere2 => 2.0,
        }
    }

    /// The constant `K >= 0` with `Rc >= -K g`. For the sphere every `K >= 0`
    /// is admissible and the sharpest, `0`, is returned.
    pub fn ricci_lower_bound(&self) -> f64 {
        match *self {
            ModelSpace::HyperbolicH3 { kappa } => 2.0 * kappa,
            _ => 0.0,
        }
    }

    pub fn injectivity_radius(&self) -> f64 {
        match self {
            ModelSpace::Euclidean { .. } | ModelSpace::HyperbolicH3 { .. } => f64::INFINITY,
            ModelSpace::Sphere2 | ModelSpace::Circle => PI,
        }
    }

    /// Largest distance from the base point (the radial domain is `[0, max_radius]`).
    pub fn max_radius(&self) -> f64 {
        self.injectivity_radius()
    }

    pub fn is_compact(&self) -> bool {
        self.max_radius().is_finite()
    }

    /// Default cutoff radius for the parametrix, well inside the injectivity radius.
    pub fn default_cutoff_radius(&self) -> f64 {
        match self {
            ModelSpace::Euclidean { .. } | ModelSpace::HyperbolicH3 { .. } => 1.0,
            ModelSpace::Sphere2 | ModelSpace::Circle => PI / 8.0,
        }
    }

    pub(crate) fn check_radius(&self, op: &'static str, rho: f64) -> Result<()> {
        if !(rho >= 0.0) || !rho.is_finite() || rho > self.max_radius() {
            return Err(Error::domain(op, format!("radius {rho} outside [0, {}] for {self}", self.max_radius())));
        }
        Ok(())
    }

    /// Area of the geodesic sphere of radius `rho`. On the circle both arcs
    /// are counted, giving the constant 2.
    pub fn area_density(&self, rho: f64) -> Result<f64> {
        self.check_radius("area_density", rho)?;
        Ok(self.area_density_unchecked(rho))
    }

    pub(crate) fn area_density_unchecked(&self, rho: f64) -> f64 {
        match *self {
            ModelSpace::Euclidean { n } => unit_sphere_area(n) * rho.powi(n as i32 - 1),
            ModelSpace::HyperbolicH3 { kappa } => {
                let s = (kappa.sqrt() * rho).sinh();
                4.0 * PI * s * s / kappa
            }
            ModelSpace::Sphere2 => 2.0 * PI * rho.sin(),
            ModelSpace::Circle => 2.0,
        }
    }

    /// `ln A(rho)`, finite for large radii where `A` itself overflows.
    pub(crate) fn ln_area_density(&self, rho: f64) -> f64 {
        match *self {
            ModelSpace::HyperbolicH3 { kappa } => (4.0 * PI / kappa).ln() + 2.0 * special::ln_sinh(kappa.sqrt() * rho),
            _ => self.area_density_unchecked(rho).ln(),
        }
    }

    /// Logarithmic derivative `A'(rho)/A(rho)` (mean curvature of the geodesic sphere).
    pub fn mean_curvature(&self, rho: f64) -> f64 {
        match *self {
            ModelSpace::Euclidean { n } => (n as f64 - 1.0) / rho,
            ModelSpace::HyperbolicH3 { kappa } => {
                let k = kappa.sqrt();
                2.0 * k / (k * rho).tanh()
            }
            ModelSpace::Sphere2 => 1.0 / rho.tan(),
            ModelSpace::Circle => 0.0,
        }
    }

    /// `rho * A'(rho)/A(rho) - (n - 1)`, which vanishes identically on flat
    /// models and like `rho^2` elsewhere.
    pub fn curvature_excess(&self, rho: f64) -> f64 {
        match *self {
            ModelSpace::Euclidean { .. } | ModelSpace::Circle => 0.0,
            ModelSpace::HyperbolicH3 { kappa } => 2.0 * special::x_coth_x_minus_one(kappa.sqrt() * rho),
            ModelSpace::Sphere2 => special::x_cot_x_minus_one(rho),
        }
    }

    /// Applies the first-order part of the radial Laplacian,
    /// `(A'/A) g'`, taking the regular limits at the poles where `A = 0`.
    pub(crate) fn mean_curvature_times(&self, rho: f64, g_d: f64, g_dd: f64) -> f64 {
        let n = self.dimension() as f64;
        if rho == 0.0 {
            return (n - 1.0) * g_dd;
        }
        if matches!(self, ModelSpace::Sphere2) && rho == PI {
            return g_dd;
        }
        self.mean_curvature(rho) * g_d
    }

    /// Normal-coordinate volume density `sqrt(det g)` as a radial profile:
    /// `A(d) / (ω_{n-1} d^{n-1})`.
    pub fn normal_density(&self, d: f64) -> Result<f64> {
        self.check_radius("normal_density", d)?;
        Ok(self.ln_normal_density(d).exp())
    }

    pub(crate) fn ln_normal_density(&self, d: f64) -> f64 {
        match *self {
            ModelSpace::Euclidean { .. } | ModelSpace::Circle => 0.0,
            ModelSpace::HyperbolicH3 { kappa } => -2.0 * special::ln_x_over_sinh(kappa.sqrt() * d),
            ModelSpace::Sphere2 => special::ln_sin_over_x(d),
        }
    }

    /// Volume of the geodesic ball of radius `rho` in the `n`-dimensional
    /// space form of constant sectional curvature `-K/(n-1)`.
    pub fn comparison_volume(&self, rho: f64) -> Result<f64> {
        const OP: &str = "comparison_volume";
        if !(rho >= 0.0) || !rho.is_finite() {
            return Err(Error::domain(OP, format!("radius must be non-negative, got {rho}")));
        }
        let n = self.dimension();
        let k = self.ricci_lower_bound();
        if n == 1 {
            return Ok(2.0 * rho);
        }
        let omega = unit_sphere_area(n);
        if k == 0.0 {
            return Ok(omega * rho.powi(n as i32) / n as f64);
        }
        let a = (k / (n as f64 - 1.0)).sqrt();
        if n == 3 {
            return Ok(omega * ((2.0 * a * rho).sinh() - 2.0 * a * rho) / (4.0 * a.powi(3)));
        }
        let r = Quadrature::new(1e-14).with_rel_tol(1e-14).integrate(
            |s: f64| ((a * s).sinh() / a).powi(n as i32 - 1),
            0.0,
            rho,
        )?;
        Ok(omega * r.value)
    }

    /// Volume of the geodesic ball of radius `rho` about the base point.
    pub fn ball_volume(&self, rho: f64) -> Result<f64> {
        let r = rho.min(self.max_radius());
        self.check_radius("ball_volume", r)?;
        let q = Quadrature::new(1e-14).with_rel_tol(1e-14);
        Ok(q.integrate(|s| self.area_density_unchecked(s), 0.0, r)?.value)
    }
}

/// Area `ω_{n-1}` of the unit sphere in `R^n`.
pub fn unit_sphere_area(n: usize) -> f64 {
    // ω_{n-1} = 2 π^{n/2} / Γ(n/2), with ω_0 = 2, ω_1 = 2π and ω_{n+1} = 2π ω_{n-1} / n.
    let mut w = if n % 2 == 1 { 2.0 } else { 2.0 * PI };
    let mut m = if n % 2 == 1 { 1 } else { 2 };
    while m < n {
        w *= 2.0 * PI / m as f64;
        m += 2;
    }
    w
}

impl fmt::Display for ModelSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            ModelSpace::Euclidean { n } => write!(f, "euclidean:{n}"),
            ModelSpace::HyperbolicH3 { kappa: 1.0 } => write!(f, "h3"),
            ModelSpace::HyperbolicH3 { kappa } => write!(f, "h3:{kappa}"),
            ModelSpace::Sphere2 => write!(f, "s2"),
            ModelSpace::Circle => write!(f, "s1"),
        }
    }
}

impl FromStr for ModelSpace {
    type Err = Error;

    /// Parses `euclidean:<n>`, `h3[:kappa]`, `s2` or `s1`, ignoring case.
    fn from_str(s: &str) -> Result<Self> {
        const OP: &str = "parse model";
        let lower = s.trim().to_ascii_lowercase();
        let (head, arg) = match lower.split_once(':') {
            Some((h, a)) => (h, Some(a)),
            None => (lower.as_str(), None),
        };
        match (head, arg) {
            ("euclidean", Some(n)) => {
                let n: usize = n.parse().map_err(|_| Error::argument(OP, format!("bad dimension in {s:?}")))?;
                ModelSpace::euclidean(n)
            }
            ("h3", None) => ModelSpace::hyperbolic(1.0),
            ("h3", Some(k)) => {
                let kappa: f64 = k.parse().map_err(|_| Error::argument(OP, format!("bad curvature scale in {s:?}")))?;
                ModelSpace::hyperbolic(kappa)
            }
            ("s2", None) => Ok(ModelSpace::Sphere2),
            ("s1", None) => Ok(ModelSpace::Circle),
            _ => Err(Error::argument(OP, format!("unknown model {s:?}; expected euclidean:<n>, h3[:kappa], s2 or s1"))),
        }
    }
}

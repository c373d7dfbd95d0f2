//! Adaptive Gauss-Kronrod quadrature on radial domains.
//!
//! Each panel is integrated with the 7-point Gauss rule and its 15-point
//! Kronrod extension; the difference of the two is the panel error. The
//! panel with the largest error is bisected until the summed error drops
//! below the absolute tolerance.
//!
//! Integrands may be scalar or small fixed-size vectors (see [`QuadValue`]),
//! which lets a kernel value and its derivatives share one set of panels.
//!
//! Semi-infinite ranges are truncated where a caller-supplied envelope of
//! the integrand falls below `tol * 1e-3`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_225,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];

// Gauss weights for the odd-indexed Kronrod nodes (1, 3, 5) and the centre.
const WG: [f64; 4] =
    [0.129_484_966_168_869_7, 0.279_705_391_489_276_7, 0.381_830_050_505_118_9, 0.417_959_183_673_469_4];

/// Values that can be integrated: scalars and fixed-size arrays of scalars.
pub trait QuadValue: Copy {
    fn zero() -> Self;
    fn add(self, other: Self) -> Self;
    fn scale(self, s: f64) -> Self;
    /// Largest absolute component; used for error control.
    fn norm(self) -> f64;
    fn is_finite(self) -> bool;
}

impl QuadValue for f64 {
    fn zero() -> Self {
        0.0
    }
    fn add(self, other: Self) -> Self {
        self + other
    }
    fn scale(self, s: f64) -> Self {
        self * s
    }
    fn norm(self) -> f64 {
        self.abs()
    }
    fn is_finite(self) -> bool {
        f64::is_finite(self)
    }
}

impl<const N: usize> QuadValue for [f64; N] {
    fn zero() -> Self {
        [0.0; N]
    }
    fn add(mut self, other: Self) -> Self {
        for (a, b) in self.iter_mut().zip(other) {
            *a += b;
        }
        self
    }
    fn scale(mut self, s: f64) -> Self {
        for a in self.iter_mut() {
            *a *= s;
        }
        self
    }
    fn norm(self) -> f64 {
        self.iter().fold(0.0, |m, v| m.max(v.abs()))
    }
    fn is_finite(self) -> bool {
        self.iter().all(|v| v.is_finite())
    }
}

/// Outcome of a quadrature.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureResult<V = f64> {
    pub value: V,
    /// Absolute error estimate (max-norm for vector integrands).
    pub error_estimate: f64,
    pub evaluations: usize,
}

/// Upper limit of a radial integral.
pub enum Upper<'a> {
    Finite(f64),
    /// Semi-infinite range. The envelope bounds `|f|` from above and must
    /// eventually decrease to zero.
    Infinite(&'a dyn Fn(f64) -> f64),
}

#[derive(Debug, Clone, Copy)]
struct Panel<V> {
    a: f64,
    b: f64,
    value: V,
    err: f64,
}

/// Adaptive quadrature settings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quadrature {
    /// Absolute tolerance on the summed panel error.
    pub tol: f64,
    /// Characteristic width of the integrand near the lower limit. When set,
    /// the initial partition is geometric in this width so that narrow peaks
    /// are not missed by the first coarse panel.
    pub scale: Option<f64>,
    /// Relative tolerance; convergence is declared when the error is below
    /// `max(tol, rel_tol * |value|)`.
    pub rel_tol: f64,
    pub max_evaluations: usize,
}

impl Quadrature {
    pub fn new(tol: f64) -> Self {
        Quadrature { tol, scale: None, rel_tol: 0.0, max_evaluations: 15 * 4000 }
    }

    pub fn with_scale(mut self, scale: f64) -> Self {
        self.scale = Some(scale);
        self
    }

    pub fn with_rel_tol(mut self, rel_tol: f64) -> Self {
        self.rel_tol = rel_tol;
        self
    }

    pub fn with_max_evaluations(mut self, n: usize) -> Self {
        self.max_evaluations = n;
        self
    }

    fn check(&self, op: &'static str) -> Result<()> {
        if !(self.tol > 0.0) {
            return Err(Error::argument(op, format!("tolerance must be positive, got {}", self.tol)));
        }
        if let Some(s) = self.scale {
            if !(s > 0.0 && s.is_finite()) {
                return Err(Error::argument(op, format!("scale must be positive, got {s}")));
            }
        }
        Ok(())
    }

    /// Integrates `f` over `[lower, upper]`.
    pub fn integrate<V, F>(&self, f: F, lower: f64, upper: f64) -> Result<QuadratureResult<V>>
    where
        V: QuadValue,
        F: Fn(f64) -> V,
    {
        const OP: &str = "integrate";
        self.check(OP)?;
        if !(lower.is_finite() && upper.is_finite()) || upper < lower {
            return Err(Error::argument(OP, format!("bad interval [{lower}, {upper}]")));
        }
        if upper == lower {
            return Ok(QuadratureResult { value: V::zero(), error_estimate: 0.0, evaluations: 1 });
        }
        let mut points = vec![lower];
        if let Some(s) = self.scale {
            let mut w = s;
            while lower + w < upper && points.len() < 64 {
                points.push(lower + w);
                w *= 2.0;
            }
        }
        points.push(upper);
        self.adapt(&f, &points)
    }

    /// Integrates `f` over `[lower, ∞)`, truncating where `envelope` drops
    /// below `tol * 1e-3`.
    pub fn integrate_to_infinity<V, F, E>(&self, f: F, lower: f64, envelope: E) -> Result<QuadratureResult<V>>
    where
        V: QuadValue,
        F: Fn(f64) -> V,
        E: Fn(f64) -> f64,
    {
        let upper = self.truncation_point(lower, &envelope)?;
        self.integrate(f, lower, upper)
    }

    /// Smallest point of the doubling sequence `lower + scale * 2^k` past
    /// which the envelope stays below `tol * 1e-3`.
    pub fn truncation_point<E: Fn(f64) -> f64>(&self, lower: f64, envelope: &E) -> Result<f64> {
        const OP: &str = "truncation_point";
        self.check(OP)?;
        let threshold = self.tol * 1e-3;
        let mut width = self.scale.unwrap_or(1.0);
        for _ in 0..200 {
            let b = lower + width;
            let e = envelope(b);
            // Confirm at the next doubling too so that a dip does not stop the search.
            if e < threshold && envelope(lower + 2.0 * width) < threshold {
                return Ok(b);
            }
            width *= 2.0;
            if !width.is_finite() {
                break;
            }
        }
        Err(Error::NonConvergence { op: OP, best: f64::NAN, estimate: f64::INFINITY })
    }

    fn adapt<V, F>(&self, f: &F, points: &[f64]) -> Result<QuadratureResult<V>>
    where
        V: QuadValue,
        F: Fn(f64) -> V,
    {
        const OP: &str = "integrate";
        let mut panels: Vec<Panel<V>> = points.windows(2).map(|w| kronrod(f, w[0], w[1])).collect();
        let mut evaluations = 15 * panels.len();

        loop {
            let total_err: f64 = panels.iter().map(|p| p.err).sum();
            if !total_err.is_finite() {
                return Err(Error::NonConvergence { op: OP, best: f64::NAN, estimate: total_err });
            }
            if total_err <= self.tol {
                break;
            }
            if self.rel_tol > 0.0 {
                let magnitude = panels.iter().fold(V::zero(), |acc, p| acc.add(p.value)).norm();
                if total_err <= self.rel_tol * magnitude {
                    break;
                }
            }
            let (worst, _) = panels
                .iter()
                .enumerate()
                .fold((0, -1.0), |(bi, be), (i, p)| if p.err > be { (i, p.err) } else { (bi, be) });
            let p = panels[worst];
            let mid = 0.5 * (p.a + p.b);
            let too_narrow = !(p.a < mid && mid < p.b) || (p.b - p.a) <= 1e-14 * (p.a.abs() + p.b.abs());
            if too_narrow || evaluations + 30 > self.max_evaluations {
                let value = sum_panels(&mut panels);
                return Err(Error::NonConvergence { op: OP, best: value.norm(), estimate: total_err });
            }
            panels[worst] = kronrod(f, p.a, mid);
            panels.push(kronrod(f, mid, p.b));
            evaluations += 30;
        }

        let error_estimate = panels.iter().map(|p| p.err).sum();
        let value = sum_panels(&mut panels);
        Ok(QuadratureResult { value, error_estimate, evaluations })
    }
}

fn sum_panels<V: QuadValue>(panels: &mut [Panel<V>]) -> V {
    panels.sort_by(|x, y| x.a.total_cmp(&y.a));
    panels.iter().fold(V::zero(), |acc, p| acc.add(p.value))
}

fn kronrod<V, F>(f: &F, a: f64, b: f64) -> Panel<V>
where
    V: QuadValue,
    F: Fn(f64) -> V,
{
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kron = fc.scale(WGK[7]);
    let mut gauss = fc.scale(WG[3]);
    for j in 0..7 {
        let dx = half * XGK[j];
        let sum = f(center - dx).add(f(center + dx));
        kron = kron.add(sum.scale(WGK[j]));
        if j % 2 == 1 {
            gauss = gauss.add(sum.scale(WG[j / 2]));
        }
    }
    let value = kron.scale(half);
    let diff = kron.add(gauss.scale(-1.0)).scale(half);
    let err = if value.is_finite() { diff.norm() } else { f64::INFINITY };
    Panel { a, b, value, err }
}

/// Integrates a radial function `f` from `lower` to `upper` with absolute
/// tolerance `tol`.
pub fn integrate_radial<F>(f: F, lower: f64, upper: Upper<'_>, tol: f64) -> Result<QuadratureResult>
where
    F: Fn(f64) -> f64,
{
    let q = Quadrature::new(tol);
    match upper {
        Upper::Finite(b) => q.integrate(f, lower, b),
        Upper::Infinite(env) => q.integrate_to_infinity(f, lower, env),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn constant_is_exact() {
        let r = integrate_radial(|_| 1.0, 0.0, Upper::Finite(1.0), 1e-12).unwrap();
        assert_eq!(r.value, 1.0);
        assert!(r.error_estimate >= 0.0 && r.evaluations >= 1);
    }

    #[test]
    fn exponential_tail() {
        let env = |s: f64| (-s).exp();
        let r = integrate_radial(|s| (-s).exp(), 0.0, Upper::Infinite(&env), 1e-12).unwrap();
        assert!((r.value - 1.0).abs() <= 1e-11, "{}", r.value);
    }

    #[test]
    fn gaussian_second_moment() {
        let env = |s: f64| (1.0 + s * s) * (-s * s).exp();
        let r = integrate_radial(|s| s * s * (-s * s).exp(), 0.0, Upper::Infinite(&env), 1e-12).unwrap();
        assert!((r.value - PI.sqrt() / 4.0).abs() <= 1e-11);
    }

    #[test]
    fn narrow_peak_needs_scale() {
        let w: f64 = 1e-4;
        let f = move |s: f64| (-(s * s) / (w * w)).exp();
        let r = Quadrature::new(1e-14).with_scale(w).integrate(f, 0.0, 50.0).unwrap();
        assert!((r.value - w * PI.sqrt() / 2.0).abs() < 1e-14);
    }

    #[test]
    fn vector_integrand_shares_panels() {
        let r = Quadrature::new(1e-13).integrate(|x: f64| [x, x * x, x.sin()], 0.0, 1.0).unwrap();
        assert!((r.value[0] - 0.5).abs() < 1e-14);
        assert!((r.value[1] - 1.0 / 3.0).abs() < 1e-14);
        assert!((r.value[2] - (1.0 - 1f64.cos())).abs() < 1e-14);
    }

    #[test]
    fn reports_non_convergence() {
        let q = Quadrature::new(1e-12).with_max_evaluations(100);
        let err = q.integrate(|x: f64| 1.0 / x.sqrt(), 0.0, 1.0).unwrap_err();
        assert!(matches!(err, Error::NonConvergence { .. }));
    }

    #[test]
    fn rejects_bad_tolerance() {
        assert!(integrate_radial(|_| 1.0, 0.0, Upper::Finite(1.0), 0.0).is_err());
    }

    #[test]
    fn tighter_tolerance_never_worse() {
        type Case = (Box<dyn Fn(f64) -> f64>, Box<dyn Fn(f64) -> f64>, f64);
        let cases: [Case; 2] = [
            (Box::new(|s: f64| (-s).exp()), Box::new(|s: f64| (-s).exp()), 1.0),
            (
                Box::new(|s: f64| s * s * (-s * s).exp()),
                Box::new(|s: f64| (1.0 + s * s) * (-s * s).exp()),
                PI.sqrt() / 4.0,
            ),
        ];
        for (f, env, exact) in cases.iter() {
            let mut prev = f64::INFINITY;
            for k in 0..30 {
                let tol = 1e-3 / 2f64.powi(k);
                let r = integrate_radial(f, 0.0, Upper::Infinite(&|s| env(s)), tol).unwrap();
                let e = (r.value - exact).abs();
                // Allow a few ulps of summation noise between identical truncations.
                assert!(e <= prev + 8.0 * f64::EPSILON * exact, "tol {tol}: {e} > {prev}");
                assert!(e <= tol);
                prev = e;
            }
        }
    }
}

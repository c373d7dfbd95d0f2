//! Gaussian moment identities `Iₙ` and `Qₙ` and their dimension recursions.
//!
//! Expectations are taken against `(4πt)^{-n/2} exp(-|x|²/4t)`, i.e. each
//! coordinate is centred normal with variance `2t`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Diagonal curvature data `λ_k = R_kk` and a time.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MomentSpec {
    pub lambdas: Vec<f64>,
    pub t: f64,
}

impl MomentSpec {
    pub fn new(lambdas: Vec<f64>, t: f64) -> Result<Self> {
        if lambdas.is_empty() {
            return Err(Error::argument("MomentSpec::new", "need at least one eigenvalue"));
        }
        if let Some(l) = lambdas.iter().find(|l| !l.is_finite()) {
            return Err(Error::argument("MomentSpec::new", format!("eigenvalue {l} is not finite")));
        }
        if !(t > 0.0) || !t.is_finite() {
            return Err(Error::domain("MomentSpec::new", format!("time must be positive, got {t}")));
        }
        Ok(MomentSpec { lambdas, t })
    }

    pub fn n(&self) -> usize {
        self.lambdas.len()
    }

    /// `Σ λ_k`, the scalar curvature.
    pub fn trace(&self) -> f64 {
        self.lambdas.iter().sum()
    }
}

/// `Iₙ = E[(Σ λ_k x_k²) |x|²] = 4(n+2)(Σλ) t²`.
pub fn moment_in(spec: &MomentSpec) -> f64 {
    4.0 * (spec.n() as f64 + 2.0) * spec.trace() * spec.t * spec.t
}

/// `Qₙ = E[(Σ λ_k x_k²) |x|⁴] = 8(n+2)(n+4)(Σλ) t³`.
pub fn moment_qn(spec: &MomentSpec) -> f64 {
    let n = spec.n() as f64;
    8.0 * (n * n + 6.0 * n + 8.0) * spec.trace() * spec.t.powi(3)
}

/// `E[Π x_i^{p_i}]` for the weight above: a product of one-dimensional
/// moments `m_{2k} = (2k-1)!! (2t)^k`, zero if any exponent is odd.
pub fn wick_oracle(powers: &[u32], t: f64) -> f64 {
    powers
        .iter()
        .map(|&p| {
            if p % 2 == 1 {
                return 0.0;
            }
            let k = p / 2;
            let double_factorial: f64 = (1..=k).map(|j| (2 * j - 1) as f64).product();
            double_factorial * (2.0 * t).powi(k as i32)
        })
        .product()
}

/// `Iₙ` assembled monomial by monomial from [`wick_oracle`].
pub fn wick_in(spec: &MomentSpec) -> f64 {
    let n = spec.n();
    let mut sum = 0.0;
    let mut powers = vec![0u32; n];
    for (k, &lk) in spec.lambdas.iter().enumerate() {
        for i in 0..n {
            powers[k] += 2;
            powers[i] += 2;
            sum += lk * wick_oracle(&powers, spec.t);
            powers[k] -= 2;
            powers[i] -= 2;
        }
    }
    sum
}

/// `Qₙ` assembled monomial by monomial from [`wick_oracle`].
pub fn wick_qn(spec: &MomentSpec) -> f64 {
    let n = spec.n();
    let mut sum = 0.0;
    let mut powers = vec![0u32; n];
    for (k, &lk) in spec.lambdas.iter().enumerate() {
        for i in 0..n {
            for j in 0..n {
                powers[k] += 2;
                powers[i] += 2;
                powers[j] += 2;
                sum += lk * wick_oracle(&powers, spec.t);
                powers[k] -= 2;
                powers[i] -= 2;
                powers[j] -= 2;
            }
        }
    }
    sum
}

/// Residuals of the recursions
///
/// `Iₙ = Iₙ₋₁ + 4(Σλ)t² + 4(n+1)λₙt²` and
/// `Qₙ = Qₙ₋₁ + 8(2n+5)(Σλ)t³ + 8(n²+4n+3)λₙt³`,
///
/// with both sides evaluated from the Wick oracle (`Σλ` runs over all `n`).
pub fn induction_step(current: &MomentSpec, previous: &MomentSpec) -> Result<(f64, f64)> {
    const OP: &str = "induction_step";
    let n = current.n();
    if previous.n() + 1 != n {
        return Err(Error::argument(OP, format!("dimensions {} and {} are not consecutive", previous.n(), n)));
    }
    if previous.lambdas[..] != current.lambdas[..n - 1] || previous.t != current.t {
        return Err(Error::argument(OP, "lower-dimensional spec must be a prefix with the same time"));
    }
    let t = current.t;
    let nf = n as f64;
    let trace = current.trace();
    let last = current.lambdas[n - 1];
    let rhs_i = wick_in(previous) + 4.0 * trace * t * t + 4.0 * (nf + 1.0) * last * t * t;
    let rhs_q = wick_qn(previous)
        + 8.0 * (2.0 * nf + 5.0) * trace * t.powi(3)
        + 8.0 * (nf * nf + 4.0 * nf + 3.0) * last * t.powi(3);
    Ok((wick_in(current) - rhs_i, wick_qn(current) - rhs_q))
}

//! Summation of convergent series with a caller-supplied tail bound.

use crate::error::{Error, Result};

/// Largest index examined before giving up.
pub const INDEX_CAP: usize = 1_000_000;

/// Sums `term(0) + term(1) + ...`, stopping at the first `k` for which
/// `tail_bound(k + 1)` (a bound on `sum_{j > k} |term(j)|`) is at most `tol`.
pub fn sum_series<T, B>(term: T, tail_bound: B, tol: f64) -> Result<f64>
where
    T: Fn(usize) -> f64,
    B: Fn(usize) -> f64,
{
    sum_series_capped(term, tail_bound, tol, INDEX_CAP)
}

/// [`sum_series`] with an explicit index cap.
pub fn sum_series_capped<T, B>(term: T, tail_bound: B, tol: f64, cap: usize) -> Result<f64>
where
    T: Fn(usize) -> f64,
    B: Fn(usize) -> f64,
{
    const OP: &str = "sum_series";
    if !(tol > 0.0) {
        return Err(Error::argument(OP, format!("tolerance must be positive, got {tol}")));
    }
    let mut sum = 0.0;
    let mut comp = 0.0;
    for k in 0..cap {
        // Kahan summation keeps long sums independent of the index cap.
        let y = term(k) - comp;
        let t = sum + y;
        comp = (t - sum) - y;
        sum = t;
        if tail_bound(k + 1) <= tol {
            return Ok(sum);
        }
    }
    Err(Error::NonConvergence { op: OP, best: sum, estimate: tail_bound(cap) })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn geometric() {
        let s = sum_series(|k| 0.5f64.powi(k as i32), |k| 2.0 * 0.5f64.powi(k as i32), 1e-14).unwrap();
        assert!((s - 2.0).abs() <= 1e-14);
    }

    #[test]
    fn zero_series() {
        assert_eq!(sum_series(|_| 0.0, |_| 0.0, 1e-12).unwrap(), 0.0);
    }

    #[test]
    fn sphere_trace_matches_partial_sum() {
        let t = 0.5;
        let term = |l: usize| {
            let l = l as f64;
            (2.0 * l + 1.0) * (-l * (l + 1.0) * t).exp()
        };
        // sum_{l >= L} (2l+1) e^{-l(l+1)t} <= e^{-L(L+1)t} (2L+1) / (1 - e^{-2(L+1)t}) * (1 + 1/(tL))
        let tail = |l: usize| {
            let lf = l as f64;
            let q = (-2.0 * (lf + 1.0) * t).exp();
            (2.0 * lf + 3.0) * (-lf * (lf + 1.0) * t).exp() / (1.0 - q).powi(2)
        };
        let s = sum_series(term, tail, 1e-14).unwrap();
        let brute: f64 = (0..200).map(term).sum();
        assert!((s - brute).abs() <= 1e-12, "{s} vs {brute}");
    }

    #[test]
    fn independent_of_cap_once_converged() {
        let term = |k: usize| 1.0 / ((k + 1) as f64).powi(4);
        let tail = |k: usize| 1.0 / (3.0 * (k as f64).powi(3).max(1e-300));
        let a = sum_series_capped(term, tail, 1e-9, 10_000).unwrap();
        let b = sum_series_capped(term, tail, 1e-9, 1_000_000).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn non_convergence_carries_best() {
        let err = sum_series_capped(|_| 1.0, |_| 1.0, 1e-6, 10).unwrap_err();
        match err {
            Error::NonConvergence { best, .. } => assert_eq!(best, 10.0),
            e => panic!("{e:?}"),
        }
    }
}

use heatlab_core::entropy::*;
use heatlab_core::ModelSpace;

fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| lo * (hi / lo).powf(i as f64 / (n - 1) as f64)).collect()
}

#[test]
fn slope_at_zero_matches_curvature() {
    let grid = log_grid(1e-4, 1e-2, 7);
    for (m, want) in [("h3", 3.0), ("h3:4", 12.0), ("s2", -1.0)] {
        let m: ModelSpace = m.parse().unwrap();
        let r = entropy_slope_at_zero(&m, &grid, DEFAULT_TOL).unwrap();
        println!("{m}: {r:?}");
        assert_eq!(r.predicted_slope, want);
        assert!((r.slope_at_zero - want).abs() <= 0.02 * want.abs(), "{m}: {r:?}");
    }
    let e = ModelSpace::euclidean(3).unwrap();
    let r = entropy_slope_at_zero(&e, &grid, DEFAULT_TOL).unwrap();
    assert!(r.slope_at_zero.abs() < 1e-6);
    assert!(r.residual_fit.is_none());
}

#[test]
fn hyperbolic_residual_exponent() {
    let grid = log_grid(1e-4, 1e-2, 7);
    let r = entropy_slope_at_zero(&"h3".parse().unwrap(), &grid, DEFAULT_TOL).unwrap();
    let fit = r.residual_fit.unwrap();
    println!("{fit:?}");
    assert!(fit.slope >= 1.4);
}

#[test]
fn hyperbolic_derivative_at_small_time() {
    let m: ModelSpace = "h3".parse().unwrap();
    let s = entropy_derivative(&m, 1e-3, DEFAULT_TOL).unwrap();
    let (a, b) = (s.dndt_direct.unwrap(), s.dndt_integrand.unwrap());
    println!("{a} {b} {}", a - b);
    assert!((a - 3.0).abs() <= 0.1 && (b - 3.0).abs() <= 0.1);
    assert!((a - b).abs() <= 1e-6);
}

#[test]
fn moment_functionals_at_small_time() {
    let t = 1e-3;
    for m in ["h3", "s2"] {
        let m: ModelSpace = m.parse().unwrap();
        let n = m.dimension() as f64;
        let big_r = m.scalar_curvature();
        // On the sphere the default π/8 leaves a ball of radius π/16, whose
        // Gaussian tail e^{-r²/16t} is ~1e-3 at this t; use the largest
        // admissible radius below inj/4 instead.
        let r = if m.is_compact() { 0.75 } else { m.default_cutoff_radius() };
        let s = second_moment_functional(&m, t, r, DEFAULT_TOL).unwrap();
        let q = fourth_moment_functional(&m, t, r, DEFAULT_TOL).unwrap();
        println!("{m}: second {} fourth {}", s - (-n / 2.0 + big_r / 6.0 * t), q + n * (n + 2.0) / (4.0 * t));
        assert!((s - (-n / 2.0 + big_r / 6.0 * t)).abs() <= 3.0 * t.powf(1.5));
        assert!((q + n * (n + 2.0) / (4.0 * t) - (n / 3.0 + 0.5) * big_r).abs() <= 0.5);
    }
}

#[test]
fn outer_integral_exponents() {
    let m: ModelSpace = "h3".parse().unwrap();
    let r = m.default_cutoff_radius();
    let grid = log_grid(1e-3, 1e-1, 7);
    let vals: Vec<OuterIntegrals> = grid.iter().map(|&t| outer_integral_bound(&m, t, r).unwrap()).collect();
    let a: Vec<(f64, f64)> = grid.iter().zip(&vals).map(|(&t, v)| (t, v.f_h)).collect();
    let b: Vec<(f64, f64)> = grid.iter().zip(&vals).map(|(&t, v)| (t, v.f_ht)).collect();
    let fa = heatlab_core::numerics::fit_log_log_slope(&a).unwrap();
    let fb = heatlab_core::numerics::fit_log_log_slope(&b).unwrap();
    println!("{fa:?} {fb:?}");
    assert!(fa.slope >= 1.4 && fb.slope >= 0.4);
}

#[test]
fn euclidean_outer_integral_matches_gaussian_tail() {
    // On ℝ³, u = ρ²/4t is Gamma(3/2)-distributed under H dμ, so
    // ∫_{ρ>a} (ρ²/4t) H dμ = Γ(5/2, a²/4t) / Γ(3/2).
    let m = ModelSpace::euclidean(3).unwrap();
    let t = 1e-3;
    let a: f64 = 0.5;
    let x = a * a / (4.0 * t);
    // Γ(5/2, x) = (3/4)√π erfc(√x) + e^{-x} √x (x + 3/2).
    let upper = (-x).exp() * x.sqrt() * (x + 1.5) * (1.0 + erfc_tail_ratio(x));
    let exact = upper / (0.5 * std::f64::consts::PI.sqrt());
    let v = outer_integral_bound(&m, t, 2.0 * a).unwrap();
    println!("{} {exact}", v.f_h);
    assert!((v.f_h - exact).abs() <= 1e-8 * exact);
    assert!(v.f_h < 1e-20);
}

/// `(3/4)√π erfc(√x) / (e^{-x} √x (x + 3/2))`, from the asymptotic series of erfc.
fn erfc_tail_ratio(x: f64) -> f64 {
    // erfc(√x) ≈ e^{-x}/(√(πx)) Σ (-1)^k (2k-1)!! / (2x)^k
    let mut s = 0.0;
    let mut term = 1.0;
    for k in 0..12 {
        s += term;
        term *= -((2 * k + 1) as f64) / (2.0 * x);
    }
    0.75 * s / (x * (x + 1.5))
}

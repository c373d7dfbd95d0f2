use std::f64::consts::PI;

use heatlab_core::kernels::{circle_kernel_images, eval_kernel, log_kernel_scaled, total_mass};
use heatlab_core::numerics::{richardson_limit, Quadrature};
use heatlab_core::ModelSpace;

fn all_models() -> Vec<ModelSpace> {
    ["euclidean:3", "euclidean:2", "h3", "s2", "s1"].iter().map(|s| s.parse().unwrap()).collect()
}

#[test]
fn mass_conservation_grid() {
    let tol = 1e-10;
    for m in all_models() {
        for &t in &[1e-3, 1e-2, 1e-1, 1.0] {
            let mass = total_mass(&m, t, tol).unwrap();
            assert!((mass - 1.0).abs() <= 10.0 * tol, "{m} t={t}: {mass}");
        }
    }
}

#[test]
fn mass_examples() {
    let cases = [("euclidean:3", 0.1), ("s2", 1.0), ("h3", 0.01)];
    for (m, t) in cases {
        let m: ModelSpace = m.parse().unwrap();
        assert!((total_mass(&m, t, 1e-12).unwrap() - 1.0).abs() < 1e-11);
    }
}

#[test]
fn euclidean_center_value() {
    let m = ModelSpace::euclidean(3).unwrap();
    for &t in &[1e-3, 0.3, 4.0] {
        let s = eval_kernel(&m, 0.0, t).unwrap();
        let exact = (4.0 * PI * t).powf(-1.5);
        assert!((s.h - exact).abs() <= 1e-14 * exact);
        assert_eq!(s.dh_dd, 0.0);
    }
}

#[test]
fn circle_seven_images_match_fifty() {
    let t = 0.5;
    for i in 0..=20 {
        let d = PI * i as f64 / 20.0;
        let a = circle_kernel_images(d, t, 7);
        let b = circle_kernel_images(d, t, 50);
        assert!((a - b).abs() < 1e-14, "d={d}");
    }
}

#[test]
fn circle_semigroup() {
    let m = ModelSpace::Circle;
    let (t, s) = (0.3, 0.45);
    let q = Quadrature::new(1e-13);
    for &x in &[0.0, 0.5, 1.3, 2.4, PI] {
        // (H_t * H_s)(x) = ∫_{-π}^{π} H_t(|y|) H_s(dist(x, y)) dy
        let conv = q
            .integrate(
                |y: f64| {
                    let dy = y.abs();
                    let mut dxy = (x - y).abs() % (2.0 * PI);
                    if dxy > PI {
                        dxy = 2.0 * PI - dxy;
                    }
                    eval_kernel(&m, dy, t).unwrap().h * eval_kernel(&m, dxy, s).unwrap().h
                },
                -PI,
                PI,
            )
            .unwrap()
            .value;
        let direct = eval_kernel(&m, x, t + s).unwrap().h;
        assert!((conv - direct).abs() < 1e-8, "x={x}: {conv} vs {direct}");
    }
}

#[test]
fn radial_derivative_vanishes_linearly_at_center() {
    for m in all_models() {
        let t = 0.2;
        let a = eval_kernel(&m, 1e-3, t).unwrap().dh_dd;
        let b = eval_kernel(&m, 1e-4, t).unwrap().dh_dd;
        let ratio = a / b;
        assert!((ratio - 10.0).abs() < 1e-3, "{m}: {ratio}");
    }
}

#[test]
fn log_kernel_scaled_examples() {
    let e = ModelSpace::euclidean(3).unwrap();
    for &(d, t) in &[(0.5, 0.1), (2.0, 1e-3)] {
        let exact = -1.5 * t * (4.0 * PI * t).ln() - d * d / 4.0;
        assert!((log_kernel_scaled(&e, d, t).unwrap() - exact).abs() < 1e-13);
    }
    let h3 = ModelSpace::hyperbolic(1.0).unwrap();
    assert!((log_kernel_scaled(&h3, 1.0, 1e-3).unwrap() + 0.25).abs() < 0.01);

    let samples: Vec<(f64, f64)> = (0..6)
        .map(|i| {
            let t = 1e-2 / 2f64.powi(i);
            (t, log_kernel_scaled(&ModelSpace::Sphere2, 1.0, t).unwrap())
        })
        .collect();
    let lim = richardson_limit(&samples, 1.0).unwrap();
    assert!((lim.limit + 0.25).abs() < 5e-3, "{lim:?}");
}

use heatlab_core::estimates::{
    bernstein_scaling, hamilton_slack, li_yau_lower_check, lyp_quantity, perelman_residual, varadhan_residual,
    varadhan_sup, ShiftedSolution, SlackReport,
};
use heatlab_core::ModelSpace;

fn model(s: &str) -> ModelSpace {
    s.parse().unwrap()
}

#[test]
fn euclidean_hamilton_slack_closed_form() {
    for n in 1..=4 {
        let m = ModelSpace::euclidean(n).unwrap();
        let nf = n as f64;
        for t0 in [0.05, 0.5] {
            let sol = ShiftedSolution::new(m, t0, t0).unwrap();
            for s in [1e-3 * t0, 0.3 * t0, t0] {
                for d in [0.0, 0.5, 2.0] {
                    let tau = t0 + s;
                    let want = nf + 2.0 * nf * (tau / t0).ln() + d * d / tau
                        - s * (-nf / (2.0 * tau) + d * d / (2.0 * tau * tau));
                    let got = hamilton_slack(&sol, d, s).unwrap();
                    assert!((got - want).abs() <= 1e-12 * want.abs().max(1.0), "n={n} d={d} s={s}");
                }
            }
        }
    }
}

#[test]
fn hamilton_slack_at_the_centre_is_at_least_n() {
    for name in ["h3", "s2", "s1", "euclidean:3"] {
        let m = model(name);
        let sol = ShiftedSolution::new(m, 0.1, 0.1).unwrap();
        for s in [1e-3, 0.05, 0.1] {
            assert!(hamilton_slack(&sol, 0.0, s).unwrap() >= m.dimension() as f64 - 1e-12, "{name}");
        }
        assert!(hamilton_slack(&sol, 0.0, 0.2).is_err());
        assert!(hamilton_slack(&sol, 0.0, 0.0).is_err());
    }
}

#[test]
fn li_yau_witness_on_euclidean_space() {
    let m = model("euclidean:3");
    for s in [1e-3, 0.1, 1.0] {
        for d in [0.0, 0.4, 2.0] {
            let want = 1.5 + d * d / (4.0 * s);
            assert!((li_yau_lower_check(&m, d, s).unwrap() - want).abs() <= 1e-12 * want);
        }
    }
}

#[test]
fn lyp_near_the_pole_of_hyperbolic_space() {
    // f = d²/4t + t - ln(d/sinh d) gives lyp -> 3 as (d, t) -> 0.
    let m = model("h3");
    let v = lyp_quantity(&m, 1e-4, 1e-4).unwrap();
    assert!((v - 3.0).abs() <= 1e-3, "{v}");
    assert!((perelman_residual(&m, 1e-4, 1e-4).unwrap() + 3.0).abs() <= 1e-3);
}

#[test]
fn lyp_is_zero_on_euclidean_space() {
    for n in 1..=5 {
        let m = ModelSpace::euclidean(n).unwrap();
        for (d, t) in [(0.0, 1e-3), (1.0, 0.1), (5.0, 2.0)] {
            assert_eq!(lyp_quantity(&m, d, t).unwrap(), 0.0);
        }
    }
}

#[test]
fn varadhan_residual_closed_form_on_hyperbolic_space() {
    let m = model("h3");
    for (d, t) in [(1.0, 1e-3), (0.5, 1e-2), (2.0, 0.1)] {
        let want = t * (d / f64::sinh(d)).ln() - t * t;
        assert!((varadhan_residual(&m, d, t).unwrap() - want).abs() <= 1e-14);
    }
    assert!(varadhan_residual(&m, 1.0, 1e-3).unwrap().abs() <= 0.01);
    assert_eq!(varadhan_sup(&model("euclidean:2"), 1e-3, 1.0, 50).unwrap(), 0.0);
    assert!(varadhan_sup(&m, 1e-3, 0.0, 50).is_err());
}

#[test]
fn bernstein_scaling_is_bounded() {
    let d_grid: Vec<f64> = (0..=30).map(|i| 0.1 * i as f64).collect();
    let s_grid: Vec<f64> = (0..8).map(|i| 0.1 * 2f64.powi(-i)).collect();
    for name in ["euclidean:3", "h3"] {
        let sol = ShiftedSolution::new(model(name), 0.1, 0.1).unwrap();
        let fit = bernstein_scaling(&sol, &d_grid, &s_grid).unwrap();
        assert!(fit.slope >= -1e-9, "{name}: {}", fit.slope);
    }
}

#[test]
fn slack_report_invariants() {
    let r = SlackReport::scan(&[0.0, 1.0, 2.0], &[0.1, 0.2], |d, t| Ok(d - 10.0 * t)).unwrap();
    assert_eq!(r.grid.len(), 6);
    assert_eq!(r.slack.len(), 6);
    assert_eq!(r.grid[1], (1.0, 0.1));
    assert_eq!(r.min_slack, -2.0);
    assert_eq!(r.argmin, (0.0, 0.2));
    assert!(SlackReport::scan(&[], &[0.1], |_, _| Ok(0.0)).is_err());
}

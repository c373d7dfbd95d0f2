//! End-to-end acceptance criteria. Runs without the libtest harness and
//! prints one PASS/FAIL line per criterion.

use std::process::{Command, ExitCode};
use std::time::Instant;

use heatlab_core::entropy::{
    entropy_derivative, entropy_slope_at_zero, fourth_moment_functional, outer_integral_bound,
    second_moment_functional, DEFAULT_TOL,
};
use heatlab_core::estimates::{
    hamilton_slack, lyp_quantity, perelman_limit, perelman_residual, varadhan_sup, ShiftedSolution, SlackReport,
};
use heatlab_core::moments::{induction_step, moment_in, moment_qn, wick_in, wick_qn, MomentSpec};
use heatlab_core::numerics::fit_log_log_slope;
use heatlab_core::parametrix::{remainder_scaling_fit, ParametrixData};
use heatlab_core::{total_mass, ModelSpace};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

fn model(s: &str) -> ModelSpace {
    s.parse().unwrap()
}

fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| lo * (hi / lo).powf(i as f64 / (n - 1) as f64)).collect()
}

fn lin_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect()
}

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

fn euclidean_null() -> Check {
    let mut worst_n = 0.0f64;
    let mut worst_d = 0.0f64;
    for n in 1..=3 {
        let m = ModelSpace::euclidean(n).map_err(err)?;
        for t in [1e-4, 1e-3, 1e-2, 1e-1] {
            let s = entropy_derivative(&m, t, DEFAULT_TOL).map_err(err)?;
            worst_n = worst_n.max(s.n.abs());
            worst_d = worst_d.max(s.dndt_direct.unwrap().abs()).max(s.dndt_integrand.unwrap().abs());
        }
    }
    ensure(worst_n <= 1e-8, format!("max |N| = {worst_n:e}"))?;
    ensure(worst_d <= 1e-6, format!("max |dN/dt| = {worst_d:e}"))?;
    Ok(format!("max |N| = {worst_n:.2e}, max |dN/dt| = {worst_d:.2e}"))
}

fn slope_at_zero() -> Check {
    let grid = log_grid(1e-4, 1e-2, 10);
    let mut parts = Vec::new();
    for (name, expected) in [("h3", 3.0), ("h3:4", 12.0), ("s2", -1.0)] {
        let r = entropy_slope_at_zero(&model(name), &grid, DEFAULT_TOL).map_err(err)?;
        ensure(
            (r.slope_at_zero - expected).abs() <= 0.02 * expected.abs(),
            format!("{name}: slope {} vs {expected}", r.slope_at_zero),
        )?;
        parts.push(format!("{name} {:.6}", r.slope_at_zero));
    }
    Ok(parts.join(", "))
}

fn slope_remainder() -> Check {
    let r = entropy_slope_at_zero(&model("h3"), &log_grid(1e-4, 1e-2, 10), DEFAULT_TOL).map_err(err)?;
    let fit = r.residual_fit.ok_or("residual below floor on H3")?;
    ensure(fit.slope >= 1.4, format!("exponent {}", fit.slope))?;
    Ok(format!("residual exponent {:.4}", fit.slope))
}

fn derivative_at_small_time() -> Check {
    let s = entropy_derivative(&model("h3"), 1e-3, DEFAULT_TOL).map_err(err)?;
    let (a, b) = (s.dndt_direct.unwrap(), s.dndt_integrand.unwrap());
    ensure((a - 3.0).abs() <= 0.1 && (b - 3.0).abs() <= 0.1, format!("routes {a}, {b}"))?;
    ensure((a - b).abs() <= 1e-6, format!("routes differ by {:e}", (a - b).abs()))?;
    Ok(format!("direct {a:.9}, integrand {b:.9}, gap {:.1e}", (a - b).abs()))
}

fn mass_conservation() -> Check {
    let mut worst = 0.0f64;
    for name in ["euclidean:3", "h3", "s2", "s1"] {
        for t in [1e-3, 1e-2, 1e-1, 1.0] {
            let mass = total_mass(&model(name), t, 1e-10).map_err(err)?;
            ensure((mass - 1.0).abs() <= 1e-8, format!("{name} t={t}: mass {mass}"))?;
            worst = worst.max((mass - 1.0).abs());
        }
    }
    Ok(format!("max |mass - 1| = {worst:.2e}"))
}

fn parametrix_scaling() -> Check {
    let p = ParametrixData::with_default_radius(model("h3")).map_err(err)?;
    let fit = remainder_scaling_fit(&p, &lin_grid(0.0, 0.5 * p.r, 11), &log_grid(1e-3, 1e-1, 7)).map_err(err)?;
    let (a, b) = (fit.remainder.slope().unwrap_or(f64::INFINITY), fit.time_derivative.slope().unwrap_or(f64::INFINITY));
    ensure(a >= 4.0, format!("remainder exponent {a}"))?;
    ensure(b >= 2.0, format!("time-derivative exponent {b}"))?;
    Ok(format!("exponents {a:.4} and {b:.4}"))
}

fn moment_identities() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut worst = 0.0f64;
    let mut worst_ind = 0.0f64;
    for _ in 0..100 {
        let t = rng.gen_range(1e-3..2.0);
        let lambdas: Vec<f64> = (0..8).map(|_| rng.gen_range(-3.0..3.0)).collect();
        for n in 1..=8 {
            let spec = MomentSpec::new(lambdas[..n].to_vec(), t).map_err(err)?;
            let abs = MomentSpec::new(spec.lambdas.iter().map(|l| l.abs()).collect(), t).map_err(err)?;
            worst = worst
                .max((moment_in(&spec) - wick_in(&spec)).abs() / moment_in(&abs))
                .max((moment_qn(&spec) - wick_qn(&spec)).abs() / moment_qn(&abs));
            if n > 1 {
                let prev = MomentSpec::new(lambdas[..n - 1].to_vec(), t).map_err(err)?;
                let (ri, rq) = induction_step(&spec, &prev).map_err(err)?;
                worst_ind = worst_ind
                    .max(ri.abs() / wick_in(&spec).abs().max(1.0))
                    .max(rq.abs() / wick_qn(&spec).abs().max(1.0));
            }
        }
    }
    ensure(worst <= 1e-12, format!("oracle mismatch {worst:e}"))?;
    ensure(worst_ind <= 1e-12, format!("induction residual {worst_ind:e}"))?;
    Ok(format!("oracle {worst:.1e}, induction {worst_ind:.1e}"))
}

fn moment_functionals() -> Check {
    let t = 1e-3;
    let mut parts = Vec::new();
    for name in ["h3", "s2"] {
        let m = model(name);
        let n = m.dimension() as f64;
        let big_r = m.scalar_curvature();
        let r = if m.is_compact() { 0.75 } else { m.default_cutoff_radius() };
        let s = second_moment_functional(&m, t, r, DEFAULT_TOL).map_err(err)?;
        let q = fourth_moment_functional(&m, t, r, DEFAULT_TOL).map_err(err)?;
        let ds = (s - (-n / 2.0 + big_r / 6.0 * t)).abs();
        let dq = (q + n * (n + 2.0) / (4.0 * t) - (n / 3.0 + 0.5) * big_r).abs();
        ensure(ds <= 3.0 * t.powf(1.5), format!("{name}: second-moment deviation {ds:e}"))?;
        ensure(dq <= 0.5, format!("{name}: fourth-moment deviation {dq}"))?;
        parts.push(format!("{name} {ds:.1e}/{dq:.3}"));
    }
    Ok(parts.join(", "))
}

fn lyp_sign() -> Check {
    let ts = log_grid(1e-3, 1.0, 13);
    let mut worst = f64::NEG_INFINITY;
    for name in ["euclidean:3", "s2", "s1"] {
        let m = model(name);
        let ds = lin_grid(0.0, m.max_radius().min(3.0), 31);
        let rep = SlackReport::scan(&ds, &ts, |d, t| lyp_quantity(&m, d, t)).map_err(err)?;
        let max = rep.slack.iter().fold(f64::NEG_INFINITY, |a, &b| a.max(b));
        ensure(max <= 1e-8, format!("{name}: lyp reaches {max:e}"))?;
        worst = worst.max(max);
    }
    let mut eu = 0.0f64;
    for n in 1..=4 {
        let m = ModelSpace::euclidean(n).map_err(err)?;
        for &t in &ts {
            for d in lin_grid(0.0, 3.0, 31) {
                eu = eu.max(lyp_quantity(&m, d, t).map_err(err)?.abs());
            }
        }
    }
    ensure(eu <= 1e-12, format!("Euclidean lyp {eu:e}"))?;
    Ok(format!("max lyp {worst:.2e}, Euclidean |lyp| {eu:.1e}"))
}

fn perelman_gap() -> Check {
    let m = model("h3");
    let probe = perelman_residual(&m, 1e-2, 1e-3).map_err(err)?;
    let limit = perelman_limit(&m, 6).map_err(err)?;
    ensure(probe <= -2.5, format!("residual at probe {probe}"))?;
    ensure((limit.limit + 3.0).abs() <= 0.2, format!("limit {}", limit.limit))?;
    Ok(format!("residual {probe:.4}, limit {:.6}", limit.limit))
}

fn hamilton() -> Check {
    let mut worst = f64::INFINITY;
    for name in ["euclidean:3", "h3", "s2", "s1"] {
        let m = model(name);
        let ds = lin_grid(0.0, m.max_radius().min(3.0), 31);
        for t0 in [0.05, 0.5] {
            let sol = ShiftedSolution::new(m, t0, t0).map_err(err)?;
            let ss = log_grid(1e-3 * t0, t0, 10);
            let rep = SlackReport::scan(&ds, &ss, |d, s| hamilton_slack(&sol, d, s)).map_err(err)?;
            ensure(rep.min_slack >= -1e-8, format!("{name} t0={t0}: slack {} at {:?}", rep.min_slack, rep.argmin))?;
            worst = worst.min(rep.min_slack);
        }
    }
    Ok(format!("min slack {worst:.4}"))
}

fn varadhan() -> Check {
    let m = model("h3");
    let r = m.default_cutoff_radius();
    let at = varadhan_sup(&m, 1e-3, r, 100).map_err(err)?;
    ensure(at <= 0.01, format!("sup at t = 1e-3 is {at}"))?;
    let pts = log_grid(1e-3, 1e-1, 7)
        .into_iter()
        .map(|t| Ok((t, varadhan_sup(&m, t, r, 100)?)))
        .collect::<Result<Vec<_>, heatlab_core::Error>>()
        .map_err(err)?;
    ensure(pts.windows(2).all(|w| w[1].1 > w[0].1), "sup not increasing in t")?;
    let fit = fit_log_log_slope(&pts).map_err(err)?;
    ensure(fit.slope >= 0.9, format!("exponent {}", fit.slope))?;
    Ok(format!("sup {at:.2e}, exponent {:.4}", fit.slope))
}

fn outer_exponents() -> Check {
    let m = model("h3");
    let r = m.default_cutoff_radius();
    let grid = log_grid(1e-3, 1e-1, 7);
    let mut a = Vec::new();
    let mut b = Vec::new();
    for &t in &grid {
        let v = outer_integral_bound(&m, t, r).map_err(err)?;
        a.push((t, v.f_h));
        b.push((t, v.f_ht));
    }
    let fa = fit_log_log_slope(&a).map_err(err)?;
    let fb = fit_log_log_slope(&b).map_err(err)?;
    ensure(fa.slope >= 1.4, format!("f H exponent {}", fa.slope))?;
    ensure(fb.slope >= 0.4, format!("f H_t exponent {}", fb.slope))?;
    Ok(format!("exponents {:.2} and {:.2}", fa.slope, fb.slope))
}

fn cli_determinism() -> Check {
    let dir = tempfile::TempDir::new().map_err(err)?;
    let run = |out: &str, grid: &str| {
        Command::new(env!("CARGO_BIN_EXE_heatlab"))
            .args(["entropy-table", "--model", "h3", "--t-grid", grid, "--out", out])
            .current_dir(dir.path())
            .output()
    };
    for out in ["a.csv", "b.csv"] {
        let o = run(out, "1e-4:1e-2:10:log").map_err(err)?;
        ensure(o.status.code() == Some(0), format!("run exited with {:?}", o.status.code()))?;
    }
    let a = std::fs::read(dir.path().join("a.csv")).map_err(err)?;
    let b = std::fs::read(dir.path().join("b.csv")).map_err(err)?;
    ensure(!a.is_empty() && a == b, "outputs differ")?;
    let o = run("c.csv", "1e-2:1e-4:ten:log").map_err(err)?;
    ensure(o.status.code() == Some(2), format!("malformed grid exited with {:?}", o.status.code()))?;
    ensure(!dir.path().join("c.csv").exists(), "malformed run wrote a file")?;
    Ok(format!("{} identical bytes, malformed grid exit 2", a.len()))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 14] = [
        ("Euclidean null entropy", euclidean_null),
        ("entropy slope at zero", slope_at_zero),
        ("entropy slope remainder exponent", slope_remainder),
        ("entropy derivative at t = 1e-3", derivative_at_small_time),
        ("mass conservation", mass_conservation),
        ("parametrix remainder scaling", parametrix_scaling),
        ("moment identities", moment_identities),
        ("moment functionals", moment_functionals),
        ("Li-Yau-Perelman sign", lyp_sign),
        ("Perelman claim gap on H3", perelman_gap),
        ("Hamilton bound", hamilton),
        ("Varadhan residual", varadhan),
        ("outer-integral exponents", outer_exponents),
        ("CLI determinism and exit codes", cli_determinism),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = f();
        let secs = start.elapsed().as_secs_f64();
        match result {
            Ok(detail) => println!("PASS {:>2} {name}: {detail} ({secs:.1}s)", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {why} ({secs:.1}s)", i + 1);
            }
        }
    }
    println!("{} of {} acceptance criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

//! The five subcommands. Each returns a table, the outcome of its asserted
//! checks and an optional plot.

use heatlab_core::entropy::{entropy_derivative, entropy_slope_at_zero, min_grid_time, AsymptoticReport};
use heatlab_core::estimates::{
    hamilton_slack, li_yau_lower_check, lyp_quantity, perelman_limit, perelman_residual, ShiftedSolution, SlackReport,
};
use heatlab_core::moments::{induction_step, moment_in, moment_qn, wick_in, wick_qn, MomentSpec};
use heatlab_core::numerics::fit_log_log_slope;
use heatlab_core::parametrix::{remainder_scaling_fit, ExponentFit, ParametrixData};
use heatlab_core::ModelSpace;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::config::{Command, ConfigError, Grid, RunConfig, Which};
use crate::output::{number, Table};
use crate::plot::{heat_strip, line_chart, Series};

#[derive(Debug, Error)]
pub enum CommandError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Numeric(#[from] heatlab_core::Error),
}

pub type CmdResult<T> = Result<T, CommandError>;

#[derive(Debug, Clone)]
pub struct Outcome {
    pub table: Table,
    /// Descriptions of failed checks; empty on success.
    pub failures: Vec<String>,
    pub plot: Option<String>,
}

impl Outcome {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

fn bad(key: &str, msg: impl Into<String>) -> CommandError {
    ConfigError::Invalid { key: key.to_string(), msg: msg.into() }.into()
}

fn model(cfg: &RunConfig) -> CmdResult<ModelSpace> {
    cfg.model.ok_or(ConfigError::Missing("--model").into())
}

fn check(failures: &mut Vec<String>, ok: bool, what: impl FnOnce() -> String) {
    if !ok {
        failures.push(what());
    }
}

pub fn run(cfg: &RunConfig) -> CmdResult<Outcome> {
    match cfg.command {
        Command::EntropyTable => entropy_table(cfg),
        Command::SlopeFit => slope_fit(cfg),
        Command::RemainderCheck => remainder_check(cfg),
        Command::InequalityScan => inequality_scan(cfg),
        Command::MomentsVerify => moments_verify(cfg),
    }
}

fn entropy_times(cfg: &RunConfig, m: &ModelSpace) -> CmdResult<Vec<f64>> {
    let floor = min_grid_time(m);
    if cfg.t_grid.min < floor {
        return Err(bad("t-grid", format!("times below {floor:e} are not supported for {m}")));
    }
    Ok(cfg.t_grid.points())
}

/// Slope within 2% of `-R/2`, or within `1e-6` of zero when `R = 0`.
fn slope_ok(report: &AsymptoticReport) -> bool {
    let p = report.predicted_slope;
    let err = (report.slope_at_zero - p).abs();
    if p == 0.0 {
        err <= 1e-6
    } else {
        err <= 0.02 * p.abs()
    }
}

fn note_report(table: &mut Table, report: &AsymptoticReport) {
    table.note("fitted_slope", number(report.slope_at_zero));
    table.note("predicted_slope", number(report.predicted_slope));
    table.note("extrapolation_residual", number(report.extrapolation_residual));
    table.note("residual_exponent", report.residual_fit.map_or("below-floor".to_string(), |f| number(f.slope)));
}

fn entropy_table(cfg: &RunConfig) -> CmdResult<Outcome> {
    let m = model(cfg)?;
    let times = entropy_times(cfg, &m)?;
    let slope = -0.5 * m.scalar_curvature();
    let mut table = Table::new(vec!["t", "N", "dNdt_direct", "dNdt_integrand", "predicted", "residual"]);
    let mut failures = Vec::new();
    let exact_null = matches!(m, ModelSpace::Euclidean { .. });
    for &t in &times {
        let s = entropy_derivative(&m, t, cfg.tol)?;
        let direct = s.dndt_direct.unwrap_or(f64::NAN);
        let integrand = s.dndt_integrand.unwrap_or(f64::NAN);
        let predicted = slope * t;
        table.push(vec![t, s.n, direct, integrand, predicted, s.n - predicted]);
        if exact_null {
            check(&mut failures, s.n.abs() <= 1e-8, || format!("|N({t:e})| = {:e} > 1e-8", s.n.abs()));
            check(&mut failures, direct.abs() <= 1e-6 && integrand.abs() <= 1e-6, || {
                format!("dN/dt at {t:e} not within 1e-6 of 0")
            });
        }
    }
    let report = entropy_slope_at_zero(&m, &times, cfg.tol)?;
    note_report(&mut table, &report);
    check(&mut failures, slope_ok(&report), || {
        format!("fitted slope {:e} differs from {:e}", report.slope_at_zero, report.predicted_slope)
    });
    let plot = cfg.plot.then(|| {
        let n: Vec<(f64, f64)> = table.rows.iter().map(|r| (r[0], r[1])).collect();
        let reference: Vec<(f64, f64)> = table.rows.iter().map(|r| (r[0], r[4])).collect();
        line_chart(
            &format!("Nash entropy on {m}"),
            "t",
            "N",
            &[
                Series { label: "N(t)", points: n, dashed: false },
                Series { label: "-R/2 t", points: reference, dashed: true },
            ],
            true,
        )
    });
    Ok(Outcome { table, failures, plot })
}

fn slope_fit(cfg: &RunConfig) -> CmdResult<Outcome> {
    let m = model(cfg)?;
    let times = entropy_times(cfg, &m)?;
    let report = entropy_slope_at_zero(&m, &times, cfg.tol)?;
    let mut table = Table::new(vec![
        "slope_at_zero",
        "predicted_slope",
        "extrapolation_residual",
        "residual_exponent",
        "residual_exponent_std_error",
    ]);
    let (exp, se) = report.residual_fit.map_or((f64::NAN, f64::NAN), |f| (f.slope, f.std_error));
    table.push(vec![report.slope_at_zero, report.predicted_slope, report.extrapolation_residual, exp, se]);
    note_report(&mut table, &report);
    let mut failures = Vec::new();
    check(&mut failures, slope_ok(&report), || {
        format!("fitted slope {:e} differs from {:e}", report.slope_at_zero, report.predicted_slope)
    });
    let plot = if cfg.plot {
        let mut ratios = Vec::with_capacity(times.len());
        for &t in &times {
            ratios.push((t, heatlab_core::entropy::nash_entropy(&m, t, cfg.tol)?.n / t));
        }
        let reference = vec![(times[0], report.predicted_slope), (times[times.len() - 1], report.predicted_slope)];
        Some(line_chart(
            &format!("N(t)/t on {m}"),
            "t",
            "N/t",
            &[
                Series { label: "N/t", points: ratios, dashed: false },
                Series { label: "-R/2", points: reference, dashed: true },
            ],
            true,
        ))
    } else {
        None
    };
    Ok(Outcome { table, failures, plot })
}

fn exponent_text(fit: &ExponentFit) -> String {
    fit.slope().map_or("exact-zero".to_string(), number)
}

fn remainder_check(cfg: &RunConfig) -> CmdResult<Outcome> {
    let m = model(cfg)?;
    let p = ParametrixData::new(m, cfg.r).map_err(|e| bad("r", e.to_string()))?;
    if cfg.d_grid.max > 0.5 * cfg.r {
        return Err(bad("d-grid", format!("distances must lie in [0, r/2] = [0, {}]", 0.5 * cfg.r)));
    }
    let times = cfg.t_grid.points();
    let fit = remainder_scaling_fit(&p, &cfg.d_grid.points(), &times)?;
    let mut table = Table::new(vec!["t", "sup_remainder", "sup_time_derivative"]);
    for s in &fit.samples {
        table.push(s.to_vec());
    }
    table.note("order", p.order);
    table.note("remainder_exponent", exponent_text(&fit.remainder));
    table.note("derivative_exponent", exponent_text(&fit.time_derivative));
    table.note("predicted_remainder_exponent", number(fit.predicted_remainder));
    table.note("predicted_derivative_exponent", number(fit.predicted_derivative));
    let leading_r = leading_exponent(&fit.samples, 1)?;
    let leading_t = leading_exponent(&fit.samples, 2)?;
    table.note("leading_remainder_exponent", exponent_text(&leading_r));
    table.note("leading_derivative_exponent", exponent_text(&leading_t));
    let mut failures = Vec::new();
    check(&mut failures, leading_r.at_least(fit.predicted_remainder - 0.1), || {
        format!("remainder exponent {} below {}", exponent_text(&leading_r), fit.predicted_remainder)
    });
    check(&mut failures, leading_t.at_least(fit.predicted_derivative - 0.1), || {
        format!("time-derivative exponent {} below {}", exponent_text(&leading_t), fit.predicted_derivative)
    });
    let plot = cfg.plot.then(|| {
        let series = |i: usize| -> Vec<(f64, f64)> {
            fit.samples.iter().filter(|s| s[i] > 0.0).map(|s| (s[0], s[i].log10())).collect()
        };
        line_chart(
            &format!("Parametrix remainder on {m}"),
            "t",
            "log10 sup",
            &[
                Series { label: "remainder", points: series(1), dashed: false },
                Series { label: "time derivative", points: series(2), dashed: false },
            ],
            true,
        )
    });
    Ok(Outcome { table, failures, plot })
}

/// Exponent over the three smallest times, where the small-time asymptotics
/// are measured.
fn leading_exponent(samples: &[[f64; 3]], column: usize) -> CmdResult<ExponentFit> {
    let mut points: Vec<(f64, f64)> = samples.iter().map(|s| (s[0], s[column])).collect();
    points.sort_by(|a, b| a.0.total_cmp(&b.0));
    points.truncate(3);
    if points.iter().all(|p| p.1 < 1e-300) {
        return Ok(ExponentFit::ExactZero);
    }
    Ok(ExponentFit::Fitted(fit_log_log_slope(&points)?))
}

fn refined(g: &Grid) -> Grid {
    Grid { count: 2 * g.count - 1, ..*g }
}

fn scan_table(report: &SlackReport, value: &'static str, time: &'static str) -> Table {
    let mut table = Table::new(vec!["d", time, value]);
    for (&(d, t), &v) in report.grid.iter().zip(&report.slack) {
        table.push(vec![d, t, v]);
    }
    table
}

fn max_of(report: &SlackReport) -> f64 {
    report.slack.iter().fold(f64::NEG_INFINITY, |a, &b| a.max(b))
}

fn inequality_scan(cfg: &RunConfig) -> CmdResult<Outcome> {
    let m = model(cfg)?;
    let ds = cfg.d_grid.points();
    let ts = cfg.t_grid.points();
    let nonneg_ricci = m.ricci_lower_bound() == 0.0;
    let euclidean = matches!(m, ModelSpace::Euclidean { .. });
    let mut failures = Vec::new();
    let (mut table, report) = match cfg.which {
        Which::Lyp => {
            let report = SlackReport::scan(&ds, &ts, |d, t| lyp_quantity(&m, d, t))?;
            let mut table = scan_table(&report, "lyp", "t");
            let max = max_of(&report);
            table.note("max", number(max));
            if nonneg_ricci {
                check(&mut failures, max <= 1e-8, || format!("lyp reaches {max:e} > 1e-8"));
            }
            if euclidean {
                check(&mut failures, max.abs().max(report.min_slack.abs()) <= 1e-12, || {
                    "Euclidean lyp is not identically 0".to_string()
                });
            }
            (table, report)
        }
        Which::Perelman => {
            let report = SlackReport::scan(&ds, &ts, |d, t| perelman_residual(&m, d, t))?;
            let mut table = scan_table(&report, "residual", "t");
            let at_probe = perelman_residual(&m, 1e-2, 1e-3)?;
            let limit = perelman_limit(&m, 6)?;
            table.note("residual_at_probe", number(at_probe));
            table.note("limit", number(limit.limit));
            table.note("limit_residual", number(limit.residual));
            match m {
                ModelSpace::HyperbolicH3 { kappa } => {
                    let target = -3.0 * kappa;
                    check(&mut failures, at_probe <= -2.5 * kappa, || {
                        format!("residual at (1e-2, 1e-3) is {at_probe:e}, not below {}", -2.5 * kappa)
                    });
                    check(&mut failures, (limit.limit - target).abs() <= 0.2 * kappa, || {
                        format!("limit {} not within {} of {target}", limit.limit, 0.2 * kappa)
                    });
                }
                ModelSpace::Euclidean { .. } => {
                    let max = max_of(&report).abs().max(report.min_slack.abs());
                    check(&mut failures, max <= 1e-12, || format!("Euclidean residual reaches {max:e}"));
                }
                _ => table.note("claim_status", "recorded"),
            }
            (table, report)
        }
        Which::Hamilton => {
            let t0 = cfg.t_grid.max;
            let sol = ShiftedSolution::new(m, t0, t0)?;
            let report = SlackReport::scan(&ds, &ts, |d, s| hamilton_slack(&sol, d, s))?;
            let mut table = scan_table(&report, "slack", "s");
            table.note("t0", number(t0));
            table.note("ln_sup_bound", number(sol.ln_sup_bound));
            check(&mut failures, report.min_slack >= -1e-8, || {
                format!("slack {:e} at {:?}", report.min_slack, report.argmin)
            });
            (table, report)
        }
        Which::LiYau => {
            let report = SlackReport::scan(&ds, &ts, |d, s| li_yau_lower_check(&m, d, s))?;
            let fine = SlackReport::scan(&refined(&cfg.d_grid).points(), &refined(&cfg.t_grid).points(), |d, s| {
                li_yau_lower_check(&m, d, s)
            })?;
            let n = m.dimension() as f64;
            let (coarse_inf, fine_inf) = (report.min_slack - n, fine.min_slack - n);
            let mut table = scan_table(&report, "witness", "s");
            table.note("inf_s_ht_over_h", number(coarse_inf));
            table.note("inf_refined", number(fine_inf));
            let stable = coarse_inf.is_finite() && (coarse_inf - fine_inf).abs() <= 0.01 * coarse_inf.abs().max(1e-300);
            check(&mut failures, stable || coarse_inf == fine_inf, || {
                format!("infimum moves from {coarse_inf:e} to {fine_inf:e} under refinement")
            });
            if nonneg_ricci {
                check(&mut failures, report.min_slack >= 0.5 * n - 1e-8, || {
                    format!("s H_t/H + n = {:e} below n/2", report.min_slack)
                });
            }
            (table, report)
        }
    };
    table.note("min", number(report.min_slack));
    table.note("argmin_d", number(report.argmin.0));
    table.note("argmin_t", number(report.argmin.1));
    let plot = cfg.plot.then(|| {
        let values: Vec<Vec<f64>> = report.slack.chunks(ds.len()).map(|c| c.to_vec()).collect();
        heat_strip(&format!("{} on {m}", cfg.which.name()), "d", "t", &ds, &ts, &values)
    });
    Ok(Outcome { table, failures, plot })
}

/// Fixed seed: output must not depend on the run.
pub const MOMENT_SEED: u64 = 0x6865_6174;
pub const MOMENT_DRAWS: usize = 100;
pub const MOMENT_MAX_DIM: usize = 8;
pub const MOMENT_TOL: f64 = 1e-12;

/// `|a - b|` relative to the same moment with every `λ` replaced by `|λ|`,
/// which bounds each term summed by either route.
fn rel(a: f64, b: f64, scale: f64) -> f64 {
    if a == b {
        0.0
    } else {
        (a - b).abs() / scale
    }
}

fn moments_verify(cfg: &RunConfig) -> CmdResult<Outcome> {
    let times = cfg.t_grid.points();
    let mut rng = ChaCha8Rng::seed_from_u64(MOMENT_SEED);
    let mut table = Table::new(vec![
        "n",
        "draw",
        "t",
        "in_closed",
        "in_wick",
        "in_rel",
        "qn_closed",
        "qn_wick",
        "qn_rel",
        "induction_in",
        "induction_qn",
    ]);
    let mut failures = Vec::new();
    let mut worst = 0.0f64;
    let mut worst_induction = 0.0f64;
    for draw in 0..MOMENT_DRAWS {
        let t = times[draw % times.len()];
        let lambdas: Vec<f64> = (0..MOMENT_MAX_DIM).map(|_| rng.gen_range(-2.0..2.0)).collect();
        for n in 1..=MOMENT_MAX_DIM {
            let spec = MomentSpec::new(lambdas[..n].to_vec(), t)?;
            let (ic, iw) = (moment_in(&spec), wick_in(&spec));
            let (qc, qw) = (moment_qn(&spec), wick_qn(&spec));
            let (ind_i, ind_q) = if n > 1 {
                let prev = MomentSpec::new(lambdas[..n - 1].to_vec(), t)?;
                induction_step(&spec, &prev)?
            } else {
                (0.0, 0.0)
            };
            let abs_spec = MomentSpec::new(spec.lambdas.iter().map(|l| l.abs()).collect(), t)?;
            let (ri, rq) = (rel(ic, iw, moment_in(&abs_spec)), rel(qc, qw, moment_qn(&abs_spec)));
            let ind = (ind_i.abs() / iw.abs().max(1.0)).max(ind_q.abs() / qw.abs().max(1.0));
            worst = worst.max(ri).max(rq);
            worst_induction = worst_induction.max(ind);
            table.push(vec![n as f64, draw as f64, t, ic, iw, ri, qc, qw, rq, ind_i, ind_q]);
        }
    }
    table.note("seed", MOMENT_SEED);
    table.note("draws", MOMENT_DRAWS);
    table.note("max_relative_error", number(worst));
    table.note("max_induction_residual", number(worst_induction));
    check(&mut failures, worst <= MOMENT_TOL, || format!("closed forms differ from the oracle by {worst:e}"));
    check(&mut failures, worst_induction <= MOMENT_TOL, || format!("induction residual {worst_induction:e}"));
    let plot = cfg.plot.then(|| {
        let per_n: Vec<(f64, f64)> = (1..=MOMENT_MAX_DIM)
            .map(|n| {
                let w = table.rows.iter().filter(|r| r[0] == n as f64).fold(0.0f64, |a, r| a.max(r[5]).max(r[8]));
                (n as f64, w)
            })
            .collect();
        line_chart(
            "Moment identities: worst relative error",
            "n",
            "relative error",
            &[Series { label: "max over draws", points: per_n, dashed: false }],
            false,
        )
    });
    Ok(Outcome { table, failures, plot })
}

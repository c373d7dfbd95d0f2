//! `heatlab`: verification suites for heat kernels on model spaces.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod commands;
mod config;
mod output;
mod plot;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, CommandFactory, Parser, Subcommand};

use commands::{CommandError, Outcome};
use config::{Command, ConfigError, Format, RunConfig, Settings, OUT_DIR_ENV};

const EXIT_FAILED_CHECK: u8 = 1;
const EXIT_BAD_CONFIG: u8 = 2;
const EXIT_NUMERIC: u8 = 3;

#[derive(Debug, Parser)]
#[command(name = "heatlab", version, about = "Heat kernel, Nash entropy and Harnack-inequality checks on model spaces")]
struct Cli {
    #[command(subcommand)]
    command: Sub,
}

#[derive(Debug, Subcommand)]
enum Sub {
    /// Nash entropy and both derivative routes over a time grid.
    EntropyTable(Flags),
    /// Slope of N(t) at t = 0 and the residual exponent.
    SlopeFit(Flags),
    /// Small-time exponents of the cutoff parametrix remainder.
    RemainderCheck(Flags),
    /// Scan one pointwise inequality over a (d, t) grid.
    InequalityScan(Flags),
    /// Closed-form Gaussian moments against the Wick oracle.
    MomentsVerify(Flags),
}

#[derive(Debug, Args)]
struct Flags {
    /// euclidean:<n>, h3[:kappa], s2 or s1
    #[arg(long)]
    model: Option<String>,
    /// min:max:count:log|lin
    #[arg(long)]
    t_grid: Option<String>,
    /// min:max:count:log|lin
    #[arg(long)]
    d_grid: Option<String>,
    #[arg(long)]
    tol: Option<String>,
    /// Cutoff radius
    #[arg(long)]
    r: Option<String>,
    /// Output file (default: $HEATLAB_OUT_DIR/<command>.<format>)
    #[arg(long)]
    out: Option<String>,
    /// csv or json
    #[arg(long)]
    format: Option<String>,
    /// Also write an SVG next to the table
    #[arg(long)]
    plot: bool,
    /// lyp, perelman, hamilton or liyau
    #[arg(long)]
    which: Option<String>,
    /// Flat key=value file; flags take precedence
    #[arg(long)]
    config: Option<PathBuf>,
}

impl Flags {
    fn settings(&self) -> Settings {
        Settings {
            model: self.model.clone(),
            t_grid: self.t_grid.clone(),
            d_grid: self.d_grid.clone(),
            tol: self.tol.clone(),
            r: self.r.clone(),
            out: self.out.clone(),
            format: self.format.clone(),
            plot: self.plot.then(|| "true".to_string()),
            which: self.which.clone(),
        }
    }
}

fn split(sub: Sub) -> (Command, Flags) {
    match sub {
        Sub::EntropyTable(f) => (Command::EntropyTable, f),
        Sub::SlopeFit(f) => (Command::SlopeFit, f),
        Sub::RemainderCheck(f) => (Command::RemainderCheck, f),
        Sub::InequalityScan(f) => (Command::InequalityScan, f),
        Sub::MomentsVerify(f) => (Command::MomentsVerify, f),
    }
}

fn resolve(command: Command, flags: &Flags) -> Result<RunConfig, ConfigError> {
    let file = match &flags.config {
        Some(path) => Settings::from_file(path)?,
        None => Settings::default(),
    };
    let out_dir = std::env::var(OUT_DIR_ENV).ok();
    RunConfig::resolve(command, flags.settings().over(file), out_dir.as_deref())
}

fn write(path: &std::path::Path, contents: &str) -> std::io::Result<()> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        std::fs::create_dir_all(parent)?;
    }
    std::fs::write(path, contents)
}

fn summary_line(cfg: &RunConfig, outcome: &Outcome) -> String {
    let mut parts = vec![
        format!("heatlab {}", cfg.command.name()),
        format!("status={}", if outcome.passed() { "pass" } else { "fail" }),
    ];
    if let Some(m) = &cfg.model {
        parts.push(format!("model={m}"));
    }
    parts.push(format!("rows={}", outcome.table.rows.len()));
    parts.extend(outcome.table.summary.iter().map(|(k, v)| format!("{k}={v}")));
    parts.push(format!("out={}", cfg.out.display()));
    parts.join(" ")
}

fn usage_error(command: Command, err: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {err}");
    let mut cli = Cli::command();
    cli.build();
    if let Some(sub) = cli.find_subcommand_mut(command.name()) {
        eprintln!("\n{}", sub.render_usage());
    }
    ExitCode::from(EXIT_BAD_CONFIG)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (command, flags) = split(cli.command);
    let cfg = match resolve(command, &flags) {
        Ok(cfg) => cfg,
        Err(e) => return usage_error(command, e),
    };
    let outcome = match commands::run(&cfg) {
        Ok(o) => o,
        Err(CommandError::Config(e)) => return usage_error(command, e),
        Err(CommandError::Numeric(e @ heatlab_core::Error::Consistency { .. })) => {
            eprintln!("check failed in {}: {e}", e.operation());
            return ExitCode::from(EXIT_FAILED_CHECK);
        }
        Err(CommandError::Numeric(e)) => {
            eprintln!("numeric failure in {}: {e}", e.operation());
            return ExitCode::from(EXIT_NUMERIC);
        }
    };
    let echo = cfg.echo();
    let body = match cfg.format {
        Format::Csv => outcome.table.to_csv(&echo),
        Format::Json => outcome.table.to_json(&echo),
    };
    if let Err(e) = write(&cfg.out, &body) {
        eprintln!("error: cannot write {}: {e}", cfg.out.display());
        return ExitCode::from(EXIT_BAD_CONFIG);
    }
    if let Some(svg) = &outcome.plot {
        let path = cfg.plot_path();
        if let Err(e) = write(&path, svg) {
            eprintln!("error: cannot write {}: {e}", path.display());
            return ExitCode::from(EXIT_BAD_CONFIG);
        }
    }
    println!("{}", summary_line(&cfg, &outcome));
    for f in &outcome.failures {
        eprintln!("check failed: {f}");
    }
    if outcome.passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_FAILED_CHECK)
    }
}

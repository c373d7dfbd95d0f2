//! Run configuration: grids, flags, the key=value config file and defaults.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use heatlab_core::ModelSpace;
use thiserror::Error;

/// Environment variable naming the default output directory.
pub const OUT_DIR_ENV: &str = "HEATLAB_OUT_DIR";

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("invalid {key}: {msg}")]
    Invalid { key: String, msg: String },
    #[error("missing required setting {0}")]
    Missing(&'static str),
    #[error("cannot read config file {path}: {source}")]
    Read {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

fn invalid(key: &str, msg: impl Into<String>) -> ConfigError {
    ConfigError::Invalid { key: key.to_string(), msg: msg.into() }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Spacing {
    Log,
    Linear,
}

/// `min:max:count:log|lin`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub min: f64,
    pub max: f64,
    pub count: usize,
    pub spacing: Spacing,
}

impl Grid {
    pub fn new(min: f64, max: f64, count: usize, spacing: Spacing) -> Result<Self, String> {
        if !(min.is_finite() && max.is_finite()) {
            return Err("bounds must be finite".into());
        }
        if !(min < max) {
            return Err(format!("min {min} must be below max {max}"));
        }
        if count < 3 {
            return Err(format!("count {count} must be at least 3"));
        }
        if spacing == Spacing::Log && !(min > 0.0) {
            return Err("log spacing needs a positive minimum".into());
        }
        Ok(Grid { min, max, count, spacing })
    }

    /// Grid points in increasing order, endpoints exact.
    pub fn points(&self) -> Vec<f64> {
        let last = (self.count - 1) as f64;
        (0..self.count)
            .map(|i| match i {
                0 => self.min,
                _ if i == self.count - 1 => self.max,
                _ => {
                    let f = i as f64 / last;
                    match self.spacing {
                        Spacing::Log => self.min * (self.max / self.min).powf(f),
                        Spacing::Linear => self.min + (self.max - self.min) * f,
                    }
                }
            })
            .collect()
    }
}

impl FromStr for Grid {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<&str> = s.trim().split(':').collect();
        if parts.len() != 4 {
            return Err(format!("expected min:max:count:log|lin, got {s:?}"));
        }
        let num = |p: &str| p.trim().parse::<f64>().map_err(|_| format!("bad number {p:?}"));
        let count = parts[2].trim().parse::<usize>().map_err(|_| format!("bad count {:?}", parts[2]))?;
        let spacing = match parts[3].trim().to_ascii_lowercase().as_str() {
            "log" => Spacing::Log,
            "lin" | "linear" => Spacing::Linear,
            other => return Err(format!("spacing must be log or lin, got {other:?}")),
        };
        Grid::new(num(parts[0])?, num(parts[1])?, count, spacing)
    }
}

impl fmt::Display for Grid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sp = match self.spacing {
            Spacing::Log => "log",
            Spacing::Linear => "lin",
        };
        write!(f, "{:e}:{:e}:{}:{}", self.min, self.max, self.count, sp)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    pub fn extension(&self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

impl FromStr for Format {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(format!("format must be csv or json, got {other:?}")),
        }
    }
}

/// Inequality selected for `inequality-scan`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Which {
    Lyp,
    Perelman,
    Hamilton,
    LiYau,
}

impl Which {
    pub fn name(&self) -> &'static str {
        match self {
            Which::Lyp => "lyp",
            Which::Perelman => "perelman",
            Which::Hamilton => "hamilton",
            Which::LiYau => "liyau",
        }
    }
}

impl FromStr for Which {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "lyp" => Ok(Which::Lyp),
            "perelman" => Ok(Which::Perelman),
            "hamilton" => Ok(Which::Hamilton),
            "liyau" | "li-yau" => Ok(Which::LiYau),
            other => Err(format!("expected lyp, perelman, hamilton or liyau, got {other:?}")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    EntropyTable,
    SlopeFit,
    RemainderCheck,
    InequalityScan,
    MomentsVerify,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::EntropyTable => "entropy-table",
            Command::SlopeFit => "slope-fit",
            Command::RemainderCheck => "remainder-check",
            Command::InequalityScan => "inequality-scan",
            Command::MomentsVerify => "moments-verify",
        }
    }

    fn default_t_grid(&self) -> Grid {
        let (min, max, count) = match self {
            Command::EntropyTable | Command::SlopeFit => (1e-4, 1e-2, 10),
            Command::RemainderCheck => (1e-3, 1e-1, 7),
            Command::InequalityScan => (1e-3, 1.0, 13),
            Command::MomentsVerify => (1e-2, 2.0, 5),
        };
        Grid { min, max, count, spacing: Spacing::Log }
    }

    fn default_d_grid(&self, m: Option<&ModelSpace>, r: f64) -> Grid {
        let max_radius = m.map_or(f64::INFINITY, |m| m.max_radius());
        let max = match self {
            Command::RemainderCheck => 0.5 * r,
            _ => max_radius.min(3.0),
        };
        let count = if *self == Command::RemainderCheck { 11 } else { 31 };
        Grid { min: 0.0, max, count, spacing: Spacing::Linear }
    }

    fn default_format(&self) -> Format {
        match self {
            Command::SlopeFit => Format::Json,
            _ => Format::Csv,
        }
    }

    fn needs_model(&self) -> bool {
        *self != Command::MomentsVerify
    }
}

/// Raw settings as strings; the same shape for flags and the config file.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Settings {
    pub model: Option<String>,
    pub t_grid: Option<String>,
    pub d_grid: Option<String>,
    pub tol: Option<String>,
    pub r: Option<String>,
    pub out: Option<String>,
    pub format: Option<String>,
    pub plot: Option<String>,
    pub which: Option<String>,
}

impl Settings {
    /// Parses a flat `key = value` file; `#` starts a comment.
    pub fn parse_file_contents(text: &str) -> Result<Self, ConfigError> {
        let mut s = Settings::default();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| invalid("config file", format!("line {}: expected key=value", lineno + 1)))?;
            let value = Some(value.trim().to_string());
            match key.trim().replace('_', "-").as_str() {
                "model" => s.model = value,
                "t-grid" => s.t_grid = value,
                "d-grid" => s.d_grid = value,
                "tol" => s.tol = value,
                "r" => s.r = value,
                "out" => s.out = value,
                "format" => s.format = value,
                "plot" => s.plot = value,
                "which" => s.which = value,
                other => return Err(invalid("config file", format!("line {}: unknown key {other:?}", lineno + 1))),
            }
        }
        Ok(s)
    }

    pub fn from_file(path: &Path) -> Result<Self, ConfigError> {
        let text =
            std::fs::read_to_string(path).map_err(|source| ConfigError::Read { path: path.to_path_buf(), source })?;
        Self::parse_file_contents(&text)
    }

    /// Fields set here win over `lower`.
    pub fn over(self, lower: Settings) -> Settings {
        Settings {
            model: self.model.or(lower.model),
            t_grid: self.t_grid.or(lower.t_grid),
            d_grid: self.d_grid.or(lower.d_grid),
            tol: self.tol.or(lower.tol),
            r: self.r.or(lower.r),
            out: self.out.or(lower.out),
            format: self.format.or(lower.format),
            plot: self.plot.or(lower.plot),
            which: self.which.or(lower.which),
        }
    }
}

/// Fully resolved configuration for one command.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub model: Option<ModelSpace>,
    pub t_grid: Grid,
    pub d_grid: Grid,
    pub tol: f64,
    pub r: f64,
    pub format: Format,
    pub plot: bool,
    pub out: PathBuf,
    pub which: Which,
}

fn parse<T: FromStr>(key: &str, value: &str) -> Result<T, ConfigError>
where
    T::Err: fmt::Display,
{
    value.parse::<T>().map_err(|e| invalid(key, format!("{value:?}: {e}")))
}

fn parse_bool(key: &str, value: &str) -> Result<bool, ConfigError> {
    match value.trim().to_ascii_lowercase().as_str() {
        "true" | "yes" | "1" | "on" => Ok(true),
        "false" | "no" | "0" | "off" => Ok(false),
        other => Err(invalid(key, format!("expected true or false, got {other:?}"))),
    }
}

impl RunConfig {
    /// Resolves flags over the config file over defaults.
    pub fn resolve(command: Command, settings: Settings, out_dir: Option<&str>) -> Result<Self, ConfigError> {
        let model = settings.model.as_deref().map(|m| parse::<ModelSpace>("model", m)).transpose()?;
        if command.needs_model() && model.is_none() {
            return Err(ConfigError::Missing("--model"));
        }
        let tol = match settings.tol.as_deref() {
            Some(v) => parse::<f64>("tol", v)?,
            None => heatlab_core::entropy::DEFAULT_TOL,
        };
        if !(tol > 0.0) || !tol.is_finite() {
            return Err(invalid("tol", format!("must be positive, got {tol}")));
        }
        let r = match settings.r.as_deref() {
            Some(v) => parse::<f64>("r", v)?,
            None => model.map_or(1.0, |m| m.default_cutoff_radius()),
        };
        if !(r > 0.0) || !r.is_finite() {
            return Err(invalid("r", format!("must be positive, got {r}")));
        }
        let t_grid = match settings.t_grid.as_deref() {
            Some(v) => parse::<Grid>("t-grid", v)?,
            None => command.default_t_grid(),
        };
        if !(t_grid.min > 0.0) {
            return Err(invalid("t-grid", "times must be positive"));
        }
        let d_grid = match settings.d_grid.as_deref() {
            Some(v) => parse::<Grid>("d-grid", v)?,
            None => command.default_d_grid(model.as_ref(), r),
        };
        if d_grid.min < 0.0 {
            return Err(invalid("d-grid", "distances must be non-negative"));
        }
        if let Some(m) = &model {
            if d_grid.max > m.max_radius() {
                return Err(invalid("d-grid", format!("distance {} beyond {} for {m}", d_grid.max, m.max_radius())));
            }
        }
        let format = match settings.format.as_deref() {
            Some(v) => parse::<Format>("format", v)?,
            None => command.default_format(),
        };
        let plot = match settings.plot.as_deref() {
            Some(v) => parse_bool("plot", v)?,
            None => false,
        };
        let which = match settings.which.as_deref() {
            Some(v) => parse::<Which>("which", v)?,
            None => Which::Lyp,
        };
        let out = match settings.out {
            Some(p) => PathBuf::from(p),
            None => PathBuf::from(out_dir.unwrap_or(".")).join(format!("{}.{}", command.name(), format.extension())),
        };
        Ok(RunConfig { command, model, t_grid, d_grid, tol, r, format, plot, out, which })
    }

    /// Settings echoed into table footers, in a fixed order.
    pub fn echo(&self) -> BTreeMap<&'static str, String> {
        let mut m = BTreeMap::new();
        m.insert("command", self.command.name().to_string());
        m.insert("model", self.model.map_or("none".to_string(), |m| m.to_string()));
        m.insert("t-grid", self.t_grid.to_string());
        m.insert("d-grid", self.d_grid.to_string());
        m.insert("tol", format!("{:e}", self.tol));
        m.insert("r", format!("{:e}", self.r));
        m.insert("format", self.format.extension().to_string());
        m.insert("plot", self.plot.to_string());
        if self.command == Command::InequalityScan {
            m.insert("which", self.which.name().to_string());
        }
        m
    }

    pub fn plot_path(&self) -> PathBuf {
        self.out.with_extension("svg")
    }
}

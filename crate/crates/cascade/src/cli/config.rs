//! Run configuration: flag parsing, config-file merging, serialization.
//!
//! Subcommands select the regime (`single`, `two-atom`, `small`,
//! `continuum`), plus `oracle-compare` (regime via `--regime`) and `recipes`.
//! A flat `key = value` config file can seed any run; explicit flags override
//! file values.

use num_complex::Complex64 as C64;
use thiserror::Error;

use crate::params::{Geometry, InitialCoeff, PhysicalParams, ValidationError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConfigError {
    #[error("unknown flag: {0}")]
    UnknownFlag(String),
    #[error("conflicting regime selection: {0}")]
    ConflictingRegime(String),
    #[error("unreadable file {path}: {reason}")]
    UnreadableFile { path: String, reason: String },
    #[error("flag {0} needs a value")]
    MissingValue(String),
    #[error("bad value for {flag}: {value}")]
    InvalidValue { flag: String, value: String },
    #[error("no regime selected (single | two-atom | small | continuum)")]
    MissingRegime,
    #[error("task {task} not available for regime {regime}")]
    TaskMismatch { task: String, regime: String },
    #[error(transparent)]
    Validation(#[from] ValidationError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Task {
    Timeseries,
    Spectrum,
    Power,
    Entropy,
    OracleCompare,
}

impl Task {
    pub fn name(&self) -> &'static str {
        match self {
            Task::Timeseries => "timeseries",
            Task::Spectrum => "spectrum",
            Task::Power => "power",
            Task::Entropy => "entropy",
            Task::OracleCompare => "oracle-compare",
        }
    }

    fn parse(s: &str) -> Option<Task> {
        Some(match s {
            "timeseries" => Task::Timeseries,
            "spectrum" => Task::Spectrum,
            "power" => Task::Power,
            "entropy" => Task::Entropy,
            "oracle-compare" => Task::OracleCompare,
            _ => return None,
        })
    }
}

/// Oracle discretization and integration settings (None = regime default).
#[derive(Debug, Clone, PartialEq, Default)]
pub struct OracleOpts {
    pub window: Option<f64>,
    pub delta_omega: Option<f64>,
    pub l_max: Option<u32>,
    pub dt: Option<f64>,
}

/// A fully parsed run request.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub params: PhysicalParams,
    pub geometry: Geometry,
    pub task: Task,
    pub t_max: Option<f64>,
    /// Sample count for time series / spectrum axes / entropy sweeps.
    pub grid_points: Option<usize>,
    /// Half-width of exported spectral axes (absolute frequency units).
    pub spectral_window: Option<f64>,
    pub oracle: OracleOpts,
    pub out: String,
}

impl RunConfig {
    pub fn regime_name(&self) -> &'static str {
        match self.geometry {
            Geometry::SingleAtom { .. } => "single",
            Geometry::TwoAtom { .. } => "two-atom",
            Geometry::SmallSystem { .. } => "small",
            Geometry::Continuum { .. } => "continuum",
        }
    }

    /// Flat `key = value` text; `parse_text` inverts it exactly.
    pub fn serialize(&self) -> String {
        let mut lines = Vec::new();
        lines.push(format!("regime = {}", self.regime_name()));
        lines.push(format!("task = {}", self.task.name()));
        lines.push(format!("omega = {}", self.params.omega));
        lines.push(format!("gamma = {}", self.params.gamma));
        lines.push(format!("g = {}", self.params.g));
        match &self.geometry {
            Geometry::SingleAtom { omega_k1 } => lines.push(format!("omega-k1 = {omega_k1}")),
            Geometry::TwoAtom { k0r } => lines.push(format!("k0r = {k0r}")),
            Geometry::SmallSystem { n_atoms } => lines.push(format!("n = {n_atoms}")),
            Geometry::Continuum { n_atoms, k0_radius, initial_coeffs } => {
                lines.push(format!("n = {n_atoms}"));
                lines.push(format!("k0R = {k0_radius}"));
                for c in initial_coeffs {
                    lines.push(format!("coeff = {},{},{},{}", c.l, c.m, c.re, c.im));
                }
            }
        }
        if let Some(t) = self.t_max {
            lines.push(format!("t-max = {t}"));
        }
        if let Some(n) = self.grid_points {
            lines.push(format!("grid = {n}"));
        }
        if let Some(w) = self.spectral_window {
            lines.push(format!("spectral-window = {w}"));
        }
        if let Some(w) = self.oracle.window {
            lines.push(format!("window = {w}"));
        }
        if let Some(d) = self.oracle.delta_omega {
            lines.push(format!("dw = {d}"));
        }
        if let Some(l) = self.oracle.l_max {
            lines.push(format!("lmax = {l}"));
        }
        if let Some(dt) = self.oracle.dt {
            lines.push(format!("dt = {dt}"));
        }
        lines.push(format!("out = {}", self.out));
        lines.join("\n") + "\n"
    }

    /// Parse the `serialize` format (also the `--config` file format).
    pub fn parse_text(text: &str) -> Result<RunConfig, ConfigError> {
        let mut pairs = Vec::new();
        for raw in text.lines() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| ConfigError::InvalidValue {
                flag: "config line".into(),
                value: line.into(),
            })?;
            pairs.push((key.trim().to_string(), value.trim().to_string()));
        }
        build_config(pairs)
    }
}

/// Accepted keys, shared by flags and config files.
const VALUE_KEYS: &[&str] = &[
    "regime", "task", "omega", "gamma", "g", "omega-k1", "k0r", "n", "k0R", "coeff", "t-max",
    "grid", "spectral-window", "window", "dw", "lmax", "dt", "out", "config",
];

/// Parse a command line (without the binary name): subcommand plus flags.
pub fn parse_config(args: &[String]) -> Result<RunConfig, ConfigError> {
    let mut pairs: Vec<(String, String)> = Vec::new();
    let mut regime_token: Option<String> = None;
    let mut config_file: Option<String> = None;

    let mut it = args.iter().peekable();
    while let Some(arg) = it.next() {
        if let Some(flag) = arg.strip_prefix("--") {
            if !VALUE_KEYS.contains(&flag) {
                return Err(ConfigError::UnknownFlag(format!("--{flag}")));
            }
            let value = it
                .next()
                .ok_or_else(|| ConfigError::MissingValue(format!("--{flag}")))?
                .clone();
            if flag == "config" {
                config_file = Some(value);
            } else {
                pairs.push((flag.to_string(), value));
            }
        } else {
            match arg.as_str() {
                "single" | "two-atom" | "small" | "continuum" => {
                    if let Some(prev) = &regime_token {
                        return Err(ConfigError::ConflictingRegime(format!("{prev} and {arg}")));
                    }
                    regime_token = Some(arg.clone());
                }
                "oracle-compare" => {
                    if regime_token.is_some() {
                        return Err(ConfigError::ConflictingRegime(format!(
                            "{} and oracle-compare",
                            regime_token.as_deref().unwrap_or("")
                        )));
                    }
                    pairs.push(("task".into(), "oracle-compare".into()));
                }
                other => return Err(ConfigError::UnknownFlag(other.to_string())),
            }
        }
    }

    // File values first, then the regime token, then explicit flags so the
    // flags win.
    let mut merged: Vec<(String, String)> = Vec::new();
    if let Some(path) = config_file {
        let text = std::fs::read_to_string(&path).map_err(|e| ConfigError::UnreadableFile {
            path: path.clone(),
            reason: e.to_string(),
        })?;
        for raw in text.lines() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) =
                line.split_once('=').ok_or_else(|| ConfigError::InvalidValue {
                    flag: format!("config file {path}"),
                    value: line.into(),
                })?;
            merged.push((key.trim().to_string(), value.trim().to_string()));
        }
    }
    if let Some(regime) = regime_token {
        merged.push(("regime".into(), regime));
    }
    merged.extend(pairs);
    build_config(merged)
}

fn parse_f64(flag: &str, value: &str) -> Result<f64, ConfigError> {
    let v = if value == "inf" { Ok(f64::INFINITY) } else { value.parse::<f64>() };
    v.map_err(|_| ConfigError::InvalidValue { flag: flag.into(), value: value.into() })
}

fn build_config(pairs: Vec<(String, String)>) -> Result<RunConfig, ConfigError> {
    let mut regime: Option<String> = None;
    let mut task = Task::Timeseries;
    let mut params = PhysicalParams::default();
    let mut omega_k1: Option<f64> = None;
    let mut k0r: Option<f64> = None;
    let mut n_atoms: Option<usize> = None;
    let mut k0_radius: Option<f64> = None;
    let mut coeffs: Vec<InitialCoeff> = Vec::new();
    let mut t_max = None;
    let mut grid_points = None;
    let mut spectral_window = None;
    let mut oracle = OracleOpts::default();
    let mut out = String::from("cascade_out.csv");

    for (key, value) in &pairs {
        match key.as_str() {
            "regime" => {
                if let Some(prev) = &regime {
                    if prev != value {
                        return Err(ConfigError::ConflictingRegime(format!("{prev} and {value}")));
                    }
                }
                regime = Some(value.clone());
            }
            "task" => {
                task = Task::parse(value).ok_or_else(|| ConfigError::InvalidValue {
                    flag: "task".into(),
                    value: value.clone(),
                })?;
            }
            "omega" => params.omega = parse_f64(key, value)?,
            "gamma" => params.gamma = parse_f64(key, value)?,
            "g" => params.g = parse_f64(key, value)?,
            "omega-k1" => omega_k1 = Some(parse_f64(key, value)?),
            "k0r" => k0r = Some(parse_f64(key, value)?),
            "n" => {
                n_atoms = Some(value.parse().map_err(|_| ConfigError::InvalidValue {
                    flag: "n".into(),
                    value: value.clone(),
                })?)
            }
            "k0R" => k0_radius = Some(parse_f64(key, value)?),
            "coeff" => {
                let parts: Vec<&str> = value.split(',').map(str::trim).collect();
                if parts.len() != 4 {
                    return Err(ConfigError::InvalidValue {
                        flag: "coeff".into(),
                        value: value.clone(),
                    });
                }
                let l = parts[0].parse().map_err(|_| ConfigError::InvalidValue {
                    flag: "coeff.l".into(),
                    value: value.clone(),
                })?;
                let m = parts[1].parse().map_err(|_| ConfigError::InvalidValue {
                    flag: "coeff.m".into(),
                    value: value.clone(),
                })?;
                let re = parse_f64("coeff.re", parts[2])?;
                let im = parse_f64("coeff.im", parts[3])?;
                coeffs.push(InitialCoeff::new(l, m, C64::new(re, im)));
            }
            "t-max" => t_max = Some(parse_f64(key, value)?),
            "grid" => {
                grid_points = Some(value.parse().map_err(|_| ConfigError::InvalidValue {
                    flag: "grid".into(),
                    value: value.clone(),
                })?)
            }
            "spectral-window" => spectral_window = Some(parse_f64(key, value)?),
            "window" => oracle.window = Some(parse_f64(key, value)?),
            "dw" => oracle.delta_omega = Some(parse_f64(key, value)?),
            "lmax" => {
                oracle.l_max = Some(value.parse().map_err(|_| ConfigError::InvalidValue {
                    flag: "lmax".into(),
                    value: value.clone(),
                })?)
            }
            "dt" => oracle.dt = Some(parse_f64(key, value)?),
            "out" => out = value.clone(),
            other => return Err(ConfigError::UnknownFlag(other.to_string())),
        }
    }

    let regime = regime.ok_or(ConfigError::MissingRegime)?;
    let geometry = match regime.as_str() {
        "single" => Geometry::SingleAtom { omega_k1: omega_k1.unwrap_or(params.omega) },
        "two-atom" => Geometry::TwoAtom { k0r: k0r.unwrap_or(1.0) },
        "small" => Geometry::SmallSystem { n_atoms: n_atoms.unwrap_or(10) },
        "continuum" => {
            let coeffs = if coeffs.is_empty() {
                vec![InitialCoeff::new(0, 0, C64::new(1.0, 0.0))]
            } else {
                coeffs
            };
            Geometry::Continuum {
                n_atoms: n_atoms.unwrap_or(100),
                k0_radius: k0_radius.unwrap_or(4.0),
                initial_coeffs: coeffs,
            }
        }
        other => {
            return Err(ConfigError::InvalidValue { flag: "regime".into(), value: other.into() })
        }
    };

    // Task/regime compatibility.
    match (&geometry, task) {
        (Geometry::Continuum { .. }, Task::OracleCompare) => {
            return Err(ConfigError::TaskMismatch {
                task: task.name().into(),
                regime: "continuum".into(),
            })
        }
        (Geometry::Continuum { .. }, _) => {}
        (_, Task::Entropy) => {
            return Err(ConfigError::TaskMismatch {
                task: "entropy".into(),
                regime: regime.clone(),
            })
        }
        _ => {}
    }

    let validated = crate::params::validate(params, geometry)?;
    Ok(RunConfig {
        params: validated.params,
        geometry: validated.geometry,
        task,
        t_max,
        grid_points,
        spectral_window,
        oracle,
        out,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn argv(s: &str) -> Vec<String> {
        s.split_whitespace().map(String::from).collect()
    }

    #[test]
    fn two_atom_defaults() {
        let cfg = parse_config(&argv("two-atom --k0r 1.0 --task timeseries")).unwrap();
        assert_eq!(cfg.geometry, Geometry::TwoAtom { k0r: 1.0 });
        assert_eq!(cfg.task, Task::Timeseries);
        assert_eq!(cfg.params, PhysicalParams::default());
    }

    #[test]
    fn small_power_run() {
        let cfg = parse_config(&argv("small --n 10 --task power")).unwrap();
        assert_eq!(cfg.geometry, Geometry::SmallSystem { n_atoms: 10 });
        assert_eq!(cfg.task, Task::Power);
    }

    #[test]
    fn conflicting_regimes_rejected() {
        let err = parse_config(&argv("two-atom small --n 3")).unwrap_err();
        assert!(matches!(err, ConfigError::ConflictingRegime(_)));
    }

    #[test]
    fn unknown_flag_rejected() {
        let err = parse_config(&argv("single --frobnicate 3")).unwrap_err();
        assert!(matches!(err, ConfigError::UnknownFlag(_)));
    }

    #[test]
    fn serialization_round_trips() {
        for args in [
            "single --omega-k1 1.02 --task spectrum --grid 101 --out a.csv",
            "two-atom --k0r 2.5 --task oracle-compare --window 2.0 --dw 0.0125 --lmax 8 --dt 0.02",
            "continuum --n 100 --k0R 4.0 --coeff 0,0,1,0 --coeff 1,0,0.5,0 --task entropy",
            "small --n 7 --task power --t-max 80 --gamma 0.2",
        ] {
            let cfg = parse_config(&argv(args)).unwrap();
            let text = cfg.serialize();
            let back = RunConfig::parse_text(&text).unwrap();
            assert_eq!(cfg, back, "round trip failed for {args}");
        }
    }

    #[test]
    fn flags_override_config_file() {
        let dir = std::env::temp_dir().join("cascade_cfg_test");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("run.cfg");
        std::fs::write(&path, "regime = two-atom\nk0r = 0.5\ngamma = 0.2\n").unwrap();
        let args = vec![
            "--config".to_string(),
            path.to_string_lossy().into_owned(),
            "--k0r".to_string(),
            "3.0".to_string(),
        ];
        let cfg = parse_config(&args).unwrap();
        assert_eq!(cfg.geometry, Geometry::TwoAtom { k0r: 3.0 });
        assert_eq!(cfg.params.gamma, 0.2);
    }

    #[test]
    fn validation_errors_propagate() {
        let err = parse_config(&argv("small --n 1")).unwrap_err();
        assert!(matches!(err, ConfigError::Validation(_)));
        let err = parse_config(&argv("single --g 0.3")).unwrap_err();
        assert!(matches!(err, ConfigError::Validation(_)));
    }
}

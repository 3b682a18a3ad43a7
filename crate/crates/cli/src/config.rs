//! Scenario configuration: `key = value` lines grouped under `[grid]`,
//! `[state]`, `[hamiltonian]` and `[run]`.
//!
//! ```text
//! [grid]
//! N = 128
//! Lx = 20
//! hbar = 1
//!
//! [state]
//! preset = gaussian
//! center = "1 -0.5"
//! width = 1
//!
//! [hamiltonian]
//! preset = quadratic        # harmonic | free | linear | quadratic
//! M = "1 0.2 0.5"           # m11 m12 m22, H = 1/2 z^T M z
//!
//! [run]
//! t_final = 1.5707963267948966
//! dt = 1e-3
//! method = split-step       # exact | split-step | rk4
//! record_every = 100
//! ```
//!
//! Values may be quoted. `#` starts a comment. Every key is optional and
//! defaults to the values above (harmonic Hamiltonian, centre `0 0`), except
//! that `linear` needs `z0` and `quadratic` needs `M`. Unknown sections or
//! keys, duplicates and unparsable values are errors.

use std::collections::HashSet;
use std::path::Path;

use thiserror::Error;
use tfps_core::{GridSpec, Hamiltonian, LinearHamiltonian, Method, PhasePoint, QuadraticHamiltonian};

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read config {path}: {source}")]
    Read { path: String, source: std::io::Error },
    #[error("line {line}: expected `[section]` or `key = value`")]
    Syntax { line: usize },
    #[error("line {line}: unknown section [{name}]")]
    UnknownSection { line: usize, name: String },
    #[error("line {line}: key `{key}` outside of any section")]
    NoSection { line: usize, key: String },
    #[error("line {line}: unknown key `{key}`")]
    UnknownKey { line: usize, key: String },
    #[error("line {line}: duplicate key `{key}`")]
    Duplicate { line: usize, key: String },
    #[error("line {line}: bad value for `{key}`: {reason}")]
    BadValue { line: usize, key: String, reason: String },
    #[error("{0}")]
    Invalid(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Preset {
    Harmonic,
    Free,
    Linear,
    Quadratic,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Config {
    pub n: usize,
    pub lx: f64,
    pub hbar: f64,
    pub center: (f64, f64),
    pub width: f64,
    pub preset: Preset,
    pub z0: Option<(f64, f64)>,
    pub m: Option<[f64; 3]>,
    pub t_final: f64,
    pub dt: f64,
    pub method: Method,
    pub record_every: usize,
}

impl Default for Config {
    fn default() -> Self {
        Self {
            n: 128,
            lx: 20.0,
            hbar: 1.0,
            center: (0.0, 0.0),
            width: 1.0,
            preset: Preset::Harmonic,
            z0: None,
            m: None,
            t_final: 1.0,
            dt: 1e-3,
            method: Method::SplitStep,
            record_every: 100,
        }
    }
}

const KEYS: &[(&str, &[&str])] = &[
    ("grid", &["N", "Lx", "hbar"]),
    ("state", &["preset", "center", "width"]),
    ("hamiltonian", &["preset", "z0", "M"]),
    ("run", &["t_final", "dt", "method", "record_every"]),
];

impl Config {
    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Read {
            path: path.display().to_string(),
            source,
        })?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let mut cfg = Config::default();
        let mut section: Option<&str> = None;
        let mut seen = HashSet::new();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let body = strip_comment(raw).trim();
            if body.is_empty() {
                continue;
            }
            if let Some(name) = body.strip_prefix('[').and_then(|s| s.strip_suffix(']')) {
                let name = name.trim();
                section = Some(
                    KEYS.iter()
                        .map(|(s, _)| *s)
                        .find(|s| *s == name)
                        .ok_or_else(|| ConfigError::UnknownSection { line, name: name.into() })?,
                );
                continue;
            }
            let (key, value) = body.split_once('=').ok_or(ConfigError::Syntax { line })?;
            let (key, value) = (key.trim(), unquote(value.trim()));
            let sec = section.ok_or_else(|| ConfigError::NoSection { line, key: key.into() })?;
            let known = KEYS.iter().find(|(s, _)| *s == sec).map(|(_, k)| *k).unwrap_or(&[]);
            if !known.contains(&key) {
                return Err(ConfigError::UnknownKey { line, key: format!("{sec}.{key}") });
            }
            if !seen.insert((sec, key.to_string())) {
                return Err(ConfigError::Duplicate { line, key: format!("{sec}.{key}") });
            }
            cfg.set(sec, key, value, line)?;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    fn set(&mut self, sec: &str, key: &str, value: &str, line: usize) -> Result<(), ConfigError> {
        let bad = |reason: String| ConfigError::BadValue { line, key: format!("{sec}.{key}"), reason };
        let num = |v: &str| v.parse::<f64>().ok().filter(|x| x.is_finite()).ok_or_else(|| bad(format!("`{v}` is not a number")));
        let nums = |v: &str, k: usize| -> Result<Vec<f64>, ConfigError> {
            let xs: Vec<f64> = v.split_whitespace().map(num).collect::<Result<_, _>>()?;
            if xs.len() != k {
                return Err(bad(format!("expected {k} numbers, got {}", xs.len())));
            }
            Ok(xs)
        };
        match (sec, key) {
            ("grid", "N") => self.n = value.parse().map_err(|_| bad(format!("`{value}` is not a count")))?,
            ("grid", "Lx") => self.lx = num(value)?,
            ("grid", "hbar") => self.hbar = num(value)?,
            ("state", "preset") => {
                if value != "gaussian" {
                    return Err(bad(format!("unknown preset `{value}` (expected gaussian)")));
                }
            }
            ("state", "center") => {
                let v = nums(value, 2)?;
                self.center = (v[0], v[1]);
            }
            ("state", "width") => self.width = num(value)?,
            ("hamiltonian", "preset") => {
                self.preset = match value {
                    "harmonic" => Preset::Harmonic,
                    "free" => Preset::Free,
                    "linear" => Preset::Linear,
                    "quadratic" => Preset::Quadratic,
                    _ => return Err(bad(format!("unknown preset `{value}`"))),
                }
            }
            ("hamiltonian", "z0") => {
                let v = nums(value, 2)?;
                self.z0 = Some((v[0], v[1]));
            }
            ("hamiltonian", "M") => {
                let v = nums(value, 3)?;
                self.m = Some([v[0], v[1], v[2]]);
            }
            ("run", "t_final") => self.t_final = num(value)?,
            ("run", "dt") => self.dt = num(value)?,
            ("run", "method") => {
                self.method = match value {
                    "exact" => Method::Exact,
                    "split-step" | "split_step" | "splitstep" => Method::SplitStep,
                    "rk4" => Method::Rk4,
                    _ => return Err(bad(format!("unknown method `{value}`"))),
                }
            }
            ("run", "record_every") => {
                self.record_every = value.parse().map_err(|_| bad(format!("`{value}` is not a count")))?
            }
            _ => unreachable!("keys are checked against KEYS"),
        }
        Ok(())
    }

    fn validate(&self) -> Result<(), ConfigError> {
        self.grid().map_err(|e| ConfigError::Invalid(e.to_string()))?;
        let invalid = |m: &str| Err(ConfigError::Invalid(m.into()));
        if !(self.width > 0.0) {
            return invalid("state.width must be positive");
        }
        if self.preset == Preset::Linear && self.z0.is_none() {
            return invalid("hamiltonian.preset = linear needs hamiltonian.z0");
        }
        if self.preset == Preset::Quadratic && self.m.is_none() {
            return invalid("hamiltonian.preset = quadratic needs hamiltonian.M");
        }
        if self.t_final < 0.0 {
            return invalid("run.t_final must be non-negative");
        }
        if !(self.dt > 0.0) {
            return invalid("run.dt must be positive");
        }
        if self.record_every == 0 {
            return invalid("run.record_every must be at least 1");
        }
        Ok(())
    }

    pub fn grid(&self) -> tfps_core::Result<GridSpec> {
        GridSpec::new(self.n, self.lx, self.hbar)
    }

    pub fn hamiltonian(&self) -> Hamiltonian {
        match self.preset {
            Preset::Harmonic => Hamiltonian::Quadratic(QuadraticHamiltonian::harmonic()),
            Preset::Free => Hamiltonian::Quadratic(QuadraticHamiltonian::free_particle()),
            Preset::Linear => {
                let (x0, p0) = self.z0.unwrap_or_default();
                Hamiltonian::Linear(LinearHamiltonian::new(PhasePoint::planar(x0, p0)))
            }
            Preset::Quadratic => {
                let [a, b, c] = self.m.unwrap_or_default();
                Hamiltonian::Quadratic(QuadraticHamiltonian::planar(a, b, c))
            }
        }
    }
}

fn strip_comment(line: &str) -> &str {
    line.split_once('#').map_or(line, |(body, _)| body)
}

fn unquote(v: &str) -> &str {
    v.strip_prefix('"').and_then(|s| s.strip_suffix('"')).unwrap_or(v)
}

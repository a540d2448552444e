//! Flat `key = value` experiment configuration.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    Farey,
    Gauss,
    PoissonCheck,
    Decay,
    SphereFt,
    Ncmax,
    Transfer,
    Reconstruct,
}

impl Kind {
    pub const ALL: [Kind; 8] = [
        Kind::Farey,
        Kind::Gauss,
        Kind::PoissonCheck,
        Kind::Decay,
        Kind::SphereFt,
        Kind::Ncmax,
        Kind::Transfer,
        Kind::Reconstruct,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Kind::Farey => "farey",
            Kind::Gauss => "gauss",
            Kind::PoissonCheck => "poisson_check",
            Kind::Decay => "decay",
            Kind::SphereFt => "sphere_ft",
            Kind::Ncmax => "ncmax",
            Kind::Transfer => "transfer",
            Kind::Reconstruct => "reconstruct",
        }
    }

    pub fn required(self) -> &'static [&'static str] {
        match self {
            Kind::Farey => &["Lambda"],
            Kind::Gauss => &["d", "q_max"],
            Kind::PoissonCheck => &["d"],
            Kind::Decay => &["Lambda"],
            Kind::SphereFt => &["d"],
            Kind::Ncmax => &["input"],
            Kind::Transfer => &["n", "d", "J", "cap"],
            Kind::Reconstruct => &["K", "Lambda"],
        }
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Kind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Kind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::Config {
                key: "kind".into(),
                msg: format!(
                    "unknown kind `{s}`, expected one of {}",
                    Kind::ALL.map(Kind::name).join(", ")
                ),
            })
    }
}

/// Every key a config file may contain.
pub const KNOWN_KEYS: &[&str] = &[
    "kind", "d", "L", "K", "Lambda", "q_max", "p", "n", "J", "cap", "tol", "seed", "budget", "output", "input",
    "theta", "samples", "t_samples",
];

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub kind: Kind,
    params: BTreeMap<String, String>,
    /// Directory relative paths in the file are resolved against.
    base: PathBuf,
}

fn config_err(key: &str, msg: impl Into<String>) -> Error {
    Error::Config {
        key: key.into(),
        msg: msg.into(),
    }
}

impl ExperimentConfig {
    pub fn parse(text: &str, path: &Path) -> Result<Self> {
        let mut params = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let parse_err = |msg: String| Error::Parse {
                path: path.to_path_buf(),
                line: i + 1,
                msg,
            };
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| parse_err(format!("expected `key = value`, got `{line}`")))?;
            let (key, value) = (key.trim(), value.trim());
            if !KNOWN_KEYS.contains(&key) {
                return Err(parse_err(format!("unknown key `{key}`")));
            }
            if params.insert(key.to_string(), value.to_string()).is_some() {
                return Err(parse_err(format!("duplicate key `{key}`")));
            }
        }
        let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
        Self::from_map(params, base)
    }

    pub fn read(path: &Path) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?, path)
    }

    pub fn from_map(params: BTreeMap<String, String>, base: PathBuf) -> Result<Self> {
        let kind: Kind = params
            .get("kind")
            .ok_or_else(|| config_err("kind", "missing"))?
            .parse()?;
        for key in kind.required() {
            if !params.contains_key(*key) {
                return Err(config_err(key, format!("required for kind = {kind}")));
            }
        }
        let cfg = Self { kind, params, base };
        // Surface type errors at load time.
        for (key, value) in &cfg.params {
            match key.as_str() {
                "kind" | "output" | "input" => {}
                "p" => {
                    crate::ncmax::parse_exponent(value).map_err(|e| config_err(key, e.to_string()))?;
                }
                "tol" => {
                    cfg.f64(key, 0.0)?;
                }
                "theta" => {
                    cfg.f64_list(key)?;
                }
                "K" | "Lambda" => {
                    cfg.u64_list(key)?;
                }
                _ => {
                    cfg.u64(key, 0)?;
                }
            }
        }
        Ok(cfg)
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.params.get(key).map(String::as_str)
    }

    pub fn u64(&self, key: &str, default: u64) -> Result<u64> {
        match self.get(key) {
            None => Ok(default),
            Some(v) => v
                .parse()
                .map_err(|e| config_err(key, format!("`{v}` is not a nonnegative integer: {e}"))),
        }
    }

    pub fn usize(&self, key: &str, default: usize) -> Result<usize> {
        Ok(self.u64(key, default as u64)? as usize)
    }

    pub fn f64(&self, key: &str, default: f64) -> Result<f64> {
        match self.get(key) {
            None => Ok(default),
            Some(v) => v
                .parse()
                .map_err(|e| config_err(key, format!("`{v}` is not a number: {e}"))),
        }
    }

    pub fn exponent(&self, default: f64) -> Result<f64> {
        match self.get("p") {
            None => Ok(default),
            Some(v) => crate::ncmax::parse_exponent(v).map_err(|e| config_err("p", e.to_string())),
        }
    }

    fn list<T: FromStr>(&self, key: &str) -> Result<Option<Vec<T>>>
    where
        T::Err: fmt::Display,
    {
        let Some(v) = self.get(key) else {
            return Ok(None);
        };
        v.split(',')
            .map(|s| {
                s.trim()
                    .parse::<T>()
                    .map_err(|e| config_err(key, format!("bad list entry `{}`: {e}", s.trim())))
            })
            .collect::<Result<Vec<T>>>()
            .map(Some)
    }

    pub fn u64_list(&self, key: &str) -> Result<Option<Vec<u64>>> {
        self.list(key)
    }

    pub fn f64_list(&self, key: &str) -> Result<Option<Vec<f64>>> {
        self.list(key)
    }

    /// A path-valued key, resolved against the config file's directory.
    pub fn path(&self, key: &str) -> Option<PathBuf> {
        self.get(key).map(|v| {
            let p = PathBuf::from(v);
            if p.is_absolute() {
                p
            } else {
                self.base.join(p)
            }
        })
    }

    /// `(key, value)` pairs in key order, for report headers.
    pub fn echo(&self) -> Vec<(String, String)> {
        self.params.iter().map(|(k, v)| (k.clone(), v.clone())).collect()
    }

    pub fn set(&mut self, key: &str, value: impl Into<String>) {
        self.params.insert(key.to_string(), value.into());
    }
}

use std::collections::BTreeMap;
use std::path::Path;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::norm::{MuRange, NormConfig, DEFAULT_T_NODES};
use crate::simplex::DilationVector;

/// Keys accepted in config files and on the command line.
pub const KNOWN_KEYS: &[&str] = &[
    "kernel", "n", "tol", "rho", "max_doublings", "nu_max", "budget", "parseval_tol", "t_nodes",
    "mu_range", "points", "seed", "workers", "output", "summary", "alpha", "nmin", "nmax",
    "per_octave", "include_convergents", "dip", "with_s", "with_frak", "timing", "n1", "n2", "n3",
    "n4", "n5", "n6",
];

/// Flat `key = value` configuration. Later assignments win, so flags
/// applied after a file override it.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct RunConfig {
    entries: BTreeMap<String, String>,
}

impl RunConfig {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = Self::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("config line {}: expected key = value", i + 1)))?;
            cfg.set(k.trim(), v.trim())?;
        }
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    pub fn set(&mut self, key: &str, value: impl Into<String>) -> Result<()> {
        if !KNOWN_KEYS.contains(&key) {
            return Err(Error::Parse(format!("unknown config key {key:?}")));
        }
        self.entries.insert(key.to_string(), value.into());
        Ok(())
    }

    pub fn with(mut self, key: &str, value: impl Into<String>) -> Result<Self> {
        self.set(key, value)?;
        Ok(self)
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries.get(key).map(String::as_str)
    }

    pub fn entries(&self) -> &BTreeMap<String, String> {
        &self.entries
    }

    pub fn to_text(&self) -> String {
        self.entries
            .iter()
            .map(|(k, v)| format!("{k} = {v}\n"))
            .collect()
    }

    pub fn parsed<T: FromStr>(&self, key: &str, default: T) -> Result<T> {
        match self.get(key) {
            None => Ok(default),
            Some(v) => v
                .parse()
                .map_err(|_| Error::Parse(format!("invalid value for {key}: {v:?}"))),
        }
    }

    pub fn flag(&self, key: &str, default: bool) -> Result<bool> {
        match self.get(key) {
            None => Ok(default),
            Some("true" | "1" | "yes") => Ok(true),
            Some("false" | "0" | "no") => Ok(false),
            Some(v) => Err(Error::Parse(format!("invalid boolean for {key}: {v:?}"))),
        }
    }

    pub fn require(&self, key: &str) -> Result<&str> {
        self.get(key)
            .ok_or_else(|| Error::Parse(format!("missing required parameter {key}")))
    }

    pub fn dilation(&self, key: &str) -> Result<DilationVector> {
        parse_dilation(self.require(key)?)
    }

    pub fn norm_config(&self) -> Result<NormConfig> {
        let d = NormConfig::default();
        let cfg = NormConfig {
            rho: self.parsed("rho", d.rho)?,
            tol: self.parsed("tol", d.tol)?,
            max_doublings: self.parsed("max_doublings", d.max_doublings)?,
            budget: self.parsed("budget", d.budget)?,
            nu_max: self.parsed("nu_max", d.nu_max)?,
            parseval_tol: self.parsed("parseval_tol", d.parseval_tol)?,
        };
        if !(cfg.tol > 0.0) || cfg.rho == 0 || cfg.nu_max == 0 {
            return Err(Error::Parse("tol, rho and nu_max must be positive".into()));
        }
        Ok(cfg)
    }

    pub fn mu_range(&self) -> Result<MuRange> {
        self.get("mu_range").map_or(Ok(MuRange::Theorem), MuRange::parse)
    }

    pub fn t_nodes(&self) -> Result<usize> {
        self.parsed("t_nodes", DEFAULT_T_NODES)
    }
}

pub fn parse_dilation(s: &str) -> Result<DilationVector> {
    let entries: Vec<f64> = s
        .split(',')
        .map(|t| {
            t.trim()
                .parse::<f64>()
                .map_err(|_| Error::Parse(format!("invalid entry {t:?} in {s:?}")))
        })
        .collect::<Result<_>>()?;
    DilationVector::new(entries)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn file_then_flags() {
        let mut c = RunConfig::parse("# comment\nkernel = D\nn = 2,3\n\ntol=1e-4\n").unwrap();
        c.set("tol", "1e-5").unwrap();
        assert_eq!(c.get("kernel"), Some("D"));
        assert_eq!(c.norm_config().unwrap().tol, 1e-5);
        assert_eq!(c.dilation("n").unwrap().entries(), &[2.0, 3.0]);
        let again = RunConfig::parse(&c.to_text()).unwrap();
        assert_eq!(again, c);
    }

    #[test]
    fn rejects_garbage() {
        assert!(RunConfig::parse("nonsense").is_err());
        assert!(RunConfig::parse("colour = red").is_err());
        let c = RunConfig::parse("n = 2,x\ntol = abc").unwrap();
        assert!(c.dilation("n").is_err());
        assert!(c.norm_config().is_err());
        assert!(c.flag("tol", false).is_err());
    }
}

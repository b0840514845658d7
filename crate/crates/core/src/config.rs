//! Plain-text `key = value` run configuration.
//!
//! ```text
//! # O2 with the level count pinned
//! system = morse
//! beta = 2.78e10      # 1/m
//! v0 = 5.211          # eV
//! mr = 1.33e-26       # kg
//! n_max = 7
//! ```
//!
//! One assignment per line; `#` starts a comment anywhere on a line; blank
//! lines are ignored. Keys are case-insensitive and `-` is read as `_`.
//! A repeated key or an unknown key is an error naming the line.
//! `energies` takes a comma-separated list of reals.

use std::collections::BTreeMap;
use std::str::FromStr;

use crate::error::{GhaError, Result};
use crate::scalar::Real;
use crate::spectrum::{
    morse_from_physical_with, MorseOverrides, MorsePhysicalParams, SpectrumModel, SystemId,
};

/// Every key the grammar accepts.
pub const KEYS: &[&str] = &[
    "system", "b", "q", "p", "nu", "n_max", "beta", "v0", "mr", "energies", "kind", "r", "phi",
    "t_start", "t_end", "points", "path", "dim", "tol", "out",
];

#[derive(Debug, Clone, PartialEq, Eq)]
struct Entry {
    value: String,
    /// 0 for values set programmatically.
    line: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Config {
    entries: BTreeMap<String, Entry>,
}

fn normalize_key(key: &str) -> String {
    key.trim().to_ascii_lowercase().replace('-', "_")
}

impl Config {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = Self::new();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let (key, value) = content.split_once('=').ok_or_else(|| GhaError::Config {
                line,
                message: format!("expected key = value, found '{content}'"),
            })?;
            let key = normalize_key(key);
            let value = value.trim();
            if key.is_empty() {
                return Err(GhaError::Config {
                    line,
                    message: "empty key".into(),
                });
            }
            if !KEYS.contains(&key.as_str()) {
                return Err(GhaError::Config {
                    line,
                    message: format!("unknown key '{key}'"),
                });
            }
            if value.is_empty() {
                return Err(GhaError::Config {
                    line,
                    message: format!("key '{key}' has no value"),
                });
            }
            if let Some(prev) = cfg.entries.get(&key) {
                return Err(GhaError::Config {
                    line,
                    message: format!("duplicate key '{key}' (first set on line {})", prev.line),
                });
            }
            cfg.entries.insert(
                key,
                Entry {
                    value: value.to_string(),
                    line,
                },
            );
        }
        Ok(cfg)
    }

    /// Sets or replaces a value; used to layer flags over a file.
    pub fn set(&mut self, key: &str, value: impl Into<String>) -> Result<()> {
        let key = normalize_key(key);
        if !KEYS.contains(&key.as_str()) {
            return Err(GhaError::Config {
                line: 0,
                message: format!("unknown key '{key}'"),
            });
        }
        self.entries.insert(
            key,
            Entry {
                value: value.into(),
                line: 0,
            },
        );
        Ok(())
    }

    pub fn contains(&self, key: &str) -> bool {
        self.entries.contains_key(&normalize_key(key))
    }

    pub fn get_str(&self, key: &str) -> Option<&str> {
        self.entries.get(&normalize_key(key)).map(|e| e.value.as_str())
    }

    pub fn get<F: FromStr>(&self, key: &str) -> Result<Option<F>>
    where
        F::Err: std::fmt::Display,
    {
        let key = normalize_key(key);
        match self.entries.get(&key) {
            None => Ok(None),
            Some(e) => e.value.parse().map(Some).map_err(|err| GhaError::Config {
                line: e.line,
                message: format!("bad value '{}' for '{key}': {err}", e.value),
            }),
        }
    }

    fn real<T: Real>(&self, key: &str) -> Result<Option<T>> {
        Ok(self.get::<f64>(key)?.map(T::lit))
    }

    fn line_of(&self, key: &str) -> usize {
        self.entries.get(key).map_or(0, |e| e.line)
    }

    pub fn keys(&self) -> impl Iterator<Item = &str> {
        self.entries.keys().map(String::as_str)
    }
}

impl<T: Real> SpectrumModel<T> {
    /// Builds the spectrum named by `system`.
    ///
    /// `b` defaults to 1. Morse takes `beta`, `v0` (eV) and `mr` (kg) for
    /// a molecule, or `p` / `nu` directly; `n_max` pins the level count
    /// either way. `tabulated` reads `energies`.
    pub fn from_config(cfg: &Config) -> Result<Self> {
        let system: SystemId = cfg
            .get_str("system")
            .ok_or(GhaError::Config {
                line: 0,
                message: "missing required key 'system'".into(),
            })?
            .parse()
            .map_err(|e: GhaError| GhaError::Config {
                line: cfg.line_of("system"),
                message: e.to_string(),
            })?;
        let b = cfg.real::<T>("b")?.unwrap_or(T::one());
        match system {
            SystemId::Harmonic => Ok(Self::harmonic()),
            SystemId::QDeformed => {
                let q = cfg.real::<T>("q")?.ok_or(GhaError::Config {
                    line: 0,
                    message: "q-deformed needs 'q'".into(),
                })?;
                Self::q_deformed(q)
            }
            SystemId::SquareWell => Self::square_well(b),
            SystemId::Type1 => Self::type1(b),
            SystemId::Type2 => Self::type2(b),
            SystemId::Hydrogen => Self::hydrogen(b),
            SystemId::Morse => morse_from_config(cfg),
            SystemId::Tabulated => {
                let raw = cfg.get_str("energies").ok_or(GhaError::Config {
                    line: 0,
                    message: "tabulated spectrum needs 'energies'".into(),
                })?;
                let levels = raw
                    .split(',')
                    .map(|s| {
                        s.trim().parse::<f64>().map(T::lit).map_err(|e| GhaError::Config {
                            line: cfg.line_of("energies"),
                            message: format!("bad energy '{}': {e}", s.trim()),
                        })
                    })
                    .collect::<Result<Vec<_>>>()?;
                Self::tabulated(levels)
            }
        }
    }
}

fn morse_from_config<T: Real>(cfg: &Config) -> Result<SpectrumModel<T>> {
    let overrides = MorseOverrides {
        nu: cfg.real::<T>("nu")?,
        p: cfg.real::<T>("p")?,
        n_max: cfg.get::<usize>("n_max")?,
    };
    let physical = ["beta", "v0", "mr"].map(|k| cfg.contains(k));
    if physical.iter().any(|&x| x) {
        if !physical.iter().all(|&x| x) {
            return Err(GhaError::Config {
                line: 0,
                message: "physical Morse input needs all of beta, v0, mr".into(),
            });
        }
        let phys = MorsePhysicalParams::from_ev(
            cfg.real("beta")?.unwrap(),
            cfg.real("v0")?.unwrap(),
            cfg.real("mr")?.unwrap(),
        )?;
        return morse_from_physical_with(&phys, &overrides);
    }
    let p = match (overrides.p, overrides.nu) {
        (Some(p), _) => p,
        (None, Some(nu)) => {
            if !(nu > T::one()) {
                return Err(GhaError::InvalidParameter(format!(
                    "nu = {nu} must exceed 1 for a bound Morse state"
                )));
            }
            (nu - T::one()) / T::lit(2.0)
        }
        (None, None) => {
            return Err(GhaError::Config {
                line: 0,
                message: "morse needs p, nu, or beta/v0/mr".into(),
            })
        }
    };
    match overrides.n_max {
        Some(n) => SpectrumModel::morse_truncated(p, n),
        None => SpectrumModel::morse(p),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_comments_and_case() {
        let cfg = Config::parse("# header\n\nSystem = type1 # trailing\nb=2\nT-End = 50\n").unwrap();
        assert_eq!(cfg.get_str("system"), Some("type1"));
        assert_eq!(cfg.get::<f64>("b").unwrap(), Some(2.0));
        assert_eq!(cfg.get::<f64>("t_end").unwrap(), Some(50.0));
        let spec = SpectrumModel::<f64>::from_config(&cfg).unwrap();
        assert_eq!(spec.energy_scale(), Some(2.0));
    }

    #[test]
    fn rejects_bad_lines() {
        assert!(matches!(Config::parse("system type1"), Err(GhaError::Config { line: 1, .. })));
        assert!(matches!(
            Config::parse("b = 1\nb = 2"),
            Err(GhaError::Config { line: 2, .. })
        ));
        assert!(Config::parse("colour = red").is_err());
        assert!(Config::parse("b =").is_err());
        let cfg = Config::parse("system = type1\nb = x").unwrap();
        assert!(matches!(
            SpectrumModel::<f64>::from_config(&cfg),
            Err(GhaError::Config { line: 2, .. })
        ));
    }

    #[test]
    fn flags_override_file() {
        let mut cfg = Config::parse("system = morse\np = 3.2").unwrap();
        cfg.set("p", "7.59").unwrap();
        let spec = SpectrumModel::<f64>::from_config(&cfg).unwrap();
        assert_eq!(spec.max_level(), Some(7));
    }

    #[test]
    fn morse_variants() {
        let o2 = Config::parse("system=morse\nbeta=2.78e10\nv0=5.211\nmr=1.33e-26\nn_max=7").unwrap();
        let spec = SpectrumModel::<f64>::from_config(&o2).unwrap();
        assert_eq!(spec.max_level(), Some(7));
        assert!(spec.time_scale().is_some());
        let nu = Config::parse("system=morse\nnu=16.18").unwrap();
        let spec = SpectrumModel::<f64>::from_config(&nu).unwrap();
        assert!((spec.morse_p().unwrap() - 7.59).abs() < 1e-12);
        let partial = Config::parse("system=morse\nbeta=2.78e10").unwrap();
        assert!(SpectrumModel::<f64>::from_config(&partial).is_err());
    }

    #[test]
    fn tabulated_energies() {
        let cfg = Config::parse("system = tabulated\nenergies = 0, 1, 2.5, 4").unwrap();
        let spec = SpectrumModel::<f64>::from_config(&cfg).unwrap();
        assert_eq!(spec.energy(2).unwrap(), 2.5);
        let bad = Config::parse("system = tabulated\nenergies = 0, one").unwrap();
        assert!(SpectrumModel::<f64>::from_config(&bad).is_err());
    }
}

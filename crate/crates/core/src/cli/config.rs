//! `key = value` run configuration with command-line overrides.

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use super::CliError;

/// Values from a config file, resolved against command-line flags. Every
/// lookup is recorded so the manifest lists the full parameter set.
#[derive(Debug, Default)]
pub struct Resolver {
    file: BTreeMap<String, String>,
    used: BTreeSet<String>,
    resolved: BTreeMap<String, String>,
}

fn normalize_key(key: &str) -> String {
    key.trim().replace('-', "_").to_ascii_lowercase()
}

impl Resolver {
    pub fn from_text(text: &str) -> Result<Self, CliError> {
        let mut file = BTreeMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| {
                CliError::invalid(format!(
                    "config line {}: expected `key = value`",
                    lineno + 1
                ))
            })?;
            let key = normalize_key(k);
            if key.is_empty() {
                return Err(CliError::invalid(format!(
                    "config line {}: empty key",
                    lineno + 1
                )));
            }
            file.insert(key, v.trim().to_string());
        }
        Ok(Self {
            file,
            ..Self::default()
        })
    }

    pub fn from_file(path: Option<&Path>) -> Result<Self, CliError> {
        match path {
            None => Ok(Self::default()),
            Some(p) => {
                let text = std::fs::read_to_string(p)
                    .map_err(|e| CliError::invalid(format!("config {}: {e}", p.display())))?;
                Self::from_text(&text)
            }
        }
    }

    fn raw(&mut self, key: &str) -> Option<String> {
        let key = normalize_key(key);
        self.used.insert(key.clone());
        self.file.get(&key).cloned()
    }

    fn record(&mut self, key: &str, value: String) {
        self.resolved.insert(normalize_key(key), value);
    }

    /// Flag value, else config value, else default.
    pub fn f64(&mut self, key: &str, flag: Option<f64>, default: f64) -> Result<f64, CliError> {
        let value = match (flag, self.raw(key)) {
            (Some(v), _) => v,
            (None, Some(text)) => parse_number(key, &text)?,
            (None, None) => default,
        };
        if !value.is_finite() {
            return Err(CliError::invalid(format!("{key} must be finite")));
        }
        self.record(key, value.to_string());
        Ok(value)
    }

    pub fn opt_f64(&mut self, key: &str, flag: Option<f64>) -> Result<Option<f64>, CliError> {
        let value = match (flag, self.raw(key)) {
            (Some(v), _) => Some(v),
            (None, Some(text)) => Some(parse_number(key, &text)?),
            (None, None) => None,
        };
        if let Some(v) = value {
            if !v.is_finite() {
                return Err(CliError::invalid(format!("{key} must be finite")));
            }
            self.record(key, v.to_string());
        }
        Ok(value)
    }

    pub fn usize(
        &mut self,
        key: &str,
        flag: Option<usize>,
        default: usize,
    ) -> Result<usize, CliError> {
        let value = match (flag, self.raw(key)) {
            (Some(v), _) => v,
            (None, Some(text)) => text
                .parse()
                .map_err(|_| CliError::invalid(format!("{key}: `{text}` is not a count")))?,
            (None, None) => default,
        };
        self.record(key, value.to_string());
        Ok(value)
    }

    pub fn string(&mut self, key: &str, flag: Option<&str>, default: &str) -> String {
        let value = match (flag, self.raw(key)) {
            (Some(v), _) => v.to_string(),
            (None, Some(text)) => text,
            (None, None) => default.to_string(),
        };
        self.record(key, value.clone());
        value
    }

    /// Angle in radians given as a number or as a multiple/fraction of `pi`.
    pub fn angle_rad(
        &mut self,
        key: &str,
        flag: Option<&str>,
        default: f64,
    ) -> Result<f64, CliError> {
        let value = match (flag.map(str::to_string), self.raw(key)) {
            (Some(v), _) | (None, Some(v)) => parse_angle(key, &v)?,
            (None, None) => default,
        };
        self.record(key, value.to_string());
        Ok(value)
    }

    /// Config keys never looked up by the command.
    pub fn unused_keys(&self) -> Vec<String> {
        self.file
            .keys()
            .filter(|k| !self.used.contains(*k))
            .cloned()
            .collect()
    }

    pub fn into_resolved(self) -> BTreeMap<String, String> {
        self.resolved
    }
}

fn parse_number(key: &str, text: &str) -> Result<f64, CliError> {
    text.trim()
        .parse()
        .map_err(|_| CliError::invalid(format!("{key}: `{text}` is not a number")))
}

/// Accepts `1.2`, `pi`, `-pi`, `pi/2`, `2pi`, `0.5*pi`.
pub fn parse_angle(key: &str, text: &str) -> Result<f64, CliError> {
    let t = text.trim().to_ascii_lowercase().replace(' ', "");
    let bad = || CliError::invalid(format!("{key}: `{text}` is not an angle"));
    let value = if let Some(idx) = t.find("pi") {
        let (head, tail) = (&t[..idx], &t[idx + 2..]);
        let factor = match head.trim_end_matches('*') {
            "" => 1.0,
            "-" => -1.0,
            h => h.parse::<f64>().map_err(|_| bad())?,
        };
        let divisor = match tail {
            "" => 1.0,
            d => d
                .strip_prefix('/')
                .ok_or_else(bad)?
                .parse::<f64>()
                .map_err(|_| bad())?,
        };
        factor * std::f64::consts::PI / divisor
    } else {
        t.parse::<f64>().map_err(|_| bad())?
    };
    if !value.is_finite() {
        return Err(bad());
    }
    Ok(value)
}

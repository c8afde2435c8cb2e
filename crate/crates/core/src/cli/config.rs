//! `key = value` config files, flag overrides and sweep grids.

use std::collections::BTreeMap;
use std::str::FromStr;

use super::CliError;

/// Parses a flat `key = value` file. Blank lines and lines starting with
/// `#` are skipped; a repeated key is an error.
pub fn parse_config(text: &str) -> Result<BTreeMap<String, String>, CliError> {
    let mut map = BTreeMap::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(CliError::Config(format!("line {}: expected `key = value`", lineno + 1)));
        };
        let (key, value) = (key.trim(), value.trim());
        if key.is_empty() || value.is_empty() {
            return Err(CliError::Config(format!("line {}: empty key or value", lineno + 1)));
        }
        if map.insert(key.to_string(), value.to_string()).is_some() {
            return Err(CliError::Config(format!("line {}: duplicate key `{key}`", lineno + 1)));
        }
    }
    Ok(map)
}

/// Fully resolved parameters for one scenario, in a fixed key order.
#[derive(Debug, Clone, PartialEq)]
pub struct Params {
    values: BTreeMap<String, String>,
}

impl Params {
    /// Merges `file` and `flags` (flags win) over `defaults`, rejecting keys
    /// the scenario does not use.
    pub fn resolve(
        scenario: &str,
        defaults: &[(&str, &str)],
        file: &BTreeMap<String, String>,
        flags: &BTreeMap<String, String>,
    ) -> Result<Self, CliError> {
        let mut values: BTreeMap<String, String> = defaults.iter().map(|(k, v)| (k.to_string(), v.to_string())).collect();
        for (key, value) in file.iter().chain(flags.iter()) {
            if !values.contains_key(key) {
                let known: Vec<&str> = defaults.iter().map(|(k, _)| *k).collect();
                return Err(CliError::Config(format!(
                    "`{key}` is not a parameter of {scenario} (expected one of: {})",
                    known.join(", ")
                )));
            }
            values.insert(key.clone(), value.clone());
        }
        Ok(Self { values })
    }

    pub fn raw(&self, key: &str) -> &str {
        self.values.get(key).map(String::as_str).unwrap_or("")
    }

    pub fn is_auto(&self, key: &str) -> bool {
        self.raw(key) == "auto"
    }

    /// Replaces an `auto` value with its resolved form.
    pub fn set(&mut self, key: &str, value: String) {
        self.values.insert(key.to_string(), value);
    }

    pub fn get<T: FromStr>(&self, key: &str) -> Result<T, CliError> {
        self.raw(key)
            .parse()
            .map_err(|_| CliError::Config(format!("cannot parse `{key} = {}`", self.raw(key))))
    }

    /// A finite float, strictly positive when `positive` is set.
    pub fn real(&self, key: &str, positive: bool) -> Result<f64, CliError> {
        let v: f64 = self.get(key)?;
        if !v.is_finite() || (positive && v <= 0.0) {
            let need = if positive { "a positive number" } else { "a finite number" };
            return Err(CliError::Config(format!("`{key}` must be {need}, got {}", self.raw(key))));
        }
        Ok(v)
    }

    pub fn grid(&self, key: &str) -> Result<Vec<f64>, CliError> {
        parse_grid(self.raw(key)).map_err(|msg| CliError::Config(format!("`{key}`: {msg}")))
    }

    pub fn iter(&self) -> impl Iterator<Item = (&String, &String)> {
        self.values.iter()
    }
}

/// `start:stop:count`, inclusive of both ends.
pub fn parse_grid(spec: &str) -> Result<Vec<f64>, String> {
    let parts: Vec<&str> = spec.split(':').collect();
    let [start, stop, count] = parts.as_slice() else {
        return Err(format!("expected start:stop:count, got `{spec}`"));
    };
    let start: f64 = start.trim().parse().map_err(|_| format!("bad start `{start}`"))?;
    let stop: f64 = stop.trim().parse().map_err(|_| format!("bad stop `{stop}`"))?;
    let count: usize = count.trim().parse().map_err(|_| format!("bad count `{count}`"))?;
    if !start.is_finite() || !stop.is_finite() {
        return Err("grid ends must be finite".into());
    }
    match count {
        0 => Err("grid count must be at least 1".into()),
        1 => Ok(vec![start]),
        _ => {
            let step = (stop - start) / (count - 1) as f64;
            Ok((0..count).map(|i| if i + 1 == count { stop } else { start + i as f64 * step }).collect())
        }
    }
}

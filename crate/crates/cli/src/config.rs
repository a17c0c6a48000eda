//! Sweep configuration: JSON files, flag overrides and parameter resolution.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scenario {
    MinimalMachine,
    Otto,
    Trajectory,
    Inequalities,
}

impl Scenario {
    pub fn as_str(self) -> &'static str {
        match self {
            Scenario::MinimalMachine => "minimal-machine",
            Scenario::Otto => "otto",
            Scenario::Trajectory => "trajectory",
            Scenario::Inequalities => "inequalities",
        }
    }

    /// Parameter names the scenario understands, with their defaults.
    pub fn defaults(self) -> &'static [(&'static str, f64)] {
        match self {
            Scenario::MinimalMachine => &[
                ("omega0", 3.0),
                ("t_hot", 2.0),
                ("t_cold", 1.0),
                ("gamma_hot", 1.0),
                ("gamma_cold", 1.0),
            ],
            Scenario::Otto => &[
                ("omega_cold", 1.0),
                ("omega_hot", 2.0),
                ("t_hot", 4.0),
                ("t_cold", 1.0),
                ("r", 0.0),
            ],
            Scenario::Inequalities => &[
                ("count", 500.0),
                ("dim", 2.0),
                ("omega", 1.0),
                ("gamma", 1.0),
                ("temperature", 1.0),
                ("t_end", 10.0),
                ("passive_only", 0.0),
            ],
            // Presets supply their own values; these fill the gaps.
            Scenario::Trajectory => &[],
        }
    }

    /// Names accepted without a default.
    fn optional(self) -> &'static [&'static str] {
        match self {
            Scenario::MinimalMachine => &["delta"],
            Scenario::Otto => &["fock_dim"],
            Scenario::Inequalities => &["dt", "ramp_to", "ramp_time"],
            Scenario::Trajectory => &[
                "alpha", "dim", "omega", "gamma", "temperature", "t_end", "dt", "stride", "level",
                "ramp_to", "ramp_time",
            ],
        }
    }

    pub fn accepts(self, name: &str) -> bool {
        self.defaults().iter().any(|(n, _)| *n == name) || self.optional().contains(&name)
    }

    pub fn parameter_names(self) -> Vec<&'static str> {
        let mut v: Vec<&str> = self.defaults().iter().map(|(n, _)| *n).collect();
        v.extend_from_slice(self.optional());
        v
    }
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = CliError;

    fn from_str(s: &str) -> CliResult<Self> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(CliError::config(format!("unknown format {other:?}, expected csv or json"))),
        }
    }
}

/// Evenly spaced values from `start` to `stop` inclusive.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridAxis {
    pub start: f64,
    pub stop: f64,
    pub count: usize,
}

impl GridAxis {
    pub fn values(&self) -> Vec<f64> {
        match self.count {
            0 => Vec::new(),
            1 => vec![self.start],
            n => {
                let step = (self.stop - self.start) / (n - 1) as f64;
                (0..n).map(|i| if i == n - 1 { self.stop } else { self.start + step * i as f64 }).collect()
            }
        }
    }
}

impl FromStr for GridAxis {
    type Err = CliError;

    /// `start:stop:count`
    fn from_str(s: &str) -> CliResult<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        let bad = || CliError::config(format!("grid axis {s:?} is not start:stop:count"));
        if parts.len() != 3 {
            return Err(bad());
        }
        Ok(GridAxis {
            start: parts[0].trim().parse().map_err(|_| bad())?,
            stop: parts[1].trim().parse().map_err(|_| bad())?,
            count: parts[2].trim().parse().map_err(|_| bad())?,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub scenario: Scenario,
    #[serde(default)]
    pub grid: BTreeMap<String, GridAxis>,
    #[serde(default)]
    pub fixed: BTreeMap<String, f64>,
    /// Named trajectory scenario.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub preset: Option<String>,
    /// Otto backend: "moments" (default) or "fock".
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub backend: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
    #[serde(default)]
    pub format: Format,
    #[serde(default)]
    pub seed: u64,
}

impl SweepConfig {
    pub fn new(scenario: Scenario) -> Self {
        SweepConfig {
            scenario,
            grid: BTreeMap::new(),
            fixed: BTreeMap::new(),
            preset: None,
            backend: None,
            output: None,
            format: Format::Csv,
            seed: 0,
        }
    }

    pub fn from_json(text: &str) -> CliResult<Self> {
        serde_json::from_str(text).map_err(|e| CliError::config(format!("invalid config: {e}")))
    }

    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|source| CliError::Io { path: path.display().to_string(), source })?;
        Self::from_json(&text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("config serialises")
    }

    pub fn validate(&self) -> CliResult<()> {
        for (name, axis) in &self.grid {
            if !self.scenario.accepts(name) {
                return Err(self.unknown(name));
            }
            if axis.count == 0 {
                return Err(CliError::config(format!("grid axis {name:?} has count 0")));
            }
            if !axis.start.is_finite() || !axis.stop.is_finite() {
                return Err(CliError::config(format!("grid axis {name:?} is not finite")));
            }
            if self.fixed.contains_key(name) {
                return Err(CliError::config(format!("{name:?} is both swept and fixed")));
            }
        }
        for (name, v) in &self.fixed {
            if !self.scenario.accepts(name) {
                return Err(self.unknown(name));
            }
            if !v.is_finite() {
                return Err(CliError::config(format!("fixed parameter {name:?} is not finite")));
            }
        }
        if self.scenario == Scenario::Trajectory && !self.grid.is_empty() {
            return Err(CliError::config("trajectory runs take no grid"));
        }
        if self.preset.is_some() && self.scenario != Scenario::Trajectory {
            return Err(CliError::config("presets apply to trajectory runs only"));
        }
        if let Some(b) = &self.backend {
            if self.scenario != Scenario::Otto {
                return Err(CliError::config("backend applies to otto sweeps only"));
            }
            if b != "moments" && b != "fock" {
                return Err(CliError::config(format!("unknown backend {b:?}, expected moments or fock")));
            }
        }
        Ok(())
    }

    fn unknown(&self, name: &str) -> CliError {
        CliError::config(format!(
            "parameter {name:?} is not valid for {}; expected one of {}",
            self.scenario,
            self.scenario.parameter_names().join(", ")
        ))
    }

    /// Every grid point as a full parameter map (defaults, then fixed
    /// values, then the point's coordinates), in row-major grid order with
    /// the last axis varying fastest.
    pub fn points(&self) -> CliResult<Vec<Params>> {
        self.validate()?;
        let mut base = BTreeMap::new();
        for (n, v) in self.scenario.defaults() {
            base.insert((*n).to_string(), *v);
        }
        base.extend(self.fixed.iter().map(|(k, v)| (k.clone(), *v)));
        let mut points = vec![base];
        for (name, axis) in &self.grid {
            let values = axis.values();
            points = points
                .into_iter()
                .flat_map(|p| {
                    values.iter().map(move |&v| {
                        let mut q = p.clone();
                        q.insert(name.clone(), v);
                        q
                    })
                })
                .collect();
        }
        Ok(points.into_iter().map(Params).collect())
    }

    /// The config with defaults filled in, as recorded in output headers.
    pub fn resolved(&self) -> CliResult<SweepConfig> {
        self.validate()?;
        let mut out = self.clone();
        out.output = None;
        for (n, v) in self.scenario.defaults() {
            if !self.grid.contains_key(*n) {
                out.fixed.entry((*n).to_string()).or_insert(*v);
            }
        }
        Ok(out)
    }
}

/// Resolved parameters of one grid point.
#[derive(Clone, Debug, PartialEq)]
pub struct Params(pub BTreeMap<String, f64>);

impl Params {
    pub fn get(&self, name: &str) -> Option<f64> {
        self.0.get(name).copied()
    }

    pub fn require(&self, name: &str) -> CliResult<f64> {
        self.get(name).ok_or_else(|| CliError::config(format!("missing parameter {name:?}")))
    }

    pub fn or(&self, name: &str, default: f64) -> f64 {
        self.get(name).unwrap_or(default)
    }

    /// A non-negative integer parameter.
    pub fn count(&self, name: &str, default: usize) -> CliResult<usize> {
        match self.get(name) {
            None => Ok(default),
            Some(v) if v >= 0.0 && v.fract() == 0.0 && v < 1e9 => Ok(v as usize),
            Some(v) => Err(CliError::config(format!("{name:?} must be a non-negative integer, got {v}"))),
        }
    }
}

/// Parses `name=value`.
pub fn parse_assignment(s: &str) -> CliResult<(String, f64)> {
    let (k, v) = s
        .split_once('=')
        .ok_or_else(|| CliError::config(format!("expected name=value, got {s:?}")))?;
    let v: f64 = v
        .trim()
        .parse()
        .map_err(|_| CliError::config(format!("value of {k:?} is not a number: {v:?}")))?;
    Ok((k.trim().to_string(), v))
}

/// Parses `name=start:stop:count`.
pub fn parse_grid(s: &str) -> CliResult<(String, GridAxis)> {
    let (k, v) = s
        .split_once('=')
        .ok_or_else(|| CliError::config(format!("expected name=start:stop:count, got {s:?}")))?;
    Ok((k.trim().to_string(), v.parse()?))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_values_hit_both_ends() {
        let g = GridAxis { start: 0.25, stop: 2.75, count: 11 };
        let v = g.values();
        assert_eq!(v.len(), 11);
        assert_eq!(v[0], 0.25);
        assert_eq!(v[10], 2.75);
        assert!((v[3] - 1.0).abs() < 1e-15);
        assert_eq!(GridAxis { start: 0.5, stop: 9.0, count: 1 }.values(), vec![0.5]);
    }

    #[test]
    fn json_round_trip() {
        let mut c = SweepConfig::new(Scenario::Otto);
        c.grid.insert("r".into(), GridAxis { start: 0.0, stop: 1.0, count: 3 });
        c.fixed.insert("t_hot".into(), 5.0);
        c.backend = Some("fock".into());
        c.seed = 7;
        let back = SweepConfig::from_json(&c.to_json()).unwrap();
        assert_eq!(back, c);
    }

    #[test]
    fn unknown_and_duplicate_names_rejected() {
        let mut c = SweepConfig::new(Scenario::MinimalMachine);
        c.fixed.insert("omega".into(), 1.0);
        assert!(matches!(c.validate(), Err(CliError::Config(_))));
        let mut c = SweepConfig::new(Scenario::MinimalMachine);
        c.fixed.insert("delta".into(), 1.0);
        c.grid.insert("delta".into(), GridAxis { start: 0.1, stop: 1.0, count: 2 });
        assert!(c.validate().is_err());
        let mut c = SweepConfig::new(Scenario::Inequalities);
        c.grid.insert("temperature".into(), GridAxis { start: 1.0, stop: 2.0, count: 0 });
        assert!(c.validate().is_err());
        assert!(SweepConfig::from_json(r#"{"scenario":"otto","bogus":1}"#).is_err());
    }

    #[test]
    fn points_are_a_product_in_order() {
        let mut c = SweepConfig::new(Scenario::MinimalMachine);
        c.grid.insert("delta".into(), GridAxis { start: 0.5, stop: 1.5, count: 3 });
        c.grid.insert("t_hot".into(), GridAxis { start: 2.0, stop: 3.0, count: 2 });
        let pts = c.points().unwrap();
        assert_eq!(pts.len(), 6);
        assert_eq!((pts[0].get("delta"), pts[0].get("t_hot")), (Some(0.5), Some(2.0)));
        assert_eq!((pts[1].get("delta"), pts[1].get("t_hot")), (Some(0.5), Some(3.0)));
        assert_eq!(pts[5].get("omega0"), Some(3.0));
    }

    #[test]
    fn assignments_parse() {
        assert_eq!(parse_assignment("omega0 = 2.5").unwrap(), ("omega0".into(), 2.5));
        assert!(parse_assignment("omega0").is_err());
        let (n, g) = parse_grid("delta=0.25:2.75:11").unwrap();
        assert_eq!((n.as_str(), g.count), ("delta", 11));
        assert!(parse_grid("delta=1:2").is_err());
    }
}

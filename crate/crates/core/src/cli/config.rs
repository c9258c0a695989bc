//! TOML configuration for sweeps and figure runs.
//!
//! A file containing a `figure` key describes a figure reproduction; anything
//! else is a sweep. Unknown keys are rejected in both.

use std::fmt;
use std::path::PathBuf;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::channels::ChannelKind;
use crate::entanglement::{Branch, ConcurrenceMap};
use crate::spacetime::hawking_temperature;

use super::figures::{FigureId, FigureSpec};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConfigError {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("invalid `{field}`: {constraint}")]
    Invalid { field: String, constraint: String },
}

impl ConfigError {
    fn invalid(field: &str, constraint: impl Into<String>) -> Self {
        ConfigError::Invalid {
            field: field.to_string(),
            constraint: constraint.into(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Axis {
    Temperature,
    PTau,
    Concurrence,
    Alpha,
}

impl Axis {
    pub fn column(&self) -> &'static str {
        match self {
            Axis::Temperature => "temperature",
            Axis::PTau => "p_tau",
            Axis::Concurrence => "concurrence",
            Axis::Alpha => "alpha",
        }
    }
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.column())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

fn default_omega() -> f64 {
    1.0
}

/// One-dimensional parameter sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub channel: ChannelKind,
    pub axis: Axis,
    /// `[lo, hi]` of the swept axis.
    pub range: [f64; 2],
    pub count: usize,
    #[serde(default = "default_omega")]
    pub omega: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub temperature: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mass: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p_tau: Option<f64>,
    #[serde(default)]
    pub branch: Branch,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
    #[serde(default)]
    pub format: OutputFormat,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FigureFile {
    figure: FigureId,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    output_dir: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ConfigFile {
    Sweep(SweepConfig),
    Figure {
        spec: FigureSpec,
        output_dir: Option<PathBuf>,
    },
}

fn unit_interval(field: &str, v: f64) -> Result<(), ConfigError> {
    if (0.0..=1.0).contains(&v) {
        Ok(())
    } else {
        Err(ConfigError::invalid(field, format!("{v} is outside [0, 1]")))
    }
}

fn require(field: &str, v: Option<f64>, axis: Axis) -> Result<f64, ConfigError> {
    v.ok_or_else(|| ConfigError::invalid(field, format!("required when sweeping {axis}")))
}

fn forbid(field: &str, v: Option<f64>, axis: Axis) -> Result<(), ConfigError> {
    match v {
        Some(_) => Err(ConfigError::invalid(
            field,
            format!("must not be set when sweeping {axis}"),
        )),
        None => Ok(()),
    }
}

impl SweepConfig {
    /// Fixed temperature, from `temperature` or `mass` (exactly one).
    pub fn fixed_temperature(&self) -> Result<f64, ConfigError> {
        match (self.temperature, self.mass) {
            (Some(_), Some(_)) => Err(ConfigError::invalid(
                "mass",
                "give either temperature or mass, not both",
            )),
            (Some(t), None) if t >= 0.0 && t.is_finite() => Ok(t),
            (Some(t), None) => Err(ConfigError::invalid(
                "temperature",
                format!("{t} is outside [0, inf)"),
            )),
            (None, Some(m)) => hawking_temperature(m)
                .map_err(|_| ConfigError::invalid("mass", format!("{m} is outside (0, inf)"))),
            (None, None) => Err(ConfigError::invalid(
                "temperature",
                format!("temperature or mass is required when sweeping {}", self.axis),
            )),
        }
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let [lo, hi] = self.range;
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(ConfigError::invalid("range", format!("need lo < hi, got [{lo}, {hi}]")));
        }
        if self.count < 2 {
            return Err(ConfigError::invalid("count", format!("need at least 2, got {}", self.count)));
        }
        if !(self.omega > 0.0 && self.omega.is_finite()) {
            return Err(ConfigError::invalid("omega", format!("{} is outside (0, inf)", self.omega)));
        }
        if let Some(a) = self.alpha {
            unit_interval("alpha", a)?;
        }
        if let Some(p) = self.p_tau {
            unit_interval("p_tau", p)?;
        }

        match self.axis {
            Axis::Temperature => {
                require("alpha", self.alpha, self.axis)?;
                require("p_tau", self.p_tau, self.axis)?;
                forbid("temperature", self.temperature, self.axis)?;
                forbid("mass", self.mass, self.axis)?;
                if lo < 0.0 {
                    return Err(ConfigError::invalid("range", "temperatures must be >= 0"));
                }
            }
            Axis::PTau => {
                require("alpha", self.alpha, self.axis)?;
                forbid("p_tau", self.p_tau, self.axis)?;
                self.fixed_temperature()?;
                if lo < 0.0 || hi > 1.0 {
                    return Err(ConfigError::invalid("range", "p_tau values must lie in [0, 1]"));
                }
            }
            Axis::Alpha => {
                require("p_tau", self.p_tau, self.axis)?;
                forbid("alpha", self.alpha, self.axis)?;
                self.fixed_temperature()?;
                if lo < 0.0 || hi > 1.0 {
                    return Err(ConfigError::invalid("range", "alpha values must lie in [0, 1]"));
                }
            }
            Axis::Concurrence => {
                require("p_tau", self.p_tau, self.axis)?;
                forbid("alpha", self.alpha, self.axis)?;
                let t = self.fixed_temperature()?;
                let c_max = ConcurrenceMap::new(self.omega, t, self.branch)
                    .map_err(|e| ConfigError::invalid("temperature", e.to_string()))?
                    .c_max();
                if lo < 0.0 || hi > c_max * (1.0 + 1e-12) {
                    return Err(ConfigError::invalid(
                        "range",
                        format!("concurrence must lie in [0, c_max = {c_max}]"),
                    ));
                }
            }
        }
        Ok(())
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("sweep configs always serialize")
    }
}

fn syntax_error(text: &str, err: &toml::de::Error) -> ConfigError {
    let offset = err.span().map(|s| s.start).unwrap_or(0).min(text.len());
    let before = &text[..offset];
    let line = before.matches('\n').count() + 1;
    let column = before.rsplit('\n').next().map(|l| l.chars().count()).unwrap_or(0) + 1;
    ConfigError::Syntax {
        line,
        column,
        message: err.message().to_string(),
    }
}

/// Parses and validates a configuration file.
pub fn parse_config(text: &str) -> Result<ConfigFile, ConfigError> {
    let table: toml::Table = text.parse().map_err(|e| syntax_error(text, &e))?;
    if table.contains_key("figure") {
        let file: FigureFile = toml::from_str(text).map_err(|e| syntax_error(text, &e))?;
        return Ok(ConfigFile::Figure {
            spec: FigureSpec::new(file.figure),
            output_dir: file.output_dir,
        });
    }
    let config: SweepConfig = toml::from_str(text).map_err(|e| syntax_error(text, &e))?;
    config.validate()?;
    Ok(ConfigFile::Sweep(config))
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"
channel = "DPC"
axis = "temperature"
range = [0.5, 10.0]
count = 20
alpha = 0.25
p_tau = 0.8
"#;

    fn sweep(text: &str) -> SweepConfig {
        match parse_config(text).unwrap() {
            ConfigFile::Sweep(c) => c,
            other => panic!("expected a sweep, got {other:?}"),
        }
    }

    #[test]
    fn minimal_round_trip() {
        let config = sweep(MINIMAL);
        assert_eq!(config.omega, 1.0);
        assert_eq!(config.branch, Branch::Lower);
        let again = sweep(&config.to_toml());
        assert_eq!(config, again);
    }

    #[test]
    fn p_tau_out_of_range_names_field() {
        let text = MINIMAL.replace("p_tau = 0.8", "p_tau = 1.5");
        let err = parse_config(&text).unwrap_err();
        match err {
            ConfigError::Invalid { field, constraint } => {
                assert_eq!(field, "p_tau");
                assert!(constraint.contains("[0, 1]"));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn unknown_key_rejected_with_position() {
        let text = format!("{MINIMAL}colour = \"red\"\n");
        match parse_config(&text).unwrap_err() {
            ConfigError::Syntax { line, message, .. } => {
                assert!(message.contains("colour"), "{message}");
                assert_eq!(line, 8);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn broken_syntax_reports_line_and_column() {
        let err = parse_config("channel = \"DPC\"\naxis = \n").unwrap_err();
        assert!(matches!(err, ConfigError::Syntax { line: 2, .. }), "{err:?}");
    }

    #[test]
    fn axis_requirements() {
        let text = MINIMAL.replace("alpha = 0.25\n", "");
        assert!(matches!(
            parse_config(&text),
            Err(ConfigError::Invalid { field, .. }) if field == "alpha"
        ));
        let text = MINIMAL.replace("axis = \"temperature\"", "axis = \"p_tau\"");
        assert!(matches!(
            parse_config(&text),
            Err(ConfigError::Invalid { field, .. }) if field == "p_tau"
        ));
        let text = MINIMAL.replace("count = 20", "count = 1");
        assert!(matches!(
            parse_config(&text),
            Err(ConfigError::Invalid { field, .. }) if field == "count"
        ));
        let text = MINIMAL.replace("[0.5, 10.0]", "[10.0, 0.5]");
        assert!(matches!(
            parse_config(&text),
            Err(ConfigError::Invalid { field, .. }) if field == "range"
        ));
    }

    #[test]
    fn concurrence_range_is_capped() {
        let text = r#"
channel = "BFC"
axis = "concurrence"
range = [0.0, 0.9]
count = 5
temperature = 3.0
p_tau = 0.6
"#;
        assert!(matches!(
            parse_config(text),
            Err(ConfigError::Invalid { field, .. }) if field == "range"
        ));
    }

    #[test]
    fn mass_alternative() {
        let text = r#"
channel = "PFC"
axis = "p_tau"
range = [0.0, 1.0]
count = 3
alpha = 0.5
mass = 1.0
"#;
        let c = sweep(text);
        assert!((c.fixed_temperature().unwrap() - 1.0 / (8.0 * std::f64::consts::PI)).abs() < 1e-15);
    }

    #[test]
    fn figure_file() {
        match parse_config("figure = \"fig4\"\noutput_dir = \"out\"\n").unwrap() {
            ConfigFile::Figure { spec, output_dir } => {
                assert_eq!(spec.id, FigureId::Fig4);
                assert_eq!(output_dir, Some(PathBuf::from("out")));
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(parse_config("figure = \"fig9\"\n").is_err());
    }
}

//! Sweeps over one axis and their CSV/JSON encodings.

use rayon::prelude::*;
use serde_json::{json, Map, Value};

use crate::channels::{closed_form, ChannelKind};
use crate::entanglement::alpha_from_concurrence;
use crate::error::{Error, Result};
use crate::qmatrix::hs_norm;
use crate::qslt::{qslt_ratio, QsltResult};
use crate::quadrature::DEFAULT_TOLERANCE;
use crate::spacetime::{physical_state, Scenario};

use super::config::{Axis, ConfigError, SweepConfig};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub axis_value: f64,
    pub ratio: f64,
    pub distance: f64,
    pub path_length: f64,
    pub frozen: bool,
    /// False when the path-length quadrature did not converge; the row then
    /// carries the partial estimate.
    pub converged: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub axis: Axis,
    pub rows: Vec<SweepRow>,
}

/// `count` evenly spaced points from `lo` to `hi` inclusive.
pub fn linspace(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    match count {
        0 => vec![],
        1 => vec![lo],
        _ => (0..count)
            .map(|i| {
                if i == count - 1 {
                    hi
                } else {
                    lo + (hi - lo) * i as f64 / (count - 1) as f64
                }
            })
            .collect(),
    }
}

impl SweepRow {
    fn from_result(axis_value: f64, r: QsltResult) -> Self {
        Self {
            axis_value,
            ratio: r.ratio,
            distance: r.distance,
            path_length: r.path_length,
            frozen: r.frozen,
            converged: true,
        }
    }
}

fn evaluate_row(kind: ChannelKind, scenario: &Scenario, p_tau: f64, axis_value: f64) -> Result<SweepRow> {
    match qslt_ratio(kind, scenario, p_tau) {
        Ok(r) => Ok(SweepRow::from_result(axis_value, r)),
        Err(Error::QuadratureNoConvergence { partial, .. }) => {
            let initial = physical_state(scenario)?;
            let target = closed_form(kind, scenario, p_tau)?;
            let distance = hs_norm(&(initial.matrix() - target.matrix()));
            Ok(SweepRow {
                axis_value,
                ratio: distance / partial,
                distance,
                path_length: partial,
                frozen: false,
                converged: false,
            })
        }
        Err(e) => Err(e),
    }
}

/// Domain problems surface as `ConfigError`; numerical failures are kept
/// per row.
pub fn run_sweep(config: &SweepConfig) -> std::result::Result<Dataset, SweepError> {
    config.validate()?;
    let points = linspace(config.range[0], config.range[1], config.count);
    let kind = config.channel;
    let omega = config.omega;

    let rows = points
        .par_iter()
        .map(|&x| -> Result<SweepRow> {
            let (scenario, p_tau) = match config.axis {
                Axis::Temperature => (
                    Scenario::new(config.alpha.unwrap(), omega, x)?,
                    config.p_tau.unwrap(),
                ),
                Axis::PTau => (
                    Scenario::new(config.alpha.unwrap(), omega, temperature(config))?,
                    x,
                ),
                Axis::Alpha => (
                    Scenario::new(x, omega, temperature(config))?,
                    config.p_tau.unwrap(),
                ),
                Axis::Concurrence => {
                    let t = temperature(config);
                    let alpha = alpha_from_concurrence(x, omega, t, config.branch)?;
                    (Scenario::new(alpha, omega, t)?, config.p_tau.unwrap())
                }
            };
            evaluate_row(kind, &scenario, p_tau, x)
        })
        .collect::<Result<Vec<_>>>()?;

    Ok(Dataset {
        axis: config.axis,
        rows,
    })
}

fn temperature(config: &SweepConfig) -> f64 {
    config.fixed_temperature().expect("validated config")
}

#[derive(Debug, thiserror::Error)]
pub enum SweepError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Compute(#[from] Error),
}

/// Formats with 12 significant digits, shortest round-trip spelling.
pub fn format_number(x: f64) -> String {
    if !x.is_finite() {
        return if x.is_nan() { "nan".into() } else if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let rounded: f64 = format!("{x:.11e}").parse().expect("float formatting round-trips");
    if rounded == 0.0 {
        return "0".into();
    }
    let mag = rounded.abs();
    if !(1e-6..1e15).contains(&mag) {
        format!("{rounded:e}")
    } else {
        format!("{rounded}")
    }
}

fn flag(b: bool) -> &'static str {
    if b {
        "1"
    } else {
        "0"
    }
}

impl Dataset {
    pub fn to_csv(&self) -> String {
        let mut out = format!(
            "{},ratio,distance,path_length,frozen,converged\n",
            self.axis.column()
        );
        for r in &self.rows {
            out.push_str(&format!(
                "{},{},{},{},{},{}\n",
                format_number(r.axis_value),
                format_number(r.ratio),
                format_number(r.distance),
                format_number(r.path_length),
                flag(r.frozen),
                flag(r.converged),
            ));
        }
        out
    }

    pub fn to_json(&self) -> String {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|r| {
                json!({
                    self.axis.column(): r.axis_value,
                    "ratio": r.ratio,
                    "distance": r.distance,
                    "path_length": r.path_length,
                    "frozen": r.frozen,
                    "converged": r.converged,
                })
            })
            .collect();
        let mut s = serde_json::to_string_pretty(&Value::Array(rows)).expect("json");
        s.push('\n');
        s
    }
}

/// Flat manifest for a sweep. Keys come out sorted.
pub fn sweep_manifest(config: &SweepConfig, files: &[String]) -> Map<String, Value> {
    let mut m = Map::new();
    m.insert("kind".into(), json!("sweep"));
    m.insert("channel".into(), json!(config.channel.label()));
    m.insert("axis".into(), json!(config.axis.column()));
    m.insert("axis_range".into(), json!(config.range));
    m.insert("count".into(), json!(config.count));
    m.insert("omega".into(), json!(config.omega));
    m.insert("temperature".into(), json!(config.temperature.or_else(|| config.fixed_temperature().ok())));
    m.insert("mass".into(), json!(config.mass));
    m.insert("alpha".into(), json!(config.alpha));
    m.insert("branch".into(), json!(config.branch.to_string()));
    m.insert("p_tau".into(), json!(config.p_tau));
    let p_tau_grid = if config.axis == Axis::PTau {
        json!(linspace(config.range[0], config.range[1], config.count))
    } else {
        json!(config.p_tau.map(|p| vec![p]).unwrap_or_default())
    };
    m.insert("p_tau_grid".into(), p_tau_grid);
    m.insert("quadrature_tolerance".into(), json!(DEFAULT_TOLERANCE));
    m.insert("software_version".into(), json!(env!("CARGO_PKG_VERSION")));
    m.insert("files".into(), json!(files));
    m
}

pub fn manifest_to_string(m: &Map<String, Value>) -> String {
    let mut s = serde_json::to_string_pretty(m).expect("json");
    s.push('\n');
    s
}

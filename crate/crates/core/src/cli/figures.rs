//! Reproduction pipelines for the six published figures.
//!
//! Captions fix `ω = 1` throughout, `α = 1/4` for the temperature sweeps
//! (figs. 1–2) and `T = 3` for the concurrence figures (figs. 3–6). Panels
//! whose `p_τ` is not given in the text use representative values; the
//! manifest labels each panel's provenance.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};

use crate::channels::ChannelKind;
use crate::entanglement::{
    optimal_concurrence_with, ratio_vs_concurrence, Boundary, Branch, ConcurrenceMap,
    OptimizeOptions,
};
use crate::error::{Error, Result};
use crate::qslt::qslt_ratio;
use crate::quadrature::DEFAULT_TOLERANCE;
use crate::spacetime::Scenario;

use super::sweep::{format_number, linspace, manifest_to_string};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum FigureId {
    Fig1,
    Fig2,
    Fig3,
    Fig4,
    Fig5,
    Fig6,
}

impl FigureId {
    pub const ALL: [FigureId; 6] = [
        FigureId::Fig1,
        FigureId::Fig2,
        FigureId::Fig3,
        FigureId::Fig4,
        FigureId::Fig5,
        FigureId::Fig6,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            FigureId::Fig1 => "fig1",
            FigureId::Fig2 => "fig2",
            FigureId::Fig3 => "fig3",
            FigureId::Fig4 => "fig4",
            FigureId::Fig5 => "fig5",
            FigureId::Fig6 => "fig6",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Panel {
    pub label: char,
    pub p_tau: f64,
    /// `p_τ` stated in the source text, as opposed to a representative pick.
    pub stated: bool,
}

const fn panel(label: char, p_tau: f64, stated: bool) -> Panel {
    Panel { label, p_tau, stated }
}

#[derive(Debug, Clone, PartialEq)]
pub enum FigureKind {
    RatioVsTemperature {
        alpha: f64,
        t_range: [f64; 2],
        count: usize,
        panels: Vec<Panel>,
    },
    RatioVsConcurrence {
        temperature: f64,
        count: usize,
        panels: Vec<Panel>,
    },
    OptimalConcurrence {
        temperature: f64,
        p_tau_grid: Vec<f64>,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct FigureSpec {
    pub id: FigureId,
    pub channel: ChannelKind,
    pub omega: f64,
    pub branch: Branch,
    pub kind: FigureKind,
}

pub const TEMPERATURE_RANGE: [f64; 2] = [0.1, 10.0];
pub const TEMPERATURE_POINTS: usize = 200;
pub const CONCURRENCE_POINTS: usize = 201;
pub const P_TAU_POINTS: usize = 101;

impl FigureSpec {
    pub fn new(id: FigureId) -> Self {
        let temperature_sweep = |panels: Vec<Panel>| FigureKind::RatioVsTemperature {
            alpha: 0.25,
            t_range: TEMPERATURE_RANGE,
            count: TEMPERATURE_POINTS,
            panels,
        };
        let concurrence_sweep = |panels: Vec<Panel>| FigureKind::RatioVsConcurrence {
            temperature: 3.0,
            count: CONCURRENCE_POINTS,
            panels,
        };
        let optimal = || FigureKind::OptimalConcurrence {
            temperature: 3.0,
            p_tau_grid: linspace(0.0, 1.0, P_TAU_POINTS),
        };
        let (channel, kind) = match id {
            FigureId::Fig1 => (
                ChannelKind::Dpc,
                temperature_sweep(vec![
                    panel('a', 0.1, false),
                    panel('b', 0.3, false),
                    panel('c', 0.6, true),
                    panel('d', 0.8, true),
                ]),
            ),
            FigureId::Fig2 => (
                ChannelKind::Bfc,
                temperature_sweep(vec![
                    panel('a', 0.1, false),
                    panel('b', 0.3, false),
                    panel('c', 0.5, false),
                    panel('d', 0.8, false),
                ]),
            ),
            FigureId::Fig3 => (
                ChannelKind::Dpc,
                concurrence_sweep(vec![
                    panel('a', 0.01, true),
                    panel('b', 0.3, false),
                    panel('c', 0.6, true),
                    panel('d', 0.8, true),
                ]),
            ),
            FigureId::Fig4 => (ChannelKind::Dpc, optimal()),
            FigureId::Fig5 => (
                ChannelKind::Bfc,
                concurrence_sweep(vec![
                    panel('a', 0.3, false),
                    panel('b', 0.62, false),
                    panel('c', 0.7, false),
                    panel('d', 0.8, false),
                ]),
            ),
            FigureId::Fig6 => (ChannelKind::Bfc, optimal()),
        };
        Self {
            id,
            channel,
            omega: 1.0,
            branch: Branch::Lower,
            kind,
        }
    }
}

/// Named CSV tables plus the manifest, before anything touches the disk.
#[derive(Debug, Clone, PartialEq)]
pub struct FigureData {
    pub tables: Vec<(String, String)>,
    pub manifest: Map<String, Value>,
}

fn ratio_table(header: &str, rows: &[(f64, f64, f64, f64, bool)]) -> String {
    let mut out = format!("{header},ratio,distance,path_length,frozen\n");
    for &(x, ratio, distance, path, frozen) in rows {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            format_number(x),
            format_number(ratio),
            format_number(distance),
            format_number(path),
            u8::from(frozen)
        ));
    }
    out
}

fn panel_manifest(m: &mut Map<String, Value>, panels: &[Panel]) {
    m.insert("panel_labels".into(), json!(panels.iter().map(|p| p.label.to_string()).collect::<Vec<_>>()));
    m.insert("p_tau_grid".into(), json!(panels.iter().map(|p| p.p_tau).collect::<Vec<_>>()));
    m.insert(
        "p_tau_provenance".into(),
        json!(panels
            .iter()
            .map(|p| if p.stated { "stated" } else { "representative" })
            .collect::<Vec<_>>()),
    );
}

pub fn compute_figure(spec: &FigureSpec) -> Result<FigureData> {
    let name = spec.id.name();
    let mut m = Map::new();
    m.insert("figure".into(), json!(name));
    m.insert("channel".into(), json!(spec.channel.label()));
    m.insert("omega".into(), json!(spec.omega));
    m.insert("branch".into(), json!(spec.branch.to_string()));
    m.insert("mass".into(), Value::Null);
    m.insert("quadrature_tolerance".into(), json!(DEFAULT_TOLERANCE));
    m.insert("software_version".into(), json!(env!("CARGO_PKG_VERSION")));

    let mut tables = Vec::new();
    match &spec.kind {
        FigureKind::RatioVsTemperature {
            alpha,
            t_range,
            count,
            panels,
        } => {
            let temps = linspace(t_range[0], t_range[1], *count);
            for p in panels {
                let rows = temps
                    .iter()
                    .map(|&t| {
                        let r = qslt_ratio(spec.channel, &Scenario::new(*alpha, spec.omega, t)?, p.p_tau)?;
                        Ok((t, r.ratio, r.distance, r.path_length, r.frozen))
                    })
                    .collect::<Result<Vec<_>>>()?;
                tables.push((format!("{name}_{}.csv", p.label), ratio_table("temperature", &rows)));
            }
            m.insert("axis".into(), json!("temperature"));
            m.insert("axis_range".into(), json!(t_range));
            m.insert("count".into(), json!(count));
            m.insert("alpha".into(), json!(alpha));
            m.insert("temperature".into(), Value::Null);
            panel_manifest(&mut m, panels);
        }
        FigureKind::RatioVsConcurrence {
            temperature,
            count,
            panels,
        } => {
            let c_max = ConcurrenceMap::new(spec.omega, *temperature, spec.branch)?.c_max();
            let grid = linspace(0.0, c_max, *count);
            for p in panels {
                let points =
                    ratio_vs_concurrence(spec.channel, spec.omega, *temperature, p.p_tau, &grid, spec.branch)?;
                let rows: Vec<_> = points
                    .iter()
                    .map(|pt| {
                        let r = pt.result;
                        (pt.concurrence, r.ratio, r.distance, r.path_length, r.frozen)
                    })
                    .collect();
                tables.push((format!("{name}_{}.csv", p.label), ratio_table("concurrence", &rows)));
            }
            m.insert("axis".into(), json!("concurrence"));
            m.insert("axis_range".into(), json!([0.0, c_max]));
            m.insert("count".into(), json!(count));
            m.insert("c_max".into(), json!(c_max));
            m.insert("temperature".into(), json!(temperature));
            m.insert("alpha".into(), Value::Null);
            panel_manifest(&mut m, panels);
        }
        FigureKind::OptimalConcurrence {
            temperature,
            p_tau_grid,
        } => {
            let options = OptimizeOptions {
                branch: spec.branch,
                ..OptimizeOptions::default()
            };
            let mut csv = String::from("p_tau,c_op,ratio_min,c_max,at_zero,at_cmax\n");
            for &p in p_tau_grid {
                let r = optimal_concurrence_with(spec.channel, spec.omega, *temperature, p, options)?;
                csv.push_str(&format!(
                    "{},{},{},{},{},{}\n",
                    format_number(p),
                    format_number(r.c_op),
                    format_number(r.ratio_min),
                    format_number(r.c_max),
                    u8::from(r.boundary == Boundary::AtZero),
                    u8::from(r.boundary == Boundary::AtCmax),
                ));
            }
            tables.push((format!("{name}.csv"), csv));
            m.insert("axis".into(), json!("p_tau"));
            m.insert("p_tau_grid".into(), json!(p_tau_grid));
            m.insert("temperature".into(), json!(temperature));
            m.insert("alpha".into(), Value::Null);
            m.insert("grid_resolution".into(), json!(options.grid_points));
            m.insert("refinement_tolerance".into(), json!(options.refinement_width));
        }
    }
    m.insert(
        "files".into(),
        json!(tables.iter().map(|(f, _)| f.clone()).collect::<Vec<_>>()),
    );
    Ok(FigureData { tables, manifest: m })
}

#[derive(Debug, thiserror::Error)]
pub enum ReproduceError {
    #[error(transparent)]
    Compute(#[from] Error),
    #[error("cannot write {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

fn write(path: &Path, contents: &str) -> std::result::Result<(), ReproduceError> {
    fs::write(path, contents).map_err(|source| ReproduceError::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Computes a figure and writes its CSV panels and `<fig>_manifest.json`
/// into `dir`. Returns the written paths.
pub fn reproduce(spec: &FigureSpec, dir: &Path) -> std::result::Result<Vec<PathBuf>, ReproduceError> {
    let data = compute_figure(spec)?;
    fs::create_dir_all(dir).map_err(|source| ReproduceError::Io {
        path: dir.to_path_buf(),
        source,
    })?;
    let mut written = Vec::new();
    for (name, csv) in &data.tables {
        let path = dir.join(name);
        write(&path, csv)?;
        written.push(path);
    }
    let path = dir.join(format!("{}_manifest.json", spec.id.name()));
    write(&path, &manifest_to_string(&data.manifest))?;
    written.push(path);
    Ok(written)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn captions_are_baked_in() {
        for id in FigureId::ALL {
            let spec = FigureSpec::new(id);
            assert_eq!(spec.omega, 1.0);
            match (&spec.kind, id) {
                (FigureKind::RatioVsTemperature { alpha, panels, .. }, FigureId::Fig1 | FigureId::Fig2) => {
                    assert_eq!(*alpha, 0.25);
                    assert_eq!(panels.len(), 4);
                }
                (FigureKind::RatioVsConcurrence { temperature, panels, .. }, FigureId::Fig3 | FigureId::Fig5) => {
                    assert_eq!(*temperature, 3.0);
                    assert_eq!(panels.len(), 4);
                }
                (FigureKind::OptimalConcurrence { temperature, .. }, FigureId::Fig4 | FigureId::Fig6) => {
                    assert_eq!(*temperature, 3.0);
                }
                (kind, id) => panic!("{id:?} has unexpected layout {kind:?}"),
            }
        }
        assert_eq!(FigureSpec::new(FigureId::Fig1).channel, ChannelKind::Dpc);
        assert_eq!(FigureSpec::new(FigureId::Fig5).channel, ChannelKind::Bfc);
    }

    #[test]
    fn stated_panels_match_text() {
        let FigureKind::RatioVsTemperature { panels, .. } = FigureSpec::new(FigureId::Fig1).kind else {
            unreachable!()
        };
        let stated: Vec<f64> = panels.iter().filter(|p| p.stated).map(|p| p.p_tau).collect();
        assert_eq!(stated, vec![0.6, 0.8]);
    }
}

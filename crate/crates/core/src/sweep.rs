//! Parameter sweeps over one axis of an experiment.
//!
//! A sweep file is TOML:
//!
//! ```toml
//! experiment = "single-berry"
//!
//! [base]
//! gate = "pi8"
//!
//! [axis]
//! name = "slowness"
//! values = [0.1, 0.01, 0.001]
//! ```
//!
//! `base` takes the same keys as [`ExperimentParams`]. Grid points run in
//! parallel; results keep the order of `values`.

use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::experiments::{run_experiment, ExperimentId, ExperimentParams};
use crate::report::ExperimentReport;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Axis {
    Slowness,
    J,
    Omega,
    Steps,
}

impl Axis {
    pub fn parse(name: &str) -> Result<Self> {
        match name {
            "slowness" => Ok(Axis::Slowness),
            "J" | "j" => Ok(Axis::J),
            "omega" => Ok(Axis::Omega),
            "steps" => Ok(Axis::Steps),
            _ => Err(Error::InvalidAxis(format!("unknown axis '{name}' (expected slowness, J, omega or steps)"))),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Axis::Slowness => "slowness",
            Axis::J => "J",
            Axis::Omega => "omega",
            Axis::Steps => "steps",
        }
    }

    fn apply(self, base: &ExperimentParams, value: f64) -> Result<ExperimentParams> {
        let mut p = base.clone();
        match self {
            Axis::Slowness => p.slowness = value,
            Axis::J => p.j = value,
            Axis::Omega => p.omega = value,
            Axis::Steps => {
                if value < 1.0 || value.fract() != 0.0 {
                    return Err(Error::InvalidAxis(format!("steps value {value} is not a positive integer")));
                }
                p.steps = Some(value as usize);
            }
        }
        Ok(p)
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AxisSpec {
    pub name: String,
    #[serde(default)]
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub experiment: String,
    #[serde(default)]
    pub base: ExperimentParams,
    pub axis: AxisSpec,
}

impl SweepConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::InvalidConfig(format!("sweep file: {e}")))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path)
            .map_err(|e| Error::InvalidConfig(format!("cannot read {}: {e}", path.display())))?;
        Self::from_toml(&text)
    }
}

/// One row of the aggregate CSV.
#[derive(Debug, Clone, Serialize)]
pub struct SweepRow {
    pub point: usize,
    pub experiment_id: String,
    pub axis: &'static str,
    pub value: f64,
    pub pass: bool,
    pub gate_error: Option<f64>,
    pub geometric_phase_1: Option<f64>,
    pub max_abs_dgamma_dj: Option<f64>,
    pub factorization_defect: Option<f64>,
    pub wall_time: f64,
}

#[derive(Debug, Clone)]
pub struct SweepOutcome {
    pub axis: Axis,
    pub reports: Vec<ExperimentReport>,
    pub rows: Vec<SweepRow>,
}

impl SweepOutcome {
    pub fn pass(&self) -> bool {
        self.reports.iter().all(|r| r.pass)
    }

    /// Writes one JSON report per point and `sweep.csv` into `dir`.
    pub fn write_to(&self, dir: &Path) -> Result<Vec<PathBuf>> {
        let io = |e: std::io::Error| Error::InvalidConfig(format!("cannot write to {}: {e}", dir.display()));
        let mut paths = Vec::new();
        for (k, r) in self.reports.iter().enumerate() {
            paths.push(r.write_to(dir, &format!("_point{k:03}")).map_err(io)?);
        }
        let csv_path = dir.join("sweep.csv");
        let mut w = csv::Writer::from_path(&csv_path).map_err(|e| Error::InvalidConfig(e.to_string()))?;
        for row in &self.rows {
            w.serialize(row).map_err(|e| Error::InvalidConfig(e.to_string()))?;
        }
        w.flush().map_err(io)?;
        paths.push(csv_path);
        Ok(paths)
    }
}

pub fn run_sweep(config: &SweepConfig) -> Result<SweepOutcome> {
    let id: ExperimentId = config.experiment.parse()?;
    let axis = Axis::parse(&config.axis.name)?;
    if config.axis.values.is_empty() {
        return Err(Error::InvalidAxis(format!("axis '{}' has no values", config.axis.name)));
    }
    let points: Vec<ExperimentParams> =
        config.axis.values.iter().map(|&v| axis.apply(&config.base, v)).collect::<Result<_>>()?;
    let reports: Vec<ExperimentReport> = points.par_iter().map(|p| run_experiment(id, p)).collect::<Result<_>>()?;
    let rows = reports
        .iter()
        .zip(&config.axis.values)
        .enumerate()
        .map(|(point, (r, &value))| SweepRow {
            point,
            experiment_id: r.experiment_id.clone(),
            axis: axis.name(),
            value,
            pass: r.pass,
            gate_error: r.scalar("gate_error"),
            geometric_phase_1: r.scalar("geometric_phase_1"),
            max_abs_dgamma_dj: r.scalar("max_abs_dgamma_dj"),
            factorization_defect: r.scalar("factorization_defect"),
            wall_time: r.wall_time,
        })
        .collect();
    Ok(SweepOutcome { axis, reports, rows })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_and_unknown_axes_are_rejected() {
        let empty = SweepConfig::from_toml("experiment = \"hybrid-cnot\"\n[axis]\nname = \"J\"\nvalues = []").unwrap();
        assert!(matches!(run_sweep(&empty), Err(Error::InvalidAxis(_))));
        let unknown = SweepConfig::from_toml("experiment = \"hybrid-cnot\"\n[axis]\nname = \"B7\"\nvalues = [1.0]").unwrap();
        assert!(matches!(run_sweep(&unknown), Err(Error::InvalidAxis(_))));
        let bad_steps = SweepConfig::from_toml("experiment = \"single-aa\"\n[axis]\nname = \"steps\"\nvalues = [2.5]").unwrap();
        assert!(matches!(run_sweep(&bad_steps), Err(Error::InvalidAxis(_))));
    }

    #[test]
    fn j_axis_on_unequal_aa_changes_geometric_phase() {
        let cfg = SweepConfig::from_toml(
            "experiment = \"two-aa\"\n[base]\nkappa_alpha = 1.0\nkappa_beta = 2.0\n[axis]\nname = \"J\"\nvalues = [0.5, 1.0, 1.5]",
        )
        .unwrap();
        let out = run_sweep(&cfg).unwrap();
        let g: Vec<f64> = out.rows.iter().map(|r| r.geometric_phase_1.unwrap()).collect();
        assert!((g[0] - g[1]).abs() > 1e-3 && (g[1] - g[2]).abs() > 1e-3, "{g:?}");
        let dir = tempfile::tempdir().unwrap();
        let paths = out.write_to(dir.path()).unwrap();
        assert_eq!(paths.len(), 4);
        let csv = fs::read_to_string(dir.path().join("sweep.csv")).unwrap();
        assert!(csv.starts_with("point,experiment_id,axis,value,pass,gate_error"));
    }
}

//! Experiment configuration: one JSON document holding the controller, the
//! plant, the run settings and an optional sweep grid.
//!
//! ```json
//! {
//!   "controller": {
//!     "mode": "mamdani",
//!     "grid_points": 1001,
//!     "clamp_inputs": true,
//!     "inputs": [
//!       { "name": "phi", "z_max": 1.0, "labels": ["N", "Z", "P"] },
//!       { "name": "phidot", "z_max": 1.0, "labels": ["N", "Z", "P"] }
//!     ],
//!     "output": { "name": "u", "z_max": 1.0, "labels": ["N", "Z", "P"] },
//!     "rules": "principles_3x3"
//!   },
//!   "plant": { "l": 1.0, "g": 1.0, "damping": 0.0, "accel_gain": 0.5, "dt_per_period": 1000 },
//!   "run": { "phi0": 0.1, "phidot0": 0.0, "horizon_periods": 10,
//!            "settle_fraction": 0.05, "phi_scale": 0.3, "phidot_scale": 0.05 },
//!   "sweep": { "lengths": "default" }
//! }
//! ```
//!
//! `rules` is either a built-in name (`"table_I"`, `"principles_3x3"`) or
//! `{ "table": "<rule-table text>" }`. Term widths are never stored; they
//! follow from the term spacing.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::inference::{Engine, EngineOptions, InferenceMode, DEFAULT_GRID_POINTS};
use crate::membership::Partition;
use crate::plant::PlantParams;
use crate::rulebase::{RuleBase, RuleLabels};
use crate::simulation::{default_length_grid, RunConfig, DEFAULT_PHIDOT_SCALE, DEFAULT_PHI_SCALE};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PartitionSpec {
    pub name: String,
    pub z_max: f64,
    pub labels: Vec<String>,
}

impl PartitionSpec {
    pub fn new(name: &str, z_max: f64, labels: &[&str]) -> Self {
        PartitionSpec {
            name: name.into(),
            z_max,
            labels: labels.iter().map(|s| s.to_string()).collect(),
        }
    }

    pub fn build(&self) -> Result<Partition> {
        Partition::uniform(self.name.as_str(), self.z_max, &self.labels)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RulesSpec {
    Builtin(String),
    Inline { table: String },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ControllerConfig {
    #[serde(default)]
    pub mode: InferenceMode,
    #[serde(default = "default_grid_points")]
    pub grid_points: usize,
    #[serde(default = "yes")]
    pub clamp_inputs: bool,
    pub inputs: Vec<PartitionSpec>,
    pub output: PartitionSpec,
    pub rules: RulesSpec,
}

fn default_grid_points() -> usize {
    DEFAULT_GRID_POINTS
}

fn yes() -> bool {
    true
}

impl Default for ControllerConfig {
    fn default() -> Self {
        let nzp = ["N", "Z", "P"];
        ControllerConfig {
            mode: InferenceMode::Mamdani,
            grid_points: DEFAULT_GRID_POINTS,
            clamp_inputs: true,
            inputs: vec![
                PartitionSpec::new("phi", 1.0, &nzp),
                PartitionSpec::new("phidot", 1.0, &nzp),
            ],
            output: PartitionSpec::new("u", 1.0, &nzp),
            rules: RulesSpec::Builtin("principles_3x3".into()),
        }
    }
}

impl ControllerConfig {
    pub fn build(&self) -> Result<Engine> {
        let [phi, phidot] = self.inputs.as_slice() else {
            return Err(Error::config(
                "controller.inputs",
                format!("expected 2 input partitions, got {}", self.inputs.len()),
            ));
        };
        let phi = phi
            .build()
            .map_err(|e| Error::config("controller.inputs[0]", e.to_string()))?;
        let phidot = phidot
            .build()
            .map_err(|e| Error::config("controller.inputs[1]", e.to_string()))?;
        let output = self
            .output
            .build()
            .map_err(|e| Error::config("controller.output", e.to_string()))?;
        let rules = match &self.rules {
            RulesSpec::Builtin(name) => RuleBase::builtin(name).ok_or_else(|| {
                Error::config(
                    "controller.rules",
                    format!("unknown built-in rule base {name:?} (expected \"table_I\" or \"principles_3x3\")"),
                )
            })?,
            RulesSpec::Inline { table } => {
                let labels = RuleLabels {
                    rows: phi.labels().map(String::from).collect(),
                    cols: phidot.labels().map(String::from).collect(),
                    outs: output.labels().map(String::from).collect(),
                };
                RuleBase::parse(table, &labels)
                    .map_err(|e| Error::config("controller.rules.table", e.to_string()))?
                    .0
            }
        };
        let options = EngineOptions {
            mode: self.mode,
            grid_points: self.grid_points,
            clamp_inputs: self.clamp_inputs,
        };
        Engine::new(phi, phidot, output, rules, options).map_err(|e| {
            let field = if e.to_string().contains("grid_points") {
                "controller.grid_points"
            } else {
                "controller.rules"
            };
            Error::config(field, e.to_string())
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunSection {
    pub phi0: f64,
    pub phidot0: f64,
    pub horizon_periods: f64,
    pub settle_fraction: f64,
    pub phi_scale: f64,
    pub phidot_scale: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dt: Option<f64>,
}

impl Default for RunSection {
    fn default() -> Self {
        RunSection {
            phi0: 0.1,
            phidot0: 0.0,
            horizon_periods: 10.0,
            settle_fraction: 0.05,
            phi_scale: DEFAULT_PHI_SCALE,
            phidot_scale: DEFAULT_PHIDOT_SCALE,
            dt: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Lengths {
    /// Only `"default"` is accepted.
    Named(String),
    List(Vec<f64>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSection {
    pub lengths: Lengths,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default)]
    pub controller: ControllerConfig,
    #[serde(default)]
    pub plant: PlantParams,
    #[serde(default)]
    pub run: RunSection,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepSection>,
}

impl ExperimentConfig {
    /// Parses and validates. Errors name the offending field path.
    pub fn from_json(text: &str) -> Result<Self> {
        let de = &mut serde_json::Deserializer::from_str(text);
        let cfg: ExperimentConfig = serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            let field = if path == "." { "<root>".to_string() } else { path };
            Error::config(field, e.into_inner().to_string())
        })?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_json(&text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    pub fn validate(&self) -> Result<()> {
        self.controller.build()?;
        self.plant.validate().map_err(|e| in_section("plant", e))?;
        let run = self.run_config();
        // Plant problems were reported above; what is left belongs to `run`.
        run.validate().map_err(|e| in_section("run", e))?;
        self.lengths()?;
        Ok(())
    }

    pub fn engine(&self) -> Result<Engine> {
        self.controller.build()
    }

    pub fn run_config(&self) -> RunConfig {
        let r = &self.run;
        RunConfig {
            plant: self.plant,
            phi0: r.phi0,
            phidot0: r.phidot0,
            horizon_periods: r.horizon_periods,
            dt: r.dt,
            settle_fraction: r.settle_fraction,
            phi_scale: r.phi_scale,
            phidot_scale: r.phidot_scale,
        }
    }

    /// Sweep grid; the default grid when no sweep block is given.
    pub fn lengths(&self) -> Result<Vec<f64>> {
        match self.sweep.as_ref().map(|s| &s.lengths) {
            None => Ok(default_length_grid()),
            Some(Lengths::Named(n)) if n == "default" => Ok(default_length_grid()),
            Some(Lengths::Named(n)) => Err(Error::config(
                "sweep.lengths",
                format!("expected \"default\" or a list of lengths, got {n:?}"),
            )),
            Some(Lengths::List(v)) => {
                if v.is_empty() {
                    return Err(Error::config("sweep.lengths", "empty length list"));
                }
                if let Some(bad) = v.iter().find(|l| !(**l > 0.0 && l.is_finite())) {
                    return Err(Error::config(
                        "sweep.lengths",
                        format!("lengths must be positive, got {bad}"),
                    ));
                }
                Ok(v.clone())
            }
        }
    }
}

/// Attaches `section.<field>` to a validation error whose message starts
/// with the field name.
fn in_section(section: &str, e: Error) -> Error {
    match e {
        Error::InvalidArgument(msg) => {
            let field = msg.split_whitespace().next().unwrap_or_default();
            Error::config(format!("{section}.{field}"), msg)
        }
        other => other,
    }
}

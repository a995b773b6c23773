//! Run configuration: one JSON document, with command-line flags layered on
//! top.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use fluctua_core::oracle::OracleConfig;
use fluctua_core::presets;
use fluctua_core::{Geometry, ModelParams, PhysicalConstants, SolverSettings};

use crate::error::CliError;

/// Linear temperature (or thickness) grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Grid {
    pub start: f64,
    pub stop: f64,
    pub count: usize,
}

impl Grid {
    /// Parses `start,stop,count`.
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let parts: Vec<&str> = text.split(',').map(str::trim).collect();
        if parts.len() != 3 {
            return Err(CliError::validation(format!(
                "grid must be start,stop,count; got {text:?}"
            )));
        }
        let num = |s: &str| {
            s.parse::<f64>()
                .map_err(|_| CliError::validation(format!("bad grid bound {s:?}")))
        };
        let count = parts[2]
            .parse::<usize>()
            .map_err(|_| CliError::validation(format!("bad grid count {:?}", parts[2])))?;
        let grid = Grid {
            start: num(parts[0])?,
            stop: num(parts[1])?,
            count,
        };
        grid.validate()?;
        Ok(grid)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if !(self.start.is_finite() && self.stop.is_finite()) {
            return Err(CliError::validation("grid bounds must be finite"));
        }
        if self.count < 2 {
            return Err(CliError::validation(format!("grid count must be at least 2, got {}", self.count)));
        }
        if !(self.stop > self.start) {
            return Err(CliError::validation(format!(
                "grid must be strictly increasing, got start {} and stop {}",
                self.start, self.stop
            )));
        }
        Ok(())
    }

    pub fn points(&self) -> Vec<f64> {
        let step = (self.stop - self.start) / (self.count - 1) as f64;
        (0..self.count)
            .map(|i| {
                if i + 1 == self.count {
                    self.stop
                } else {
                    self.start + i as f64 * step
                }
            })
            .collect()
    }
}

/// Everything a command may need. All fields are optional in JSON; each
/// command checks for the ones it uses.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    pub preset: Option<String>,
    pub params: Option<ModelParams>,
    pub constants: Option<PhysicalConstants>,
    pub settings: SolverSettings,
    pub grid: Option<Grid>,
    pub observable: Option<String>,
    pub dim: Option<u32>,
    pub geometry: Option<Geometry>,
    /// Explicit film thicknesses for `film`; takes precedence over `grid`.
    pub l0_values: Option<Vec<f64>>,
    pub oracle: OracleConfig,
    pub out: Option<PathBuf>,
}

/// Parameters after the preset, config and flags have been merged.
#[derive(Debug, Clone, Copy)]
pub struct Resolved {
    pub params: ModelParams,
    pub constants: PhysicalConstants,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::io(format!("{}: {e}", path.display())))?;
        serde_json::from_str(&text)
            .map_err(|e| CliError::validation(format!("{}: {e}", path.display())))
    }

    /// `--preset` beats the config's `params`, which beat the config's
    /// `preset`.
    pub fn resolve(&self, preset_flag: Option<&str>) -> Result<Resolved, CliError> {
        let (params, preset_constants) = match (preset_flag, &self.params, &self.preset) {
            (Some(name), _, _) => from_preset(name)?,
            (None, Some(p), _) => (*p, None),
            (None, None, Some(name)) => from_preset(name)?,
            (None, None, None) => {
                return Err(CliError::validation(
                    "no parameters: pass --preset or give \"params\" or \"preset\" in --config",
                ))
            }
        };
        params.validate()?;
        let constants = self.constants.or(preset_constants).unwrap_or_default();
        constants.validate()?;
        self.settings.validate()?;
        Ok(Resolved { params, constants })
    }
}

fn from_preset(name: &str) -> Result<(ModelParams, Option<PhysicalConstants>), CliError> {
    let p = presets::load(name)?;
    Ok((p.params, Some(p.constants)))
}

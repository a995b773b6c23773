//! Shipped parameter sets.
//!
//! Each preset stores the model parameters, physical constants and the
//! Ginzburg width its `u0` was calibrated to. The JSON files are compiled
//! into the library; setting `FLUCTUA_PRESET_DIR` makes the loader look for
//! `<dir>/<name>.json` first.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{ModelParams, PhysicalConstants};

/// Environment variable that overrides the preset search path.
pub const PRESET_DIR_ENV: &str = "FLUCTUA_PRESET_DIR";

const EMBEDDED: [(&str, &str); 4] = [
    ("toy3d", include_str!("../presets/toy3d.json")),
    ("conventional-sc", include_str!("../presets/conventional-sc.json")),
    ("cuprate", include_str!("../presets/cuprate.json")),
    ("thinfilm-ferroelectric", include_str!("../presets/thinfilm-ferroelectric.json")),
];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Preset {
    pub name: String,
    #[serde(default)]
    pub description: String,
    pub params: ModelParams,
    #[serde(default)]
    pub constants: PhysicalConstants,
    /// `Δt_G` that `params.u0` reproduces.
    pub target_width: f64,
}

impl Preset {
    pub fn from_json(text: &str) -> Result<Self> {
        let preset: Preset = serde_json::from_str(text).map_err(|e| Error::invalid(e.to_string()))?;
        preset.params.validate()?;
        preset.constants.validate()?;
        Ok(preset)
    }
}

fn override_dir() -> Option<PathBuf> {
    std::env::var_os(PRESET_DIR_ENV).map(PathBuf::from)
}

fn load_file(path: &Path) -> Result<Preset> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    Preset::from_json(&text)
}

/// Loads a preset, preferring `$FLUCTUA_PRESET_DIR/<name>.json`.
pub fn load(name: &str) -> Result<Preset> {
    if let Some(dir) = override_dir() {
        let path = dir.join(format!("{name}.json"));
        if path.is_file() {
            return load_file(&path);
        }
    }
    load_builtin(name)
}

/// Loads one of the compiled-in presets, ignoring the environment.
pub fn load_builtin(name: &str) -> Result<Preset> {
    let (_, text) = EMBEDDED
        .iter()
        .find(|(n, _)| *n == name)
        .ok_or_else(|| Error::invalid(format!("unknown preset {name:?}; known: {}", builtin_names().join(", "))))?;
    Preset::from_json(text)
}

pub fn builtin_names() -> Vec<&'static str> {
    EMBEDDED.iter().map(|(n, _)| *n).collect()
}

/// Built-in names plus any `*.json` in the override directory, sorted and
/// de-duplicated.
pub fn list() -> Result<Vec<String>> {
    let mut names: Vec<String> = builtin_names().into_iter().map(String::from).collect();
    if let Some(dir) = override_dir() {
        if dir.is_dir() {
            for entry in std::fs::read_dir(&dir)? {
                let path = entry?.path();
                if path.extension().is_some_and(|e| e == "json") {
                    if let Some(stem) = path.file_stem().and_then(|s| s.to_str()) {
                        names.push(stem.to_string());
                    }
                }
            }
        }
    }
    names.sort();
    names.dedup();
    Ok(names)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::selfconsist::{solve_critical_point, SolverSettings};

    #[test]
    fn builtins_parse_and_match_their_names() {
        for name in builtin_names() {
            let p = load_builtin(name).unwrap();
            assert_eq!(p.name, name);
            assert!(p.target_width > 0.0 && p.target_width < 1.0);
        }
    }

    #[test]
    fn builtins_reproduce_their_width() {
        for name in builtin_names() {
            let p = load_builtin(name).unwrap();
            let cp = solve_critical_point(&p.params, &SolverSettings::default()).unwrap();
            let rel = ((cp.ginzburg_width - p.target_width) / p.target_width).abs();
            assert!(rel < 1e-6, "{name}: width {} vs {}", cp.ginzburg_width, p.target_width);
        }
    }

    #[test]
    fn unknown_preset_is_an_error() {
        assert!(matches!(load_builtin("nope"), Err(Error::Invalid(_))));
    }

    #[test]
    fn unknown_keys_rejected() {
        let mut v: serde_json::Value = serde_json::from_str(EMBEDDED[0].1).unwrap();
        v["extra"] = serde_json::json!(1);
        assert!(Preset::from_json(&v.to_string()).is_err());
    }
}

//! GA configuration files (TOML, one key per [`GaConfig`] field) and the
//! bundled per-instance overrides.

use std::collections::BTreeMap;
use std::path::Path;

use serde::Deserialize;
use wastecol_core::ga::GaConfig;

use crate::error::{read_to_string, Error, Result};

/// Environment variable naming a default config file.
pub const CONFIG_ENV: &str = "WASTECOL_CONFIG";

const BUNDLED: &str = include_str!("../configs/instances.toml");

pub fn parse_config(text: &str) -> Result<GaConfig> {
    let cfg: GaConfig = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
    cfg.validate()?;
    Ok(cfg)
}

pub fn load_config(path: &Path) -> Result<GaConfig> {
    parse_config(&read_to_string(path)?).map_err(|e| match e {
        Error::Config(msg) => Error::Config(format!("{}: {msg}", path.display())),
        other => other,
    })
}

pub fn config_to_toml(cfg: &GaConfig) -> String {
    toml::to_string(cfg).expect("GaConfig always serialises")
}

/// Partial config: only the keys present override a base config.
#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Overrides {
    pub generations: Option<usize>,
    pub lambda: Option<f64>,
    pub gamma: Option<f64>,
}

impl Overrides {
    pub fn apply(&self, cfg: &mut GaConfig) {
        if let Some(g) = self.generations {
            cfg.generations = g;
        }
        if let Some(l) = self.lambda {
            cfg.lambda = l;
        }
        if let Some(g) = self.gamma {
            cfg.gamma = g;
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct Bundled {
    instances: BTreeMap<String, Overrides>,
}

/// Per-instance settings used for the published large-instance runs.
pub fn bundled_overrides() -> BTreeMap<String, Overrides> {
    toml::from_str::<Bundled>(BUNDLED).expect("bundled config is valid").instances
}

pub fn instance_overrides(name: &str) -> Option<Overrides> {
    bundled_overrides().remove(name)
}

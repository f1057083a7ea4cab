//! Run configuration shared by the engine and the command line.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::num::{q, QJson, Q};

pub const DEFAULT_HORIZON: u64 = 1_000_000;
pub const MIN_HORIZON: u64 = 1_000;
pub const HORIZON_ENV: &str = "IDEALSTAT_HORIZON";

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Json,
    Csv,
    Table,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub horizon: u64,
    pub eps_grid: Vec<QJson>,
    pub delta_grid: Vec<QJson>,
    /// Only `"exact"` is supported.
    pub arithmetic: String,
    pub format: OutputFormat,
    pub corpus: Option<PathBuf>,
}

/// `{1/m : m = 1..=20}`.
pub fn default_grid() -> Vec<QJson> {
    (1..=20).map(|m| QJson(q(1, m))).collect()
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            horizon: DEFAULT_HORIZON,
            eps_grid: default_grid(),
            delta_grid: default_grid(),
            arithmetic: "exact".into(),
            format: OutputFormat::Json,
            corpus: None,
        }
    }
}

impl RunConfig {
    pub fn with_horizon(horizon: u64) -> Self {
        RunConfig { horizon, ..RunConfig::default() }
    }

    pub fn validate(&self) -> Result<()> {
        if self.horizon < MIN_HORIZON {
            return Err(Error::Validation(format!("horizon {} is below {MIN_HORIZON}", self.horizon)));
        }
        for (name, grid) in [("eps_grid", &self.eps_grid), ("delta_grid", &self.delta_grid)] {
            if grid.is_empty() {
                return Err(Error::Validation(format!("{name} is empty")));
            }
            if let Some(bad) = grid.iter().find(|x| x.0 <= Q::from_integer(0.into()) || x.0 > Q::from_integer(1.into()))
            {
                return Err(Error::Validation(format!("{name} value {bad} is outside (0, 1]")));
            }
        }
        if self.arithmetic != "exact" {
            return Err(Error::Validation(format!("arithmetic mode `{}` is not supported", self.arithmetic)));
        }
        Ok(())
    }

    pub fn eps(&self) -> Vec<Q> {
        sorted(&self.eps_grid)
    }

    pub fn deltas(&self) -> Vec<Q> {
        sorted(&self.delta_grid)
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: RunConfig = toml::from_str(text).map_err(|e| Error::Parse(format!("config: {e}")))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_toml(&std::fs::read_to_string(path)?)
    }

    /// Defaults, overridden by the horizon environment variable when set.
    pub fn from_env() -> Result<Self> {
        let mut cfg = RunConfig::default();
        if let Ok(v) = std::env::var(HORIZON_ENV) {
            cfg.horizon =
                v.trim().parse().map_err(|_| Error::Parse(format!("{HORIZON_ENV}=`{v}` is not an integer")))?;
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

fn sorted(grid: &[QJson]) -> Vec<Q> {
    let mut v: Vec<Q> = grid.iter().map(|x| x.0.clone()).collect();
    v.sort();
    v.dedup();
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn toml_round_trip() {
        let cfg = RunConfig::from_toml("horizon = 5000\neps_grid = [\"1/2\", \"1/3\"]\nformat = \"csv\"\n").unwrap();
        assert_eq!(cfg.horizon, 5000);
        assert_eq!(cfg.eps(), vec![q(1, 3), q(1, 2)]);
        assert_eq!(cfg.format, OutputFormat::Csv);
        assert_eq!(cfg.delta_grid.len(), 20);
    }

    #[test]
    fn rejects_bad_values() {
        assert!(RunConfig::from_toml("horizon = 10").is_err());
        assert!(RunConfig::from_toml("eps_grid = []").is_err());
        assert!(RunConfig::from_toml("eps_grid = [\"3/2\"]").is_err());
        assert!(RunConfig::from_toml("bogus = 1").is_err());
    }
}

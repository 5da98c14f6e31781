use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::capacity::PsdConfig;
use crate::channel::{CableCatalog, FrequencyGrid, PortImpedances};
use crate::error::{Result, SimError};
use crate::topology::{GridParams, Territory};
use crate::traffic::TrafficParams;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SweepParams {
    pub densities: Vec<f64>,
    pub replications: usize,
    pub master_seed: u64,
}

impl Default for SweepParams {
    fn default() -> Self {
        Self {
            densities: (1..=10).map(|k| k as f64 / 10.0).collect(),
            replications: 20,
            master_seed: 1,
        }
    }
}

/// Everything a run needs. Omitted sections take their defaults; unknown
/// keys are rejected.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SimConfig {
    pub territory: Territory,
    pub grid: GridParams,
    pub cables: CableCatalog,
    pub band: FrequencyGrid,
    pub ports: PortImpedances,
    pub psd: PsdConfig,
    pub traffic: TrafficParams,
    pub sweep: SweepParams,
}

impl SimConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let config: SimConfig = serde_json::from_str(text).map_err(|e| SimError::Config(e.to_string()))?;
        config.validate()?;
        Ok(config)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)
            .map_err(|e| SimError::Config(format!("{}: {e}", path.display())))?;
        Self::from_json(&text).map_err(|e| match e {
            SimError::Config(msg) => SimError::Config(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    /// Checks every section; any failure is reported as a config error.
    pub fn validate(&self) -> Result<()> {
        let as_config = |e: SimError| match e {
            SimError::Config(_) => e,
            other => SimError::Config(other.to_string()),
        };
        self.territory.validate().map_err(as_config)?;
        self.grid.validate().map_err(as_config)?;
        self.cables.validate().map_err(as_config)?;
        for key in [&self.grid.backbone_cable, &self.grid.drop_cable] {
            self.cables.get(key).map_err(as_config)?;
        }
        self.band.validate().map_err(as_config)?;
        self.ports.validate().map_err(as_config)?;
        self.psd.validate().map_err(as_config)?;
        self.traffic.validate().map_err(as_config)?;

        let sweep = &self.sweep;
        if sweep.densities.is_empty() {
            return Err(SimError::Config("sweep.densities must not be empty".into()));
        }
        if let Some(d) = sweep.densities.iter().find(|d| !(0.0..=1.0).contains(*d)) {
            return Err(SimError::Config(format!("sweep density {d} outside [0, 1]")));
        }
        if sweep.replications == 0 {
            return Err(SimError::Config("sweep.replications must be at least 1".into()));
        }
        Ok(())
    }
}

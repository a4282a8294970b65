use std::path::Path;

use anyhow::Context;
use fockwalk_core::photonics_mc::ExperimentConfig;
use serde::{Deserialize, Serialize};

/// TOML form of [`ExperimentConfig`]; omitted keys take its defaults.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentFile {
    pub mean_photon_number: f64,
    pub transmission: f64,
    pub detector_efficiency: f64,
    pub idler_transmission: Option<f64>,
    pub pulses: u64,
    pub reflectivity: f64,
    pub herald: [usize; 2],
    pub seed: u64,
    pub heralded_events: Option<u64>,
}

impl Default for ExperimentFile {
    fn default() -> Self {
        ExperimentConfig::default().into()
    }
}

impl From<ExperimentConfig> for ExperimentFile {
    fn from(c: ExperimentConfig) -> Self {
        Self {
            mean_photon_number: c.mean_photon_number,
            transmission: c.transmission,
            detector_efficiency: c.detector_efficiency,
            idler_transmission: c.idler_transmission,
            pulses: c.pulses,
            reflectivity: c.reflectivity,
            herald: [c.herald.0, c.herald.1],
            seed: c.seed,
            heralded_events: c.heralded_events,
        }
    }
}

impl From<ExperimentFile> for ExperimentConfig {
    fn from(f: ExperimentFile) -> Self {
        Self {
            mean_photon_number: f.mean_photon_number,
            transmission: f.transmission,
            detector_efficiency: f.detector_efficiency,
            idler_transmission: f.idler_transmission,
            pulses: f.pulses,
            reflectivity: f.reflectivity,
            herald: (f.herald[0], f.herald[1]),
            seed: f.seed,
            heralded_events: f.heralded_events,
        }
    }
}

pub fn parse_experiment(text: &str) -> anyhow::Result<ExperimentConfig> {
    let file: ExperimentFile = toml::from_str(text)?;
    let cfg = ExperimentConfig::from(file);
    cfg.validate()?;
    Ok(cfg)
}

pub fn load_experiment(path: &Path) -> anyhow::Result<ExperimentConfig> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_experiment(&text).with_context(|| format!("in {}", path.display()))
}

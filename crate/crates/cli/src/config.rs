use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use serde::Deserialize;

use maxcard_core::GeneratorSpec;

/// Instances produced on the fly instead of read from disk.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratorConfig {
    pub spec: GeneratorSpec,
    pub count: usize,
    pub seed: u64,
}

/// Experiment settings read from JSON. Every field is optional; command-line
/// flags override whatever is set here.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default)]
    pub instances: Vec<PathBuf>,
    pub generator: Option<GeneratorConfig>,
    #[serde(default)]
    pub protocols: Vec<String>,
    pub k: Option<usize>,
    pub eps: Option<f64>,
    pub d: Option<usize>,
    pub p: Option<usize>,
    pub n: Option<usize>,
    pub trials: Option<usize>,
    pub report: Option<PathBuf>,
    pub json: Option<PathBuf>,
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
        let cfg: Self = serde_json::from_str(&text).with_context(|| format!("parsing config {}", path.display()))?;
        if let Some(g) = &cfg.generator {
            if g.count == 0 {
                bail!("generator count must be positive");
            }
        }
        // relative instance paths are taken from the config's directory
        let base = path.parent().unwrap_or(Path::new("."));
        Ok(Self {
            instances: cfg.instances.iter().map(|p| base.join(p)).collect(),
            ..cfg
        })
    }
}

//! Study configuration file loading and per-run overrides.

use std::path::{Path, PathBuf};

use serde::Deserialize;

use lpboot_core::StudyConfig;

use crate::error::{CliError, Result};

fn default_table() -> bool {
    true
}

/// Where study results go. All sinks are optional; the stdout table is on by
/// default.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSpec {
    pub csv: Option<PathBuf>,
    pub json: Option<PathBuf>,
    #[serde(default = "default_table")]
    pub table: bool,
}

impl Default for OutputSpec {
    fn default() -> Self {
        OutputSpec {
            csv: None,
            json: None,
            table: true,
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct StudyFile {
    study: StudyConfig,
    #[serde(default)]
    output: OutputSpec,
}

/// Flag-level overrides applied on top of the config file.
#[derive(Debug, Clone, Copy, Default)]
pub struct StudyOverrides {
    pub seed: Option<u64>,
    pub threads: Option<usize>,
    /// Force full-scale replication parameters (R = 5000, B = 1000).
    pub paper_scale: bool,
}

/// Load, override, and validate a study configuration.
pub fn load_study_config(path: &Path, overrides: StudyOverrides) -> Result<(StudyConfig, OutputSpec)> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
    let file: StudyFile = serde_json::from_str(&text)
        .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
    let mut cfg = file.study;

    if let Some(seed) = overrides.seed {
        cfg.base_seed = seed;
    }
    if let Some(threads) = overrides.threads {
        cfg.threads = threads;
    } else if let Some(threads) = env_threads()? {
        cfg.threads = threads;
    }
    if overrides.paper_scale {
        cfg.replications = 5000;
        cfg.bootstrap_b = 1000;
    }

    cfg.validate()?;
    Ok((cfg, file.output))
}

/// `LPBOOT_THREADS` is the fallback when `--threads` is not given.
pub fn env_threads() -> Result<Option<usize>> {
    match std::env::var("LPBOOT_THREADS") {
        Ok(v) => v
            .parse::<usize>()
            .map(Some)
            .map_err(|_| CliError::Config(format!("LPBOOT_THREADS: not a thread count: {v:?}"))),
        Err(_) => Ok(None),
    }
}

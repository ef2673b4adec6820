//! Flat `key = value` experiment configuration files.
//!
//! ```text
//! # phase transition at N = 150
//! kind = sweep
//! N = 150
//! from = 13
//! to = 18
//! trials = 20
//! seed = 1
//! ```
//!
//! Keys are case-sensitive. Blank lines and lines starting with `#` are
//! ignored. Unknown and repeated keys are errors.

use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ExperimentKind {
    Lcs,
    Sis,
    Sweep,
}

impl FromStr for ExperimentKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "lcs" => Ok(ExperimentKind::Lcs),
            "sis" => Ok(ExperimentKind::Sis),
            "sweep" => Ok(ExperimentKind::Sweep),
            other => Err(format!(
                "unknown experiment kind `{other}` (expected lcs, sis or sweep)"
            )),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Csv,
    Json,
    Text,
}

impl FromStr for OutputFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            "text" => Ok(OutputFormat::Text),
            other => Err(format!(
                "unknown format `{other}` (expected csv, json or text)"
            )),
        }
    }
}

/// Every setting an experiment accepts. Unset fields fall back to command
/// line flags or built-in defaults.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub kind: Option<ExperimentKind>,
    #[serde(rename = "N")]
    pub big_n: Option<u64>,
    pub n: Option<usize>,
    pub from: Option<usize>,
    pub to: Option<usize>,
    pub trials: Option<usize>,
    pub seed: Option<u64>,
    pub workers: Option<usize>,
    pub max_nodes: Option<u64>,
    pub max_time_ms: Option<u64>,
    pub format: Option<OutputFormat>,
    pub timing: Option<bool>,
}

impl ExperimentConfig {
    /// Fields set in `other` win.
    pub fn overlay(self, other: &ExperimentConfig) -> ExperimentConfig {
        ExperimentConfig {
            kind: other.kind.or(self.kind),
            big_n: other.big_n.or(self.big_n),
            n: other.n.or(self.n),
            from: other.from.or(self.from),
            to: other.to.or(self.to),
            trials: other.trials.or(self.trials),
            seed: other.seed.or(self.seed),
            workers: other.workers.or(self.workers),
            max_nodes: other.max_nodes.or(self.max_nodes),
            max_time_ms: other.max_time_ms.or(self.max_time_ms),
            format: other.format.or(self.format),
            timing: other.timing.or(self.timing),
        }
    }
}

fn set<T: FromStr>(slot: &mut Option<T>, key: &str, value: &str, line: usize) -> Result<()>
where
    T::Err: std::fmt::Display,
{
    if slot.is_some() {
        return Err(Error::parse(line, format!("key `{key}` given twice")));
    }
    let parsed = value
        .parse()
        .map_err(|e| Error::parse(line, format!("bad value for `{key}`: {e}")))?;
    *slot = Some(parsed);
    Ok(())
}

pub fn parse_config(text: &str) -> Result<ExperimentConfig> {
    let mut cfg = ExperimentConfig::default();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let Some((key, value)) = trimmed.split_once('=') else {
            return Err(Error::parse(line, "expected `key = value`"));
        };
        let (key, value) = (key.trim(), value.trim());
        match key {
            "kind" => set(&mut cfg.kind, key, value, line)?,
            "N" => set(&mut cfg.big_n, key, value, line)?,
            "n" => set(&mut cfg.n, key, value, line)?,
            "from" => set(&mut cfg.from, key, value, line)?,
            "to" => set(&mut cfg.to, key, value, line)?,
            "trials" => set(&mut cfg.trials, key, value, line)?,
            "seed" => set(&mut cfg.seed, key, value, line)?,
            "workers" => set(&mut cfg.workers, key, value, line)?,
            "max_nodes" => set(&mut cfg.max_nodes, key, value, line)?,
            "max_time_ms" => set(&mut cfg.max_time_ms, key, value, line)?,
            "format" => set(&mut cfg.format, key, value, line)?,
            "timing" => set(&mut cfg.timing, key, value, line)?,
            other => return Err(Error::parse(line, format!("unknown key `{other}`"))),
        }
    }
    Ok(cfg)
}

use std::fs;
use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::Serialize;

use crate::error::{usage, CliError, CliResult};

/// Reads a JSON config, or the defaults when no path is given. Unknown keys
/// are rejected by each config type.
pub fn load<T: DeserializeOwned + Default>(path: Option<&Path>) -> CliResult<T> {
    let Some(path) = path else {
        return Ok(T::default());
    };
    let text = fs::read_to_string(path).map_err(|e| {
        CliError::Runtime(anyhow::anyhow!("reading config {}: {e}", path.display()))
    })?;
    serde_json::from_str(&text).map_err(|e| usage(format!("config {}: {e}", path.display())))
}

pub fn to_value<T: Serialize>(config: &T) -> serde_json::Value {
    serde_json::to_value(config).expect("config types serialize")
}

pub fn required(path: &Option<PathBuf>, what: &str) -> CliResult<PathBuf> {
    path.clone()
        .ok_or_else(|| usage(format!("missing {what} (flag or config key)")))
}

/// `report.csv` -> `report.json`
pub fn companion(path: &Path, ext: &str) -> PathBuf {
    path.with_extension(ext)
}

pub fn default_workers() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

pub fn write_json(path: &Path, value: &serde_json::Value) -> CliResult<()> {
    let mut text = serde_json::to_string_pretty(value).expect("json values serialize");
    text.push('\n');
    fs::write(path, text)
        .map_err(|e| CliError::Runtime(anyhow::anyhow!("writing {}: {e}", path.display())))
}

/// Layer sizes as one flag value; a bare `Vec` would make clap expect
/// repeated values.
#[derive(Debug, Clone, PartialEq)]
pub struct Layers(pub Vec<usize>);

/// Parses `66-300-300-66` or `66,300,300,66`.
pub fn parse_layers(s: &str) -> Result<Layers, String> {
    s.split(['-', ','])
        .map(|t| t.trim().parse::<usize>().map_err(|e| format!("{t:?}: {e}")))
        .collect::<Result<_, _>>()
        .map(Layers)
}

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::CliError;

/// Everything needed to rerun a command; embedded in every report.
#[derive(Clone, Debug, Serialize)]
pub struct RunManifest {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: String,
    pub inputs: Vec<String>,
    pub seed: u64,
    pub params: BTreeMap<String, String>,
    pub out_dir: String,
    pub format: String,
    pub parallel: bool,
}

impl RunManifest {
    pub fn new(command: &str, seed: u64, out_dir: &Path, format: &str, parallel: bool) -> Self {
        RunManifest {
            tool: env!("CARGO_PKG_NAME"),
            version: env!("CARGO_PKG_VERSION"),
            command: command.to_string(),
            inputs: Vec::new(),
            seed,
            params: BTreeMap::new(),
            out_dir: out_dir.display().to_string(),
            format: format.to_string(),
            parallel,
        }
    }

    pub fn input(&mut self, path: &Path) {
        self.inputs.push(path.display().to_string());
    }

    pub fn param(&mut self, key: &str, value: impl ToString) {
        self.params.insert(key.to_string(), value.to_string());
    }
}

#[derive(Serialize)]
struct Envelope<'a, T: Serialize> {
    manifest: &'a RunManifest,
    result: &'a T,
}

pub fn to_json<T: Serialize>(manifest: &RunManifest, result: &T) -> Result<String, CliError> {
    let mut s = serde_json::to_string_pretty(&Envelope { manifest, result })
        .map_err(|e| CliError::Io(format!("serializing report: {e}")))?;
    s.push('\n');
    Ok(s)
}

pub fn write_text(dir: &Path, name: &str, text: &str) -> Result<PathBuf, CliError> {
    fs::create_dir_all(dir).map_err(|e| CliError::Io(format!("{}: {e}", dir.display())))?;
    let path = dir.join(name);
    fs::write(&path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    Ok(path)
}

/// Writes `<out_dir>/<command>.json` and returns its path.
pub fn write_report<T: Serialize>(manifest: &RunManifest, result: &T) -> Result<PathBuf, CliError> {
    let text = to_json(manifest, result)?;
    write_text(Path::new(&manifest.out_dir), &format!("{}.json", manifest.command), &text)
}

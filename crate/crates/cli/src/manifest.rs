use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::commands::Job;
use crate::config::{parse_json, read_text};
use crate::error::{CliError, CliResult};

pub const MANIFEST_FILE: &str = "manifest.json";

/// Everything needed to re-run a command: the resolved job, its seeds and
/// where it wrote its outputs.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RunManifest {
    #[serde(flatten)]
    pub job: Job,
    pub version: String,
    pub seeds: BTreeMap<String, u64>,
    pub started_at: String,
    pub finished_at: String,
    pub outputs: BTreeMap<String, PathBuf>,
}

pub fn timestamp() -> String {
    chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Millis, true)
}

impl RunManifest {
    pub fn read(path: &Path) -> CliResult<Self> {
        parse_json(&read_text(path)?, &path.display().to_string())
    }

    pub fn write(&self, path: &Path) -> CliResult<()> {
        let text = serde_json::to_string_pretty(self).map_err(|e| CliError::invalid(e.to_string()))?;
        std::fs::write(path, text + "\n").map_err(|e| CliError::io(path, e))
    }
}

/// `dir/manifest.json` for directory outputs, `FILE.manifest.json` otherwise.
pub fn manifest_path_for(primary: &Path, is_dir: bool) -> PathBuf {
    if is_dir {
        primary.join(MANIFEST_FILE)
    } else {
        let mut name = primary.file_name().map(|n| n.to_os_string()).unwrap_or_default();
        name.push(".manifest.json");
        primary.with_file_name(name)
    }
}

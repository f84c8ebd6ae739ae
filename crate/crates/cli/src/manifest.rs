use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::{CliError, CliResult};

pub const MANIFEST: &str = "manifest.json";

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InputRecord {
    pub file: String,
    pub sha256: String,
}

/// Run record written next to the outputs. Holds no timestamps or absolute
/// paths so that identical runs produce identical bytes.
#[derive(Debug, Clone, Serialize)]
pub struct Manifest {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: String,
    pub seed: u64,
    pub config_sha256: String,
    pub config_file_sha256: Option<String>,
    pub inputs: BTreeMap<String, InputRecord>,
    pub outputs: BTreeMap<String, String>,
    pub warnings: Vec<String>,
}

/// Files produced by one command, keyed by name, written in one go.
#[derive(Debug, Default)]
pub struct Outputs {
    files: BTreeMap<String, Vec<u8>>,
    inputs: BTreeMap<String, InputRecord>,
}

impl Outputs {
    pub fn add(&mut self, name: &str, bytes: Vec<u8>) {
        self.files.insert(name.to_string(), bytes);
    }

    pub fn add_text(&mut self, name: &str, text: String) {
        self.add(name, text.into_bytes());
    }

    pub fn add_json<T: Serialize>(&mut self, name: &str, value: &T) {
        let mut bytes = serde_json::to_vec_pretty(value).expect("serializable report");
        bytes.push(b'\n');
        self.add(name, bytes);
    }

    /// Records an input file by role.
    pub fn input(&mut self, role: &str, path: &Path, bytes: &[u8]) {
        let file = path
            .file_name()
            .map(|f| f.to_string_lossy().into_owned())
            .unwrap_or_default();
        self.inputs.insert(
            role.to_string(),
            InputRecord {
                file,
                sha256: sha256_hex(bytes),
            },
        );
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.files.keys().map(String::as_str)
    }

    pub fn get(&self, name: &str) -> Option<&[u8]> {
        self.files.get(name).map(Vec::as_slice)
    }

    pub fn write(self, dir: &Path, mut manifest: Manifest) -> CliResult<PathBuf> {
        fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
        for (name, bytes) in &self.files {
            let path = dir.join(name);
            fs::write(&path, bytes).map_err(|e| CliError::io(&path, e))?;
            manifest.outputs.insert(name.clone(), sha256_hex(bytes));
        }
        manifest.inputs = self.inputs;
        let path = dir.join(MANIFEST);
        let mut bytes = serde_json::to_vec_pretty(&manifest).expect("serializable manifest");
        bytes.push(b'\n');
        fs::write(&path, bytes).map_err(|e| CliError::io(&path, e))?;
        Ok(dir.to_path_buf())
    }
}

//! Output files and their provenance sidecars.

use std::fs;
use std::path::{Path, PathBuf};

use grainsort::eval::{MethodSummary, Provenance};
use grainsort::features::{FeatureParams, MethodTag};
use grainsort::radar::RadarParams;
use grainsort::svm::{KernelSpec, MulticlassSvm};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::config::ExperimentConfig;
use crate::error::CliError;

pub const MODEL_FORMAT: &str = "grainsort-model/1";

/// Sidecar written next to binary and CSV artifacts.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub artifact: String,
    pub sha256: String,
    pub config_hash: String,
    pub seed: u64,
    pub snr_db: Option<f64>,
    pub class_counts: [usize; 3],
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub method: Option<MethodTag>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub features: Option<FeatureParams>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelFile {
    pub format: String,
    pub config_hash: String,
    pub seed: u64,
    pub method: MethodTag,
    pub radar: RadarParams<f64>,
    pub features: FeatureParams,
    pub model: MulticlassSvm<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub config_hash: String,
    pub seed: u64,
    pub config: ExperimentConfig,
    pub rows: Vec<MethodSummary<f64>>,
    /// Kernel used for each row, in row order.
    pub kernels: Vec<KernelSpec<f64>>,
}

impl Summary {
    pub fn provenance(&self) -> Provenance {
        Provenance { config_hash: self.config_hash.clone(), seed: self.seed }
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

pub fn manifest_path(artifact: &Path) -> PathBuf {
    artifact.with_extension("manifest.json")
}

pub fn method_slug(method: MethodTag) -> String {
    method.as_str().to_ascii_lowercase().replace('+', "_")
}

pub fn write_file(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    }
    fs::write(path, bytes).map_err(|e| CliError::io(path, e))
}

pub fn write_json<V: Serialize>(path: &Path, value: &V) -> Result<(), CliError> {
    let mut bytes = serde_json::to_vec_pretty(value).expect("artifact serializes");
    bytes.push(b'\n');
    write_file(path, &bytes)
}

pub fn read_json<V: DeserializeOwned>(path: &Path) -> Result<V, CliError> {
    let bytes = fs::read(path).map_err(|e| CliError::io(path, e))?;
    let de = &mut serde_json::Deserializer::from_slice(&bytes);
    serde_path_to_error::deserialize(de).map_err(|e| CliError::Data(format!("{}: at `{}`: {}", path.display(), e.path(), e.inner())))
}

/// Writes `bytes` to `path` plus its manifest sidecar.
pub fn write_with_manifest(path: &Path, bytes: &[u8], mut manifest: Manifest) -> Result<(), CliError> {
    write_file(path, bytes)?;
    manifest.artifact = path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
    manifest.sha256 = sha256_hex(bytes);
    write_json(&manifest_path(path), &manifest)
}

pub fn manifest_for(cfg: &ExperimentConfig, hash: &str, snr_db: Option<f64>) -> Manifest {
    Manifest {
        artifact: String::new(),
        sha256: String::new(),
        config_hash: hash.to_string(),
        seed: cfg.seed,
        snr_db,
        class_counts: cfg.counts.0,
        method: None,
        features: None,
    }
}

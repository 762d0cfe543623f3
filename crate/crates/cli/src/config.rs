//! JSON experiment configuration.

use std::fs;
use std::path::{Path, PathBuf};

use grainsort::features::{FeatureParams, MethodTag};
use grainsort::radar::{ClassCounts, DatasetSpec, Jitter, RadarParams, SiloScene};
use grainsort::svm::{KernelKind, KernelSpec, SmoOptions};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::CliError;

/// Flat hyperparameter grid searched by `evaluate --grid`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KernelGrid {
    pub c: Vec<f64>,
    pub gamma: Vec<f64>,
}

impl Default for KernelGrid {
    fn default() -> Self {
        Self { c: vec![0.1, 1.0, 10.0, 100.0], gamma: vec![0.001, 0.01, 0.1, 1.0] }
    }
}

impl KernelGrid {
    pub fn kernels(&self, kind: KernelKind) -> Vec<KernelSpec<f64>> {
        match kind {
            KernelKind::Linear => self.c.iter().map(|&c| KernelSpec::linear(c)).collect(),
            KernelKind::Rbf => self.c.iter().flat_map(|&c| self.gamma.iter().map(move |&g| KernelSpec::rbf(g, c))).collect(),
        }
    }
}

fn default_snr() -> Vec<Option<f64>> {
    vec![Some(20.0)]
}

fn default_methods() -> Vec<MethodTag> {
    MethodTag::ALL.to_vec()
}

fn default_folds() -> usize {
    10
}

fn default_out() -> PathBuf {
    PathBuf::from("out")
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default)]
    pub radar: RadarParams<f64>,
    #[serde(default)]
    pub scene: SiloScene,
    #[serde(default)]
    pub jitter: Jitter,
    #[serde(default)]
    pub counts: ClassCounts,
    /// `null` entries request noiseless data.
    #[serde(default = "default_snr")]
    pub snr_db: Vec<Option<f64>>,
    #[serde(default = "default_methods")]
    pub methods: Vec<MethodTag>,
    #[serde(default)]
    pub kernel: KernelSpec<f64>,
    #[serde(default)]
    pub kernel_grid: KernelGrid,
    #[serde(default = "default_folds")]
    pub folds: usize,
    pub seed: u64,
    #[serde(default = "default_out")]
    pub out_dir: PathBuf,
    #[serde(default)]
    pub features: FeatureParams,
    #[serde(default)]
    pub smo: SmoOptions,
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path).map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        let de = &mut serde_json::Deserializer::from_str(&text);
        let cfg: Self = serde_path_to_error::deserialize(de)
            .map_err(|e| CliError::Config(format!("{}: at `{}`: {}", path.display(), e.path(), e.inner())))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let bad = |msg: String| Err(CliError::Config(msg));
        self.radar.validate()?;
        if self.methods.is_empty() {
            return bad("`methods` must list at least one method".into());
        }
        if self.snr_db.is_empty() {
            return bad("`snr_db` must list at least one value".into());
        }
        if let Some(s) = self.snr_db.iter().flatten().find(|s| !s.is_finite()) {
            return bad(format!("`snr_db` entries must be finite, got {s}"));
        }
        if self.folds < 2 {
            return bad(format!("`folds` must be at least 2, got {}", self.folds));
        }
        self.kernel.validate().map_err(|e| CliError::Config(format!("`kernel`: {e}")))?;
        if self.kernel_grid.c.is_empty() || self.kernel_grid.gamma.is_empty() {
            return bad("`kernel_grid` lists must be non-empty".into());
        }
        if self.kernel_grid.c.iter().chain(&self.kernel_grid.gamma).any(|&v| !(v > 0.0 && v.is_finite())) {
            return bad("`kernel_grid` values must be positive and finite".into());
        }
        if self.features.dwt_levels == 0 || self.features.gray_levels < 2 || self.features.entropy_bins == 0 {
            return bad(format!("invalid `features`: {:?}", self.features));
        }
        if !(self.smo.tol > 0.0) || self.smo.max_iter == 0 {
            return bad(format!("invalid `smo`: {:?}", self.smo));
        }
        for snr in &self.snr_db {
            self.dataset_spec(*snr).validate()?;
        }
        self.scene.validate()?;
        Ok(())
    }

    pub fn dataset_spec(&self, snr_db: Option<f64>) -> DatasetSpec {
        DatasetSpec { scene: self.scene.clone(), jitter: self.jitter, counts: self.counts, snr_db, seed: self.seed }
    }

    /// SHA-256 of the canonical JSON form, output directory excluded.
    pub fn hash(&self) -> String {
        let mut value = serde_json::to_value(self).expect("config serializes");
        if let Some(map) = value.as_object_mut() {
            map.remove("out_dir");
        }
        hex::encode(Sha256::digest(serde_json::to_vec(&value).expect("value serializes")))
    }
}

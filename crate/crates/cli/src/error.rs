use std::path::Path;

use grainsort::eval::EvalError;
use grainsort::features::FeatureError;
use grainsort::radar::{DatasetError, RadarError};
use grainsort::svm::SvmError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("data error: {0}")]
    Data(String),
    #[error("convergence error: {0}")]
    Convergence(String),
    #[error("I/O error on {path}: {source}")]
    Io { path: String, source: std::io::Error },
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Io { .. } => 1,
            CliError::Config(_) => 2,
            CliError::Data(_) => 3,
            CliError::Convergence(_) => 4,
        }
    }

    pub fn io(path: &Path, source: std::io::Error) -> Self {
        CliError::Io { path: path.display().to_string(), source }
    }
}

impl From<DatasetError> for CliError {
    fn from(e: DatasetError) -> Self {
        CliError::Data(e.to_string())
    }
}

impl From<RadarError> for CliError {
    fn from(e: RadarError) -> Self {
        match e {
            RadarError::InvalidParams(_) | RadarError::InvalidScene(_) => CliError::Config(e.to_string()),
            _ => CliError::Data(e.to_string()),
        }
    }
}

impl From<FeatureError> for CliError {
    fn from(e: FeatureError) -> Self {
        match e {
            FeatureError::InvalidParameter(_) => CliError::Config(e.to_string()),
            _ => CliError::Data(e.to_string()),
        }
    }
}

impl From<SvmError<f64>> for CliError {
    fn from(e: SvmError<f64>) -> Self {
        match e {
            SvmError::NotConverged { .. } => CliError::Convergence(e.to_string()),
            SvmError::InvalidKernel(_) => CliError::Config(e.to_string()),
            _ => CliError::Data(e.to_string()),
        }
    }
}

impl From<EvalError> for CliError {
    fn from(e: EvalError) -> Self {
        if e.is_convergence() {
            return CliError::Convergence(e.to_string());
        }
        match e {
            EvalError::InvalidK(_) | EvalError::ClassTooSmall { .. } => CliError::Config(e.to_string()),
            EvalError::Feature(f) => f.into(),
            EvalError::Io(source) => CliError::Io { path: "report".into(), source },
            other => CliError::Data(other.to_string()),
        }
    }
}

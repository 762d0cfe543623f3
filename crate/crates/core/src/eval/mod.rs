//! Metrics, stratified folds and cross-validation.

mod cv;
mod kfold;
mod metrics;
mod report;

use thiserror::Error;

pub use cv::{cross_validate, cross_validate_with, CvReport, EchoLearner, FoldResult, Learner, SvmLearner};
pub use kfold::{kfold_split, FoldPlan};
pub use metrics::{confusion, macro_metrics, metrics, one_vs_rest_counts, ConfusionCounts, ConfusionMatrix, Metric, Metrics};
pub use report::{render_table, write_report_csv, MethodSummary, Provenance};

use crate::features::FeatureError;
use crate::svm::SvmError;

pub type BoxError = Box<dyn std::error::Error + Send + Sync>;

#[derive(Debug, Error)]
pub enum EvalError {
    #[error("{truth} true labels but {pred} predictions")]
    LengthMismatch { truth: usize, pred: usize },
    #[error("label {label} outside 0..{n_classes}")]
    LabelOutOfRange { label: usize, n_classes: usize },
    #[error("confusion counts are all zero")]
    EmptyCounts,
    #[error("need at least two classes, got {0}")]
    TooFewClasses(usize),
    #[error("fold count must be at least 2, got {0}")]
    InvalidK(usize),
    #[error("class {class} has {count} samples, fewer than k = {k}")]
    ClassTooSmall { class: usize, count: usize, k: usize },
    #[error("fold {fold}: {source}")]
    Fold { fold: usize, source: BoxError },
    #[error(transparent)]
    Feature(#[from] FeatureError),
    #[error("report output: {0}")]
    Csv(#[from] csv::Error),
    #[error("report output: {0}")]
    Io(#[from] std::io::Error),
}

impl EvalError {
    /// True when the failure is an SMO iteration or stall limit.
    pub fn is_convergence(&self) -> bool {
        match self {
            EvalError::Fold { source, .. } => {
                source.downcast_ref::<SvmError<f64>>().is_some_and(SvmError::is_convergence)
                    || source.downcast_ref::<SvmError<f32>>().is_some_and(SvmError::is_convergence)
            }
            _ => false,
        }
    }
}

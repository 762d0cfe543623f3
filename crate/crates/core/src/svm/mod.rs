//! Soft-margin support vector machines trained with SMO, and a one-vs-one
//! multiclass wrapper.

mod kernel;
mod multiclass;
mod scaler;
mod smo;

pub use kernel::{KernelKind, KernelSpec};
pub use multiclass::{train_multiclass, MulticlassSvm, PairModel, Prediction};
pub use scaler::{standardize_fit, Scaler, STD_FLOOR};
pub use smo::{decision, dual_objective, train_binary, BinarySvm, SmoOptions};

use thiserror::Error;

use crate::Scalar;

#[derive(Debug, Error)]
pub enum SvmError<T: Scalar> {
    #[error("training set is empty or too small")]
    Empty,
    #[error("feature dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("labels must be -1 or +1, got {0}")]
    InvalidLabel(f64),
    #[error("degenerate training set: {0}")]
    Degenerate(String),
    #[error("input contains non-finite values")]
    NonFinite,
    #[error("invalid kernel: {0}")]
    InvalidKernel(String),
    #[error("SMO did not converge{}: KKT gap {gap:.3e} after {iterations} updates", pair.map(|(a, b)| format!(" for classes {a} vs {b}")).unwrap_or_default())]
    NotConverged { iterations: usize, gap: f64, pair: Option<(usize, usize)>, best: Box<BinarySvm<T>> },
}

impl<T: Scalar> SvmError<T> {
    pub fn is_convergence(&self) -> bool {
        matches!(self, SvmError::NotConverged { .. })
    }
}

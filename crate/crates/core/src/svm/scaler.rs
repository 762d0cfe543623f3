use serde::{Deserialize, Serialize};

use super::SvmError;
use crate::Scalar;

pub const STD_FLOOR: f64 = 1e-12;

/// Per-dimension standardization fitted on training rows.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Scaler<T> {
    pub mean: Vec<T>,
    pub std: Vec<T>,
}

/// Population mean and standard deviation per column.
pub fn standardize_fit<T: Scalar>(x: &[Vec<T>]) -> Result<Scaler<T>, SvmError<T>> {
    if x.len() < 2 {
        return Err(SvmError::Empty);
    }
    let d = x[0].len();
    if let Some(row) = x.iter().find(|r| r.len() != d) {
        return Err(SvmError::DimensionMismatch { expected: d, got: row.len() });
    }
    let n = T::from_usize_lossy(x.len());
    let mut mean = vec![T::zero(); d];
    for row in x {
        for (m, &v) in mean.iter_mut().zip(row) {
            *m += v;
        }
    }
    mean.iter_mut().for_each(|m| *m /= n);
    let mut var = vec![T::zero(); d];
    for row in x {
        for ((s, &v), &m) in var.iter_mut().zip(row).zip(&mean) {
            *s += (v - m) * (v - m);
        }
    }
    let std = var.into_iter().map(|s| (s / n).sqrt().max(T::lit(STD_FLOOR))).collect();
    Ok(Scaler { mean, std })
}

impl<T: Scalar> Scaler<T> {
    pub fn dim(&self) -> usize {
        self.mean.len()
    }

    pub fn transform_row(&self, row: &[T]) -> Result<Vec<T>, SvmError<T>> {
        if row.len() != self.dim() {
            return Err(SvmError::DimensionMismatch { expected: self.dim(), got: row.len() });
        }
        Ok(row.iter().zip(&self.mean).zip(&self.std).map(|((&v, &m), &s)| (v - m) / s).collect())
    }

    pub fn transform(&self, x: &[Vec<T>]) -> Result<Vec<Vec<T>>, SvmError<T>> {
        x.iter().map(|r| self.transform_row(r)).collect()
    }
}

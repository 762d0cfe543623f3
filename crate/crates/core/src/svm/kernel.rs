use serde::{Deserialize, Serialize};

use super::SvmError;
use crate::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KernelKind {
    Linear,
    Rbf,
}

/// Kernel choice plus box constraint `C`. For RBF, `gamma: None` selects
/// `1 / (d * var(X))` on the standardized training data.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KernelSpec<T> {
    pub kind: KernelKind,
    pub gamma: Option<T>,
    pub c: T,
}

impl<T: Scalar> Default for KernelSpec<T> {
    fn default() -> Self {
        Self { kind: KernelKind::Rbf, gamma: None, c: T::lit(10.0) }
    }
}

impl<T: Scalar> KernelSpec<T> {
    pub fn linear(c: T) -> Self {
        Self { kind: KernelKind::Linear, gamma: None, c }
    }

    pub fn rbf(gamma: T, c: T) -> Self {
        Self { kind: KernelKind::Rbf, gamma: Some(gamma), c }
    }

    pub fn validate(&self) -> Result<(), SvmError<T>> {
        if !(self.c > T::zero() && self.c.is_finite()) {
            return Err(SvmError::InvalidKernel(format!("C must be positive, got {}", self.c)));
        }
        if let Some(g) = self.gamma {
            if !(g > T::zero() && g.is_finite()) {
                return Err(SvmError::InvalidKernel(format!("gamma must be positive, got {g}")));
            }
        }
        Ok(())
    }

    /// Fills in the scale heuristic for an unset RBF gamma.
    pub fn resolve(&self, x: &[Vec<T>]) -> Self {
        if self.kind != KernelKind::Rbf || self.gamma.is_some() {
            return *self;
        }
        let d = x.first().map_or(1, Vec::len).max(1);
        let n = T::from_usize_lossy(x.len() * d);
        let mean = x.iter().flatten().copied().sum::<T>() / n;
        let var = x.iter().flatten().map(|&v| (v - mean) * (v - mean)).sum::<T>() / n;
        let denom = T::from_usize_lossy(d) * var;
        let gamma = if denom > T::zero() { T::one() / denom } else { T::one() };
        Self { gamma: Some(gamma), ..*self }
    }

    #[inline]
    pub fn eval(&self, a: &[T], b: &[T]) -> T {
        match self.kind {
            KernelKind::Linear => a.iter().zip(b).map(|(&p, &q)| p * q).sum(),
            KernelKind::Rbf => {
                let d2: T = a.iter().zip(b).map(|(&p, &q)| (p - q) * (p - q)).sum();
                (-self.gamma.unwrap_or(T::one()) * d2).exp()
            }
        }
    }
}

use serde::{Deserialize, Serialize};

use super::FeatureError;
use crate::Scalar;

/// Histogram resolution of the entropy estimate.
pub const ENTROPY_BINS: usize = 64;

const DEGENERATE_VARIANCE: f64 = 1e-24;

/// First-order statistics of a 1-D sample.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FosFeatures<T> {
    pub mean: T,
    pub variance: T,
    pub skewness: T,
    /// Excess kurtosis.
    pub kurtosis: T,
    pub entropy: T,
    pub energy: T,
}

impl<T: Scalar> FosFeatures<T> {
    pub const DIM: usize = 6;

    pub fn to_vec(&self) -> Vec<T> {
        vec![self.mean, self.variance, self.skewness, self.kurtosis, self.entropy, self.energy]
    }
}

pub fn fos<T: Scalar>(x: &[T]) -> Result<FosFeatures<T>, FeatureError> {
    fos_with_bins(x, ENTROPY_BINS)
}

/// Population moments, histogram entropy (natural log) and energy.
pub fn fos_with_bins<T: Scalar>(x: &[T], bins: usize) -> Result<FosFeatures<T>, FeatureError> {
    if x.is_empty() {
        return Err(FeatureError::Empty);
    }
    if bins == 0 {
        return Err(FeatureError::InvalidParameter("entropy histogram needs at least one bin".into()));
    }
    let n = T::from_usize_lossy(x.len());
    let mean = x.iter().copied().sum::<T>() / n;
    let (mut m2, mut m3, mut m4) = (T::zero(), T::zero(), T::zero());
    for &v in x {
        let d = v - mean;
        let d2 = d * d;
        m2 += d2;
        m3 += d2 * d;
        m4 += d2 * d2;
    }
    m2 /= n;
    m3 /= n;
    m4 /= n;
    let (skewness, kurtosis) = if m2 < T::lit(DEGENERATE_VARIANCE) {
        (T::zero(), T::zero())
    } else {
        (m3 / m2.powf(T::lit(1.5)), m4 / (m2 * m2) - T::lit(3.0))
    };
    let energy = x.iter().map(|&v| v * v).sum::<T>();
    Ok(FosFeatures { mean, variance: m2, skewness, kurtosis, entropy: histogram_entropy(x, bins), energy })
}

fn histogram_entropy<T: Scalar>(x: &[T], bins: usize) -> T {
    let lo = x.iter().copied().fold(T::infinity(), T::min);
    let hi = x.iter().copied().fold(T::neg_infinity(), T::max);
    let span = hi - lo;
    if !(span > T::zero()) {
        return T::zero();
    }
    let mut hist = vec![0usize; bins];
    let scale = T::from_usize_lossy(bins) / span;
    for &v in x {
        let b = ((v - lo) * scale).floor().to_usize().unwrap_or(0).min(bins - 1);
        hist[b] += 1;
    }
    let n = T::from_usize_lossy(x.len());
    let h = hist
        .iter()
        .filter(|&&c| c > 0)
        .map(|&c| {
            let p = T::from_usize_lossy(c) / n;
            -p * p.ln()
        })
        .sum::<T>();
    h.max(T::zero())
}

//! Gray-level quantization, co-occurrence matrices and Haralick features.

use serde::{Deserialize, Serialize};

use super::FeatureError;
use crate::{Matrix, Scalar};

const DB_FLOOR: f64 = 1e-12;
const DEGENERATE_VARIANCE: f64 = 1e-24;

/// The four unit-distance offsets `(dy, dx)` for 0, 45, 90 and 135 degrees.
pub const STANDARD_OFFSETS: [(isize, isize); 4] = [(0, 1), (-1, 1), (-1, 0), (-1, -1)];

/// Integer image with values in `0..levels`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GrayImage {
    pub pixels: Matrix<u16>,
    pub levels: usize,
}

impl GrayImage {
    pub fn new(pixels: Matrix<u16>, levels: usize) -> Result<Self, FeatureError> {
        if levels < 2 {
            return Err(FeatureError::InvalidParameter(format!("need at least 2 gray levels, got {levels}")));
        }
        if let Some(&p) = pixels.as_slice().iter().find(|&&p| p as usize >= levels) {
            return Err(FeatureError::InvalidParameter(format!("pixel value {p} outside 0..{levels}")));
        }
        Ok(Self { pixels, levels })
    }

    pub fn rows(&self) -> usize {
        self.pixels.rows()
    }

    pub fn cols(&self) -> usize {
        self.pixels.cols()
    }

    pub fn n_pixels(&self) -> usize {
        self.rows() * self.cols()
    }

    #[inline]
    pub fn at(&self, r: usize, c: usize) -> usize {
        self.pixels.get(r, c) as usize
    }

    /// Pixel at `(r + dy, c + dx)` if it lies inside the image.
    #[inline]
    pub(crate) fn neighbor(&self, r: usize, c: usize, (dy, dx): (isize, isize)) -> Option<(usize, usize)> {
        let nr = r.checked_add_signed(dy)?;
        let nc = c.checked_add_signed(dx)?;
        (nr < self.rows() && nc < self.cols()).then_some((nr, nc))
    }
}

/// Maps `20 log10(|m| + 1e-12)` linearly onto `0..levels`, with equal-width
/// bins between the minimum and maximum. A constant matrix maps to zeros.
pub fn quantize<T: Scalar>(m: &Matrix<T>, levels: usize) -> Result<GrayImage, FeatureError> {
    if levels < 2 {
        return Err(FeatureError::InvalidParameter(format!("need at least 2 gray levels, got {levels}")));
    }
    if m.as_slice().iter().any(|v| !v.is_finite()) {
        return Err(FeatureError::NonFinite);
    }
    let db = m.map(|v| T::lit(20.0) * (v.abs() + T::lit(DB_FLOOR)).log10());
    let lo = db.as_slice().iter().copied().fold(T::infinity(), T::min);
    let hi = db.as_slice().iter().copied().fold(T::neg_infinity(), T::max);
    let span = hi - lo;
    let g = T::from_usize_lossy(levels);
    let pixels = db.map(|v| {
        if span > T::zero() {
            ((v - lo) / span * g).floor().to_usize().unwrap_or(0).min(levels - 1) as u16
        } else {
            0
        }
    });
    GrayImage::new(pixels, levels)
}

/// Raw symmetric pair counts for one offset.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairCounts {
    pub levels: usize,
    pub offset: (isize, isize),
    pub counts: Vec<u64>,
}

impl PairCounts {
    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.counts[i * self.levels + j]
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    pub fn normalize<T: Scalar>(&self) -> CooccurrenceMatrix<T> {
        let total = T::lit(self.total() as f64);
        CooccurrenceMatrix {
            levels: self.levels,
            offset: self.offset,
            values: self.counts.iter().map(|&c| T::lit(c as f64) / total).collect(),
            normalized: true,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CooccurrenceMatrix<T> {
    pub levels: usize,
    pub offset: (isize, isize),
    pub values: Vec<T>,
    pub normalized: bool,
}

impl<T: Scalar> CooccurrenceMatrix<T> {
    pub fn get(&self, i: usize, j: usize) -> T {
        self.values[i * self.levels + j]
    }

    pub fn transpose(&self) -> Self {
        let g = self.levels;
        let values = (0..g * g).map(|k| self.values[(k % g) * g + k / g]).collect();
        Self { values, ..self.clone() }
    }
}

/// Counts each in-bounds pixel pair `(p, p + offset)` in both orders.
pub fn glcm_counts(img: &GrayImage, offset: (isize, isize)) -> Result<PairCounts, FeatureError> {
    let (dy, dx) = offset;
    if offset == (0, 0) {
        return Err(FeatureError::InvalidParameter("GLCM offset must be non-zero".into()));
    }
    if dy.unsigned_abs() >= img.rows() || dx.unsigned_abs() >= img.cols() {
        return Err(FeatureError::OffsetOutOfBounds { offset, rows: img.rows(), cols: img.cols() });
    }
    let g = img.levels;
    let mut counts = vec![0u64; g * g];
    for r in 0..img.rows() {
        for c in 0..img.cols() {
            if let Some((nr, nc)) = img.neighbor(r, c, offset) {
                let (a, b) = (img.at(r, c), img.at(nr, nc));
                counts[a * g + b] += 1;
                counts[b * g + a] += 1;
            }
        }
    }
    Ok(PairCounts { levels: g, offset, counts })
}

/// Symmetric, normalized co-occurrence matrix.
pub fn glcm<T: Scalar>(img: &GrayImage, offset: (isize, isize)) -> Result<CooccurrenceMatrix<T>, FeatureError> {
    Ok(glcm_counts(img, offset)?.normalize())
}

/// `[contrast, correlation, energy (ASM), homogeneity, entropy, dissimilarity]`.
pub fn glcm_features<T: Scalar>(c: &CooccurrenceMatrix<T>) -> Result<Vec<T>, FeatureError> {
    let sum: T = c.values.iter().copied().sum();
    if !c.normalized || (sum - T::one()).abs() > T::lit(1e-6) {
        return Err(FeatureError::Unnormalized(sum.to_f64_lossy()));
    }
    let g = c.levels;
    let idx = |i: usize| T::from_usize_lossy(i);
    let (mut mu_i, mut mu_j) = (T::zero(), T::zero());
    for i in 0..g {
        for j in 0..g {
            let p = c.get(i, j);
            mu_i += idx(i) * p;
            mu_j += idx(j) * p;
        }
    }
    let (mut var_i, mut var_j, mut cov) = (T::zero(), T::zero(), T::zero());
    let (mut contrast, mut energy, mut homogeneity, mut entropy, mut dissimilarity) =
        (T::zero(), T::zero(), T::zero(), T::zero(), T::zero());
    for i in 0..g {
        for j in 0..g {
            let p = c.get(i, j);
            if p == T::zero() {
                continue;
            }
            let di = idx(i) - mu_i;
            let dj = idx(j) - mu_j;
            let diff = idx(i) - idx(j);
            var_i += di * di * p;
            var_j += dj * dj * p;
            cov += di * dj * p;
            contrast += diff * diff * p;
            energy += p * p;
            homogeneity += p / (T::one() + diff * diff);
            entropy -= p * p.ln();
            dissimilarity += diff.abs() * p;
        }
    }
    let floor = T::lit(DEGENERATE_VARIANCE);
    let correlation = if var_i < floor || var_j < floor { T::zero() } else { cov / (var_i * var_j).sqrt() };
    Ok(vec![contrast, correlation, energy, homogeneity, entropy.max(T::zero()), dissimilarity])
}

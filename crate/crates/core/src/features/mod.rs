//! Feature extraction: first-order statistics for the 1-D chains and
//! GLCM / GLRLM texture statistics for the STFT magnitude image.

mod fos;
mod glcm;
mod glrlm;

pub use fos::{fos, fos_with_bins, FosFeatures, ENTROPY_BINS};
pub use glcm::{glcm, glcm_counts, glcm_features, quantize, CooccurrenceMatrix, GrayImage, PairCounts, STANDARD_OFFSETS};
pub use glrlm::{glrlm, glrlm_features, Direction, RunLengthMatrix};

use std::fmt;
use std::io::Write;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::radar::AScan;
use crate::transforms::{dct, dwt_multilevel, fft, magnitude, stft, StftParams, TransformError, Wavelet};
use crate::Scalar;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FeatureError {
    #[error("feature input is empty")]
    Empty,
    #[error("input contains non-finite values")]
    NonFinite,
    #[error("invalid feature parameter: {0}")]
    InvalidParameter(String),
    #[error("offset {offset:?} does not fit inside a {rows}x{cols} image")]
    OffsetOutOfBounds { offset: (isize, isize), rows: usize, cols: usize },
    #[error("co-occurrence matrix is not normalized (sum {0})")]
    Unnormalized(f64),
    #[error("run-length matrix holds no runs")]
    NoRuns,
    #[error(transparent)]
    Transform(#[from] TransformError),
}

/// The six transform + feature chains.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum MethodTag {
    #[serde(rename = "FOS")]
    Fos,
    #[serde(rename = "FFT+FOS")]
    FftFos,
    #[serde(rename = "DCT+FOS")]
    DctFos,
    #[serde(rename = "DWT+FOS")]
    DwtFos,
    #[serde(rename = "STFT+GLCM")]
    StftGlcm,
    #[serde(rename = "STFT+GLRLM")]
    StftGlrlm,
}

impl MethodTag {
    pub const ALL: [MethodTag; 6] =
        [MethodTag::Fos, MethodTag::FftFos, MethodTag::DctFos, MethodTag::DwtFos, MethodTag::StftGlcm, MethodTag::StftGlrlm];

    pub fn as_str(self) -> &'static str {
        match self {
            MethodTag::Fos => "FOS",
            MethodTag::FftFos => "FFT+FOS",
            MethodTag::DctFos => "DCT+FOS",
            MethodTag::DwtFos => "DWT+FOS",
            MethodTag::StftGlcm => "STFT+GLCM",
            MethodTag::StftGlrlm => "STFT+GLRLM",
        }
    }
}

impl fmt::Display for MethodTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for MethodTag {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let norm = s.trim().to_ascii_uppercase().replace('-', "+");
        let norm = norm.strip_suffix("+SVM").unwrap_or(&norm);
        Self::ALL.into_iter().find(|m| m.as_str() == norm).ok_or_else(|| format!("unknown method tag {s:?}"))
    }
}

/// Tunables of the extraction chains.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct FeatureParams {
    pub dwt_levels: usize,
    pub wavelet: Wavelet,
    pub stft: StftParams,
    pub gray_levels: usize,
    pub entropy_bins: usize,
}

impl Default for FeatureParams {
    fn default() -> Self {
        Self { dwt_levels: 4, wavelet: Wavelet::Daubechies4, stft: StftParams::default(), gray_levels: 16, entropy_bins: ENTROPY_BINS }
    }
}

impl FeatureParams {
    /// Output dimension of `method`.
    pub fn dim(&self, method: MethodTag) -> usize {
        match method {
            MethodTag::Fos | MethodTag::FftFos | MethodTag::DctFos => FosFeatures::<f64>::DIM,
            MethodTag::DwtFos => FosFeatures::<f64>::DIM * (self.dwt_levels + 1),
            MethodTag::StftGlcm => 6 * STANDARD_OFFSETS.len(),
            MethodTag::StftGlrlm => 11 * Direction::ALL.len(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FeatureVector<T> {
    pub values: Vec<T>,
    pub method: MethodTag,
}

impl<T> FeatureVector<T> {
    pub fn dim(&self) -> usize {
        self.values.len()
    }
}

/// Runs chain `method` on a single A-scan.
pub fn extract<T: Scalar>(a: &AScan<T>, method: MethodTag, params: &FeatureParams) -> Result<FeatureVector<T>, FeatureError> {
    if a.samples.is_empty() {
        return Err(FeatureError::Empty);
    }
    if a.samples.iter().any(|s| !(s.re.is_finite() && s.im.is_finite())) {
        return Err(FeatureError::NonFinite);
    }
    let mags = a.magnitudes();
    let fos_vec = |x: &[T]| fos_with_bins(x, params.entropy_bins).map(|f| f.to_vec());
    let values = match method {
        MethodTag::Fos => fos_vec(&mags)?,
        MethodTag::FftFos => fos_vec(&fft(&a.samples)?.magnitudes())?,
        MethodTag::DctFos => fos_vec(&dct(&mags)?)?,
        MethodTag::DwtFos => {
            let bands = dwt_multilevel(&mags, params.dwt_levels, params.wavelet)?;
            let mut out = Vec::with_capacity(params.dim(method));
            for band in bands.bands() {
                out.extend(fos_vec(band)?);
            }
            out
        }
        MethodTag::StftGlcm | MethodTag::StftGlrlm => {
            let img = stft_image(&mags, params)?;
            let mut out = Vec::with_capacity(params.dim(method));
            if method == MethodTag::StftGlcm {
                for off in STANDARD_OFFSETS {
                    out.extend(glcm_features(&glcm::<T>(&img, off)?)?);
                }
            } else {
                for d in Direction::ALL {
                    out.extend(glrlm_features::<T>(&glrlm(&img, d), img.n_pixels())?);
                }
            }
            out
        }
    };
    debug_assert_eq!(values.len(), params.dim(method));
    Ok(FeatureVector { values, method })
}

/// Quantized STFT magnitude of a real sequence.
pub fn stft_image<T: Scalar>(signal: &[T], params: &FeatureParams) -> Result<GrayImage, FeatureError> {
    let s = stft(signal, params.stft)?;
    quantize(&magnitude(&s.frames), params.gray_levels)
}

/// Extracts `method` from every scan, in order.
pub fn extract_all<T: Scalar>(
    scans: &[AScan<T>],
    method: MethodTag,
    params: &FeatureParams,
) -> Result<Vec<FeatureVector<T>>, FeatureError> {
    scans.par_iter().map(|a| extract(a, method, params)).collect()
}

/// Feature CSV: header `method_tag,label,f_0..f_{d-1}`, one row per vector.
pub fn write_features_csv<T: Scalar, W: Write>(w: W, labels: &[usize], vectors: &[FeatureVector<T>]) -> Result<(), csv::Error> {
    let dim = vectors.first().map_or(0, FeatureVector::dim);
    let mut out = csv::Writer::from_writer(w);
    let mut header = vec!["method_tag".to_string(), "label".to_string()];
    header.extend((0..dim).map(|i| format!("f_{i}")));
    out.write_record(&header)?;
    for (label, v) in labels.iter().zip(vectors) {
        let mut row = vec![v.method.to_string(), label.to_string()];
        row.extend(v.values.iter().map(|x| x.to_f64_lossy().to_string()));
        out.write_record(&row)?;
    }
    out.flush()?;
    Ok(())
}

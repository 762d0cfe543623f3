//! Deterministic signal transforms feeding the feature extractors.

mod dct;
mod dwt;
mod fft;
mod stft;

pub use dct::{dct, idct};
pub use dwt::{dwt_multilevel, idwt_multilevel, SubbandSet, Wavelet};
pub use fft::{fft, ifft, Spectrum};
pub use stft::{hamming, magnitude, stft, StftMatrix, StftParams};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TransformError {
    #[error("transform input is empty")]
    Empty,
    #[error("level {level}: {len} samples is shorter than the {filter_len}-tap {wavelet} filter")]
    TooShort { level: usize, len: usize, filter_len: usize, wavelet: Wavelet },
    #[error("invalid transform parameter: {0}")]
    InvalidParameter(String),
}

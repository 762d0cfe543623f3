use num_complex::Complex;
use serde::{Deserialize, Serialize};

use super::{fft, TransformError};
use crate::{Matrix, Scalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StftParams {
    pub window_len: usize,
    pub hop: usize,
    pub fft_len: usize,
}

impl Default for StftParams {
    fn default() -> Self {
        Self { window_len: 64, hop: 32, fft_len: 64 }
    }
}

impl StftParams {
    pub fn freq_bins(&self) -> usize {
        self.fft_len / 2 + 1
    }

    /// Number of frames for a signal of `len` samples, if the window fits.
    pub fn time_frames(&self, len: usize) -> Option<usize> {
        (self.hop > 0 && self.window_len <= len).then(|| (len - self.window_len) / self.hop + 1)
    }
}

/// One-sided STFT, `freq_bins x time_frames`.
#[derive(Clone, Debug, PartialEq)]
pub struct StftMatrix<T> {
    pub frames: Matrix<Complex<T>>,
    pub params: StftParams,
}

/// Symmetric Hamming window.
pub fn hamming<T: Scalar>(len: usize) -> Vec<T> {
    if len == 1 {
        return vec![T::one()];
    }
    let denom = T::from_usize_lossy(len - 1);
    (0..len)
        .map(|n| T::lit(0.54) - T::lit(0.46) * (T::lit(2.0) * T::PI() * T::from_usize_lossy(n) / denom).cos())
        .collect()
}

pub fn stft<T: Scalar>(signal: &[T], params: StftParams) -> Result<StftMatrix<T>, TransformError> {
    let StftParams { window_len, hop, fft_len } = params;
    if window_len == 0 || hop == 0 {
        return Err(TransformError::InvalidParameter("window length and hop must be positive".into()));
    }
    if window_len > signal.len() {
        return Err(TransformError::InvalidParameter(format!(
            "window of {window_len} samples exceeds signal of {}",
            signal.len()
        )));
    }
    if fft_len < window_len {
        return Err(TransformError::InvalidParameter(format!("fft length {fft_len} < window length {window_len}")));
    }
    let window = hamming::<T>(window_len);
    let n_frames = params.time_frames(signal.len()).expect("checked above");
    let n_bins = params.freq_bins();
    let zero = Complex::new(T::zero(), T::zero());
    let mut frames = Matrix::filled(n_bins, n_frames, zero);
    let mut buf = vec![zero; fft_len];
    for t in 0..n_frames {
        let start = t * hop;
        buf.fill(zero);
        for (slot, (&x, &w)) in buf.iter_mut().zip(signal[start..start + window_len].iter().zip(&window)) {
            *slot = Complex::new(x * w, T::zero());
        }
        let spec = fft(&buf)?.values;
        for (f, &v) in spec.iter().take(n_bins).enumerate() {
            frames.set(f, t, v);
        }
    }
    Ok(StftMatrix { frames, params })
}

/// Element-wise modulus.
pub fn magnitude<T: Scalar>(m: &Matrix<Complex<T>>) -> Matrix<T> {
    m.map(|c| c.norm())
}

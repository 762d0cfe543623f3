use num_complex::Complex;
use rustfft::FftPlanner;

use super::TransformError;
use crate::Scalar;

/// Unnormalized forward DFT of a complex signal.
#[derive(Clone, Debug, PartialEq)]
pub struct Spectrum<T> {
    pub values: Vec<Complex<T>>,
}

impl<T: Scalar> Spectrum<T> {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn magnitudes(&self) -> Vec<T> {
        self.values.iter().map(|c| c.norm()).collect()
    }
}

/// Forward DFT, `X[m] = sum_n x[n] exp(-2 pi i m n / N)`.
pub fn fft<T: Scalar>(signal: &[Complex<T>]) -> Result<Spectrum<T>, TransformError> {
    if signal.is_empty() {
        return Err(TransformError::Empty);
    }
    let mut buf = signal.to_vec();
    FftPlanner::new().plan_fft_forward(buf.len()).process(&mut buf);
    Ok(Spectrum { values: buf })
}

/// Inverse DFT with the `1/N` normalization, so `ifft(fft(x).values) == x`.
pub fn ifft<T: Scalar>(spectrum: &[Complex<T>]) -> Result<Vec<Complex<T>>, TransformError> {
    if spectrum.is_empty() {
        return Err(TransformError::Empty);
    }
    let mut buf = spectrum.to_vec();
    FftPlanner::new().plan_fft_inverse(buf.len()).process(&mut buf);
    let scale = T::one() / T::from_usize_lossy(buf.len());
    for v in &mut buf {
        *v = *v * scale;
    }
    Ok(buf)
}

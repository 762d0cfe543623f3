use num_complex::Complex;

use super::{fft, TransformError};
use crate::Scalar;

/// Orthonormal DCT-II, computed through an `N`-point FFT of the even/odd
/// reordered input.
pub fn dct<T: Scalar>(signal: &[T]) -> Result<Vec<T>, TransformError> {
    let n = signal.len();
    if n == 0 {
        return Err(TransformError::Empty);
    }
    let mut v = vec![Complex::new(T::zero(), T::zero()); n];
    for (i, &x) in signal.iter().enumerate() {
        let slot = if i % 2 == 0 { i / 2 } else { n - 1 - i / 2 };
        v[slot] = Complex::new(x, T::zero());
    }
    let spec = fft(&v)?.values;
    let nf = T::from_usize_lossy(n);
    let dc_scale = (T::one() / nf).sqrt();
    let ac_scale = (T::lit(2.0) / nf).sqrt();
    Ok(spec
        .iter()
        .enumerate()
        .map(|(k, &vk)| {
            let ang = -T::PI() * T::from_usize_lossy(k) / (T::lit(2.0) * nf);
            let raw = (vk * Complex::from_polar(T::one(), ang)).re;
            raw * if k == 0 { dc_scale } else { ac_scale }
        })
        .collect())
}

/// Inverse of [`dct`] (orthonormal DCT-III).
pub fn idct<T: Scalar>(coeffs: &[T]) -> Result<Vec<T>, TransformError> {
    let n = coeffs.len();
    if n == 0 {
        return Err(TransformError::Empty);
    }
    let nf = T::from_usize_lossy(n);
    let dc_scale = (T::one() / nf).sqrt();
    let ac_scale = (T::lit(2.0) / nf).sqrt();
    Ok((0..n)
        .map(|i| {
            let mut acc = coeffs[0] * dc_scale;
            for (k, &c) in coeffs.iter().enumerate().skip(1) {
                // reduce the angle index mod 4N to keep the cosine argument small
                let idx = ((2 * i + 1) * k) % (4 * n);
                let ang = T::PI() * T::from_usize_lossy(idx) / (T::lit(2.0) * nf);
                acc += c * ac_scale * ang.cos();
            }
            acc
        })
        .collect())
}

//! Multilevel orthogonal DWT over a periodized two-channel filterbank.
//!
//! Odd-length inputs are extended by one mirrored sample before each
//! analysis stage, so every subband holds `ceil(len / 2)` coefficients and
//! synthesis followed by truncation is exact.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::TransformError;
use crate::Scalar;

const HAAR: [f64; 2] = [std::f64::consts::FRAC_1_SQRT_2, std::f64::consts::FRAC_1_SQRT_2];

// Daubechies scaling filter with four vanishing moments (8 taps).
const DB4: [f64; 8] = [
    0.230_377_813_308_855_23,
    0.714_846_570_552_541_5,
    0.630_880_767_929_590_4,
    -0.027_983_769_416_983_85,
    -0.187_034_811_718_881_14,
    0.030_841_381_835_986_965,
    0.032_883_011_666_982_945,
    -0.010_597_401_784_997_278,
];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Wavelet {
    Haar,
    #[serde(rename = "db4")]
    Daubechies4,
}

impl fmt::Display for Wavelet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Wavelet::Haar => "haar",
            Wavelet::Daubechies4 => "db4",
        })
    }
}

impl Wavelet {
    /// Scaling (low-pass) filter taps.
    pub fn lowpass(self) -> &'static [f64] {
        match self {
            Wavelet::Haar => &HAAR,
            Wavelet::Daubechies4 => &DB4,
        }
    }

    pub fn filter_len(self) -> usize {
        self.lowpass().len()
    }

    fn filters<T: Scalar>(self) -> (Vec<T>, Vec<T>) {
        let h = self.lowpass();
        let len = h.len();
        let lo = h.iter().map(|&v| T::lit(v)).collect();
        // quadrature mirror: g[t] = (-1)^t h[L-1-t]
        let hi = (0..len)
            .map(|t| {
                let v = T::lit(h[len - 1 - t]);
                if t % 2 == 0 { v } else { -v }
            })
            .collect();
        (lo, hi)
    }
}

/// Output of [`dwt_multilevel`].
#[derive(Clone, Debug, PartialEq)]
pub struct SubbandSet<T> {
    /// Approximation coefficients of the deepest level.
    pub approx: Vec<T>,
    /// Detail coefficients, level 1 (finest) first.
    pub details: Vec<Vec<T>>,
    pub levels: usize,
    pub wavelet: Wavelet,
    /// Input length at each level, needed to undo odd-length padding.
    pub input_lengths: Vec<usize>,
}

impl<T: Scalar> SubbandSet<T> {
    /// Subbands in feature order: approximation first, then details level 1..L.
    pub fn bands(&self) -> impl Iterator<Item = &[T]> {
        std::iter::once(self.approx.as_slice()).chain(self.details.iter().map(Vec::as_slice))
    }

    pub fn total_len(&self) -> usize {
        self.bands().map(<[T]>::len).sum()
    }
}

fn analyze<T: Scalar>(x: &[T], lo: &[T], hi: &[T]) -> (Vec<T>, Vec<T>) {
    let mut padded = x.to_vec();
    if padded.len() % 2 == 1 {
        padded.push(x[x.len() - 1]);
    }
    let n = padded.len();
    let half = n / 2;
    let mut a = Vec::with_capacity(half);
    let mut d = Vec::with_capacity(half);
    for k in 0..half {
        let (mut sa, mut sd) = (T::zero(), T::zero());
        for (t, (&l, &h)) in lo.iter().zip(hi).enumerate() {
            let v = padded[(2 * k + t) % n];
            sa += l * v;
            sd += h * v;
        }
        a.push(sa);
        d.push(sd);
    }
    (a, d)
}

fn synthesize<T: Scalar>(a: &[T], d: &[T], lo: &[T], hi: &[T], out_len: usize) -> Vec<T> {
    let n = 2 * a.len();
    let mut y = vec![T::zero(); n];
    for k in 0..a.len() {
        for (t, (&l, &h)) in lo.iter().zip(hi).enumerate() {
            y[(2 * k + t) % n] += a[k] * l + d[k] * h;
        }
    }
    y.truncate(out_len);
    y
}

/// Cascaded analysis: the approximation of level `l` feeds level `l + 1`.
pub fn dwt_multilevel<T: Scalar>(signal: &[T], levels: usize, wavelet: Wavelet) -> Result<SubbandSet<T>, TransformError> {
    if levels == 0 {
        return Err(TransformError::InvalidParameter("DWT needs at least one level".into()));
    }
    if signal.is_empty() {
        return Err(TransformError::Empty);
    }
    let (lo, hi) = wavelet.filters::<T>();
    let mut current = signal.to_vec();
    let mut details = Vec::with_capacity(levels);
    let mut input_lengths = Vec::with_capacity(levels);
    for level in 1..=levels {
        if current.len() < lo.len() {
            return Err(TransformError::TooShort { level, len: current.len(), filter_len: lo.len(), wavelet });
        }
        input_lengths.push(current.len());
        let (a, d) = analyze(&current, &lo, &hi);
        details.push(d);
        current = a;
    }
    Ok(SubbandSet { approx: current, details, levels, wavelet, input_lengths })
}

/// Synthesis filterbank inverting [`dwt_multilevel`].
pub fn idwt_multilevel<T: Scalar>(set: &SubbandSet<T>) -> Vec<T> {
    let (lo, hi) = set.wavelet.filters::<T>();
    let mut current = set.approx.clone();
    for level in (0..set.levels).rev() {
        current = synthesize(&current, &set.details[level], &lo, &hi, set.input_lengths[level]);
    }
    current
}

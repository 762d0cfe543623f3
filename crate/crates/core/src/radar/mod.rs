//! Stepped-frequency CW radar model: point-scatterer backscatter and range
//! profiles.
//!
//! The frequency grid is `f_n = f_start + n * B / N` for `n = 0..N`, so the
//! inverse DFT of an A-scan has bins spaced exactly `dz = c / 2B` apart and
//! aliases with period `N * dz`.

mod dataset;
mod io;
mod scene;

pub use dataset::{generate_dataset, ClassCounts, DatasetSpec, Jitter};
pub use io::{read_csv, read_dataset, write_csv, write_dataset, DatasetError, MAGIC, VERSION};
pub use scene::{synth_surface, AmplitudeModel, SiloScene, WallRing};

use std::fmt;
use std::str::FromStr;

use num_complex::Complex;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::transforms::{fft, ifft};
use crate::{rng, Scalar};

/// Propagation speed in m/s.
pub const SPEED_OF_LIGHT: f64 = 2.997_924_58e8;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RadarError {
    #[error("invalid radar parameters: {0}")]
    InvalidParams(String),
    #[error("invalid scene: {0}")]
    InvalidScene(String),
    #[error("scatterer {index} at {range} m lies outside the unambiguous range [0, {max_range}) m")]
    Aliasing { index: usize, range: f64, max_range: f64 },
    #[error("A-scan has {got} samples but the radar sweeps {expected} frequencies")]
    LengthMismatch { expected: usize, got: usize },
}

/// Grain surface classes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SurfaceClass {
    Levelled = 0,
    PeakedCone = 1,
    InvertedCone = 2,
}

impl SurfaceClass {
    pub const ALL: [SurfaceClass; 3] = [SurfaceClass::Levelled, SurfaceClass::PeakedCone, SurfaceClass::InvertedCone];

    pub fn id(self) -> usize {
        self as usize
    }

    pub fn from_id(id: usize) -> Option<Self> {
        Self::ALL.get(id).copied()
    }

    pub fn name(self) -> &'static str {
        match self {
            SurfaceClass::Levelled => "levelled",
            SurfaceClass::PeakedCone => "peaked_cone",
            SurfaceClass::InvertedCone => "inverted_cone",
        }
    }

    /// Sign applied to the cone height: + peaked, - inverted, 0 levelled.
    pub fn cone_sign(self) -> f64 {
        match self {
            SurfaceClass::Levelled => 0.0,
            SurfaceClass::PeakedCone => 1.0,
            SurfaceClass::InvertedCone => -1.0,
        }
    }
}

impl fmt::Display for SurfaceClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SurfaceClass {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL.into_iter().find(|c| c.name() == s).ok_or_else(|| format!("unknown surface class {s:?}"))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RadarParams<T> {
    pub f_start: T,
    pub f_stop: T,
    pub n_freq: usize,
}

impl<T: Scalar> Default for RadarParams<T> {
    /// 18-40 GHz in 301 steps.
    fn default() -> Self {
        Self { f_start: T::lit(18e9), f_stop: T::lit(40e9), n_freq: 301 }
    }
}

impl<T: Scalar> RadarParams<T> {
    pub fn new(f_start: T, f_stop: T, n_freq: usize) -> Result<Self, RadarError> {
        let p = Self { f_start, f_stop, n_freq };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<(), RadarError> {
        if !(self.f_start.is_finite() && self.f_stop.is_finite()) {
            return Err(RadarError::InvalidParams("frequencies must be finite".into()));
        }
        if self.f_start <= T::zero() {
            return Err(RadarError::InvalidParams(format!("f_start must be positive, got {}", self.f_start)));
        }
        if self.f_stop <= self.f_start {
            return Err(RadarError::InvalidParams(format!(
                "bandwidth must be positive (f_start {} >= f_stop {})",
                self.f_start, self.f_stop
            )));
        }
        if self.n_freq < 2 {
            return Err(RadarError::InvalidParams(format!("need at least 2 frequency steps, got {}", self.n_freq)));
        }
        Ok(())
    }

    pub fn c() -> T {
        T::lit(SPEED_OF_LIGHT)
    }

    pub fn bandwidth(&self) -> T {
        self.f_stop - self.f_start
    }

    /// Swept frequencies `f_start + n * B / N`.
    pub fn frequencies(&self) -> Vec<T> {
        let step = self.bandwidth() / T::from_usize_lossy(self.n_freq);
        (0..self.n_freq).map(|n| self.f_start + T::from_usize_lossy(n) * step).collect()
    }
}

/// `dz = c / (2 B)`.
pub fn range_resolution<T: Scalar>(params: &RadarParams<T>) -> Result<T, RadarError> {
    let b = params.bandwidth();
    if !(b > T::zero()) {
        return Err(RadarError::InvalidParams(format!("bandwidth must be positive, got {b}")));
    }
    Ok(RadarParams::<T>::c() / (T::lit(2.0) * b))
}

/// `R_max = N * dz`.
pub fn max_unambiguous_range<T: Scalar>(params: &RadarParams<T>) -> Result<T, RadarError> {
    Ok(T::from_usize_lossy(params.n_freq) * range_resolution(params)?)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Scatterer<T> {
    pub amplitude: T,
    pub range: T,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScattererCloud<T> {
    pub points: Vec<Scatterer<T>>,
    pub class_label: SurfaceClass,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AScanMeta {
    pub seed: u64,
    /// `None` for noiseless scans.
    pub snr_db: Option<f64>,
}

/// One frequency-domain measurement.
#[derive(Clone, Debug, PartialEq)]
pub struct AScan<T> {
    pub samples: Vec<Complex<T>>,
    pub label: SurfaceClass,
    pub meta: AScanMeta,
}

impl<T: Scalar> AScan<T> {
    pub fn magnitudes(&self) -> Vec<T> {
        self.samples.iter().map(|c| c.norm()).collect()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RangeProfile<T> {
    pub bins: Vec<Complex<T>>,
    /// Metres per bin.
    pub bin_spacing: T,
}

impl<T: Scalar> RangeProfile<T> {
    pub fn peak_bin(&self) -> usize {
        (0..self.bins.len()).max_by(|&a, &b| self.bins[a].norm().partial_cmp(&self.bins[b].norm()).unwrap_or(std::cmp::Ordering::Equal).then(b.cmp(&a))).unwrap_or(0)
    }
}

/// Noiseless coherent sum `S[n] = sum_i p_i exp(-j 2 k_n R_i)`, `k_n = 2 pi f_n / c`.
pub fn backscatter_clean<T: Scalar>(cloud: &ScattererCloud<T>, params: &RadarParams<T>) -> Result<Vec<Complex<T>>, RadarError> {
    params.validate()?;
    let r_max = max_unambiguous_range(params)?;
    for (index, s) in cloud.points.iter().enumerate() {
        if !(s.range >= T::zero() && s.range < r_max) {
            return Err(RadarError::Aliasing { index, range: s.range.to_f64_lossy(), max_range: r_max.to_f64_lossy() });
        }
    }
    let two_pi_over_c = T::lit(2.0) * T::PI() / RadarParams::<T>::c();
    Ok(params
        .frequencies()
        .into_iter()
        .map(|f| {
            let k = two_pi_over_c * f;
            cloud.points.iter().fold(Complex::new(T::zero(), T::zero()), |acc, s| {
                acc + Complex::from_polar(s.amplitude, -T::lit(2.0) * k * s.range)
            })
        })
        .collect())
}

/// Adds complex white Gaussian noise at `snr_db` relative to the mean power
/// of `signal`.
pub fn add_noise<T: Scalar, R: Rng>(signal: &mut [Complex<T>], snr_db: f64, rng: &mut R) {
    let n = signal.len().max(1) as f64;
    let power: f64 = signal.iter().map(|c| c.norm_sqr().to_f64_lossy()).sum::<f64>() / n;
    let sigma = (power / 10f64.powf(snr_db / 10.0) / 2.0).sqrt();
    for s in signal.iter_mut() {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        *s = *s + Complex::new(T::lit(sigma * re), T::lit(sigma * im));
    }
}

/// Simulated A-scan of `cloud`, with noise drawn from `seed` when `snr_db` is set.
pub fn backscatter<T: Scalar>(
    cloud: &ScattererCloud<T>,
    params: &RadarParams<T>,
    snr_db: Option<f64>,
    seed: u64,
) -> Result<AScan<T>, RadarError> {
    let mut samples = backscatter_clean(cloud, params)?;
    if let Some(snr) = snr_db {
        let mut noise_rng = rng::stream_rng(seed, rng::Stream::Noise, 0);
        add_noise(&mut samples, snr, &mut noise_rng);
    }
    Ok(AScan { samples, label: cloud.class_label, meta: AScanMeta { seed, snr_db } })
}

/// Complex range profile via the inverse DFT.
pub fn range_profile<T: Scalar>(ascan: &AScan<T>, params: &RadarParams<T>) -> Result<RangeProfile<T>, RadarError> {
    if ascan.samples.len() != params.n_freq {
        return Err(RadarError::LengthMismatch { expected: params.n_freq, got: ascan.samples.len() });
    }
    let bins = ifft(&ascan.samples).map_err(|e| RadarError::InvalidParams(e.to_string()))?;
    Ok(RangeProfile { bins, bin_spacing: range_resolution(params)? })
}

/// Inverse of [`range_profile`].
pub fn profile_to_samples<T: Scalar>(profile: &RangeProfile<T>) -> Vec<Complex<T>> {
    fft(&profile.bins).map(|s| s.values).unwrap_or_default()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cloud(points: &[(f64, f64)]) -> ScattererCloud<f64> {
        ScattererCloud {
            points: points.iter().map(|&(amplitude, range)| Scatterer { amplitude, range }).collect(),
            class_label: SurfaceClass::Levelled,
        }
    }

    #[test]
    fn resolution_and_max_range() {
        let p = RadarParams::<f64>::default();
        let dz = range_resolution(&p).unwrap();
        assert!((dz - 6.813_4e-3).abs() < 1e-6);
        assert!((dz - 6.8e-3).abs() / 6.8e-3 < 5e-3);
        let rmax = max_unambiguous_range(&p).unwrap();
        assert_eq!(rmax, 301.0 * dz);
        assert!((rmax - 2.0508).abs() < 1e-3);

        let unit = RadarParams::<f64>::new(1.0, 1.0 + SPEED_OF_LIGHT / 2.0, 2).unwrap();
        assert!((range_resolution(&unit).unwrap() - 1.0).abs() < 1e-12);
        let ghz = RadarParams::<f64>::new(1e9, 2e9, 10).unwrap();
        assert!((range_resolution(&ghz).unwrap() - 0.149_896_229).abs() < 1e-8);
    }

    #[test]
    fn single_step_max_range_equals_dz() {
        // n_freq = 1 is rejected by validation, but the formula itself holds.
        let p = RadarParams { f_start: 18e9, f_stop: 40e9, n_freq: 1 };
        assert_eq!(max_unambiguous_range(&p).unwrap(), range_resolution(&p).unwrap());
    }

    #[test]
    fn invalid_params() {
        assert!(RadarParams::new(2e9, 1e9, 10).is_err());
        assert!(RadarParams::new(1e9, 1e9, 10).is_err());
        assert!(RadarParams::new(0.0, 1e9, 10).is_err());
        assert!(RadarParams::new(1e9, 2e9, 1).is_err());
        let bad = RadarParams { f_start: 2e9, f_stop: 1e9, n_freq: 10 };
        assert!(range_resolution(&bad).is_err());
    }

    #[test]
    fn zero_range_is_unit_phase() {
        let p = RadarParams::<f64>::default();
        let s = backscatter(&cloud(&[(1.0, 0.0)]), &p, None, 0).unwrap();
        assert!(s.samples.iter().all(|c| (c - Complex::new(1.0, 0.0)).norm() < 1e-15));
    }

    #[test]
    fn coincident_scatterers_add_coherently() {
        let p = RadarParams::<f64>::default();
        let s = backscatter(&cloud(&[(1.0, 0.73), (1.0, 0.73)]), &p, None, 0).unwrap();
        assert!(s.samples.iter().all(|c| (c.norm() - 2.0).abs() < 1e-12));
    }

    #[test]
    fn first_sample_matches_direct_phase() {
        let p = RadarParams::<f64>::default();
        let s = backscatter(&cloud(&[(1.0, 0.5)]), &p, None, 0).unwrap();
        let phase = -2.0 * (2.0 * std::f64::consts::PI * 18e9 / SPEED_OF_LIGHT) * 0.5;
        let want = Complex::new(phase.cos(), phase.sin());
        assert!((s.samples[0] - want).norm() < 1e-9);
    }

    #[test]
    fn out_of_range_scatterer_is_refused() {
        let p = RadarParams::<f64>::default();
        let err = backscatter(&cloud(&[(1.0, 0.2), (1.0, 2.1)]), &p, None, 0).unwrap_err();
        assert!(matches!(err, RadarError::Aliasing { index: 1, .. }));
        assert!(backscatter(&cloud(&[(1.0, -0.1)]), &p, None, 0).is_err());
    }

    #[test]
    fn range_profile_peaks() {
        let p = RadarParams::<f64>::default();
        let s = backscatter(&cloud(&[(1.0, 0.5)]), &p, None, 0).unwrap();
        let prof = range_profile(&s, &p).unwrap();
        assert_eq!(prof.peak_bin(), 73);

        let flat = AScan { samples: vec![Complex::new(1.0, 0.0); 301], label: SurfaceClass::Levelled, meta: s.meta };
        let prof = range_profile(&flat, &p).unwrap();
        assert!((prof.bins[0].norm() - 1.0).abs() < 1e-12);
        assert!(prof.bins[1..].iter().all(|b| b.norm() < 1e-12));
    }

    #[test]
    fn range_profile_round_trip() {
        let p = RadarParams::<f64>::default();
        let s = backscatter(&cloud(&[(0.7, 0.31), (0.2, 1.2)]), &p, Some(10.0), 3).unwrap();
        let back = profile_to_samples(&range_profile(&s, &p).unwrap());
        for (a, b) in s.samples.iter().zip(&back) {
            assert!((a - b).norm() <= 1e-10 * a.norm().max(1e-3));
        }
    }

    #[test]
    fn length_mismatch() {
        let p = RadarParams::<f64>::default();
        let scan = AScan { samples: vec![Complex::new(0.0, 0.0); 10], label: SurfaceClass::Levelled, meta: AScanMeta { seed: 0, snr_db: None } };
        assert_eq!(range_profile(&scan, &p).unwrap_err(), RadarError::LengthMismatch { expected: 301, got: 10 });
    }

    #[test]
    fn class_names_round_trip() {
        for c in SurfaceClass::ALL {
            assert_eq!(c.name().parse::<SurfaceClass>().unwrap(), c);
            assert_eq!(SurfaceClass::from_id(c.id()), Some(c));
        }
    }
}

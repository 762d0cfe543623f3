mod common;

use grainsort::transforms::{dct, dwt_multilevel, fft, idct, idwt_multilevel, ifft, stft, StftParams, Wavelet};
use num_complex::Complex64;
use proptest::prelude::*;

fn rel(a: &[f64], b: &[f64]) -> f64 {
    let num: f64 = a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum::<f64>().sqrt();
    num / b.iter().map(|y| y * y).sum::<f64>().sqrt().max(1e-300)
}

fn real_signal(max_len: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-10.0f64..10.0, 1..max_len)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn fft_parseval(re in real_signal(400), seed in any::<u64>()) {
        let mut r = common::rng(seed);
        let x: Vec<Complex64> = re.iter().map(|&v| Complex64::new(v, rand::Rng::random_range(&mut r, -1.0..1.0))).collect();
        let time: f64 = x.iter().map(|c| c.norm_sqr()).sum();
        let freq: f64 = fft(&x).unwrap().values.iter().map(|c| c.norm_sqr()).sum::<f64>() / x.len() as f64;
        prop_assert!((time - freq).abs() <= 1e-9 * time.max(1e-300));
        let back = ifft(&fft(&x).unwrap().values).unwrap();
        let err: f64 = back.iter().zip(&x).map(|(a, b)| (a - b).norm_sqr()).sum::<f64>().sqrt();
        prop_assert!(err <= 1e-9 * time.sqrt());
    }

    #[test]
    fn dct_is_orthonormal(x in real_signal(400)) {
        let c = dct(&x).unwrap();
        let e_in: f64 = x.iter().map(|v| v * v).sum();
        let e_out: f64 = c.iter().map(|v| v * v).sum();
        prop_assert!((e_in - e_out).abs() <= 1e-9 * e_in.max(1e-300));
        prop_assert!(rel(&idct(&c).unwrap(), &x) <= 1e-9);
    }

    #[test]
    fn dwt_reconstructs(len in 16usize..600, levels in 1usize..=4, seed in any::<u64>(), haar in any::<bool>()) {
        let wavelet = if haar { Wavelet::Haar } else { Wavelet::Daubechies4 };
        let mut r = common::rng(seed);
        let x: Vec<f64> = (0..len).map(|_| rand::Rng::random_range(&mut r, -5.0..5.0)).collect();
        match dwt_multilevel(&x, levels, wavelet) {
            Ok(set) => {
                prop_assert!(set.total_len() >= len);
                prop_assert_eq!(set.details.len(), levels);
                prop_assert!(rel(&idwt_multilevel(&set), &x) <= 1e-9);
            }
            Err(_) => prop_assert!(!haar && len < 8 << (levels - 1)),
        }
    }

    #[test]
    fn stft_shape_law(len in 1usize..500, window in 1usize..128, hop in 1usize..64, pad in 0usize..64) {
        let x: Vec<f64> = (0..len).map(|i| (i as f64 * 0.37).sin()).collect();
        let params = StftParams { window_len: window, hop, fft_len: window + pad };
        match stft(&x, params) {
            Ok(s) => {
                prop_assert!(window <= len);
                prop_assert_eq!(s.frames.rows(), (window + pad) / 2 + 1);
                prop_assert_eq!(s.frames.cols(), (len - window) / hop + 1);
            }
            Err(_) => prop_assert!(window > len),
        }
    }
}

#[test]
fn fft_matches_direct_dft_on_radar_length() {
    let mut r = common::rng(3);
    let x: Vec<Complex64> =
        (0..301).map(|_| Complex64::new(rand::Rng::random_range(&mut r, -1.0..1.0), rand::Rng::random_range(&mut r, -1.0..1.0))).collect();
    let fast = fft(&x).unwrap().values;
    let slow = common::direct_dft(&x);
    let err: f64 = fast.iter().zip(&slow).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
    assert!(err < 1e-9, "{err}");
}

#[test]
fn dwt_lengths_of_note() {
    for len in [64, 301, 512] {
        let x: Vec<f64> = (0..len).map(|i| ((i * 7919) % 101) as f64 - 50.0).collect();
        for w in [Wavelet::Haar, Wavelet::Daubechies4] {
            let set = dwt_multilevel(&x, 4, w).unwrap();
            assert!(rel(&idwt_multilevel(&set), &x) <= 1e-9, "{w:?} len {len}");
        }
    }
}

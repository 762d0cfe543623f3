mod common;

use grainsort::radar::{
    add_noise, backscatter, backscatter_clean, generate_dataset, max_unambiguous_range, range_profile, range_resolution,
    read_csv, read_dataset, write_csv, write_dataset, ClassCounts, DatasetError, DatasetSpec, RadarError, RadarParams,
    Scatterer, ScattererCloud, SurfaceClass,
};
use num_complex::Complex64;
use proptest::prelude::*;

fn cloud(points: Vec<(f64, f64)>) -> ScattererCloud<f64> {
    ScattererCloud {
        points: points.into_iter().map(|(amplitude, range)| Scatterer { amplitude, range }).collect(),
        class_label: SurfaceClass::PeakedCone,
    }
}

fn scatterers() -> impl Strategy<Value = Vec<(f64, f64)>> {
    prop::collection::vec((0.01f64..3.0, 0.0f64..2.0), 1..12)
}

fn rel_err(a: &[Complex64], b: &[Complex64]) -> f64 {
    let num: f64 = a.iter().zip(b).map(|(x, y)| (x - y).norm_sqr()).sum::<f64>().sqrt();
    let den: f64 = b.iter().map(|y| y.norm_sqr()).sum::<f64>().sqrt().max(1e-300);
    num / den
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn backscatter_is_linear(a in scatterers(), b in scatterers()) {
        let p = RadarParams::<f64>::default();
        let sa = backscatter_clean(&cloud(a.clone()), &p).unwrap();
        let sb = backscatter_clean(&cloud(b.clone()), &p).unwrap();
        let both = backscatter_clean(&cloud([a, b].concat()), &p).unwrap();
        let sum: Vec<Complex64> = sa.iter().zip(&sb).map(|(x, y)| x + y).collect();
        prop_assert!(rel_err(&both, &sum) < 1e-12);
    }

    #[test]
    fn amplitude_scaling(a in scatterers(), alpha in 0.01f64..100.0) {
        let p = RadarParams::<f64>::default();
        let base = backscatter_clean(&cloud(a.clone()), &p).unwrap();
        let scaled = backscatter_clean(&cloud(a.into_iter().map(|(amp, r)| (amp * alpha, r)).collect()), &p).unwrap();
        let want: Vec<Complex64> = base.iter().map(|s| s * alpha).collect();
        prop_assert!(rel_err(&scaled, &want) < 1e-12);
    }

    #[test]
    fn single_scatterer_peak_is_localized(frac in 0.0f64..1.0) {
        let p = RadarParams::<f64>::default();
        let dz = range_resolution(&p).unwrap();
        let r_max = max_unambiguous_range(&p).unwrap();
        let r = dz / 2.0 + 1e-9 + frac * (r_max - dz - dz / 2.0 - 2e-9);
        let a = backscatter(&cloud(vec![(1.0, r)]), &p, None, 0).unwrap();
        let peak = range_profile(&a, &p).unwrap().peak_bin() as i64;
        let want = (r / dz).round() as i64;
        prop_assert!((peak - want).abs() <= 1, "peak {} want {}", peak, want);
    }
}

#[test]
fn resolution_constants() {
    let p = RadarParams::<f64>::default();
    let dz = range_resolution(&p).unwrap();
    assert!((dz - 6.8e-3).abs() / 6.8e-3 < 5e-3);
    assert_eq!(dz * 301.0, max_unambiguous_range(&p).unwrap());
    let one = RadarParams::<f64>::new(18e9, 40e9, 1);
    assert!(one.is_err());
    assert!(RadarParams::<f64>::new(40e9, 18e9, 301).is_err());
}

#[test]
fn direct_phase_oracle() {
    let p = RadarParams::<f64>::default();
    let s = backscatter_clean(&cloud(vec![(1.0, 0.5)]), &p).unwrap();
    let c = 299_792_458.0f64;
    let want = Complex64::from_polar(1.0, -2.0 * (2.0 * std::f64::consts::PI * 18e9 / c) * 0.5);
    assert!((s[0] - want).norm() < 1e-9);
    let step = 22e9 / 301.0;
    for n in [1usize, 150, 300] {
        let f = 18e9 + n as f64 * step;
        let want = Complex64::from_polar(1.0, -4.0 * std::f64::consts::PI * f / c * 0.5);
        assert!((s[n] - want).norm() < 1e-9);
    }
}

#[test]
fn degenerate_clouds() {
    let p = RadarParams::<f64>::default();
    let zero = backscatter_clean(&cloud(vec![(1.0, 0.0)]), &p).unwrap();
    assert!(zero.iter().all(|s| (s - Complex64::new(1.0, 0.0)).norm() < 1e-12));
    let double = backscatter_clean(&cloud(vec![(1.0, 0.7), (1.0, 0.7)]), &p).unwrap();
    assert!(double.iter().all(|s| (s.norm() - 2.0).abs() < 1e-12));
}

#[test]
fn profile_peak_at_half_meter() {
    let p = RadarParams::<f64>::default();
    let a = backscatter(&cloud(vec![(1.0, 0.5)]), &p, None, 0).unwrap();
    let prof = range_profile(&a, &p).unwrap();
    assert_eq!(prof.peak_bin(), 73);
    let brute = common::direct_dft(&a.samples.iter().map(|s| s.conj()).collect::<Vec<_>>());
    let brute_peak = (0..brute.len()).max_by(|&i, &j| brute[i].norm().partial_cmp(&brute[j].norm()).unwrap()).unwrap();
    assert_eq!(brute_peak, 73);
}

#[test]
fn aliasing_is_refused() {
    let p = RadarParams::<f64>::default();
    let err = backscatter_clean(&cloud(vec![(1.0, 0.5), (1.0, 2.1)]), &p).unwrap_err();
    assert!(matches!(err, RadarError::Aliasing { index: 1, .. }));
    let short = backscatter(&cloud(vec![(1.0, 0.5)]), &RadarParams::new(18e9, 40e9, 100).unwrap(), None, 0).unwrap();
    assert!(matches!(range_profile(&short, &p), Err(RadarError::LengthMismatch { expected: 301, got: 100 })));
}

#[test]
fn measured_snr_matches_request() {
    let p = RadarParams::<f64>::default();
    let clean = backscatter_clean(&cloud(vec![(1.0, 0.3), (0.5, 0.9), (0.2, 1.4)]), &p).unwrap();
    let signal_power = clean.iter().map(|s| s.norm_sqr()).sum::<f64>() / clean.len() as f64;
    for snr in [0.0, 10.0, 20.0, 30.0] {
        let mut rng = common::rng(snr as u64);
        let mut noise_power = 0.0;
        let trials = 400;
        for _ in 0..trials {
            let mut s = clean.clone();
            add_noise(&mut s, snr, &mut rng);
            noise_power += s.iter().zip(&clean).map(|(a, b)| (a - b).norm_sqr()).sum::<f64>();
        }
        let measured = 10.0 * (signal_power / (noise_power / (trials * clean.len()) as f64)).log10();
        assert!((measured - snr).abs() <= 0.5, "requested {snr} dB, measured {measured:.3} dB");
    }
}

fn small(per_class: usize, seed: u64) -> DatasetSpec {
    DatasetSpec { counts: ClassCounts::balanced(per_class), seed, ..DatasetSpec::default() }
}

#[test]
fn dataset_counts_and_default_split() {
    let p = RadarParams::<f64>::default();
    let scans = generate_dataset(&p, &small(10, 1)).unwrap();
    assert_eq!(scans.len(), 30);
    for class in SurfaceClass::ALL {
        assert_eq!(scans.iter().filter(|s| s.label == class).count(), 10);
    }
    let d = ClassCounts::default();
    assert_eq!(d.0, [1894, 1894, 1893]);
    assert_eq!(d.total(), 5681);
}

#[test]
fn binary_files_are_byte_identical_and_round_trip() {
    let p = RadarParams::<f64>::default();
    let write = |seed| {
        let mut buf = Vec::new();
        write_dataset(&mut buf, &p, &generate_dataset(&p, &small(4, seed)).unwrap()).unwrap();
        buf
    };
    let a = write(5);
    assert_eq!(a, write(5));
    assert_ne!(a, write(6));
    let (p2, scans) = read_dataset::<f64, _>(a.as_slice()).unwrap();
    assert_eq!(p2, p);
    assert_eq!(scans, generate_dataset(&p, &small(4, 5)).unwrap());
}

#[test]
fn corrupt_files_name_the_byte_offset() {
    let p = RadarParams::<f64>::default();
    let mut buf = Vec::new();
    write_dataset(&mut buf, &p, &generate_dataset(&p, &small(1, 0)).unwrap()).unwrap();
    let cut = buf.len() - 5;
    let err = read_dataset::<f64, _>(&buf[..cut]).unwrap_err();
    assert!(matches!(err, DatasetError::Truncated { .. }));
    assert!(err.to_string().contains("byte"), "{err}");
    let mut bad = buf.clone();
    bad[0] = b'X';
    assert!(matches!(read_dataset::<f64, _>(bad.as_slice()), Err(DatasetError::BadMagic { .. })));
    let mut bad = buf.clone();
    bad[4] = 9;
    assert!(matches!(read_dataset::<f64, _>(bad.as_slice()), Err(DatasetError::UnsupportedVersion(9))));
}

#[test]
fn csv_round_trip() {
    let p = RadarParams::<f64>::default();
    let scans = generate_dataset(&p, &small(2, 3)).unwrap();
    let mut buf = Vec::new();
    write_csv(&mut buf, &scans).unwrap();
    let header = String::from_utf8(buf.clone()).unwrap().lines().next().unwrap().to_string();
    assert!(header.starts_with("label,re_0,im_0,re_1"));
    let back = read_csv::<f64, _>(buf.as_slice()).unwrap();
    assert_eq!(back.len(), scans.len());
    for (a, b) in back.iter().zip(&scans) {
        assert_eq!(a.label, b.label);
        assert_eq!(a.samples, b.samples);
    }
}

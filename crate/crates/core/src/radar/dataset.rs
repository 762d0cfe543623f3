use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{backscatter, synth_surface, AScan, RadarError, RadarParams, SiloScene, SurfaceClass};
use crate::{rng, Scalar};

/// Records per class, indexed by [`SurfaceClass::id`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassCounts(pub [usize; 3]);

impl Default for ClassCounts {
    /// 1894 / 1894 / 1893, 5681 records in total.
    fn default() -> Self {
        ClassCounts([1894, 1894, 1893])
    }
}

impl ClassCounts {
    pub fn balanced(per_class: usize) -> Self {
        ClassCounts([per_class; 3])
    }

    pub fn total(&self) -> usize {
        self.0.iter().sum()
    }

    /// Class of the record at position `index` (records are grouped by class).
    pub fn class_of(&self, index: usize) -> SurfaceClass {
        let mut acc = 0;
        for class in SurfaceClass::ALL {
            acc += self.0[class.id()];
            if index < acc {
                return class;
            }
        }
        panic!("record index {index} beyond {} records", self.total())
    }
}

/// Per-record perturbation ranges, inclusive.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Jitter {
    pub fill_fraction: (f64, f64),
    /// Band for the cone apex magnitude; the sign comes from the class.
    pub cone_height: (f64, f64),
    /// Band for the system gain in dB.
    #[serde(default)]
    pub gain_db: (f64, f64),
}

impl Default for Jitter {
    fn default() -> Self {
        Jitter { fill_fraction: (0.3, 0.8), cone_height: (0.06, 0.12), gain_db: (-10.0, 10.0) }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DatasetSpec {
    pub scene: SiloScene,
    #[serde(default)]
    pub jitter: Jitter,
    #[serde(default)]
    pub counts: ClassCounts,
    pub snr_db: Option<f64>,
    pub seed: u64,
}

impl Default for DatasetSpec {
    fn default() -> Self {
        Self { scene: SiloScene::default(), jitter: Jitter::default(), counts: ClassCounts::default(), snr_db: Some(20.0), seed: 0 }
    }
}

fn draw_in<R: Rng>(rng: &mut R, (lo, hi): (f64, f64)) -> f64 {
    if hi > lo { rng.random_range(lo..=hi) } else { lo }
}

impl DatasetSpec {
    pub fn validate(&self) -> Result<(), RadarError> {
        let (flo, fhi) = self.jitter.fill_fraction;
        let (clo, chi) = self.jitter.cone_height;
        if !(flo > 0.0 && fhi < 1.0 && flo <= fhi) {
            return Err(RadarError::InvalidScene(format!("fill fraction jitter {flo}..{fhi} must lie inside (0, 1)")));
        }
        if !(clo >= 0.0 && clo <= chi) {
            return Err(RadarError::InvalidScene(format!("cone height jitter {clo}..{chi} must be a non-negative band")));
        }
        let (glo, ghi) = self.jitter.gain_db;
        if !(glo.is_finite() && ghi.is_finite() && glo <= ghi) {
            return Err(RadarError::InvalidScene(format!("gain jitter {glo}..{ghi} must be a finite band")));
        }
        if self.counts.0.iter().any(|&c| c == 0) {
            return Err(RadarError::InvalidScene(format!("every class needs at least one record, got {:?}", self.counts.0)));
        }
        Ok(())
    }

    /// Seed of record `index`; scene, jitter and noise streams all derive from it.
    pub fn record_seed(&self, index: usize) -> u64 {
        rng::derive_seed(self.seed, rng::Stream::Scene, index as u64)
    }

    /// Scene of record `index` after jitter.
    pub fn record_scene(&self, index: usize) -> SiloScene {
        let mut jr = rng::stream_rng(self.record_seed(index), rng::Stream::Jitter, 0);
        let fill = draw_in(&mut jr, self.jitter.fill_fraction);
        let cone = draw_in(&mut jr, self.jitter.cone_height);
        let gain = draw_in(&mut jr, self.jitter.gain_db);
        let class = self.counts.class_of(index);
        SiloScene { fill_fraction: fill, cone_height: class.cone_sign() * cone, gain_db: self.scene.gain_db + gain, ..self.scene.clone() }
    }
}

/// Simulates every record of `spec`; records are grouped by class in id order.
pub fn generate_dataset<T: Scalar>(params: &RadarParams<T>, spec: &DatasetSpec) -> Result<Vec<AScan<T>>, RadarError> {
    params.validate()?;
    spec.validate()?;
    (0..spec.counts.total())
        .into_par_iter()
        .map(|i| {
            let seed = spec.record_seed(i);
            let cloud = synth_surface(&spec.record_scene(i), spec.counts.class_of(i), seed)?;
            backscatter(&cloud, params, spec.snr_db, seed)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small(per_class: usize, seed: u64) -> DatasetSpec {
        DatasetSpec { counts: ClassCounts::balanced(per_class), seed, ..DatasetSpec::default() }
    }

    #[test]
    fn balanced_counts() {
        let data = generate_dataset(&RadarParams::<f64>::default(), &small(10, 1)).unwrap();
        assert_eq!(data.len(), 30);
        for class in SurfaceClass::ALL {
            assert_eq!(data.iter().filter(|a| a.label == class).count(), 10);
        }
        assert!(data.iter().all(|a| a.samples.len() == 301 && a.samples.iter().all(|s| s.re.is_finite() && s.im.is_finite())));
    }

    #[test]
    fn default_counts_total() {
        let c = ClassCounts::default();
        assert_eq!(c.total(), 5681);
        assert_eq!(c.class_of(0), SurfaceClass::Levelled);
        assert_eq!(c.class_of(1894), SurfaceClass::PeakedCone);
        assert_eq!(c.class_of(5680), SurfaceClass::InvertedCone);
    }

    #[test]
    fn deterministic() {
        let p = RadarParams::<f64>::default();
        assert_eq!(generate_dataset(&p, &small(3, 7)).unwrap(), generate_dataset(&p, &small(3, 7)).unwrap());
        assert_ne!(generate_dataset(&p, &small(3, 7)).unwrap(), generate_dataset(&p, &small(3, 8)).unwrap());
    }

    #[test]
    fn jitter_respects_bands() {
        let spec = small(20, 3);
        for i in 0..spec.counts.total() {
            let s = spec.record_scene(i);
            let (lo, hi) = spec.jitter.cone_height;
            let (glo, ghi) = spec.jitter.gain_db;
            assert!((0.3..=0.8).contains(&s.fill_fraction));
            assert!((glo..=ghi).contains(&s.gain_db));
            match spec.counts.class_of(i) {
                SurfaceClass::Levelled => assert_eq!(s.cone_height, 0.0),
                SurfaceClass::PeakedCone => assert!((lo..=hi).contains(&s.cone_height)),
                SurfaceClass::InvertedCone => assert!((-hi..=-lo).contains(&s.cone_height)),
            }
        }
    }

    #[test]
    fn zero_count_is_rejected() {
        let spec = DatasetSpec { counts: ClassCounts([3, 0, 3]), ..DatasetSpec::default() };
        assert!(generate_dataset(&RadarParams::<f64>::default(), &spec).is_err());
    }
}

//! Parametric grain-surface scenes inside a cylindrical silo.
//!
//! The antenna sits on the silo axis looking down. Each scatterer is a small
//! surface facet at radius `r`; its range is the vertical distance from the
//! antenna to the facet, and its amplitude is a random reflectivity weighted
//! by how squarely the facet faces the antenna.

use rand::Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use super::{RadarError, Scatterer, ScattererCloud, SurfaceClass};
use crate::{rng, Scalar};

/// Random facet reflectivity.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum AmplitudeModel {
    /// Rayleigh-distributed magnitudes with scale `sigma`.
    Rayleigh { sigma: f64, facet_exponent: f64 },
    Uniform { low: f64, high: f64, facet_exponent: f64 },
}

impl Default for AmplitudeModel {
    fn default() -> Self {
        AmplitudeModel::Rayleigh { sigma: std::f64::consts::FRAC_1_SQRT_2, facet_exponent: 8.0 }
    }
}

impl AmplitudeModel {
    fn facet_exponent(&self) -> f64 {
        match *self {
            AmplitudeModel::Rayleigh { facet_exponent, .. } | AmplitudeModel::Uniform { facet_exponent, .. } => facet_exponent,
        }
    }

    fn draw<R: Rng>(&self, rng: &mut R) -> f64 {
        match *self {
            AmplitudeModel::Rayleigh { sigma, .. } => {
                let u: f64 = rng.random();
                sigma * (-2.0 * (1.0 - u).ln()).sqrt()
            }
            AmplitudeModel::Uniform { low, high, .. } => rng.random_range(low..=high),
        }
    }

    fn validate(&self) -> Result<(), RadarError> {
        let ok = match *self {
            AmplitudeModel::Rayleigh { sigma, facet_exponent } => sigma > 0.0 && facet_exponent >= 0.0,
            AmplitudeModel::Uniform { low, high, facet_exponent } => low >= 0.0 && high > low && facet_exponent >= 0.0,
        };
        if ok { Ok(()) } else { Err(RadarError::InvalidScene(format!("invalid amplitude model {self:?}"))) }
    }
}

/// Fixed ring of wall reflectors (e.g. a stiffening seam) at the silo radius.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WallRing {
    /// Height of the ring above the silo floor, metres.
    pub height: f64,
    pub count: usize,
    /// Total amplitude of the ring, shared equally by its scatterers.
    pub amplitude: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SiloScene {
    pub diameter: f64,
    pub silo_height: f64,
    /// Mean grain height as a fraction of `silo_height`.
    pub fill_fraction: f64,
    /// Signed apex height relative to the rim: `+` peaked, `-` inverted, `0` levelled.
    pub cone_height: f64,
    /// Antenna height above the silo floor.
    pub antenna_height: f64,
    pub surface_roughness_sigma: f64,
    pub scatterers_per_scene: usize,
    /// System gain in dB applied to every scatterer.
    #[serde(default)]
    pub gain_db: f64,
    #[serde(default)]
    pub amplitude: AmplitudeModel,
    #[serde(default)]
    pub wall_ring: Option<WallRing>,
}

impl Default for SiloScene {
    /// 36 cm laboratory silo, half full, levelled, 2 mm roughness.
    fn default() -> Self {
        Self {
            diameter: 0.36,
            silo_height: 1.0,
            fill_fraction: 0.5,
            cone_height: 0.0,
            antenna_height: 1.1,
            surface_roughness_sigma: 0.002,
            scatterers_per_scene: 400,
            gain_db: 0.0,
            amplitude: AmplitudeModel::default(),
            wall_ring: Some(WallRing { height: 0.95, count: 16, amplitude: 0.2 }),
        }
    }
}

impl SiloScene {
    pub fn validate(&self) -> Result<(), RadarError> {
        let fail = |msg: String| Err(RadarError::InvalidScene(msg));
        if !(self.diameter > 0.0) {
            return fail(format!("diameter must be positive, got {}", self.diameter));
        }
        if !(self.silo_height > 0.0) {
            return fail(format!("silo height must be positive, got {}", self.silo_height));
        }
        if !(self.fill_fraction > 0.0 && self.fill_fraction < 1.0) {
            return fail(format!("fill fraction must lie in (0, 1), got {}", self.fill_fraction));
        }
        if self.scatterers_per_scene < 10 {
            return fail(format!("need at least 10 scatterers, got {}", self.scatterers_per_scene));
        }
        if !(self.surface_roughness_sigma >= 0.0) || !self.cone_height.is_finite() || !self.gain_db.is_finite() {
            return fail("roughness must be non-negative, cone height and gain finite".into());
        }
        let surface_top = self.silo_height * self.fill_fraction + self.cone_height.abs();
        if !(self.antenna_height > surface_top) {
            return fail(format!("antenna at {} m is below the grain surface top at {surface_top} m", self.antenna_height));
        }
        if let Some(ring) = &self.wall_ring {
            if !(ring.height < self.antenna_height) || ring.count == 0 || !(ring.amplitude >= 0.0) {
                return fail(format!("invalid wall ring {ring:?}"));
            }
        }
        self.amplitude.validate()
    }

    pub fn radius(&self) -> f64 {
        self.diameter / 2.0
    }

    /// Surface height at radial distance `r` for apex height `h`. The cone is
    /// linear in `r` and keeps the mean grain height at `fill_fraction`.
    pub fn surface_height(&self, r: f64, h: f64) -> f64 {
        let mean = self.silo_height * self.fill_fraction;
        mean + h * ((1.0 - r / self.radius()) - 1.0 / 3.0)
    }
}

/// Samples a scatterer cloud for `class`. The cone magnitude comes from
/// `scene.cone_height` and its sign from `class`.
pub fn synth_surface<T: Scalar>(scene: &SiloScene, class: SurfaceClass, seed: u64) -> Result<ScattererCloud<T>, RadarError> {
    scene.validate()?;
    let mut rng = rng::stream_rng(seed, rng::Stream::Scene, 0);
    let a = scene.radius();
    let h = class.cone_sign() * scene.cone_height.abs();
    // inward tilt of the facet normal; negative when the surface falls away from the axis
    let tilt = -(h / a).atan();
    let exponent = scene.amplitude.facet_exponent();
    let gain = 10f64.powf(scene.gain_db / 20.0);
    let norm = gain / (scene.scatterers_per_scene as f64).sqrt();
    let roughness = Normal::new(0.0, scene.surface_roughness_sigma).expect("validated roughness");

    let mut points = Vec::with_capacity(scene.scatterers_per_scene + scene.wall_ring.map_or(0, |w| w.count));
    for _ in 0..scene.scatterers_per_scene {
        let u: f64 = rng.random();
        let r = a * u.sqrt();
        let depth = scene.antenna_height - scene.surface_height(r, h);
        let range = depth + roughness.sample(&mut rng);
        let line_of_sight = r.atan2(depth);
        let gain = (line_of_sight - tilt).cos().max(0.0).powf(exponent);
        let amplitude = scene.amplitude.draw(&mut rng) * gain * norm;
        points.push(Scatterer { amplitude: T::lit(amplitude), range: T::lit(range) });
    }
    if let Some(ring) = scene.wall_ring {
        let range = T::lit(scene.antenna_height - ring.height);
        let amplitude = T::lit(gain * ring.amplitude / ring.count as f64);
        points.extend((0..ring.count).map(|_| Scatterer { amplitude, range }));
    }
    Ok(ScattererCloud { points, class_label: class })
}

//! Simulation, feature extraction and classification of granular surface
//! shapes from stepped-frequency radar A-scans.

pub mod eval;
pub mod features;
pub mod radar;
pub mod rng;
mod scalar;
pub mod svm;
pub mod transforms;

pub use scalar::{Matrix, Scalar};

pub type AScan64 = radar::AScan<f64>;
pub type AScan32 = radar::AScan<f32>;
pub type RadarParams64 = radar::RadarParams<f64>;
pub type RadarParams32 = radar::RadarParams<f32>;
pub type FeatureVector64 = features::FeatureVector<f64>;
pub type FeatureVector32 = features::FeatureVector<f32>;
pub type MulticlassSvm64 = svm::MulticlassSvm<f64>;
pub type MulticlassSvm32 = svm::MulticlassSvm<f32>;
pub type KernelSpec64 = svm::KernelSpec<f64>;
pub type CvReport64 = eval::CvReport<f64>;

//! Dynamical classes of hashtag attention.
//!
//! The crate turns a stream of short messages into daily hashtag activity
//! series, finds isolated popularity peaks, summarizes each peak by the
//! fractions of activity before, on and after the peak day, clusters those
//! summaries with a diagonal Gaussian mixture, grounds the message text in a
//! WordNet-format lexicon and measures epidemic spreading parameters over a
//! follower graph. A synthetic cascade generator with known ground truth
//! drives the validation suite.
//!
//! The numerical modules ([`peaks`], [`features`], [`mixture`]) are generic
//! over the floating point type through [`Real`]; the aliases at the crate
//! root fix the pipeline's choice of `f64`.

pub mod diffusion;
pub mod error;
pub mod features;
pub mod ingest;
pub mod lexicon;
pub mod mixture;
pub mod peaks;
pub mod pipeline;
pub mod seed;
pub mod synth;

mod real;

pub use error::{Error, ErrorKind, Result};
pub use real::Real;

pub type PeakParams64 = peaks::PeakParams<f64>;
pub type PeakRecord64 = peaks::PeakRecord<f64>;
pub type FeatureTriple64 = features::FeatureTriple<f64>;
pub type GaussianComponent64 = mixture::GaussianComponent<f64>;
pub type MixtureModel64 = mixture::MixtureModel<f64>;
pub type Assignment64 = mixture::Assignment<f64>;

pub type FeatureTriple32 = features::FeatureTriple<f32>;
pub type MixtureModel32 = mixture::MixtureModel<f32>;

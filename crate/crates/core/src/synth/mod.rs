//! Synthetic data with known ground truth.

mod cascade;
mod corpus;
mod graph;
mod triples;

pub use cascade::{gen_cascade, seeding_profile, CascadeConfig, GroundTruth, PROFILE_HALF_SPAN};
pub use corpus::{default_planted, gen_corpus, Corpus, CorpusConfig, PlantedVocabulary};
pub use graph::{gen_graph, node_name};
pub use triples::{default_archetypes, gen_triple_dataset, LabeledPoint};

//! Grounding of tweet text in a WordNet-format lexicon.
//!
//! Text is cleaned by [`preprocess`], each token is resolved to its most
//! frequent sense ([`Grounder::resolve`]) and noun senses are rolled up to
//! their ancestors at a fixed depth of the hypernym hierarchy
//! ([`Taxonomy::rollup`]). Tweets that mostly fail to resolve pass through a
//! TextCat language gate. [`bundled`] carries a lexicon subset, a stop word
//! list and language profiles.

pub mod bundled;
mod langid;
mod lemmatize;
mod porter;
mod preprocess;
mod semantics;
mod wordnet;

pub use langid::{LanguageProfile, ProfileSet, DEFAULT_PROFILE_LEN, MAX_NGRAM};
pub use lemmatize::lemmatize;
pub use porter::porter_stem;
pub use preprocess::{language_text, preprocess, StopWords};
pub use semantics::{
    class_fingerprints, select_top_concepts, top_words, ClassFingerprint, ConceptVector, Grounder,
    GroundingParams, NonNounPolicy, TopConcepts, TweetGrounding,
};
pub use wordnet::{NodeIdx, Pos, SynsetId, Taxonomy, WordNetSources};

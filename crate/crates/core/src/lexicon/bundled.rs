//! Data shipped with the crate: a WordNet 3.0 subset, an English stop word
//! list and language profiles trained from short sample texts.

use std::sync::OnceLock;

use super::langid::{LanguageProfile, ProfileSet, DEFAULT_PROFILE_LEN};
use super::preprocess::StopWords;
use super::wordnet::{Taxonomy, WordNetSources};

macro_rules! wordnet_file {
    ($name:literal) => {
        include_str!(concat!(env!("CARGO_MANIFEST_DIR"), "/data/wordnet/", $name))
    };
}

macro_rules! corpora {
    ($($lang:literal),* $(,)?) => {
        &[$(($lang, include_str!(concat!(env!("CARGO_MANIFEST_DIR"), "/data/langid/corpora/", $lang, ".txt")))),*]
    };
}

/// Sample text per language.
pub const CORPORA: &[(&str, &str)] = corpora![
    "albanian",
    "azerbaijani",
    "basque",
    "bulgarian",
    "catalan",
    "croatian",
    "czech",
    "danish",
    "dutch",
    "english",
    "finnish",
    "french",
    "german",
    "greek",
    "hungarian",
    "icelandic",
    "indonesian",
    "irish",
    "italian",
    "latin",
    "latvian",
    "lithuanian",
    "luxembourgish",
    "malay",
    "norwegian",
    "polish",
    "portuguese",
    "romanian",
    "russian",
    "slovak",
    "slovenian",
    "spanish",
    "swedish",
    "tagalog",
    "turkish",
    "ukrainian",
    "yoruba",
];

pub const STOP_WORDS: &str = include_str!(concat!(env!("CARGO_MANIFEST_DIR"), "/data/stopwords_en.txt"));

pub fn sources() -> WordNetSources<'static> {
    WordNetSources {
        data: [
            wordnet_file!("data.noun"),
            wordnet_file!("data.verb"),
            wordnet_file!("data.adj"),
            wordnet_file!("data.adv"),
        ],
        index: [
            wordnet_file!("index.noun"),
            wordnet_file!("index.verb"),
            wordnet_file!("index.adj"),
            wordnet_file!("index.adv"),
        ],
        exceptions: [
            wordnet_file!("noun.exc"),
            wordnet_file!("verb.exc"),
            wordnet_file!("adj.exc"),
            wordnet_file!("adv.exc"),
        ],
    }
}

pub fn taxonomy() -> &'static Taxonomy {
    static T: OnceLock<Taxonomy> = OnceLock::new();
    T.get_or_init(|| Taxonomy::from_sources(&sources()).expect("bundled lexicon is well formed"))
}

pub fn stop_words() -> &'static StopWords {
    static S: OnceLock<StopWords> = OnceLock::new();
    S.get_or_init(|| StopWords::parse(STOP_WORDS))
}

/// Profiles trained from [`CORPORA`]; identical to the `.lm` files under
/// `data/langid/profiles`.
pub fn profiles() -> &'static ProfileSet {
    static P: OnceLock<ProfileSet> = OnceLock::new();
    P.get_or_init(|| {
        ProfileSet::new(
            CORPORA
                .iter()
                .map(|(lang, text)| LanguageProfile::train(*lang, text, DEFAULT_PROFILE_LEN))
                .collect(),
        )
    })
}

use super::wordnet::{Pos, Taxonomy};

const NOUN_RULES: &[(&str, &str)] = &[
    ("s", ""),
    ("ses", "s"),
    ("xes", "x"),
    ("zes", "z"),
    ("ches", "ch"),
    ("shes", "sh"),
    ("men", "man"),
    ("ies", "y"),
];

const VERB_RULES: &[(&str, &str)] = &[
    ("s", ""),
    ("ies", "y"),
    ("es", "e"),
    ("es", ""),
    ("ed", "e"),
    ("ed", ""),
    ("ing", "e"),
    ("ing", ""),
];

const ADJ_RULES: &[(&str, &str)] = &[("er", ""), ("est", ""), ("er", "e"), ("est", "e")];

fn rules(pos: Pos) -> &'static [(&'static str, &'static str)] {
    match pos {
        Pos::Noun => NOUN_RULES,
        Pos::Verb => VERB_RULES,
        Pos::Adj => ADJ_RULES,
        Pos::Adv => &[],
    }
}

/// Base forms of `word` that the lexicon indexes under `pos`: exception
/// list entries, then the word itself, then suffix detachments.
pub fn lemmatize(word: &str, pos: Pos, tax: &Taxonomy) -> Vec<String> {
    let mut cands: Vec<String> = tax.exception_bases(word, pos).to_vec();
    cands.push(word.to_string());
    for (suffix, repl) in rules(pos) {
        if let Some(stem) = word.strip_suffix(suffix) {
            if !stem.is_empty() {
                cands.push(format!("{stem}{repl}"));
            }
        }
    }
    let mut out: Vec<String> = Vec::new();
    for c in cands {
        if tax.has_lemma(&c, pos) && !out.contains(&c) {
            out.push(c);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lexicon::wordnet::tests::toy;

    #[test]
    fn examples() {
        let t = toy();
        assert_eq!(lemmatize("children", Pos::Noun, &t), ["child"]);
        assert_eq!(lemmatize("dogs", Pos::Noun, &t), ["dog"]);
        assert_eq!(lemmatize("dog", Pos::Noun, &t), ["dog"]);
        assert_eq!(lemmatize("dogged", Pos::Verb, &t), Vec::<String>::new());
        assert_eq!(lemmatize("dogs", Pos::Verb, &t), ["dog"]);
        assert!(lemmatize("cats", Pos::Noun, &t).is_empty());
    }
}

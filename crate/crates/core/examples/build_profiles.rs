//! Writes `data/langid/profiles/<language>.lm` from the bundled sample
//! corpora. Pass a directory to write somewhere else.

use std::path::PathBuf;

use hashtag_dynamics::lexicon::{bundled, LanguageProfile, DEFAULT_PROFILE_LEN};

fn main() -> std::io::Result<()> {
    let out = std::env::args_os()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data/langid/profiles"));
    std::fs::create_dir_all(&out)?;
    for (lang, text) in bundled::CORPORA {
        let p = LanguageProfile::train(*lang, text, DEFAULT_PROFILE_LEN);
        std::fs::write(out.join(format!("{lang}.lm")), p.to_text())?;
    }
    println!("wrote {} profiles to {}", bundled::CORPORA.len(), out.display());
    Ok(())
}

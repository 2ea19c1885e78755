//! `report.md` and `manifest.json`.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

use super::config::PipelineConfig;
use super::io;
use super::stages::{FeatureSummary, FingerprintFile, ModelFile, PeakSummary, SemanticsSummary};
use crate::diffusion::ClassSummary;
use crate::ingest::IngestSummary;
use crate::mixture::ClassLabel;
use crate::{Error, Result};

pub const MANIFEST: &str = "manifest.json";
pub const FAILED: &str = "FAILED";

pub fn sha256_file(path: &Path) -> Result<String> {
    let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
    Ok(hex::encode(Sha256::digest(&bytes)))
}

/// Every regular file below `dir`, as `/`-separated relative paths in
/// sorted order.
fn list_files(dir: &Path) -> Result<Vec<String>> {
    let mut out = Vec::new();
    let mut stack = vec![dir.to_path_buf()];
    while let Some(d) = stack.pop() {
        for entry in std::fs::read_dir(&d).map_err(|e| Error::io(&d, e))? {
            let entry = entry.map_err(|e| Error::io(&d, e))?;
            let path = entry.path();
            if path.is_dir() {
                stack.push(path);
            } else {
                let rel = path.strip_prefix(dir).expect("below dir");
                let parts: Vec<String> = rel.components().map(|c| c.as_os_str().to_string_lossy().into_owned()).collect();
                out.push(parts.join("/"));
            }
        }
    }
    out.sort();
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InputDigest {
    /// File name without its directory, so the manifest does not depend on
    /// where the inputs live.
    pub name: String,
    pub sha256: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub version: String,
    pub seed: u64,
    /// The configuration without its paths.
    pub parameters: Value,
    pub inputs: BTreeMap<String, Vec<InputDigest>>,
    pub outputs: BTreeMap<String, String>,
}

fn digest_input(path: &Path) -> Result<Vec<InputDigest>> {
    if path.is_dir() {
        list_files(path)?
            .into_iter()
            .map(|rel| {
                Ok(InputDigest {
                    sha256: sha256_file(&path.join(&rel))?,
                    name: rel,
                })
            })
            .collect()
    } else {
        Ok(vec![InputDigest {
            name: path
                .file_name()
                .map(|n| n.to_string_lossy().into_owned())
                .unwrap_or_default(),
            sha256: sha256_file(path)?,
        }])
    }
}

/// Builds the manifest of a finished run. Outputs are every file under the
/// output directory except the manifest and a failure marker.
pub fn build_manifest(config: &PipelineConfig) -> Result<Manifest> {
    let mut parameters = serde_json::to_value(config).map_err(|e| Error::json(MANIFEST, e))?;
    if let Value::Object(m) = &mut parameters {
        m.remove("paths");
        m.remove("seed");
    }
    let p = &config.paths;
    let mut inputs = BTreeMap::new();
    inputs.insert("tweets".to_string(), digest_input(&p.tweets)?);
    for (role, path) in [
        ("graph", &p.graph),
        ("wordnet", &p.wordnet),
        ("stopwords", &p.stopwords),
        ("profiles", &p.profiles),
    ] {
        if let Some(path) = path {
            inputs.insert(role.to_string(), digest_input(path)?);
        }
    }
    let mut outputs = BTreeMap::new();
    for rel in list_files(&p.out)? {
        if rel == MANIFEST || rel == FAILED {
            continue;
        }
        outputs.insert(rel.clone(), sha256_file(&p.out.join(&rel))?);
    }
    Ok(Manifest {
        version: env!("CARGO_PKG_VERSION").to_string(),
        seed: config.seed,
        parameters,
        inputs,
        outputs,
    })
}

pub fn write_manifest(config: &PipelineConfig) -> Result<Manifest> {
    let m = build_manifest(config)?;
    io::write_json(&config.paths.out.join(MANIFEST), &m)?;
    Ok(m)
}

fn read_opt<D: serde::de::DeserializeOwned>(path: &Path) -> Result<Option<D>> {
    if path.exists() {
        io::read_json(path).map(Some)
    } else {
        Ok(None)
    }
}

/// Renders `report.md` from whatever stage outputs exist under `out`.
pub fn render_report(out: &Path) -> Result<String> {
    let mut r = String::from("# Hashtag dynamics report\n");
    let w = &mut r;

    if let Some(s) = read_opt::<IngestSummary>(&out.join("ingest/summary.json"))? {
        let _ = writeln!(w, "\n## Ingest\n");
        let _ = writeln!(w, "- window: {} for {} days", s.start, s.days);
        let _ = writeln!(
            w,
            "- lines read: {} ({} malformed, {} duplicate ids)",
            s.read.lines, s.read.malformed, s.read.duplicate_ids
        );
        let _ = writeln!(w, "- occurrences outside the window: {}", s.out_of_window);
        let _ = writeln!(
            w,
            "- hashtags: {} distinct, {} with at least {} users",
            s.distinct_hashtags,
            s.hashtags.len(),
            s.min_users
        );
    }
    if let Some(s) = read_opt::<PeakSummary>(&out.join("peaks/summary.json"))? {
        let _ = writeln!(w, "\n## Peaks\n");
        let _ = writeln!(w, "- series with an isolated peak: {} of {}", s.peaks, s.series);
        if !s.unaligned.is_empty() {
            let _ = writeln!(w, "- peaks too close to the window edge: {}", s.unaligned.join(", "));
        }
    }
    if let Some(s) = read_opt::<FeatureSummary>(&out.join("features/summary.json"))? {
        let _ = writeln!(w, "\n## Features\n");
        let _ = writeln!(w, "- feature triples: {}", s.triples);
        let _ = writeln!(w, "- in the excluded region: {}", s.in_excluded_region.len());
    }
    if let Some(m) = read_opt::<ModelFile>(&out.join("classify/model.json"))? {
        let _ = writeln!(w, "\n## Classes\n");
        let _ = writeln!(
            w,
            "Mixture with {} components (log-likelihood {:.4}, BIC {:.4}).\n",
            m.k, m.log_likelihood, m.bic
        );
        let _ = writeln!(w, "| component | label | weight | mean f_b | mean f_a |");
        let _ = writeln!(w, "|---|---|---|---|---|");
        for (i, (c, l)) in m.components.iter().zip(&m.labels.labels).enumerate() {
            let _ = writeln!(
                w,
                "| {} | {} | {:.4} | {:.4} | {:.4} |",
                i + 1,
                l,
                c.weight,
                c.mean[0],
                c.mean[1]
            );
        }
        if !m.labels.duplicated.is_empty() {
            let _ = writeln!(w, "\nRepeated labels: {}", join(&m.labels.duplicated));
        }
        if !m.labels.missing.is_empty() {
            let _ = writeln!(w, "\nClasses without a component: {}", join(&m.labels.missing));
        }
        let path = out.join("classify/assignments.csv");
        if path.exists() {
            let rows = io::read_assignments(&path)?;
            let mut count: BTreeMap<ClassLabel, usize> = BTreeMap::new();
            for r in &rows {
                *count.entry(r.label).or_default() += 1;
            }
            let below = rows.iter().filter(|r| r.uncertainty < 0.05).count();
            let _ = writeln!(w, "\nHashtags per class:\n");
            for (l, n) in count {
                let _ = writeln!(w, "- {l}: {n}");
            }
            let _ = writeln!(
                w,
                "\nAssignment uncertainty below 0.05: {below} of {}",
                rows.len()
            );
        }
    }
    if let Some(s) = read_opt::<SemanticsSummary>(&out.join("semantics/summary.json"))? {
        let _ = writeln!(w, "\n## Semantics\n");
        let _ = writeln!(
            w,
            "- tweets grounded: {} ({} discarded by the language gate)",
            s.tweets, s.discarded
        );
        let _ = writeln!(w, "- distinct concepts: {}", s.distinct_concepts);
        if let Some(fp) = read_opt::<FingerprintFile>(&out.join("semantics/fingerprints.json"))? {
            let _ = writeln!(w, "\n| class | members | dominant concept | share |");
            let _ = writeln!(w, "|---|---|---|---|");
            for c in &fp.classes {
                match c.argmax() {
                    Some(i) => {
                        let _ = writeln!(
                            w,
                            "| {} | {} | {} | {:.4} |",
                            c.label, c.members, fp.concepts[i], c.vector[i]
                        );
                    }
                    None => {
                        let _ = writeln!(w, "| {} | {} | none | |", c.label, c.members);
                    }
                }
            }
        }
    }
    if let Some(q) = read_opt::<ClassSummary>(&out.join("diffusion/quartiles.json"))? {
        let _ = writeln!(w, "\n## Diffusion\n");
        let _ = writeln!(w, "Medians per class:\n");
        let _ = writeln!(w, "| class | retweet fraction | gamma | beta | tau (h) |");
        let _ = writeln!(w, "|---|---|---|---|---|");
        for (class, per_q) in &q.classes {
            let med = |k: &str| per_q.get(k).map_or("".to_string(), |f| format!("{:.4}", f.median));
            let _ = writeln!(
                w,
                "| {class} | {} | {} | {} | {} |",
                med("retweet_fraction"),
                med("gamma"),
                med("beta"),
                med("tau_hours")
            );
        }
        if !q.empty_classes.is_empty() {
            let _ = writeln!(w, "\nClasses without estimates: {}", q.empty_classes.join(", "));
        }
    }
    Ok(r)
}

fn join(labels: &[ClassLabel]) -> String {
    labels.iter().map(|l| l.as_str()).collect::<Vec<_>>().join(", ")
}

pub fn write_report(out: &Path) -> Result<()> {
    let text = render_report(out)?;
    let path = out.join("report.md");
    std::fs::write(&path, text).map_err(|e| Error::io(&path, e))
}

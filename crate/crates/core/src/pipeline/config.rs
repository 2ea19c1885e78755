use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::diffusion::BetaAttribution;
use crate::lexicon::{GroundingParams, NonNounPolicy};
use crate::mixture::{EmParams, LabelRule};
use crate::peaks::{EdgePolicy, PeakParams};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Paths {
    /// JSON-Lines tweet file.
    pub tweets: PathBuf,
    /// `follower,followee` edge list; the diffusion stage is skipped without it.
    pub graph: Option<PathBuf>,
    pub out: PathBuf,
    /// WordNet `dict` directory; the bundled subset when absent.
    pub wordnet: Option<PathBuf>,
    pub stopwords: Option<PathBuf>,
    /// Directory of `<language>.lm` profiles.
    pub profiles: Option<PathBuf>,
}

impl Default for Paths {
    fn default() -> Self {
        Self {
            tweets: PathBuf::from("tweets.jsonl"),
            graph: None,
            out: PathBuf::from("out"),
            wordnet: None,
            stopwords: None,
            profiles: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct IngestParams {
    /// First day of the observation window, `YYYY-MM-DD` (UTC).
    pub start: String,
    pub days: usize,
    pub min_users: usize,
}

impl Default for IngestParams {
    fn default() -> Self {
        Self {
            start: "2009-01-01".into(),
            days: 188,
            min_users: 500,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PeakStageParams {
    pub half_window: usize,
    pub n_min: f64,
    pub threshold: f64,
    pub isolation_days: usize,
    pub edges: EdgePolicy,
    pub include_edge_peaks: bool,
    /// Days kept on each side of the peak.
    pub half_span: usize,
}

impl Default for PeakStageParams {
    fn default() -> Self {
        let d = PeakParams::<f64>::default();
        Self {
            half_window: d.half_window,
            n_min: d.n_min,
            threshold: d.threshold,
            isolation_days: d.isolation_days,
            edges: d.edges,
            include_edge_peaks: d.include_edge_peaks,
            half_span: 7,
        }
    }
}

impl PeakStageParams {
    pub fn detector(&self) -> PeakParams<f64> {
        PeakParams {
            half_window: self.half_window,
            n_min: self.n_min,
            threshold: self.threshold,
            isolation_days: self.isolation_days,
            edges: self.edges,
            include_edge_peaks: self.include_edge_peaks,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ClassifyParams {
    pub k_min: usize,
    pub k_max: usize,
    pub restarts: usize,
    /// Cross-validation folds; 0 skips the CV table.
    pub folds: usize,
    pub cv_restarts: usize,
    pub em: EmParams<f64>,
    pub rule: LabelRule<f64>,
}

impl Default for ClassifyParams {
    fn default() -> Self {
        Self {
            k_min: 1,
            k_max: 8,
            restarts: 20,
            folds: 10,
            cv_restarts: 3,
            em: EmParams::default(),
            rule: LabelRule::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SemanticsParams {
    pub top_concepts: usize,
    pub top_words: usize,
    pub depth: u32,
    pub min_resolved: f64,
    pub language: String,
    pub top_languages: usize,
    pub stem_fallback: bool,
    pub non_noun: NonNounPolicy,
}

impl Default for SemanticsParams {
    fn default() -> Self {
        let g = GroundingParams::default();
        Self {
            top_concepts: 15,
            top_words: 50,
            depth: g.depth,
            min_resolved: g.min_resolved,
            language: g.language,
            top_languages: g.top_languages,
            stem_fallback: g.stem_fallback,
            non_noun: g.non_noun,
        }
    }
}

impl SemanticsParams {
    pub fn grounding(&self) -> GroundingParams {
        GroundingParams {
            min_resolved: self.min_resolved,
            language: self.language.clone(),
            top_languages: self.top_languages,
            stem_fallback: self.stem_fallback,
            depth: self.depth,
            non_noun: self.non_noun,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct DiffusionParams {
    pub attribution: BetaAttribution,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PipelineConfig {
    pub seed: u64,
    pub paths: Paths,
    pub ingest: IngestParams,
    pub peaks: PeakStageParams,
    pub classify: ClassifyParams,
    pub semantics: SemanticsParams,
    pub diffusion: DiffusionParams,
}

fn resolve(base: &Path, p: &mut PathBuf) {
    if p.is_relative() {
        *p = base.join(&*p);
    }
}

impl PipelineConfig {
    pub fn from_toml(text: &str, origin: &Path) -> Result<Self> {
        let c: Self = toml::from_str(text).map_err(|e| Error::Config {
            path: origin.to_path_buf(),
            reason: e.to_string(),
        })?;
        Ok(c)
    }

    /// Reads a TOML config; relative paths are taken from the file's
    /// directory.
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let mut c = Self::from_toml(&text, path)?;
        let base = path.parent().unwrap_or(Path::new("."));
        let p = &mut c.paths;
        resolve(base, &mut p.tweets);
        resolve(base, &mut p.out);
        for opt in [&mut p.graph, &mut p.wordnet, &mut p.stopwords, &mut p.profiles] {
            if let Some(x) = opt {
                resolve(base, x);
            }
        }
        Ok(c)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    pub fn validate(&self) -> Result<()> {
        if self.ingest.days == 0 {
            return Err(Error::param("ingest.days", "must be positive"));
        }
        self.peaks.detector().validate()?;
        if self.peaks.half_span == 0 {
            return Err(Error::param("peaks.half_span", "must be positive"));
        }
        let c = &self.classify;
        if c.k_min == 0 || c.k_min > c.k_max {
            return Err(Error::param("classify.k_min", "need 1 <= k_min <= k_max"));
        }
        if c.restarts == 0 {
            return Err(Error::param("classify.restarts", "must be positive"));
        }
        if c.folds == 1 {
            return Err(Error::param("classify.folds", "must be 0 or at least 2"));
        }
        self.semantics.grounding().validate()?;
        if self.semantics.top_concepts == 0 {
            return Err(Error::param("semantics.top_concepts", "must be positive"));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_round_trip() {
        let c = PipelineConfig::default();
        let back = PipelineConfig::from_toml(&c.to_toml(), Path::new("x")).unwrap();
        assert_eq!(back, c);
        c.validate().unwrap();
    }

    #[test]
    fn partial_config() {
        let text = "seed = 9\n[peaks]\nhalf_window = 20\nhalf_span = 5\n[semantics]\ndepth = 3\n";
        let c = PipelineConfig::from_toml(text, Path::new("x")).unwrap();
        assert_eq!(c.seed, 9);
        assert_eq!(c.peaks.half_window, 20);
        assert_eq!(c.peaks.half_span, 5);
        assert_eq!(c.semantics.depth, 3);
        assert_eq!(c.classify.k_max, 8);
    }

    #[test]
    fn unknown_keys_are_rejected() {
        assert!(PipelineConfig::from_toml("sed = 1\n", Path::new("x")).is_err());
        assert!(PipelineConfig::from_toml("[classify]\nkmax = 3\n", Path::new("x")).is_err());
    }

    #[test]
    fn relative_paths_follow_the_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.toml");
        std::fs::write(&path, "[paths]\ntweets = \"t.jsonl\"\nout = \"/abs/out\"\n").unwrap();
        let c = PipelineConfig::load(&path).unwrap();
        assert_eq!(c.paths.tweets, dir.path().join("t.jsonl"));
        assert_eq!(c.paths.out, PathBuf::from("/abs/out"));
    }
}

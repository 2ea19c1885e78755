//! The pipeline stages. Each stage reads its inputs from files or from the
//! tweet log and writes its outputs into one directory.

use std::collections::{BTreeMap, BTreeSet};
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::config::{ClassifyParams, IngestParams, PeakStageParams, SemanticsParams};
use super::io::{self, AssignmentRow};
use crate::diffusion::{class_summary, estimate, group_by_hashtag, BetaAttribution, ClassSummary, FollowerGraph};
use crate::features::{compute_triple, simplex_coordinates, FeatureTriple};
use crate::ingest::{
    build_daily_series, extract_hashtags, filter_popular, format_date, occurrences, parse_start_date,
    read_series_csv, read_tweets, write_series_csv, HashtagSummary, IngestSummary, ObservationWindow,
    ReadStats, TweetRecord,
};
use crate::lexicon::{
    bundled, class_fingerprints, select_top_concepts, top_words, ClassFingerprint, ConceptVector,
    Grounder, ProfileSet, StopWords, Taxonomy,
};
use crate::mixture::{
    bic, classify as assign, cross_validate, label_components, select_model, ClassLabel,
    ComponentLabels, CvRow, GaussianComponent,
};
use crate::peaks::find_peak;
use crate::{seed, Error, Result};

/// A tweet log read from disk.
#[derive(Debug, Clone)]
pub struct TweetLog {
    pub path: PathBuf,
    pub tweets: Vec<TweetRecord>,
    pub stats: ReadStats,
}

/// Reads a tweet file; a file without a single valid tweet is an error.
pub fn load_tweets(path: &Path) -> Result<TweetLog> {
    let (tweets, stats) = read_tweets(path)?;
    if tweets.is_empty() {
        return Err(Error::EmptyInput(format!(
            "no valid tweets in {} ({} lines, {} malformed)",
            path.display(),
            stats.lines,
            stats.malformed
        )));
    }
    Ok(TweetLog {
        path: path.to_path_buf(),
        tweets,
        stats,
    })
}

pub fn window(params: &IngestParams) -> Result<ObservationWindow> {
    ObservationWindow::new(parse_start_date(&params.start)?, params.days)
}

fn in_window<'a>(tweets: &'a [TweetRecord], window: Option<&'a ObservationWindow>) -> impl Iterator<Item = &'a TweetRecord> {
    tweets
        .iter()
        .filter(move |t| window.is_none_or(|w| w.contains(t.timestamp)))
}

fn create_dir(dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))
}

/// Writes `series.csv` (popular hashtags only) and `summary.json`.
pub fn ingest(log: &TweetLog, params: &IngestParams, out: &Path) -> Result<IngestSummary> {
    create_dir(out)?;
    let w = window(params)?;
    let occ = occurrences(&log.tweets, &w);
    let build = build_daily_series(&occ, w.days);
    let popular = filter_popular(&build.series, params.min_users);
    log::info!(
        "ingest: {} tweets, {} hashtags, {} with at least {} users",
        log.tweets.len(),
        build.series.len(),
        popular.len(),
        params.min_users
    );
    let summary = IngestSummary {
        start: format_date(w.start),
        days: w.days,
        min_users: params.min_users,
        read: log.stats.clone(),
        out_of_window: build.rejected,
        distinct_hashtags: build.series.len(),
        hashtags: popular
            .values()
            .map(|s| HashtagSummary {
                hashtag: s.hashtag.clone(),
                distinct_users: s.distinct_users,
                total: s.total(),
            })
            .collect(),
    };
    write_series_csv(&out.join("series.csv"), &popular)?;
    io::write_json(&out.join("summary.json"), &summary)?;
    Ok(summary)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PeakSummary {
    pub series: usize,
    pub peaks: usize,
    pub without_peak: Vec<String>,
    /// Selected peaks too close to the window edge to align.
    pub unaligned: Vec<String>,
}

/// Writes `peaks.csv`, `aligned.csv` and `summary.json`.
pub fn peaks(series_path: &Path, params: &PeakStageParams, out: &Path) -> Result<PeakSummary> {
    create_dir(out)?;
    let detector = params.detector();
    detector.validate()?;
    let series = read_series_csv(series_path)?;
    let found: Vec<(String, Result<_>)> = series
        .values()
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|s| (s.hashtag.clone(), find_peak(s, &detector, params.half_span)))
        .collect();
    let mut records = Vec::new();
    let mut summary = PeakSummary {
        series: series.len(),
        peaks: 0,
        without_peak: Vec::new(),
        unaligned: Vec::new(),
    };
    for (tag, r) in found {
        match r {
            Ok(Some(p)) => records.push(p),
            Ok(None) => summary.without_peak.push(tag),
            Err(Error::WindowOutOfRange { .. }) => {
                log::warn!("peak of `{tag}` is within {} days of the window edge", params.half_span);
                summary.unaligned.push(tag);
            }
            Err(e) => return Err(e),
        }
    }
    summary.peaks = records.len();
    log::info!("peaks: {} of {} series have an isolated peak", summary.peaks, summary.series);
    io::write_peaks(out, &records)?;
    io::write_json(&out.join("summary.json"), &summary)?;
    Ok(summary)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureSummary {
    pub triples: usize,
    /// Hashtags whose peak day holds no more than a flank day's mean share.
    pub in_excluded_region: Vec<String>,
}

/// Writes `features.csv`, `simplex.csv` and `summary.json`.
pub fn features(peaks_dir: &Path, out: &Path) -> Result<(Vec<FeatureTriple<f64>>, FeatureSummary)> {
    create_dir(out)?;
    let records = io::read_peaks(peaks_dir)?;
    let triples: Vec<FeatureTriple<f64>> = records.iter().map(compute_triple).collect::<Result<_>>()?;
    let mut excluded = Vec::new();
    for t in &triples {
        let sum = t.f_b + t.f_p + t.f_a;
        if (sum - 1.0).abs() > 1e-12 {
            return Err(Error::Invariant(format!("fractions of `{}` sum to {sum}", t.hashtag)));
        }
        if t.in_excluded_region() {
            log::warn!("`{}` lies in the excluded region of the simplex", t.hashtag);
            excluded.push(t.hashtag.clone());
        }
    }
    io::write_features(&out.join("features.csv"), &triples)?;
    io::write_table(
        &out.join("simplex.csv"),
        &["hashtag", "f_b", "f_p", "f_a", "x", "y"],
        simplex_coordinates(&triples),
    )?;
    let summary = FeatureSummary {
        triples: triples.len(),
        in_excluded_region: excluded,
    };
    io::write_json(&out.join("summary.json"), &summary)?;
    Ok((triples, summary))
}

/// Contents of `model.json`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelFile {
    pub k: usize,
    pub components: Vec<GaussianComponent<f64>>,
    #[serde(flatten)]
    pub labels: ComponentLabels,
    pub log_likelihood: f64,
    pub bic: f64,
    pub n_points: usize,
    pub iterations: usize,
    pub converged: bool,
}

/// Writes `model.json`, `assignments.csv`, `bic.csv` and, with folds,
/// `cv.csv`.
pub fn classify(features_path: &Path, params: &ClassifyParams, run_seed: u64, out: &Path) -> Result<ModelFile> {
    create_dir(out)?;
    let triples = io::read_features(features_path)?;
    if triples.is_empty() {
        return Err(Error::EmptyInput(format!("no feature rows in {}", features_path.display())));
    }
    let points: Vec<[f64; 2]> = triples.iter().map(FeatureTriple::point).collect();
    let k_max = params.k_max.min(points.len());
    if k_max < params.k_max {
        log::warn!("only {} points: k is capped at {k_max}", points.len());
    }
    let k_min = params.k_min.min(k_max);
    let s = seed::derive(run_seed, "classify", &[]);
    let sel = select_model(&points, k_min..=k_max, params.restarts, s, &params.em)?;
    let model = sel.best;
    let labels = label_components(&model, &params.rule);
    let rows: Vec<AssignmentRow> = triples
        .iter()
        .map(|t| {
            let a = assign(&model, &labels, &t.hashtag, t.point())?;
            Ok(AssignmentRow {
                hashtag: t.hashtag.clone(),
                fb: t.f_b,
                fa: t.f_a,
                label: a.label,
                uncertainty: a.uncertainty,
                posteriors: a.posteriors,
            })
        })
        .collect::<Result<_>>()?;
    io::write_assignments(&out.join("assignments.csv"), &rows, model.k())?;
    io::write_table(&out.join("bic.csv"), &["k", "log_likelihood", "bic"], &sel.table)?;
    if params.folds >= 2 {
        if points.len() >= params.folds {
            let cv = cross_validate(&points, k_min..=k_max, params.folds, params.cv_restarts, s, &params.em)?;
            io::write_table::<&CvRow>(&out.join("cv.csv"), &["k", "mean_heldout"], &cv)?;
        } else {
            log::warn!("{} points are too few for {}-fold cross-validation", points.len(), params.folds);
        }
    }
    let file = ModelFile {
        k: model.k(),
        bic: bic(&model),
        components: model.components,
        labels,
        log_likelihood: model.log_likelihood,
        n_points: model.n_points,
        iterations: model.iterations,
        converged: model.converged,
    };
    io::write_json(&out.join("model.json"), &file)?;
    log::info!("classify: k = {} over {} hashtags", file.k, rows.len());
    Ok(file)
}

/// `(hashtag, label)` pairs from `assignments.csv`.
pub fn read_labels(path: &Path) -> Result<Vec<(String, ClassLabel)>> {
    Ok(io::read_assignments(path)?
        .into_iter()
        .map(|r| (r.hashtag, r.label))
        .collect())
}

/// Lexical resources; any that are not loaded from disk fall back to the
/// bundled ones.
#[derive(Debug, Default)]
pub struct Resources {
    pub taxonomy: Option<Taxonomy>,
    pub stop_words: Option<StopWords>,
    pub profiles: Option<ProfileSet>,
}

impl Resources {
    pub fn load(wordnet: Option<&Path>, stop_words: Option<&Path>, profiles: Option<&Path>) -> Result<Self> {
        Ok(Self {
            taxonomy: wordnet.map(Taxonomy::load_dir).transpose()?,
            stop_words: stop_words.map(StopWords::load).transpose()?,
            profiles: profiles.map(ProfileSet::load_dir).transpose()?,
        })
    }

    pub fn grounder(&self, params: &SemanticsParams) -> Result<Grounder<'_>> {
        Grounder::new(
            self.taxonomy.as_ref().unwrap_or_else(|| bundled::taxonomy()),
            self.stop_words.as_ref().unwrap_or_else(|| bundled::stop_words()),
            self.profiles.as_ref().unwrap_or_else(|| bundled::profiles()),
            params.grounding(),
        )
    }
}

/// Contents of `fingerprints.json`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FingerprintFile {
    pub concepts: Vec<String>,
    pub classes: Vec<ClassFingerprint>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SemanticsSummary {
    pub hashtags: usize,
    pub tweets: usize,
    pub discarded: usize,
    pub distinct_concepts: usize,
    pub short_concept_list: bool,
}

#[derive(Serialize)]
struct GroundingRow<'a> {
    hashtag: &'a str,
    tweets: u64,
    discarded: u64,
    tokens: u64,
    resolved: u64,
    non_noun: u64,
}

#[derive(Serialize)]
struct WordRow<'a> {
    class: ClassLabel,
    rank: usize,
    word: &'a str,
    count: u64,
}

/// Writes `concepts.csv`, `grounding.csv`, `top_concepts.json`,
/// `fingerprints.json`, `top_words.csv` and `summary.json`.
pub fn semantics(
    tweets: &[TweetRecord],
    window: Option<&ObservationWindow>,
    labels: &[(String, ClassLabel)],
    resources: &Resources,
    params: &SemanticsParams,
    out: &Path,
) -> Result<(FingerprintFile, SemanticsSummary)> {
    create_dir(out)?;
    let grounder = resources.grounder(params)?;
    let label_of: BTreeMap<&str, ClassLabel> = labels.iter().map(|(h, l)| (h.as_str(), *l)).collect();

    // Every relevant tweet is grounded once, then credited to each of its
    // classified hashtags.
    let relevant: Vec<(&TweetRecord, Vec<&str>)> = in_window(tweets, window)
        .filter_map(|t| {
            let tags: BTreeSet<String> = extract_hashtags(&t.text).into_iter().collect();
            let mine: Vec<&str> = tags
                .iter()
                .filter_map(|tag| label_of.get_key_value(tag.as_str()).map(|(k, _)| *k))
                .collect();
            (!mine.is_empty()).then_some((t, mine))
        })
        .collect();
    let groundings: Vec<_> = relevant.par_iter().map(|(t, _)| grounder.ground_tweet(&t.text)).collect();

    let mut vectors: BTreeMap<&str, ConceptVector> = labels
        .iter()
        .map(|(h, _)| {
            let v = ConceptVector {
                hashtag: h.clone(),
                ..ConceptVector::default()
            };
            (h.as_str(), v)
        })
        .collect();
    let mut class_tweets: BTreeMap<ClassLabel, BTreeSet<usize>> = BTreeMap::new();
    for (i, ((_, tags), g)) in relevant.iter().zip(&groundings).enumerate() {
        for tag in tags {
            grounder.accumulate(vectors.get_mut(tag).expect("labelled hashtag"), g);
            class_tweets.entry(label_of[tag]).or_default().insert(i);
        }
    }
    let vectors: Vec<ConceptVector> = vectors.into_values().collect();
    let top = select_top_concepts(&vectors, params.top_concepts);
    if top.short {
        log::warn!(
            "only {} concepts observed; {} requested",
            top.concepts.len(),
            params.top_concepts
        );
    }
    let fingerprints = FingerprintFile {
        classes: class_fingerprints(labels, &vectors, &top.concepts),
        concepts: top.concepts.clone(),
    };

    io::write_table(
        &out.join("concepts.csv"),
        &["hashtag", "concept", "count"],
        vectors
            .iter()
            .flat_map(|v| v.counts.iter().map(move |(c, n)| (&v.hashtag, c, n))),
    )?;
    io::write_table(
        &out.join("grounding.csv"),
        &["hashtag", "tweets", "discarded", "tokens", "resolved", "non_noun"],
        vectors.iter().map(|v| GroundingRow {
            hashtag: &v.hashtag,
            tweets: v.tweets,
            discarded: v.discarded,
            tokens: v.tokens,
            resolved: v.resolved,
            non_noun: v.non_noun,
        }),
    )?;
    io::write_json(&out.join("top_concepts.json"), &top)?;
    io::write_json(&out.join("fingerprints.json"), &fingerprints)?;

    let mut words = Vec::new();
    for (&class, idx) in &class_tweets {
        let tokens = idx
            .iter()
            .filter(|&&i| !groundings[i].discarded)
            .flat_map(|&i| groundings[i].tokens.iter());
        words.extend(
            top_words(tokens, params.top_words)
                .into_iter()
                .enumerate()
                .map(move |(r, (w, c))| (class, r + 1, w, c)),
        );
    }
    io::write_table(
        &out.join("top_words.csv"),
        &["class", "rank", "word", "count"],
        words.iter().map(|(class, rank, word, count)| WordRow {
            class: *class,
            rank: *rank,
            word,
            count: *count,
        }),
    )?;

    let mut all_concepts = BTreeSet::new();
    for v in &vectors {
        all_concepts.extend(v.counts.keys());
    }
    let summary = SemanticsSummary {
        hashtags: vectors.len(),
        tweets: relevant.len(),
        discarded: groundings.iter().filter(|g| g.discarded).count(),
        distinct_concepts: all_concepts.len(),
        short_concept_list: top.short,
    };
    io::write_json(&out.join("summary.json"), &summary)?;
    log::info!(
        "semantics: {} tweets grounded, {} discarded, {} concepts",
        summary.tweets,
        summary.discarded,
        summary.distinct_concepts
    );
    Ok((fingerprints, summary))
}

pub const ESTIMATE_HEADER: [&str; 10] = [
    "hashtag",
    "label",
    "n_users",
    "n_tweets",
    "retweet_fraction",
    "gamma",
    "beta",
    "tau_hours",
    "missing_from_graph",
    "zero_out_degree",
];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EstimateRow {
    pub hashtag: String,
    pub label: Option<ClassLabel>,
    pub n_users: usize,
    pub n_tweets: usize,
    pub retweet_fraction: f64,
    pub gamma: f64,
    pub beta: Option<f64>,
    pub tau_hours: f64,
    pub missing_from_graph: usize,
    pub zero_out_degree: usize,
}

/// Writes `estimates.csv` and `quartiles.json`.
pub fn diffusion(
    tweets: &[TweetRecord],
    window: Option<&ObservationWindow>,
    graph: &FollowerGraph,
    labels: &[(String, ClassLabel)],
    attribution: BetaAttribution,
    out: &Path,
) -> Result<ClassSummary> {
    create_dir(out)?;
    let label_of: BTreeMap<&str, ClassLabel> = labels.iter().map(|(h, l)| (h.as_str(), *l)).collect();
    let groups = group_by_hashtag(in_window(tweets, window), |tag| label_of.contains_key(tag));
    let estimates = groups
        .into_iter()
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|(tag, (log, tw))| {
            let label = label_of.get(tag.as_str()).copied();
            estimate(graph, &log, &tw, label, attribution)
        })
        .collect::<Result<Vec<_>>>()?;
    for (tag, _) in labels {
        if !estimates.iter().any(|e| &e.hashtag == tag) {
            log::warn!("no tweets of `{tag}` in the window; no estimate");
        }
    }
    io::write_table(
        &out.join("estimates.csv"),
        &ESTIMATE_HEADER,
        estimates.iter().map(|e| EstimateRow {
            hashtag: e.hashtag.clone(),
            label: e.label,
            n_users: e.n_users,
            n_tweets: e.n_tweets,
            retweet_fraction: e.retweet_fraction,
            gamma: e.gamma,
            beta: e.beta,
            tau_hours: e.tau_hours,
            missing_from_graph: e.missing_from_graph,
            zero_out_degree: e.zero_out_degree,
        }),
    )?;
    let summary = class_summary(&estimates);
    io::write_json(&out.join("quartiles.json"), &summary)?;
    log::info!("diffusion: {} hashtags estimated", estimates.len());
    Ok(summary)
}

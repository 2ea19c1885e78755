//! The end-to-end pipeline: ingest, peaks, features, classify, semantics
//! and diffusion, followed by plot tables, a report and a manifest.
//!
//! Stages hand over through files under the output directory, one
//! subdirectory per stage, so each can be rerun on its own. A failing stage
//! leaves the outputs written so far and a `FAILED` marker naming it.

mod config;
pub mod io;
pub mod plots;
pub mod report;
pub mod stages;

use std::path::Path;

pub use config::{
    ClassifyParams, DiffusionParams, IngestParams, Paths, PeakStageParams, PipelineConfig, SemanticsParams,
};
pub use plots::{emit_plotdata, PlotOutcome};
pub use report::{build_manifest, write_manifest, write_report, Manifest, FAILED, MANIFEST};
pub use stages::{load_tweets, read_labels, window, Resources, TweetLog};

use crate::diffusion::load_graph;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stage {
    Ingest,
    Peaks,
    Features,
    Classify,
    Semantics,
    Diffusion,
    Plots,
    Report,
}

impl Stage {
    pub fn name(self) -> &'static str {
        match self {
            Stage::Ingest => "ingest",
            Stage::Peaks => "peaks",
            Stage::Features => "features",
            Stage::Classify => "classify",
            Stage::Semantics => "semantics",
            Stage::Diffusion => "diffusion",
            Stage::Plots => "plots",
            Stage::Report => "report",
        }
    }
}

/// What a completed run produced.
#[derive(Debug, Clone)]
pub struct RunSummary {
    pub manifest: Manifest,
    pub skipped: Vec<&'static str>,
    pub plots: PlotOutcome,
}

fn write_failed(out: &Path, stage: Stage, err: &Error) {
    let path = out.join(FAILED);
    let text = format!("stage: {}\nerror: {err}\n", stage.name());
    if let Err(e) = std::fs::write(&path, text) {
        log::error!("cannot write {}: {e}", path.display());
    }
}

fn at<T>(stage: Stage, out: &Path, r: Result<T>) -> Result<T> {
    r.map_err(|e| {
        log::error!("stage {} failed: {e}", stage.name());
        write_failed(out, stage, &e);
        Error::Stage {
            stage: stage.name(),
            source: Box::new(e),
        }
    })
}

/// Runs every stage in order. The diffusion stage is skipped when no graph
/// is configured.
pub fn run_pipeline(config: &PipelineConfig) -> Result<RunSummary> {
    config.validate()?;
    let out = config.paths.out.as_path();
    std::fs::create_dir_all(out).map_err(|e| Error::io(out, e))?;
    let marker = out.join(FAILED);
    if marker.exists() {
        std::fs::remove_file(&marker).map_err(|e| Error::io(&marker, e))?;
    }
    let dir = |s: Stage| out.join(s.name());
    // Outputs of an earlier run must not leak into this run's manifest.
    for s in [
        Stage::Ingest,
        Stage::Peaks,
        Stage::Features,
        Stage::Classify,
        Stage::Semantics,
        Stage::Diffusion,
        Stage::Plots,
    ] {
        let d = dir(s);
        if d.is_dir() {
            std::fs::remove_dir_all(&d).map_err(|e| Error::io(&d, e))?;
        }
    }
    let mut skipped = Vec::new();

    let (log, window) = at(Stage::Ingest, out, (|| {
        let log = load_tweets(&config.paths.tweets)?;
        stages::ingest(&log, &config.ingest, &dir(Stage::Ingest))?;
        Ok((log, window(&config.ingest)?))
    })())?;
    at(
        Stage::Peaks,
        out,
        stages::peaks(&dir(Stage::Ingest).join("series.csv"), &config.peaks, &dir(Stage::Peaks)),
    )?;
    at(Stage::Features, out, stages::features(&dir(Stage::Peaks), &dir(Stage::Features)))?;
    at(
        Stage::Classify,
        out,
        stages::classify(
            &dir(Stage::Features).join("features.csv"),
            &config.classify,
            config.seed,
            &dir(Stage::Classify),
        ),
    )?;
    let labels = at(Stage::Classify, out, read_labels(&dir(Stage::Classify).join("assignments.csv")))?;
    at(Stage::Semantics, out, (|| {
        let p = &config.paths;
        let res = Resources::load(p.wordnet.as_deref(), p.stopwords.as_deref(), p.profiles.as_deref())?;
        stages::semantics(
            &log.tweets,
            Some(&window),
            &labels,
            &res,
            &config.semantics,
            &dir(Stage::Semantics),
        )
    })())?;
    match &config.paths.graph {
        Some(g) => {
            at(Stage::Diffusion, out, (|| {
                let (graph, stats) = load_graph(g)?;
                log::info!(
                    "graph: {} nodes, {} edges, {} malformed lines",
                    graph.n_nodes(),
                    graph.n_edges(),
                    stats.malformed
                );
                stages::diffusion(
                    &log.tweets,
                    Some(&window),
                    &graph,
                    &labels,
                    config.diffusion.attribution,
                    &dir(Stage::Diffusion),
                )
            })())?;
        }
        None => {
            log::warn!("no follower graph configured; diffusion skipped");
            skipped.push(Stage::Diffusion.name());
        }
    }
    let plots = at(Stage::Plots, out, emit_plotdata(out, Some(&log.tweets), &window))?;
    let manifest = at(Stage::Report, out, (|| {
        write_report(out)?;
        write_manifest(config)
    })())?;
    Ok(RunSummary {
        manifest,
        skipped,
        plots,
    })
}

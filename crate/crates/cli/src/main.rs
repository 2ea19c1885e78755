//! `hashdyn`: batch front end of the hashtag dynamics pipeline.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use hashtag_dynamics::diffusion::{load_graph, write_graph, BetaAttribution};
use hashtag_dynamics::ingest::{write_tweets, ObservationWindow};
use hashtag_dynamics::lexicon::NonNounPolicy;
use hashtag_dynamics::peaks::EdgePolicy;
use hashtag_dynamics::pipeline::{self, stages, PipelineConfig, Resources};
use hashtag_dynamics::synth::{gen_corpus, CorpusConfig};
use hashtag_dynamics::{Error, ErrorKind, Result};

#[derive(Parser, Debug)]
#[command(name = "hashdyn", version, about = "Dynamical classes of hashtag attention")]
struct Cli {
    /// Pipeline configuration (TOML). For `simulate`, the corpus configuration.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Top-level seed; overrides the configuration.
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[arg(long, short, global = true)]
    verbose: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Daily activity series of the popular hashtags.
    Ingest(IngestArgs),
    /// Isolated peak per series and the aligned window around it.
    Peaks(PeaksArgs),
    /// Before/peak/after fractions of every aligned window.
    Features(FeaturesArgs),
    /// Mixture fit, model selection and class assignment.
    Classify(ClassifyArgs),
    /// Concept vectors, class fingerprints and frequent words.
    Semantics(SemanticsArgs),
    /// Epidemic parameters per hashtag and their per-class quartiles.
    Diffusion(DiffusionArgs),
    /// Synthetic tweets, follower graph and ground truth.
    Simulate(SimulateArgs),
    /// Every stage, then plot tables, report and manifest.
    Run(RunArgs),
    /// Plot tables, report and manifest from existing stage outputs.
    Report(RunArgs),
}

#[derive(Args, Debug)]
struct IngestArgs {
    #[arg(long)]
    input: Option<PathBuf>,
    /// First day, YYYY-MM-DD.
    #[arg(long)]
    start: Option<String>,
    #[arg(long)]
    days: Option<usize>,
    #[arg(long)]
    min_users: Option<usize>,
    /// Output directory.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args, Debug)]
struct PeaksArgs {
    /// `series.csv` from `ingest`.
    #[arg(long)]
    series: PathBuf,
    /// Half width of the median window.
    #[arg(long = "L")]
    half_window: Option<usize>,
    #[arg(long)]
    nmin: Option<f64>,
    /// Outlier threshold.
    #[arg(long)]
    pt: Option<f64>,
    #[arg(long)]
    isolation: Option<usize>,
    #[arg(long, value_parser = parse_edges)]
    edges: Option<EdgePolicy>,
    #[arg(long)]
    half_span: Option<usize>,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args, Debug)]
struct FeaturesArgs {
    /// Output directory of `peaks`.
    #[arg(long)]
    peaks: PathBuf,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args, Debug)]
struct ClassifyArgs {
    /// `features.csv` from `features`.
    #[arg(long)]
    features: PathBuf,
    #[arg(long)]
    kmin: Option<usize>,
    #[arg(long)]
    kmax: Option<usize>,
    #[arg(long)]
    restarts: Option<usize>,
    /// Cross-validation folds; 0 skips the table.
    #[arg(long)]
    folds: Option<usize>,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args, Debug)]
struct SemanticsArgs {
    #[arg(long)]
    tweets: PathBuf,
    /// `assignments.csv` from `classify`.
    #[arg(long)]
    labels: PathBuf,
    #[arg(long)]
    wordnet_dir: Option<PathBuf>,
    #[arg(long)]
    stopwords: Option<PathBuf>,
    #[arg(long)]
    profiles: Option<PathBuf>,
    #[arg(long)]
    depth: Option<u32>,
    #[arg(long)]
    topk: Option<usize>,
    #[arg(long, value_parser = parse_non_noun)]
    non_noun: Option<NonNounPolicy>,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args, Debug)]
struct DiffusionArgs {
    /// `follower,followee` edge list.
    #[arg(long)]
    graph: PathBuf,
    #[arg(long)]
    tweets: PathBuf,
    /// `assignments.csv` from `classify`.
    #[arg(long)]
    labels: PathBuf,
    #[arg(long, value_parser = parse_attribution)]
    attribution: Option<BetaAttribution>,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args, Debug)]
struct SimulateArgs {
    #[arg(long)]
    out_tweets: PathBuf,
    #[arg(long)]
    out_truth: PathBuf,
    #[arg(long)]
    out_graph: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct RunArgs {
    /// Output directory; overrides the configuration.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn parse_edges(s: &str) -> std::result::Result<EdgePolicy, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_non_noun(s: &str) -> std::result::Result<NonNounPolicy, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_attribution(s: &str) -> std::result::Result<BetaAttribution, String> {
    match s {
        "all-earlier" => Ok(BetaAttribution::AllEarlier),
        "first-exposure" => Ok(BetaAttribution::FirstExposure),
        _ => Err(format!("unknown attribution `{s}`; expected all-earlier or first-exposure")),
    }
}

fn pipeline_config(cli: &Cli) -> Result<PipelineConfig> {
    let mut c = match &cli.config {
        Some(p) => PipelineConfig::load(p)?,
        None => PipelineConfig::default(),
    };
    if let Some(s) = cli.seed {
        c.seed = s;
    }
    Ok(c)
}

/// The configured window when a configuration was given; without one the
/// tweet-level stages use every tweet.
fn config_window(cli: &Cli, c: &PipelineConfig) -> Result<Option<ObservationWindow>> {
    cli.config.as_ref().map(|_| pipeline::window(&c.ingest)).transpose()
}

fn execute(cli: &Cli) -> Result<()> {
    match &cli.command {
        Command::Ingest(a) => {
            let mut c = pipeline_config(cli)?;
            if let Some(v) = &a.start {
                c.ingest.start = v.clone();
            }
            if let Some(v) = a.days {
                c.ingest.days = v;
            }
            if let Some(v) = a.min_users {
                c.ingest.min_users = v;
            }
            let input = a.input.clone().unwrap_or(c.paths.tweets.clone());
            let log = pipeline::load_tweets(&input)?;
            let s = stages::ingest(&log, &c.ingest, &a.out)?;
            println!("{} popular hashtags of {}", s.hashtags.len(), s.distinct_hashtags);
        }
        Command::Peaks(a) => {
            let mut p = pipeline_config(cli)?.peaks;
            if let Some(v) = a.half_window {
                p.half_window = v;
            }
            if let Some(v) = a.nmin {
                p.n_min = v;
            }
            if let Some(v) = a.pt {
                p.threshold = v;
            }
            if let Some(v) = a.isolation {
                p.isolation_days = v;
            }
            if let Some(v) = a.edges {
                p.edges = v;
            }
            if let Some(v) = a.half_span {
                p.half_span = v;
            }
            let s = stages::peaks(&a.series, &p, &a.out)?;
            println!("{} of {} series have an isolated peak", s.peaks, s.series);
        }
        Command::Features(a) => {
            let (t, s) = stages::features(&a.peaks, &a.out)?;
            println!("{} feature triples, {} in the excluded region", t.len(), s.in_excluded_region.len());
        }
        Command::Classify(a) => {
            let c = pipeline_config(cli)?;
            let mut p = c.classify.clone();
            if let Some(v) = a.kmin {
                p.k_min = v;
            }
            if let Some(v) = a.kmax {
                p.k_max = v;
            }
            if let Some(v) = a.restarts {
                p.restarts = v;
            }
            if let Some(v) = a.folds {
                p.folds = v;
            }
            let m = stages::classify(&a.features, &p, c.seed, &a.out)?;
            let labels: Vec<&str> = m.labels.labels.iter().map(|l| l.as_str()).collect();
            println!("k = {}: {}", m.k, labels.join(", "));
        }
        Command::Semantics(a) => {
            let c = pipeline_config(cli)?;
            let mut p = c.semantics.clone();
            if let Some(v) = a.depth {
                p.depth = v;
            }
            if let Some(v) = a.topk {
                p.top_concepts = v;
            }
            if let Some(v) = a.non_noun {
                p.non_noun = v;
            }
            let w = config_window(cli, &c)?;
            let log = pipeline::load_tweets(&a.tweets)?;
            let labels = pipeline::read_labels(&a.labels)?;
            let res = Resources::load(a.wordnet_dir.as_deref(), a.stopwords.as_deref(), a.profiles.as_deref())?;
            let (fp, s) = stages::semantics(&log.tweets, w.as_ref(), &labels, &res, &p, &a.out)?;
            println!(
                "{} tweets grounded ({} discarded), {} concepts selected",
                s.tweets,
                s.discarded,
                fp.concepts.len()
            );
        }
        Command::Diffusion(a) => {
            let c = pipeline_config(cli)?;
            let w = config_window(cli, &c)?;
            let (graph, _) = load_graph(&a.graph)?;
            let log = pipeline::load_tweets(&a.tweets)?;
            let labels = pipeline::read_labels(&a.labels)?;
            let attribution = a.attribution.unwrap_or(c.diffusion.attribution);
            let q = stages::diffusion(&log.tweets, w.as_ref(), &graph, &labels, attribution, &a.out)?;
            println!("{} classes summarized", q.classes.len());
        }
        Command::Simulate(a) => {
            let config = match &cli.config {
                Some(p) => CorpusConfig::load(p)?,
                None => CorpusConfig::default(),
            };
            let corpus = gen_corpus(&config, cli.seed.unwrap_or(0))?;
            write_tweets(&a.out_tweets, &corpus.tweets)?;
            pipeline::io::write_json(&a.out_truth, &corpus.truths)?;
            if let Some(g) = &a.out_graph {
                write_graph(g, &corpus.graph)?;
            }
            println!("{} tweets over {} hashtags", corpus.tweets.len(), corpus.truths.len());
        }
        Command::Run(a) => {
            let mut c = pipeline_config(cli)?;
            if let Some(o) = &a.out {
                c.paths.out = o.clone();
            }
            let r = pipeline::run_pipeline(&c)?;
            println!("{} outputs written to {}", r.manifest.outputs.len(), c.paths.out.display());
        }
        Command::Report(a) => {
            let mut c = pipeline_config(cli)?;
            if let Some(o) = &a.out {
                c.paths.out = o.clone();
            }
            let w = pipeline::window(&c.ingest)?;
            let log = match pipeline::load_tweets(&c.paths.tweets) {
                Ok(l) => Some(l),
                Err(e) => {
                    log::warn!("tweet log unavailable: {e}");
                    None
                }
            };
            pipeline::emit_plotdata(&c.paths.out, log.as_ref().map(|l| l.tweets.as_slice()), &w)?;
            pipeline::write_report(&c.paths.out)?;
            pipeline::write_manifest(&c)?;
            println!("report written to {}", c.paths.out.join("report.md").display());
        }
    }
    Ok(())
}

fn exit_code(kind: ErrorKind) -> u8 {
    match kind {
        ErrorKind::Usage => 1,
        ErrorKind::Data => 2,
        ErrorKind::Invariant => 3,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    env_logger::Builder::new()
        .filter_level(if cli.verbose {
            log::LevelFilter::Debug
        } else {
            log::LevelFilter::Warn
        })
        .parse_env("HASHDYN_LOG")
        .init();
    match execute(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(e.kind()))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes() {
        assert_eq!(exit_code(ErrorKind::Usage), 1);
        assert_eq!(exit_code(ErrorKind::Data), 2);
        assert_eq!(exit_code(ErrorKind::Invariant), 3);
        assert_eq!(exit_code(Error::Invariant("x".into()).kind()), 3);
    }

    #[test]
    fn cli_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}

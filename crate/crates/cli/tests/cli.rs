use std::path::Path;
use std::process::{Command, Output};

fn hashdyn(args: &[&str], cwd: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hashdyn"))
        .args(args)
        .current_dir(cwd)
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

const CONFIG: &str = r#"
seed = 5

[paths]
tweets = "tweets.jsonl"
graph = "graph.csv"
out = "out"

[ingest]
start = "2009-06-01"
days = 120
min_users = 100

[classify]
folds = 0
"#;

fn simulate(dir: &Path) {
    let o = hashdyn(
        &[
            "simulate",
            "--seed",
            "5",
            "--out-tweets",
            "tweets.jsonl",
            "--out-truth",
            "truth.json",
            "--out-graph",
            "graph.csv",
        ],
        dir,
    );
    assert_eq!(code(&o), 0, "{}", stderr(&o));
}

#[test]
fn usage_errors_exit_with_one() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(code(&hashdyn(&[], dir.path())), 1);
    assert_eq!(code(&hashdyn(&["peaks", "--bogus"], dir.path())), 1);
    assert_eq!(code(&hashdyn(&["peaks", "--series", "s.csv", "--out", "o", "--edges", "wrap"], dir.path())), 1);
    assert_eq!(code(&hashdyn(&["--help"], dir.path())), 0);

    std::fs::write(dir.path().join("bad.toml"), "[classify]\nk_min = 0\n").unwrap();
    let o = hashdyn(&["--config", "bad.toml", "run"], dir.path());
    assert_eq!(code(&o), 1, "{}", stderr(&o));
    std::fs::write(dir.path().join("typo.toml"), "[ingest]\nmin_user = 3\n").unwrap();
    let o = hashdyn(&["--config", "typo.toml", "run"], dir.path());
    assert_eq!(code(&o), 1);
    assert!(stderr(&o).contains("min_user"), "{}", stderr(&o));
}

#[test]
fn data_errors_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("empty.jsonl"), "").unwrap();
    let o = hashdyn(&["ingest", "--input", "empty.jsonl", "--out", "o"], dir.path());
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("empty.jsonl"));
    let o = hashdyn(&["features", "--peaks", "missing", "--out", "o"], dir.path());
    assert_eq!(code(&o), 2);
}

#[test]
fn run_and_report() {
    let dir = tempfile::tempdir().unwrap();
    simulate(dir.path());
    std::fs::write(dir.path().join("hashdyn.toml"), CONFIG).unwrap();
    let o = hashdyn(&["--config", "hashdyn.toml", "run"], dir.path());
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let out = dir.path().join("out");
    let manifest = std::fs::read_to_string(out.join("manifest.json")).unwrap();
    assert!(manifest.contains("\"seed\": 5"));

    std::fs::remove_file(out.join("report.md")).unwrap();
    let o = hashdyn(&["--config", "hashdyn.toml", "report"], dir.path());
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert_eq!(std::fs::read_to_string(out.join("manifest.json")).unwrap(), manifest);
}

#[test]
fn stages_chain_through_files() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    simulate(d);
    let steps: [&[&str]; 6] = [
        &["ingest", "--input", "tweets.jsonl", "--start", "2009-06-01", "--days", "120", "--min-users", "100", "--out", "s/ingest"],
        &["peaks", "--series", "s/ingest/series.csv", "--L", "30", "--nmin", "10", "--pt", "10", "--isolation", "7", "--edges", "strict", "--out", "s/peaks"],
        &["features", "--peaks", "s/peaks", "--out", "s/features"],
        &["--seed", "5", "classify", "--features", "s/features/features.csv", "--kmin", "1", "--kmax", "6", "--restarts", "5", "--folds", "0", "--out", "s/classify"],
        &["semantics", "--tweets", "tweets.jsonl", "--labels", "s/classify/assignments.csv", "--depth", "4", "--topk", "15", "--out", "s/semantics"],
        &["diffusion", "--graph", "graph.csv", "--tweets", "tweets.jsonl", "--labels", "s/classify/assignments.csv", "--out", "s/diffusion"],
    ];
    for args in steps {
        let o = hashdyn(args, d);
        assert_eq!(code(&o), 0, "{args:?}: {}", stderr(&o));
    }
    for f in [
        "ingest/series.csv",
        "peaks/peaks.csv",
        "peaks/aligned.csv",
        "features/features.csv",
        "classify/model.json",
        "classify/assignments.csv",
        "semantics/fingerprints.json",
        "diffusion/estimates.csv",
        "diffusion/quartiles.json",
    ] {
        assert!(d.join("s").join(f).exists(), "{f}");
    }
    let header = std::fs::read_to_string(d.join("s/classify/assignments.csv")).unwrap();
    assert!(header.starts_with("hashtag,fb,fa,label,uncertainty,posterior_1,"));
    let truth = std::fs::read_to_string(d.join("truth.json")).unwrap();
    assert!(truth.contains("\"seeders\""));
}
